#include "antibunch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace antibunch::numerics {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  evals += 15;
  const double value = resk * h;
  const double err = std::abs((resk - resg) * h);
  if (!std::isfinite(value)) throw NonConvergence("integrate: integrand returned non-finite value");
  return {a, b, value, err};
}

}  // namespace

void QuadratureSpec::check() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw NumericsError("QuadratureSpec: tolerances must be positive");
  }
  if (max_subdivisions < 1) throw NumericsError("QuadratureSpec: max_subdivisions must be >= 1");
}

QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec, const std::vector<double>& kinks) {
  spec.check();
  if (!std::isfinite(a) || !std::isfinite(b)) throw NumericsError("integrate: infinite bounds");
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  QuadratureResult out;
  if (a == b) return out;

  std::vector<double> edges{a};
  for (double k : kinks) {
    if (k > a && k < b) edges.push_back(k);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gauss_kronrod(f, edges[i], edges[i + 1], out.evaluations);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  int splits = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      throw NonConvergence("integrate: subdivision budget exhausted");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("integrate: interval cannot be subdivided further");
    }
    Panel left = gauss_kronrod(f, worst.a, mid, out.evaluations);
    Panel right = gauss_kronrod(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (total_err < 0.0) total_err = 0.0;
  }

  // Recompute the sums from scratch to shed accumulated rounding.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = sign * total;
  out.error = total_err;
  return out;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double decay_rate,
                                         const QuadratureSpec& spec,
                                         const std::vector<double>& kinks) {
  spec.check();
  if (!(decay_rate > 0.0)) throw NumericsError("integrate_semi_infinite: decay_rate must be > 0");
  const double cutoff = std::log(100.0 / spec.abs_tol) / decay_rate;
  std::vector<double> inner_kinks;
  for (double k : kinks) {
    if (k > 0.0 && k < cutoff) inner_kinks.push_back(k);
  }
  // Extra breakpoints at a few decay lengths help the estimator on long tails.
  for (double m : {1.0, 4.0, 16.0}) {
    const double x = m / decay_rate;
    if (x < cutoff) inner_kinks.push_back(x);
  }
  QuadratureResult r = integrate(f, 0.0, cutoff, spec, inner_kinks);
  r.error += spec.abs_tol / 100.0 / decay_rate;
  return r;
}

}  // namespace antibunch::numerics
