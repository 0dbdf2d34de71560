// Runs the command-line tool as a subprocess and checks its output files and
// exit codes.
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#ifndef ANTIBUNCH_CLI
#error "ANTIBUNCH_CLI must name the tool binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ANTIBUNCH_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string meta(const std::string& key) const {
    const std::string prefix = "# " + key + ": ";
    for (const auto& c : comments)
      if (c.rfind(prefix, 0) == 0) return c.substr(prefix.size());
    return {};
  }
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      c.comments.push_back(line);
    } else if (c.header.empty()) {
      c.header = split(line);
    } else {
      std::vector<double> row;
      for (const auto& cell : split(line)) row.push_back(std::stod(cell));
      c.rows.push_back(row);
    }
  }
  return c;
}

std::string temp_path(const std::string& name) { return std::string(ANTIBUNCH_TEST_TMP) + "/" + name; }

}  // namespace

TEST_CASE("bare incoherent curve starts at zero") {
  const auto r = run("bare --drive incoherent --P 1.0 --tau-max 10 --points 200");
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"tau", "g2"});
  CHECK(csv.rows.size() == 200);
  CHECK(csv.rows.front()[0] == 0.0);
  CHECK(csv.rows.front()[1] == 0.0);
  CHECK(csv.meta("formula") == "bare/incoherent");
  CHECK_FALSE(csv.meta("version").empty());
  CHECK(csv.meta("units") == "tau [1/rate], g2 [1]");
}

TEST_CASE("bare coherent curve oscillates within its envelopes") {
  const auto csv = parse_csv(run("bare --drive coherent --omega 2.0 --tau-max 10 --points 4001").out);
  const auto g = csv.column("g2"), lo = csv.column("envelope_lo"), hi = csv.column("envelope_hi");
  // Sampled extrema may overshoot the falling envelope by 3/4 of a grid step.
  const double slack = 0.75 * (csv.rows[1][0] - csv.rows[0][0]);
  int extrema = 0;
  for (std::size_t i = 1; i + 1 < csv.rows.size(); ++i) {
    const double a = csv.rows[i - 1][g], b = csv.rows[i][g], c = csv.rows[i + 1][g];
    if ((b > a && b > c) || (b < a && b < c)) {
      ++extrema;
      CHECK(b <= csv.rows[i][hi] + slack);
      CHECK(b >= csv.rows[i][lo] - slack);
    }
  }
  CHECK(extrema > 10);
}

TEST_CASE("bare Heitler curve is the squared undriven incoherent curve") {
  const auto h = parse_csv(run("bare --drive heitler --points 51").out);
  const auto i = parse_csv(run("bare --drive incoherent --P 0 --gamma 0.5 --points 51").out);
  REQUIRE(h.rows.size() == i.rows.size());
  // Undriven emitter with half the decay rate reproduces the bracket.
  for (std::size_t k = 0; k < h.rows.size(); ++k) {
    CHECK(std::abs(h.rows[k][1] - i.rows[k][1] * i.rows[k][1]) < 1e-14);
  }
}

TEST_CASE("coherent noise at the silver ratio halves the antibunching") {
  const auto csv = parse_csv(run("noise --xi 0.41421356 --model coherent --P 0").out);
  CHECK(std::abs(csv.rows.front()[1] - 0.5) < 1e-6);
}

TEST_CASE("extreme filtering thermalizes incoherent light") {
  const auto r = run("filter --drive incoherent --Gamma 0 --method closed-form");
  REQUIRE(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(std::abs(csv.rows.front()[1] - 2.0) < 1e-2);
  CHECK(csv.meta("Gamma") == "0.001");
}

TEST_CASE("exponential jitter on an undriven emitter") {
  const auto csv = parse_csv(run("jitter --kind exponential --Gamma 1 --drive incoherent --P 0").out);
  CHECK(std::abs(csv.rows.front()[1] - 0.5) < 1e-12);
}

TEST_CASE("method both reports the deviation and signals failure") {
  const auto ok = run("filter --drive coherent --Gamma 0.7 --method both --points 41");
  REQUIRE(ok.code == 0);
  const auto csv = parse_csv(ok.out);
  CHECK(csv.header == std::vector<std::string>{"tau", "g2", "g2_oracle"});
  CHECK(std::stod(csv.meta("max_abs_deviation")) < 1e-5);

  const auto jitter = run("jitter --kind gaussian --drive coherent --method both --points 11");
  CHECK(jitter.code == 0);

  // An impossible tolerance turns the comparison into a validation failure.
  CHECK(run("filter --drive incoherent --method both --points 11 --tolerance 1e-30").code == 4);
}

TEST_CASE("scan figures") {
  SUBCASE("fig2c zero jitter row") {
    const auto csv = parse_csv(run("scan --figure fig2c").out);
    CHECK(csv.rows.front()[0] == 0.0);
    for (std::size_t k = 1; k < csv.header.size(); ++k) CHECK(csv.rows.front()[k] == 0.0);
  }
  SUBCASE("fig3c has a column per regime and kernel") {
    const auto csv = parse_csv(run("scan --figure fig3c").out);
    CHECK(csv.header.size() == 9);
  }
  SUBCASE("fig4c contains the uncorrelated point") {
    const auto csv = parse_csv(run("scan --figure fig4c").out);
    bool found = false;
    for (const auto& row : csv.rows) {
      if (std::abs(row[0] - 2.0 / 3.0) < 1e-12) {
        found = true;
        CHECK(std::abs(row[1] - 1.0) < 1e-12);
      }
    }
    CHECK(found);
  }
  SUBCASE("fig5c") {
    const auto csv = parse_csv(run("scan --figure fig5c").out);
    CHECK(csv.header == std::vector<std::string>{"Gamma", "coherent", "heitler"});
  }
  SUBCASE("fig6 supremum approaches three") {
    const auto csv = parse_csv(run("scan --figure fig6").out);
    double sup = 0.0;
    for (const auto& row : csv.rows) sup = std::max(sup, row[1]);
    CHECK(sup <= 3.0 + 1e-3);
    CHECK(sup >= 2.9);
  }
}

TEST_CASE("output is deterministic without the timestamp line") {
  const auto a = run("scan --figure fig5c --no-timestamp");
  const auto b = run("scan --figure fig5c --no-timestamp");
  CHECK(a.out == b.out);
  CHECK(a.out.find("# generated:") == std::string::npos);
  CHECK(run("scan --figure fig5c").out.find("# generated:") != std::string::npos);
}

TEST_CASE("config file values yield to explicit flags") {
  const auto cfg = temp_path("cli_test.cfg");
  {
    std::ofstream os(cfg);
    os << "# settings\ndrive = coherent\nomega = 3\npoints = 5\n";
  }
  const auto from_file = parse_csv(run("bare --config " + cfg).out);
  CHECK(from_file.meta("Omega_sigma") == "3");
  CHECK(from_file.rows.size() == 5);
  const auto overridden = parse_csv(run("bare --config " + cfg + " --omega 5").out);
  CHECK(overridden.meta("Omega_sigma") == "5");
}

TEST_CASE("JSON output and --out") {
  const auto path = temp_path("cli_test.json");
  REQUIRE(run("filter --drive heitler --format json --points 5 --out " + path).code == 0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["schema"] == "antibunch-output/1");
  CHECK(j["command"] == "filter");
  CHECK(j["rows"].size() == 5);
  CHECK(j["meta"]["heitler_Omega_sigma"] == "0.01");
}

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("bare --drive laser").code == 2);
  CHECK(run("bare --points 1").code == 2);
  CHECK(run("filter --Gamma -1").code == 2);
  CHECK(run("filter --omega-xi 1").code == 2);
  CHECK(run("scan").code == 2);
  CHECK(run("bare --out /nonexistent-dir/out.csv").code == 3);
  CHECK(run("bare --config /nonexistent-dir/x.cfg").code == 3);
  CHECK(run("noise --input /nonexistent-dir/in.csv").code == 3);
}

TEST_CASE("noise reads a signal curve from a file") {
  const auto path = temp_path("cli_signal.csv");
  REQUIRE(run("bare --drive incoherent --P 0 --points 11 --out " + path).code == 0);
  const auto csv = parse_csv(run("noise --input " + path + " --xi 1 --model thermal").out);
  REQUIRE(csv.rows.size() == 11);
  CHECK(std::abs(csv.rows.front()[1] - 1.0) < 1e-12);  // (0 + 2 + 2) / 4
}

TEST_CASE("validate report") {
  const auto clean = run("validate");
  REQUIRE(clean.code == 0);
  const auto j = nlohmann::json::parse(clean.out);
  CHECK(j["passed"] == true);
  CHECK(j["counts"]["jitter"] == 8);
  CHECK(j["counts"]["filter"].get<int>() >= 6);
  for (const auto& f : j["formulas"])
    if (f["suite"] == "jitter") CHECK(f.contains("convention"));

  const auto faulty = run("validate --inject-fault filter/heitler");
  CHECK(faulty.code == 4);
  const auto jf = nlohmann::json::parse(faulty.out);
  CHECK(jf["passed"] == false);
  REQUIRE(jf["failures"].size() == 1);
  CHECK(jf["failures"][0] == "filter/heitler");
}
