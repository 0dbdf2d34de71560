#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "antibunch/version.hpp"

namespace antibunch::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void Table::add_meta(const std::string& key, double value) { add_meta(key, format_number(value)); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_csv(std::ostream& os, const Table& t, const OutputOptions& opt) {
  os << "# schema: " << kSchemaId << "\n";
  os << "# command: " << t.command << "\n";
  os << "# version: " << version_string() << "\n";
  if (opt.timestamp) os << "# generated: " << utc_timestamp() << "\n";
  for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << "\n";
  os << "# units:";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? ", " : " ") << t.columns[i].name << " [" << t.columns[i].unit << "]";
  }
  os << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i].name;
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << "\n";
  }
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

nlohmann::json to_json(const Table& t, const OutputOptions& opt) {
  nlohmann::json j;
  j["schema"] = kSchemaId;
  j["command"] = t.command;
  j["version"] = version_string();
  if (opt.timestamp) j["generated"] = utc_timestamp();
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  j["meta"] = meta;
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  j["columns"] = cols;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double x : row) r.push_back(number(x));
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

void write_table(std::ostream& os, const Table& t, const OutputOptions& opt) {
  if (opt.format == Format::csv) {
    write_csv(os, t, opt);
  } else {
    os << to_json(t, opt).dump(2) << "\n";
  }
}

}  // namespace antibunch::cli
