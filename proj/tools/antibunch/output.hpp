// Tabular output for the command-line tool: CSV with a commented metadata
// header, or a JSON document following docs/output.schema.json.
#pragma once

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace antibunch::cli {

struct Column {
  std::string name;
  std::string unit;
};

struct Table {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value) { meta.emplace_back(key, value); }
  void add_meta(const std::string& key, double value);
};

enum class Format { csv, json };

struct OutputOptions {
  Format format = Format::csv;
  bool timestamp = true;
};

inline constexpr const char* kSchemaId = "antibunch-output/1";

void write_csv(std::ostream& os, const Table& t, const OutputOptions& opt);
nlohmann::json to_json(const Table& t, const OutputOptions& opt);
void write_table(std::ostream& os, const Table& t, const OutputOptions& opt);

// Shortest round-trip representation of a double ("inf"/"nan" spelled out).
std::string format_number(double x);

// ISO-8601 UTC timestamp.
std::string utc_timestamp();

}  // namespace antibunch::cli
