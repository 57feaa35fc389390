#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace conekit {

/// One row of CLI / bench output.
struct RunRecord {
  std::string command;
  std::string instance;
  std::string input_digest;
  std::string cone;
  std::string alg;
  std::string config;
  std::string outcome;
  std::optional<double> alpha_star;
  std::vector<double> certificate;
  std::optional<double> witness_residual;
  std::uint64_t iterations = 0;
  std::uint64_t lp_calls = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  std::string generator_id;
  std::string detail;

  bool operator==(const RunRecord &) const = default;
};

const std::vector<std::string> &record_columns();

/// Shortest text that parses back to exactly d (%.17g).
std::string format_double(double d);
double parse_double(const std::string &s);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string &data);

/// RFC 4180: quote fields containing ',', '"', CR or LF; double inner quotes.
std::string csv_escape(const std::string &field);
std::string csv_join(const std::vector<std::string> &fields);
/// Reads one record (quoted fields may span lines). False at end of input.
bool read_csv_record(std::istream &in, std::vector<std::string> &fields);

std::string csv_header();
std::string to_csv(const RunRecord &r);
RunRecord record_from_fields(const std::vector<std::string> &fields);
RunRecord parse_csv_row(const std::string &line);

std::string to_json_line(const RunRecord &r);
RunRecord parse_json_line(const std::string &line);

/// Reads every record of a CSV (header required) or JSON-lines stream,
/// skipping '#' summary lines.
std::vector<RunRecord> read_records(std::istream &in, bool json);

/// Per-iteration trace row: iter, fineness, worklist, action.
std::string trace_header();
std::string trace_row(std::size_t iter, double fineness, std::size_t worklist,
                      const std::string &action);

}  // namespace conekit
