#include "conekit/records.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace conekit {

namespace {

using json = nlohmann::json;

std::uint64_t parse_u64(const std::string &s) {
  if (s.empty() || s[0] == '-') throw std::invalid_argument("bad unsigned field '" + s + "'");
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad unsigned field '" + s + "'");
  return v;
}

std::string join_doubles(const std::vector<double> &v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ' ';
    out += format_double(v[k]);
  }
  return out;
}

std::vector<double> split_doubles(const std::string &s) {
  std::vector<double> v;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) v.push_back(parse_double(tok));
  return v;
}

std::string opt_str(const std::optional<double> &d) { return d ? format_double(*d) : ""; }

std::optional<double> opt_parse(const std::string &s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

const std::vector<std::string> &record_columns() {
  static const std::vector<std::string> cols = {
      "command",    "instance",  "input_digest", "cone",        "alg",
      "config",     "outcome",   "alpha_star",   "certificate", "witness_residual",
      "iterations", "lp_calls",  "wall_time_s",  "seed",        "generator_id",
      "detail"};
  return cols;
}

std::string format_double(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

double parse_double(const std::string &s) {
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

std::string fnv1a_hex(const std::string &data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_escape(const std::string &field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_join(const std::vector<std::string> &fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += csv_escape(fields[k]);
  }
  return out;
}

bool read_csv_record(std::istream &in, std::vector<std::string> &fields) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  std::string cur;
  bool quoted = false;
  for (; c != EOF; c = in.get()) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          cur += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cur += static_cast<char>(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      cur += static_cast<char>(c);
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  return true;
}

std::string csv_header() { return csv_join(record_columns()); }

std::string to_csv(const RunRecord &r) {
  return csv_join({r.command, r.instance, r.input_digest, r.cone, r.alg, r.config, r.outcome,
                   opt_str(r.alpha_star), join_doubles(r.certificate), opt_str(r.witness_residual),
                   std::to_string(r.iterations), std::to_string(r.lp_calls),
                   format_double(r.wall_time_s), std::to_string(r.seed), r.generator_id, r.detail});
}

RunRecord record_from_fields(const std::vector<std::string> &f) {
  if (f.size() != record_columns().size())
    throw std::invalid_argument("record: expected " + std::to_string(record_columns().size()) +
                                " fields, got " + std::to_string(f.size()));
  RunRecord r;
  r.command = f[0];
  r.instance = f[1];
  r.input_digest = f[2];
  r.cone = f[3];
  r.alg = f[4];
  r.config = f[5];
  r.outcome = f[6];
  r.alpha_star = opt_parse(f[7]);
  r.certificate = split_doubles(f[8]);
  r.witness_residual = opt_parse(f[9]);
  r.iterations = parse_u64(f[10]);
  r.lp_calls = parse_u64(f[11]);
  r.wall_time_s = parse_double(f[12]);
  r.seed = parse_u64(f[13]);
  r.generator_id = f[14];
  r.detail = f[15];
  return r;
}

RunRecord parse_csv_row(const std::string &line) {
  std::istringstream in(line);
  std::vector<std::string> f;
  if (!read_csv_record(in, f)) throw std::invalid_argument("csv: empty row");
  return record_from_fields(f);
}

std::string to_json_line(const RunRecord &r) {
  json j;
  j["command"] = r.command;
  j["instance"] = r.instance;
  j["input_digest"] = r.input_digest;
  j["cone"] = r.cone;
  j["alg"] = r.alg;
  j["config"] = r.config;
  j["outcome"] = r.outcome;
  // Doubles travel as %.17g strings so non-finite values survive.
  j["alpha_star"] = r.alpha_star ? json(format_double(*r.alpha_star)) : json(nullptr);
  json cert = json::array();
  for (double d : r.certificate) cert.push_back(format_double(d));
  j["certificate"] = cert;
  j["witness_residual"] = r.witness_residual ? json(format_double(*r.witness_residual)) : json(nullptr);
  j["iterations"] = r.iterations;
  j["lp_calls"] = r.lp_calls;
  j["wall_time_s"] = format_double(r.wall_time_s);
  j["seed"] = r.seed;
  j["generator_id"] = r.generator_id;
  j["detail"] = r.detail;
  return j.dump();
}

RunRecord parse_json_line(const std::string &line) {
  const json j = json::parse(line);
  for (const auto &c : record_columns())
    if (!j.contains(c)) throw std::invalid_argument("record: missing field " + c);
  RunRecord r;
  r.command = j["command"].get<std::string>();
  r.instance = j["instance"].get<std::string>();
  r.input_digest = j["input_digest"].get<std::string>();
  r.cone = j["cone"].get<std::string>();
  r.alg = j["alg"].get<std::string>();
  r.config = j["config"].get<std::string>();
  r.outcome = j["outcome"].get<std::string>();
  if (!j["alpha_star"].is_null()) r.alpha_star = parse_double(j["alpha_star"].get<std::string>());
  for (const auto &d : j["certificate"]) r.certificate.push_back(parse_double(d.get<std::string>()));
  if (!j["witness_residual"].is_null())
    r.witness_residual = parse_double(j["witness_residual"].get<std::string>());
  r.iterations = j["iterations"].get<std::uint64_t>();
  r.lp_calls = j["lp_calls"].get<std::uint64_t>();
  r.wall_time_s = parse_double(j["wall_time_s"].get<std::string>());
  r.seed = j["seed"].get<std::uint64_t>();
  r.generator_id = j["generator_id"].get<std::string>();
  r.detail = j["detail"].get<std::string>();
  return r;
}

std::vector<RunRecord> read_records(std::istream &in, bool json_lines) {
  std::vector<RunRecord> out;
  if (json_lines) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const json j = json::parse(line);
      if (j.contains("summary")) continue;
      out.push_back(parse_json_line(line));
    }
    return out;
  }
  std::vector<std::string> f;
  bool header = true;
  while (true) {
    if (in.peek() == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (!read_csv_record(in, f)) break;
    if (f.size() == 1 && f[0].empty()) continue;
    if (header) {
      if (f != record_columns()) throw std::invalid_argument("csv: unexpected header");
      header = false;
      continue;
    }
    out.push_back(record_from_fields(f));
  }
  return out;
}

std::string trace_header() { return "iter,fineness,worklist,action"; }

std::string trace_row(std::size_t iter, double fineness, std::size_t worklist,
                      const std::string &action) {
  return csv_join({std::to_string(iter), format_double(fineness), std::to_string(worklist), action});
}

}  // namespace conekit
