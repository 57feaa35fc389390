#include "conekit/records.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace conekit;

namespace {

RunRecord sample(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> pick(0, 5);
  const std::string awkward[] = {"plain", "comma,inside", "quote\"inside", "line\nbreak", "", "crlf\r\nx"};
  RunRecord r;
  r.command = "copositive";
  r.instance = awkward[pick(rng)];
  r.input_digest = fnv1a_hex(r.instance);
  r.cone = "F+-";
  r.alg = "2";
  r.config = "alg=2;eps=0;max_iter=100";
  r.outcome = awkward[pick(rng)];
  if (pick(rng) % 2) r.alpha_star = g(rng) * 1e-7;
  for (int k = 0; k < pick(rng); ++k) r.certificate.push_back(std::abs(g(rng)) / 3);
  if (pick(rng) % 2) r.witness_residual = std::abs(g(rng)) * 1e-16;
  r.iterations = rng() >> 1;
  r.lp_calls = rng() % 1000;
  r.wall_time_s = std::abs(g(rng));
  r.seed = rng();
  r.generator_id = "mt19937_64/splitmix64-v1";
  r.detail = awkward[pick(rng)];
  return r;
}

}  // namespace

TEST(Doubles, ExactRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e300, 1e300);
  for (int k = 0; k < 1000; ++k) {
    const double d = k % 2 ? u(rng) : std::ldexp(u(rng), -1000);
    EXPECT_EQ(parse_double(format_double(d)), d);
  }
  EXPECT_TRUE(std::isinf(parse_double(format_double(std::numeric_limits<double>::infinity()))));
  EXPECT_TRUE(std::isnan(parse_double(format_double(std::nan("")))));
  EXPECT_THROW(parse_double(""), std::invalid_argument);
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
}

TEST(Digest, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(Csv, Escaping) {
  EXPECT_EQ(csv_escape("abc"), "abc");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv_join({"a", "b,c", ""}), "a,\"b,c\",");
}

TEST(Csv, ReaderHandlesQuotesAndLineEnds) {
  std::istringstream in("a,\"b,\"\"c\"\"\",\r\n\"multi\nline\",x\n");
  std::vector<std::string> f;
  ASSERT_TRUE(read_csv_record(in, f));
  EXPECT_EQ(f, (std::vector<std::string>{"a", "b,\"c\"", ""}));
  ASSERT_TRUE(read_csv_record(in, f));
  EXPECT_EQ(f, (std::vector<std::string>{"multi\nline", "x"}));
  EXPECT_FALSE(read_csv_record(in, f));
  std::istringstream bad("\"open");
  EXPECT_THROW(read_csv_record(bad, f), std::invalid_argument);
}

TEST(Records, CsvRoundTrip) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const RunRecord r = sample(rng);
    EXPECT_EQ(parse_csv_row(to_csv(r)), r);
  }
}

TEST(Records, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const RunRecord r = sample(rng);
    EXPECT_EQ(parse_json_line(to_json_line(r)), r);
  }
  RunRecord inf;
  inf.alpha_star = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(parse_json_line(to_json_line(inf)), inf);
}

TEST(Records, StreamsSkipSummaries) {
  std::mt19937_64 rng(4);
  std::vector<RunRecord> rs;
  for (int k = 0; k < 20; ++k) rs.push_back(sample(rng));
  std::ostringstream csv, js;
  csv << csv_header() << '\n';
  for (const auto &r : rs) {
    csv << to_csv(r) << '\n';
    js << to_json_line(r) << '\n';
  }
  csv << "# summary task=x rows=20\n";
  js << "{\"summary\":{\"rows\":20}}\n";
  std::istringstream ci(csv.str()), ji(js.str());
  EXPECT_EQ(read_records(ci, false), rs);
  EXPECT_EQ(read_records(ji, true), rs);
}

TEST(Records, MalformedInput) {
  EXPECT_THROW(parse_csv_row("only,three,fields"), std::invalid_argument);
  std::istringstream wrong_header("a,b\n");
  EXPECT_THROW(read_records(wrong_header, false), std::invalid_argument);
  RunRecord r;
  std::string row = to_csv(r);
  const std::size_t at = row.find(",0,0,");
  ASSERT_NE(at, std::string::npos);
  row.replace(at, 5, ",-1,0,");
  EXPECT_THROW(parse_csv_row(row), std::invalid_argument);
  EXPECT_THROW(parse_json_line("{\"command\":\"x\"}"), std::invalid_argument);
}

TEST(Records, ColumnsAndTrace) {
  EXPECT_EQ(record_columns().size(), 16u);
  EXPECT_EQ(csv_header().substr(0, 17), "command,instance,");
  EXPECT_EQ(trace_header(), "iter,fineness,worklist,action");
  EXPECT_EQ(trace_row(3, 0.5, 7, "bisected"), "3,0.5,7,bisected");
}
