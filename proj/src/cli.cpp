#include "conekit/cli.hpp"

#include "conekit/cones.hpp"
#include "conekit/copositivity.hpp"
#include "conekit/instances.hpp"
#include "conekit/records.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

namespace conekit {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Common {
  std::string cone;
  int alg = 2;
  double eps = 0.0;
  std::size_t max_iter = 1'000'000;
  double time_limit = 300.0;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  std::string trace;
};

void add_common(CLI::App *app, Common &c, const std::string &default_cone) {
  c.cone = default_cone;
  app->add_option("--cone", c.cone, "cone (comma-separated list for membership)")
      ->capture_default_str();
  app->add_option("--alg", c.alg, "partition algorithm")->check(CLI::IsMember({1, 2}))->capture_default_str();
  app->add_option("--eps", c.eps, "vertex tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--max-iter,--budget", c.max_iter, "iteration budget (per probe)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--time-limit", c.time_limit, "seconds (per probe)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  app->add_option("--out", c.out, "output path (default stdout)");
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> v;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) v.push_back(cur);
  return v;
}

std::string matrix_text(const SymMatrix &a) {
  std::ostringstream os;
  write_matrix(os, a);
  return os.str();
}

std::string graph_text(const Graph &g) {
  std::ostringstream os;
  write_dimacs(os, g);
  return os.str();
}

CopoConfig copo_config(const Common &c, Cone cone) {
  CopoConfig cfg;
  cfg.cone = cone;
  cfg.use_alg2 = c.alg == 2;
  cfg.eps_vertex = c.eps;
  cfg.max_iterations = c.max_iter;
  cfg.time_limit = c.time_limit;
  return cfg;
}

std::string config_echo(const CopoConfig &cfg) {
  std::ostringstream os;
  os << "alg=" << (cfg.use_alg2 ? 2 : 1) << ";eps=" << format_double(cfg.eps_vertex)
     << ";max_iter=" << cfg.max_iterations << ";time_limit=" << format_double(cfg.time_limit)
     << ";selection=" << (cfg.selection == SelectionRule::Lifo ? "lifo" : "fifo");
  return os.str();
}

void print_table(std::ostream &os, const std::vector<RunRecord> &recs) {
  const std::vector<std::string> head = {"command", "instance", "cone",     "outcome", "alpha_star",
                                         "iter",    "lp",       "time_s",   "detail"};
  std::vector<std::vector<std::string>> rows;
  for (const auto &r : recs) {
    std::ostringstream t;
    t << std::setprecision(3) << r.wall_time_s;
    std::string alpha;
    if (r.alpha_star) {
      std::ostringstream a;
      a << std::setprecision(6) << *r.alpha_star;
      alpha = a.str();
    }
    rows.push_back({r.command, r.instance, r.cone, r.outcome, alpha, std::to_string(r.iterations),
                    std::to_string(r.lp_calls), t.str(), r.detail});
  }
  std::vector<std::size_t> w(head.size());
  for (std::size_t k = 0; k < head.size(); ++k) {
    w[k] = head[k].size();
    for (const auto &row : rows) w[k] = std::max(w[k], row[k].size());
  }
  auto line = [&](const std::vector<std::string> &row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      os << std::left << std::setw(static_cast<int>(w[k])) << row[k];
      os << (k + 1 < row.size() ? "  " : "\n");
    }
  };
  line(head);
  for (const auto &row : rows) line(row);
}

void emit(std::ostream &os, const std::vector<RunRecord> &recs, const std::string &format) {
  if (format == "json") {
    for (const auto &r : recs) os << to_json_line(r) << '\n';
  } else if (format == "table") {
    print_table(os, recs);
  } else {
    os << csv_header() << '\n';
    for (const auto &r : recs) os << to_csv(r) << '\n';
  }
}

/// Writes to --out when given, else to the default stream.
class Sink {
 public:
  Sink(const std::string &path, std::ostream &fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream &stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *os_;
};

RunRecord base_record(const std::string &command, const std::string &instance,
                      const std::string &digest) {
  RunRecord r;
  r.command = command;
  r.instance = instance;
  r.input_digest = digest;
  r.generator_id = "file";
  return r;
}

// Membership of one matrix in one cone.
RunRecord membership_record(const SymMatrix &a, Cone cone, const std::string &instance,
                            const std::string &digest, const std::optional<EigenPair> &pair) {
  RunRecord r = base_record("membership", instance, digest);
  r.cone = to_string(cone);
  r.alg = "-";
  const auto t0 = Clock::now();
  ReportOptions opts;
  opts.pair = pair;
  const MembershipVerdict v = membership_report(a, {cone}, opts).front();
  r.wall_time_s = seconds_since(t0);
  r.cone = v.tag();
  r.outcome = to_string(v.status);
  r.alpha_star = v.alpha_star;
  if (v.witness) r.witness_residual = check_witness(a, *v.witness).recon_residual;
  r.lp_calls = (family_of(cone) || cone == Cone::L) ? 1 : 0;
  r.config = "eps_alpha=" + format_double(kEpsAlpha);
  r.detail = v.diagnostic;
  return r;
}

RunRecord copositive_record(const SymMatrix &a, const CopoConfig &cfg, const std::string &instance,
                            const std::string &digest, const IterationObserver &obs = {}) {
  RunRecord r = base_record("copositive", instance, digest);
  r.cone = to_string(cfg.cone);
  r.alg = cfg.use_alg2 ? "2" : "1";
  r.config = config_echo(cfg);
  const auto t0 = Clock::now();
  const CopoResult res = test_copositive(a, cfg, obs);
  r.wall_time_s = seconds_since(t0);
  r.outcome = to_string(res.outcome);
  if (res.certificate) r.certificate.assign(res.certificate->data(), res.certificate->data() + res.certificate->size());
  r.iterations = res.stats.iterations;
  r.lp_calls = res.stats.lp_calls;
  std::ostringstream d;
  d << "reason=" << to_string(res.reason) << ";bisections=" << res.stats.bisections
    << ";removed=" << res.stats.removed_member << ";removed_hat=" << res.stats.removed_hat
    << ";removed_warm=" << res.stats.removed_warm << ";max_depth=" << res.stats.max_depth;
  if (res.certificate) d << ";certificate_value=" << format_double(res.certificate_value);
  r.detail = d.str();
  return r;
}

RunRecord clique_record(const Graph &g, const CopoConfig &cfg, const std::string &instance,
                        const std::string &digest) {
  RunRecord r = base_record("clique", instance, digest);
  r.cone = to_string(cfg.cone);
  r.alg = cfg.use_alg2 ? "2" : "1";
  r.config = config_echo(cfg);
  const auto t0 = Clock::now();
  const CliqueResult res = clique_number(g, cfg);
  r.wall_time_s = seconds_since(t0);
  r.outcome = res.value ? "Decided" : "Inconclusive";
  std::size_t lp = 0;
  for (const auto &p : res.probes) lp += p.stats.lp_calls;
  r.iterations = res.total_iterations();
  r.lp_calls = lp;
  std::ostringstream d;
  if (res.value) d << "omega=" << *res.value << ";";
  d << "probes=";
  for (std::size_t k = 0; k < res.probes.size(); ++k)
    d << (k ? " " : "") << format_double(res.probes[k].gamma) << ":" << to_string(res.probes[k].outcome);
  r.detail = d.str();
  return r;
}

RunRecord qpbound_record(const SymMatrix &q, const CopoConfig &cfg, double eta,
                         const std::string &instance, const std::string &digest) {
  RunRecord r = base_record("qpbound", instance, digest);
  r.cone = to_string(cfg.cone);
  r.alg = cfg.use_alg2 ? "2" : "1";
  r.config = config_echo(cfg) + ";eta=" + format_double(eta);
  const auto t0 = Clock::now();
  const QpBracket b = qp_optimum(q, cfg, eta);
  r.wall_time_s = seconds_since(t0);
  r.outcome = b.closed ? "Decided" : "Inconclusive";
  std::size_t lp = 0;
  for (const auto &p : b.probes) lp += p.stats.lp_calls;
  r.iterations = b.total_iterations();
  r.lp_calls = lp;
  r.detail = "lo=" + format_double(b.lo) + ";hi=" + format_double(b.hi) +
             ";probes=" + std::to_string(b.probes.size());
  return r;
}

// ---- bench ----------------------------------------------------------------

struct Instance {
  std::optional<SymMatrix> matrix;
  std::optional<Graph> graph;
  std::string label;
  std::string digest;
  std::string generator_id;
};

std::string resolve(const std::string &path, const std::filesystem::path &base) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p.string() : (base / p).string();
}

Instance make_instance(const json &spec, std::uint64_t seed, const std::filesystem::path &base);

Graph make_graph(const json &spec, std::uint64_t seed, const std::filesystem::path &base) {
  const std::string kind = spec.at("kind");
  if (kind == "random_graph")
    return gen_random_graph(spec.at("n"), spec.value("p", 0.5), spec.value("clique", 0), seed);
  if (kind == "complete_graph") return Graph::complete(spec.at("n"));
  if (kind == "path_graph") return Graph::path(spec.at("n"));
  if (kind == "dimacs") return load_dimacs(resolve(spec.at("path"), base));
  throw std::invalid_argument("unknown graph kind '" + kind + "'");
}

Instance make_instance(const json &spec, std::uint64_t seed, const std::filesystem::path &base) {
  const std::string kind = spec.at("kind");
  Instance inst;
  inst.generator_id = kGeneratorId;
  std::ostringstream label;
  label << kind << "(";
  bool first = true;
  for (const auto &[k, v] : spec.items()) {
    if (k == "kind") continue;
    label << (first ? "" : ",") << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
    first = false;
  }
  label << ")";
  inst.label = label.str();
  if (kind == "spn") {
    inst.matrix = gen_random_spn(spec.at("n"), seed).a;
  } else if (kind == "planted_qp") {
    inst.matrix = gen_planted_qp(spec.at("n"), spec.value("support", 1), spec.value("t", 0.0),
                                 spec.value("noise", 1.0), seed).q;
  } else if (kind == "matrix") {
    inst.matrix = load_matrix(resolve(spec.at("path"), base));
    inst.generator_id = "file";
  } else if (kind == "clique_matrix") {
    const Graph g = make_graph(spec.at("graph"), seed, base);
    inst.matrix = max_clique_matrix(g, spec.at("gamma"));
  } else {
    inst.graph = make_graph(spec, seed, base);
    if (kind == "dimacs" || kind == "complete_graph" || kind == "path_graph") inst.generator_id = "file";
  }
  if (kind == "complete_graph" || kind == "path_graph") inst.generator_id = "builtin";
  inst.digest = fnv1a_hex(inst.matrix ? matrix_text(*inst.matrix) : graph_text(*inst.graph));
  return inst;
}

struct BenchRow {
  std::string task;
  json instance;
  std::uint64_t seed = 0;
  std::size_t instance_index = 0;
  Cone cone = Cone::Fpm;
  CopoConfig cfg;
  double eta = 0.1;
};

RunRecord run_row(const BenchRow &row, const std::filesystem::path &base) {
  const Instance inst = make_instance(row.instance, row.seed, base);
  const std::string label = inst.label + "#" + std::to_string(row.instance_index);
  RunRecord r;
  auto need_matrix = [&] {
    if (!inst.matrix) throw std::invalid_argument(row.task + " needs a matrix instance");
    return *inst.matrix;
  };
  if (row.task == "membership") {
    r = membership_record(need_matrix(), row.cone, label, inst.digest, std::nullopt);
  } else if (row.task == "copositive") {
    r = copositive_record(need_matrix(), row.cfg, label, inst.digest);
  } else if (row.task == "qpbound") {
    r = qpbound_record(need_matrix(), row.cfg, row.eta, label, inst.digest);
  } else if (row.task == "clique") {
    if (!inst.graph) throw std::invalid_argument("clique needs a graph instance");
    r = clique_record(*inst.graph, row.cfg, label, inst.digest);
  } else {
    throw std::invalid_argument("unknown task '" + row.task + "'");
  }
  r.command = "bench:" + row.task;
  r.seed = row.seed;
  r.generator_id = inst.generator_id;
  return r;
}

std::vector<BenchRow> expand_suite(const json &suite, const Common &c) {
  if (!suite.is_object() || !suite.contains("runs") || !suite["runs"].is_array())
    throw std::invalid_argument("suite: expected an object with a 'runs' array");
  const std::uint64_t master = suite.value("master_seed", c.seed);
  std::vector<BenchRow> rows;
  std::size_t index = 0;
  for (const auto &run : suite["runs"]) {
    const std::string task = run.at("task");
    if (task != "membership" && task != "copositive" && task != "clique" && task != "qpbound")
      throw std::invalid_argument("suite: unknown task '" + task + "'");
    const int repeat = run.value("repeat", 1);
    if (repeat < 1) throw std::invalid_argument("suite: repeat must be >= 1");
    std::vector<std::string> cones;
    if (run.contains("cones")) {
      cones = run["cones"].get<std::vector<std::string>>();
    } else {
      cones = {task == "membership" ? "H" : "F+-"};
    }
    std::vector<Cone> parsed;
    for (const auto &s : cones) parsed.push_back(parse_cone(s));
    Common rc = c;
    rc.alg = run.value("alg", 2);
    rc.max_iter = run.value("max_iter", c.max_iter);
    rc.time_limit = run.value("time_limit", c.time_limit);
    rc.eps = run.value("eps", c.eps);
    const double eta = run.value("eta", 0.1);
    for (int k = 0; k < repeat; ++k, ++index) {
      for (Cone cone : parsed) {
        BenchRow row;
        row.task = task;
        row.instance = run.at("instance");
        row.seed = split_seed(master, index);
        row.instance_index = index;
        row.cone = cone;
        if (task != "membership") row.cfg = copo_config(rc, cone);
        row.eta = eta;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

unsigned bench_threads(std::size_t rows) {
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("CONEKIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) t = std::min<unsigned>(t, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(rows, 1)));
}

struct Summary {
  std::string task, instance, cone;
  std::size_t rows = 0, hits = 0, inconclusive = 0, errors = 0;
  double time = 0.0;
};

int cmd_bench(const std::string &suite_path, const Common &c, std::ostream &out) {
  std::ifstream in(suite_path);
  if (!in) throw std::runtime_error("cannot open " + suite_path);
  json suite;
  try {
    suite = json::parse(in);
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("suite: ") + e.what());
  }
  std::vector<BenchRow> rows;
  try {
    rows = expand_suite(suite, c);
  } catch (const json::exception &e) {
    throw std::runtime_error(std::string("suite: ") + e.what());
  }
  const std::filesystem::path base = std::filesystem::path(suite_path).parent_path();

  std::vector<RunRecord> recs(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) {
      try {
        recs[k] = run_row(rows[k], base);
      } catch (const std::exception &e) {
        RunRecord r;
        r.command = "bench:" + rows[k].task;
        r.instance = rows[k].instance.dump() + "#" + std::to_string(rows[k].instance_index);
        r.cone = to_string(rows[k].cone);
        r.outcome = "Error";
        r.seed = rows[k].seed;
        r.generator_id = kGeneratorId;
        r.detail = e.what();
        recs[k] = r;
      }
    }
  };
  const unsigned nt = bench_threads(rows.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();

  std::vector<Summary> sums;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> where;
  bool undecided = false;
  for (const auto &r : recs) {
    const std::string family = r.instance.substr(0, r.instance.rfind('#'));
    const auto key = std::make_tuple(r.command, family, r.cone);
    auto it = where.find(key);
    if (it == where.end()) {
      it = where.emplace(key, sums.size()).first;
      sums.push_back({r.command, family, r.cone});
    }
    Summary &s = sums[it->second];
    ++s.rows;
    s.time += r.wall_time_s;
    if (r.outcome == "Member" || r.outcome == "Copositive" || r.outcome == "NotCopositive" ||
        r.outcome == "Decided")
      ++s.hits;
    if (r.outcome == "Inconclusive") ++s.inconclusive, undecided = true;
    if (r.outcome == "Error") ++s.errors, undecided = true;
  }

  Sink sink(c.out, out);
  std::ostream &os = sink.stream();
  const std::string fmt = c.format == "table" ? "table" : c.format;
  emit(os, recs, fmt);
  for (const auto &s : sums) {
    const double mean = s.rows ? s.time / s.rows : 0.0;
    if (fmt == "json") {
      json j = {{"summary",
                 {{"task", s.task}, {"instance", s.instance}, {"cone", s.cone}, {"rows", s.rows}, {"identified", s.hits},
                  {"inconclusive", s.inconclusive}, {"errors", s.errors},
                  {"mean_time_s", format_double(mean)}}}};
      os << j.dump() << '\n';
    } else {
      os << "# summary task=" << s.task << " instance=" << s.instance << " cone=" << s.cone << " rows=" << s.rows
         << " identified=" << s.hits << " rate=" << format_double(s.rows ? double(s.hits) / s.rows : 0.0)
         << " inconclusive=" << s.inconclusive << " errors=" << s.errors
         << " mean_time_s=" << format_double(mean) << '\n';
    }
  }
  return undecided ? 2 : 0;
}

// ---- gen ------------------------------------------------------------------

struct GenOpts {
  std::string kind;
  int n = 10;
  int support = 5;
  double t = -10.0;
  double noise = 1.0;
  double p = 0.5;
  int clique = 0;
  std::string graph;
  double gamma = 0.0;
  std::string meta;
};

int cmd_gen(const GenOpts &g, const Common &c, std::ostream &out) {
  json params;
  std::string text;
  std::string generator = kGeneratorId;
  if (g.kind == "spn") {
    params = {{"n", g.n}};
    text = matrix_text(gen_random_spn(g.n, c.seed).a);
  } else if (g.kind == "planted-qp") {
    const PlantedQp q = gen_planted_qp(g.n, g.support, g.t, g.noise, c.seed);
    params = {{"n", g.n}, {"support", g.support}, {"t", g.t}, {"noise", g.noise}};
    params["x_star"] = std::vector<double>(q.x_star.data(), q.x_star.data() + q.x_star.size());
    text = matrix_text(q.q);
  } else if (g.kind == "graph") {
    params = {{"n", g.n}, {"p", g.p}, {"clique", g.clique}};
    text = graph_text(gen_random_graph(g.n, g.p, g.clique, c.seed));
  } else if (g.kind == "clique-matrix") {
    if (g.graph.empty()) throw std::invalid_argument("clique-matrix needs --graph");
    params = {{"graph", g.graph}, {"gamma", g.gamma}};
    text = matrix_text(max_clique_matrix(load_dimacs(g.graph), g.gamma));
    generator = "deterministic";
  } else {
    throw std::invalid_argument("unknown kind '" + g.kind + "'");
  }
  Sink sink(c.out, out);
  sink.stream() << text;
  std::string meta = g.meta;
  if (meta.empty() && !c.out.empty()) meta = c.out + ".meta.json";
  if (!meta.empty()) {
    std::ofstream m(meta);
    if (!m) throw std::runtime_error("cannot write " + meta);
    m << json{{"kind", g.kind}, {"params", params}, {"seed", c.seed}, {"generator_id", generator}}.dump(2)
      << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"conekit: cone membership and copositivity tests"};
  app.require_subcommand(1);

  Common mc, cc, kc, qc, gc, bc;
  std::string m_path, c_path, k_path, q_path, b_path;
  double eta = 0.1;
  GenOpts gen;

  auto *mem = app.add_subcommand("membership", "per-cone membership report for a matrix");
  add_common(mem, mc, "N,DD,H,G,F+,F+-,L");
  mem->add_option("matrix", m_path, "matrix text file")->required();

  auto *cop = app.add_subcommand("copositive", "simplicial-partition copositivity test");
  add_common(cop, cc, "F+-");
  cop->add_option("matrix", c_path, "matrix text file")->required();
  cop->add_option("--trace", cc.trace, "write a per-iteration trace CSV");

  auto *clq = app.add_subcommand("clique", "clique number via copositivity probes");
  add_common(clq, kc, "F+-");
  clq->add_option("graph", k_path, "DIMACS graph")->required();

  auto *qpb = app.add_subcommand("qpbound", "bracket the standard-QP optimum");
  add_common(qpb, qc, "F+-");
  qpb->add_option("matrix", q_path, "matrix text file")->required();
  qpb->add_option("--eta", eta, "bracket width")->check(CLI::PositiveNumber)->capture_default_str();

  auto *gn = app.add_subcommand("gen", "generate an instance");
  add_common(gn, gc, "F+-");
  gn->add_option("kind", gen.kind, "spn | planted-qp | graph | clique-matrix")
      ->required()
      ->check(CLI::IsMember({"spn", "planted-qp", "graph", "clique-matrix"}));
  gn->add_option("--n", gen.n, "dimension / node count")->check(CLI::PositiveNumber);
  gn->add_option("--support", gen.support, "planted-qp support size");
  gn->add_option("--t", gen.t, "planted-qp optimal value");
  gn->add_option("--noise", gen.noise, "planted-qp noise scale");
  gn->add_option("--p", gen.p, "edge probability");
  gn->add_option("--clique", gen.clique, "planted clique size");
  gn->add_option("--graph", gen.graph, "DIMACS graph for clique-matrix");
  gn->add_option("--gamma", gen.gamma, "gamma for clique-matrix");
  gn->add_option("--meta", gen.meta, "metadata JSON path (default <out>.meta.json)");

  auto *bn = app.add_subcommand("bench", "run a JSON suite");
  add_common(bn, bc, "F+-");
  bn->add_option("suite", b_path, "suite spec (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*mem) {
      const SymMatrix a = load_matrix(m_path);
      const std::string digest = fnv1a_hex(matrix_text(a));
      std::vector<Cone> cones;
      for (const auto &s : split_list(mc.cone)) cones.push_back(parse_cone(s));
      if (cones.empty()) throw std::invalid_argument("no cones selected");
      std::optional<EigenPair> pair;
      try {
        pair = eigen_decompose(a);
      } catch (const NonConvergence &) {
      }
      std::vector<RunRecord> recs;
      bool any = false;
      for (Cone cone : cones) {
        recs.push_back(membership_record(a, cone, m_path, digest, pair));
        recs.back().seed = mc.seed;
        any = any || recs.back().outcome == to_string(Verdict::Member);
      }
      Sink sink(mc.out, out);
      emit(sink.stream(), recs, mc.format);
      return any ? 0 : 2;
    }
    if (*cop) {
      const SymMatrix a = load_matrix(c_path);
      const CopoConfig cfg = copo_config(cc, parse_cone(cc.cone));
      std::unique_ptr<std::ofstream> trace;
      IterationObserver obs;
      if (!cc.trace.empty()) {
        trace = std::make_unique<std::ofstream>(cc.trace);
        if (!*trace) throw std::runtime_error("cannot write " + cc.trace);
        *trace << trace_header() << '\n';
        obs = [&trace](const IterationEvent &ev, const Partition &) {
          *trace << trace_row(ev.iteration, ev.fineness, ev.worklist, ev.action) << '\n';
        };
      }
      RunRecord r = copositive_record(a, cfg, c_path, fnv1a_hex(matrix_text(a)), obs);
      r.seed = cc.seed;
      Sink sink(cc.out, out);
      emit(sink.stream(), {r}, cc.format);
      return r.outcome == to_string(Outcome::Inconclusive) ? 2 : 0;
    }
    if (*clq) {
      const Graph g = load_dimacs(k_path);
      const CopoConfig cfg = copo_config(kc, parse_cone(kc.cone));
      RunRecord r = clique_record(g, cfg, k_path, fnv1a_hex(graph_text(g)));
      r.seed = kc.seed;
      Sink sink(kc.out, out);
      emit(sink.stream(), {r}, kc.format);
      return r.outcome == "Decided" ? 0 : 2;
    }
    if (*qpb) {
      const SymMatrix q = load_matrix(q_path);
      const CopoConfig cfg = copo_config(qc, parse_cone(qc.cone));
      RunRecord r = qpbound_record(q, cfg, eta, q_path, fnv1a_hex(matrix_text(q)));
      r.seed = qc.seed;
      Sink sink(qc.out, out);
      emit(sink.stream(), {r}, qc.format);
      return r.outcome == "Decided" ? 0 : 2;
    }
    if (*gn) return cmd_gen(gen, gc, out);
    if (*bn) return cmd_bench(b_path, bc, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace conekit
