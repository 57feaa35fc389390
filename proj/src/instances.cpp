#include "conekit/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace conekit {

ParseError::ParseError(std::size_t line, const std::string &msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

Graph::Graph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative node count");
}

void Graph::add_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("Graph: self-loop at node " + std::to_string(i + 1));
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("Graph: node out of range");
  if (i > j) std::swap(i, j);
  if (!edges_.emplace(i, j).second)
    throw std::invalid_argument("Graph: duplicate edge " + std::to_string(i + 1) + "-" +
                                std::to_string(j + 1));
}

bool Graph::adjacent(int i, int j) const {
  if (i > j) std::swap(i, j);
  return edges_.count({i, j}) > 0;
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (const auto &[i, j] : edges_) a(i, j) = a(j, i) = 1.0;
  return a;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph parse_dimacs(std::istream &in) {
  std::optional<Graph> g;
  long declared = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      if (g) throw ParseError(lineno, "second problem line");
      std::string kind;
      long n = -1, m = -1;
      if (!(ls >> kind >> n >> m) || (kind != "edge" && kind != "col") || n < 1 || m < 0)
        throw ParseError(lineno, "expected 'p edge <n> <m>'");
      g.emplace(static_cast<int>(n));
      declared = m;
    } else if (tag == "e") {
      if (!g) throw ParseError(lineno, "edge before problem line");
      long i = 0, j = 0;
      if (!(ls >> i >> j)) throw ParseError(lineno, "expected 'e <i> <j>'");
      if (i == j) throw ParseError(lineno, "self-loop");
      if (i < 1 || j < 1 || i > g->n() || j > g->n()) throw ParseError(lineno, "node out of range");
      if (g->adjacent(static_cast<int>(i - 1), static_cast<int>(j - 1)))
        throw ParseError(lineno, "duplicate edge");
      g->add_edge(static_cast<int>(i - 1), static_cast<int>(j - 1));
    } else {
      throw ParseError(lineno, "unknown line type '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing data");
  }
  if (!g) throw ParseError(lineno, "missing problem line");
  if (static_cast<long>(g->num_edges()) != declared)
    throw InconsistentHeader("header declares " + std::to_string(declared) + " edges, file has " +
                             std::to_string(g->num_edges()));
  return *g;
}

Graph load_dimacs(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_dimacs(in);
}

void write_dimacs(std::ostream &out, const Graph &g) {
  out << "p edge " << g.n() << ' ' << g.num_edges() << '\n';
  for (const auto &[i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

SymMatrix max_clique_matrix(const Graph &g, double gamma) {
  const Matrix e = Matrix::Ones(g.n(), g.n());
  return SymMatrix(gamma * (e - g.adjacency()) - e);
}

std::vector<int> greedy_clique(const Graph &g) {
  std::vector<int> deg(g.n(), 0);
  for (const auto &[i, j] : g.edges()) ++deg[i], ++deg[j];
  std::vector<int> order(g.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] > deg[b]; });
  std::vector<int> best;
  // One greedy pass seeded at every node; keep the largest clique.
  for (int seed : order) {
    std::vector<int> k{seed};
    for (int v : order) {
      if (v == seed) continue;
      if (std::all_of(k.begin(), k.end(), [&](int u) { return g.adjacent(u, v); })) k.push_back(v);
    }
    if (k.size() > best.size()) best = std::move(k);
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::size_t CliqueResult::total_iterations() const {
  std::size_t s = 0;
  for (const auto &p : probes) s += p.stats.iterations;
  return s;
}

CliqueResult clique_number(const Graph &g, const CopoConfig &cfg) {
  if (g.n() < 1) throw std::invalid_argument("clique_number: empty graph");
  CliqueResult res;
  const std::vector<int> k0 = greedy_clique(g);
  const int lower = static_cast<int>(k0.size());
  // B_{lower - 1/2} is not copositive: the uniform vector on the clique gives
  // (lower - 1/2)/lower - 1 < 0, so no probe is needed below.
  {
    Vector x = Vector::Zero(g.n());
    for (int v : k0) x(v) = 1.0 / lower;
    CliqueProbe p;
    p.gamma = lower - 0.5;
    p.outcome = max_clique_matrix(g, p.gamma).quad(x) < 0.0 ? Outcome::NotCopositive
                                                            : Outcome::Inconclusive;
    res.probes.push_back(p);
  }
  for (int k = lower; k <= g.n(); ++k) {
    CliqueProbe p;
    p.gamma = k + 0.5;
    const CopoResult r = test_copositive(max_clique_matrix(g, p.gamma), cfg);
    p.outcome = r.outcome;
    p.stats = r.stats;
    res.probes.push_back(p);
    if (r.outcome == Outcome::Copositive) {
      res.value = k;
      return res;
    }
    if (r.outcome == Outcome::Inconclusive) return res;
  }
  return res;
}

SymMatrix std_qp_matrix(const SymMatrix &q, double gamma) {
  return SymMatrix(q.matrix() - gamma * Matrix::Ones(q.n(), q.n()));
}

std::size_t QpBracket::total_iterations() const {
  std::size_t s = 0;
  for (const auto &p : probes) s += p.stats.iterations;
  return s;
}

QpBracket qp_optimum(const SymMatrix &q, const CopoConfig &cfg, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("qp_optimum: eta must be positive");
  const Eigen::Index n = q.n();
  const double dmin = q.matrix().diagonal().minCoeff();
  QpBracket b;
  b.lo = dmin - static_cast<double>(n) * q.matrix().cwiseAbs().maxCoeff();
  b.hi = dmin;
  while (b.hi - b.lo > eta) {
    QpProbe p;
    p.gamma = 0.5 * (b.lo + b.hi);
    const CopoResult r = test_copositive(std_qp_matrix(q, p.gamma), cfg);
    p.outcome = r.outcome;
    p.stats = r.stats;
    b.probes.push_back(p);
    if (r.outcome == Outcome::Copositive) {
      b.lo = p.gamma;
    } else if (r.outcome == Outcome::NotCopositive) {
      // The certificate is a feasible point, so its value bounds p* from above.
      b.hi = std::min(p.gamma, q.quad(*r.certificate));
      b.lo = std::min(b.lo, b.hi);
    } else {
      return b;
    }
  }
  b.closed = true;
  return b;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace {

std::mt19937_64 make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                    static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(seed + 1)),
                    static_cast<std::uint32_t>(splitmix64(seed + 1) >> 32)};
  return std::mt19937_64(seq);
}

Matrix normal_matrix(std::mt19937_64 &rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

SymMatrix sym(const Matrix &m) { return SymMatrix(0.5 * (m + m.transpose())); }

}  // namespace

SpnSample gen_random_spn(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random_spn: n < 1");
  auto rng = make_rng(seed);
  const Matrix b = normal_matrix(rng, n, n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(i, j) = u(rng);
  Matrix c = f + f.transpose();
  const double cmin = c.diagonal().minCoeff();
  c.diagonal().array() -= cmin;
  const SymMatrix s = sym(b * b.transpose());
  const SymMatrix nn(c);
  return {s + nn, s, nn};
}

PlantedQp gen_planted_qp(int n, int support, double t, double noise_scale, std::uint64_t seed) {
  if (n < 1 || support < 1 || support > n)
    throw std::invalid_argument("gen_planted_qp: need 1 <= support <= n");
  if (!(noise_scale >= 0.0)) throw std::invalid_argument("gen_planted_qp: noise_scale < 0");
  auto rng = make_rng(seed);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<bool> in_supp(n, false);
  for (int k = 0; k < support; ++k) in_supp[idx[k]] = true;

  // Uniform on the face: normalized exponentials.
  std::exponential_distribution<double> ex(1.0);
  Vector x = Vector::Zero(n);
  for (int k = 0; k < support; ++k) x(idx[k]) = ex(rng);
  x /= x.sum();

  const Matrix g = normal_matrix(rng, n, n);
  const Matrix h = noise_scale * (g * g.transpose()) / n;

  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix n0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = u(rng);
      if (in_supp[i] && in_supp[j]) continue;
      n0(i, j) = n0(j, i) = noise_scale * v;
    }
  }

  const Matrix r = Matrix::Identity(n, n) - x * Vector::Ones(n).transpose();
  const Matrix q = t * Matrix::Ones(n, n) + r.transpose() * h * r + n0;
  return {sym(q), x, t};
}

Graph gen_random_graph(int n, double p, int planted_clique, std::uint64_t seed) {
  if (n < 1 || planted_clique < 0 || planted_clique > n || !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("gen_random_graph: bad parameters");
  auto rng = make_rng(seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<bool> planted(n, false);
  for (int k = 0; k < planted_clique; ++k) planted[perm[k]] = true;
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool flip = coin(rng);
      if ((planted[i] && planted[j]) || flip) g.add_edge(i, j);
    }
  return g;
}

}  // namespace conekit
