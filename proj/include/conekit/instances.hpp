#pragma once

#include "conekit/copositivity.hpp"
#include "conekit/linalg.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace conekit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string &msg);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InconsistentHeader : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected simple graph on nodes 0..n-1 (DIMACS files are 1-indexed).
class Graph {
 public:
  explicit Graph(int n = 0);

  int n() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  /// Throws std::invalid_argument on self-loops, out-of-range nodes or duplicates.
  void add_edge(int i, int j);
  bool adjacent(int i, int j) const;
  /// Edges as (i, j) with i < j, 0-based.
  const std::set<std::pair<int, int>> &edges() const { return edges_; }
  Matrix adjacency() const;

  static Graph complete(int n);
  static Graph path(int n);

 private:
  int n_;
  std::set<std::pair<int, int>> edges_;
};

Graph parse_dimacs(std::istream &in);
Graph load_dimacs(const std::string &path);
void write_dimacs(std::ostream &out, const Graph &g);

/// B_gamma = gamma (E - A_G) - E.
SymMatrix max_clique_matrix(const Graph &g, double gamma);

/// Greedy lower bound on the clique number: nodes of one clique found by
/// repeatedly adding the highest-degree compatible node.
std::vector<int> greedy_clique(const Graph &g);

struct CliqueProbe {
  double gamma = 0.0;
  Outcome outcome = Outcome::Inconclusive;
  CopoStats stats;
};

struct CliqueResult {
  /// Empty when a probe exhausted its budget.
  std::optional<int> value;
  std::vector<CliqueProbe> probes;
  std::size_t total_iterations() const;
};

/// Finds g with B_{g-1/2} not copositive and B_{g+1/2} copositive, scanning
/// upward from a greedy clique. cfg's limits act as the per-probe budget.
CliqueResult clique_number(const Graph &g, const CopoConfig &cfg);

/// C_gamma = Q - gamma E.
SymMatrix std_qp_matrix(const SymMatrix &q, double gamma);

struct QpProbe {
  double gamma = 0.0;
  Outcome outcome = Outcome::Inconclusive;
  CopoStats stats;
};

struct QpBracket {
  double lo = 0.0;
  double hi = 0.0;
  /// False when a probe was Inconclusive; [lo, hi] is then the partial bracket.
  bool closed = false;
  std::vector<QpProbe> probes;
  std::size_t total_iterations() const;
};

/// Brackets p*(Q) = min over the simplex of x^T Q x to width eta by bisection
/// on gamma with copositivity probes on Q - gamma E.
QpBracket qp_optimum(const SymMatrix &q, const CopoConfig &cfg, double eta);

/// Generator identity recorded in instance metadata.
inline constexpr const char *kGeneratorId = "mt19937_64/splitmix64-v1";

/// splitmix64 step; also the seed-splitting rule (mix(seed, stream)).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

struct SpnSample {
  SymMatrix a;
  SymMatrix s;  // B B^T
  SymMatrix n;  // F + F^T - c_min I
};

/// A = S + N with S = B B^T (B standard normal) and N = C - min(diag C) I,
/// C = F + F^T, F uniform on [0, 1].
SpnSample gen_random_spn(int n, std::uint64_t seed);

struct PlantedQp {
  SymMatrix q;
  Vector x_star;
  double t = 0.0;
};

/// Q = t E + R^T H R + N0 with R = I - x* e^T, H = noise * (Gram of normals)/n and
/// N0 >= 0 vanishing on supp(x*) x supp(x*); min over the simplex is t at x*.
PlantedQp gen_planted_qp(int n, int support, double t, double noise_scale, std::uint64_t seed);

/// Random graph G(n, p) with an optional planted clique on the first k nodes
/// of a random permutation.
Graph gen_random_graph(int n, double p, int planted_clique, std::uint64_t seed);

}  // namespace conekit
