#pragma once

#include "conekit/cones.hpp"
#include "conekit/linalg.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conekit {

class DegenerateEdge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int i = 0;
  int j = 0;
  double length = 0.0;
};

/// Simplex inside the standard simplex, vertices as the columns of V.
struct Simplex {
  Matrix V;
  int depth = 0;
  Edge longest;

  /// The standard simplex itself (V = I).
  static Simplex standard(Eigen::Index n);
  static Simplex from_vertices(Matrix v, int depth = 0);

  Eigen::Index n() const { return V.cols(); }
  double diameter() const { return longest.length; }
  /// Columns nonnegative, summing to 1 within 1e-12, V nonsingular.
  bool valid() const;
};

/// Longest edge; ties go to the lexicographically first (i, j).
Edge longest_edge(const Matrix &v);

enum class EdgeRule { Longest };
enum class SelectionRule { Lifo, Fifo };

struct Bisection {
  Simplex first;   // vertex i replaced by the midpoint
  Simplex second;  // vertex j replaced by the midpoint
  int i = 0;
  int j = 0;
};

/// Splits s at the midpoint of the edge picked by the rule. Throws
/// DegenerateEdge when that edge is shorter than 1e-14.
Bisection bisect(const Simplex &s, EdgeRule rule = EdgeRule::Longest);

/// First vertex with v^T A v < -eps_vertex.
std::optional<Vector> vertex_negative(const SymMatrix &a, const Simplex &s, double eps_vertex = 0.0);

/// Worklist of unexplored simplices with their maximum diameter maintained.
class Partition {
 public:
  explicit Partition(SelectionRule rule = SelectionRule::Lifo) : rule_(rule) {}

  void push(Simplex s);
  Simplex pop();
  bool empty() const { return list_.empty(); }
  std::size_t size() const { return list_.size(); }
  /// delta(P): max simplex diameter over the worklist, 0 when empty.
  double fineness() const;
  /// Same quantity recomputed from the vertices.
  double recompute_fineness() const;
  const std::deque<Simplex> &simplices() const { return list_; }

 private:
  SelectionRule rule_;
  std::deque<Simplex> list_;
  std::multiset<double> diameters_;
};

enum class Outcome { Copositive, NotCopositive, Inconclusive };
const char *to_string(Outcome o);

enum class StopReason { None, IterationLimit, TimeLimit, DegenerateEdge };
const char *to_string(StopReason r);

/// How a simplex left the worklist.
enum class Removal { Member, HatMember, WarmStart };

struct CopoConfig {
  /// N, H, G, F+ or F+-.
  Cone cone = Cone::Fpm;
  /// Hat-variant screening and warm-started children (LP families only).
  bool use_alg2 = true;
  double eps_vertex = 0.0;
  std::size_t max_iterations = 1'000'000;
  double time_limit = 300.0;
  SelectionRule selection = SelectionRule::Lifo;
  EdgeRule edge = EdgeRule::Longest;
  LpCheckOptions lp;
  /// Keep up to this many removal witnesses (reservoir-sampled) for audits.
  std::size_t audit_samples = 0;
  std::uint64_t audit_seed = 1;
};

struct IterationEvent {
  std::size_t iteration = 0;
  double fineness = 0.0;
  std::size_t worklist = 0;
  /// "negative-vertex", "removed", "removed-hat", "bisected"
  std::string action;
};

struct RemovalAudit {
  Matrix V;
  Removal via = Removal::Member;
  Witness witness;  // decomposition of V^T A V
};

struct CopoStats {
  std::size_t iterations = 0;
  std::size_t lp_calls = 0;
  std::size_t eigen_calls = 0;
  std::size_t removed_member = 0;     // exact test on V^T A V
  std::size_t removed_hat = 0;        // (V^T P, Lambda) test
  std::size_t removed_warm = 0;       // children screened without an LP
  std::size_t warm_from_exact = 0;    // of removed_warm: witness from the exact LP
  std::size_t warm_from_hat = 0;      // of removed_warm: witness from the hat LP
  std::size_t bisections = 0;
  std::size_t solver_failures = 0;
  int max_depth = 0;
  double fineness_at_exit = 0.0;
  std::size_t worklist_at_exit = 0;
  double elapsed_s = 0.0;
};

struct CopoResult {
  Outcome outcome = Outcome::Inconclusive;
  StopReason reason = StopReason::None;
  /// NotCopositive: v on the standard simplex with v^T A v < 0.
  std::optional<Vector> certificate;
  double certificate_value = 0.0;
  CopoStats stats;
  std::vector<RemovalAudit> audit;
};

using IterationObserver = std::function<void(const IterationEvent &, const Partition &)>;

/// Simplicial-partition copositivity test.
///
/// Copositive is returned only once every simplex has been removed by a
/// Member verdict on V^T A V; NotCopositive only with a vertex certificate
/// that evaluates strictly negative.
CopoResult test_copositive(const SymMatrix &a, const CopoConfig &cfg,
                           const IterationObserver &observer = {});

}  // namespace conekit
