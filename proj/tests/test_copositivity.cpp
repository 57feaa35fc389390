#include "conekit/copositivity.hpp"
#include "conekit/instances.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace conekit;

namespace {

SymMatrix kn_matrix(int n, double gamma) {
  return SymMatrix::identity(n) * gamma - SymMatrix::ones(n);
}

CopoConfig config(Cone cone, bool alg2, std::size_t max_iter = 100000) {
  CopoConfig cfg;
  cfg.cone = cone;
  cfg.use_alg2 = alg2;
  cfg.max_iterations = max_iter;
  cfg.time_limit = 120.0;
  return cfg;
}

void expect_certificate(const SymMatrix &a, const CopoResult &r) {
  ASSERT_EQ(r.outcome, Outcome::NotCopositive);
  ASSERT_TRUE(r.certificate);
  const Vector &v = *r.certificate;
  EXPECT_GE(v.minCoeff(), 0.0);
  EXPECT_NEAR(v.sum(), 1.0, 1e-12);
  EXPECT_LT(a.quad(v), 0.0);
  EXPECT_EQ(a.quad(v), r.certificate_value);
}

double simplex_volume(const Matrix &v) { return std::abs(v.determinant()); }

}  // namespace

TEST(Simplex, StandardAndValidity) {
  const Simplex s = Simplex::standard(3);
  EXPECT_TRUE(s.valid());
  EXPECT_EQ(s.depth, 0);
  EXPECT_NEAR(s.diameter(), std::sqrt(2.0), 1e-15);

  Matrix v = Matrix::Identity(3, 3);
  v(0, 0) = -0.1;
  v(1, 0) = 1.1;
  EXPECT_FALSE(Simplex::from_vertices(v).valid());
  v = Matrix::Identity(3, 3);
  v(0, 0) = 0.9;
  EXPECT_FALSE(Simplex::from_vertices(v).valid());
  v = Matrix::Identity(3, 3);
  v.col(2) = v.col(1);
  EXPECT_FALSE(Simplex::from_vertices(v).valid());
  EXPECT_FALSE(Simplex::from_vertices(Matrix::Identity(3, 2)).valid());
}

TEST(Simplex, LongestEdgeTieBreakIsLexicographic) {
  const Edge e = longest_edge(Matrix::Identity(4, 4));
  EXPECT_EQ(e.i, 0);
  EXPECT_EQ(e.j, 1);
  Matrix v(3, 3);
  v.col(2) << 0.5, 0, 0.5;
  v.col(0) << 0, 0, 1;
  v.col(1) << 0, 1, 0;
  // Edges: (0,1) = sqrt2, (0,2) = sqrt(1/2), (1,2) = sqrt(3/2).
  const Edge f = longest_edge(v);
  EXPECT_EQ(f.i, 0);
  EXPECT_EQ(f.j, 1);
}

TEST(Bisect, TwoDimensionalExample) {
  const Bisection b = bisect(Simplex::standard(2));
  Matrix first(2, 2), second(2, 2);
  first << 0.5, 0, 0.5, 1;
  second << 1, 0.5, 0, 0.5;
  EXPECT_EQ(b.first.V, first);
  EXPECT_EQ(b.second.V, second);
  EXPECT_EQ(b.first.depth, 1);
  EXPECT_EQ(b.second.depth, 1);
}

TEST(Bisect, ChildrenSplitTheParent) {
  std::mt19937_64 rng(101);
  Partition p;
  p.push(Simplex::standard(5));
  // Diameters halve about every n - 1 LIFO steps; stay well above 1e-14.
  for (int k = 0; k < 120; ++k) {
    const Simplex s = p.pop();
    const Bisection b = bisect(s);
    ASSERT_TRUE(b.first.valid());
    ASSERT_TRUE(b.second.valid());
    EXPECT_EQ(b.first.depth, s.depth + 1);
    const Vector mid = 0.5 * (s.V.col(b.i) + s.V.col(b.j));
    EXPECT_EQ(b.first.V.col(b.i), mid);
    EXPECT_EQ(b.second.V.col(b.j), mid);
    // Disjoint interiors of half the volume each.
    const double vol = simplex_volume(s.V);
    EXPECT_NEAR(simplex_volume(b.first.V), vol / 2, 1e-12 * vol);
    EXPECT_NEAR(simplex_volume(b.second.V), vol / 2, 1e-12 * vol);
    // Points of the parent land in one child (barycentric coordinates >= 0 there).
    for (int t = 0; t < 5; ++t) {
      const Vector x = s.V * oracle::random_simplex_point(rng, 5);
      const Vector c1 = b.first.V.fullPivLu().solve(x);
      const Vector c2 = b.second.V.fullPivLu().solve(x);
      EXPECT_TRUE(c1.minCoeff() >= -1e-9 || c2.minCoeff() >= -1e-9);
    }
    p.push(b.first);
    p.push(b.second);
  }
}

TEST(Bisect, TenLevelsHalveTheEdge) {
  Partition p(SelectionRule::Fifo);
  p.push(Simplex::standard(2));
  for (int level = 0; level < 10; ++level) {
    const std::size_t count = p.size();
    for (std::size_t k = 0; k < count; ++k) {
      const Bisection b = bisect(p.pop());
      p.push(b.first);
      p.push(b.second);
    }
  }
  EXPECT_EQ(p.size(), 1024u);
  EXPECT_NEAR(p.fineness(), std::sqrt(2.0) / 1024, 1e-15);
  EXPECT_NEAR(p.recompute_fineness(), std::sqrt(2.0) / 1024, 1e-15);
}

TEST(Bisect, DegenerateEdge) {
  EXPECT_THROW(bisect(Simplex::standard(1)), DegenerateEdge);
  Matrix v(2, 2);
  v << 0.5, 0.5 + 4e-15, 0.5, 0.5 - 4e-15;
  EXPECT_THROW(bisect(Simplex::from_vertices(v)), DegenerateEdge);
}

TEST(VertexNegative, Examples) {
  const std::optional<Vector> v = vertex_negative(SymMatrix::identity(3) * -1.0, Simplex::standard(3));
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, Vector::Unit(3, 0));
  EXPECT_FALSE(vertex_negative(SymMatrix::ones(3), Simplex::standard(3)));
  // Vertices of B_2.9 for K_3 evaluate to 1.9; the negative region is interior.
  const SymMatrix b = kn_matrix(3, 2.9);
  EXPECT_FALSE(vertex_negative(b, Simplex::standard(3)));
  EXPECT_NEAR(b.quad(Vector::Unit(3, 1)), 1.9, 1e-15);
  // A margin suppresses small negatives.
  Vector d(2);
  d << -0.01, 1;
  EXPECT_TRUE(vertex_negative(SymMatrix::diagonal(d), Simplex::standard(2)));
  EXPECT_FALSE(vertex_negative(SymMatrix::diagonal(d), Simplex::standard(2), 0.1));
}

TEST(Partition, SelectionOrderAndFineness) {
  Partition lifo(SelectionRule::Lifo), fifo(SelectionRule::Fifo);
  EXPECT_EQ(lifo.fineness(), 0.0);
  const Bisection b = bisect(Simplex::standard(3));
  const Bisection c = bisect(b.first);
  for (Partition *p : {&lifo, &fifo}) {
    p->push(b.second);
    p->push(c.first);
    p->push(c.second);
    EXPECT_EQ(p->fineness(), p->recompute_fineness());
  }
  EXPECT_EQ(lifo.pop().V, c.second.V);
  EXPECT_EQ(fifo.pop().V, b.second.V);
  EXPECT_EQ(fifo.fineness(), fifo.recompute_fineness());
  EXPECT_EQ(lifo.fineness(), lifo.recompute_fineness());
}

TEST(TestCopositive, AllOnesWithN) {
  const CopoResult r = test_copositive(SymMatrix::ones(3), config(Cone::N, false));
  EXPECT_EQ(r.outcome, Outcome::Copositive);
  EXPECT_EQ(r.stats.iterations, 1u);
}

TEST(TestCopositive, CompleteGraphThresholds) {
  for (int n : {3, 5}) {
    for (Cone c : {Cone::N, Cone::H, Cone::G, Cone::Fplus, Cone::Fpm}) {
      for (bool alg2 : {false, true}) {
        if (alg2 && !family_of(c)) continue;
        const CopoResult above = test_copositive(kn_matrix(n, n + 0.5), config(c, alg2));
        EXPECT_EQ(above.outcome, Outcome::Copositive) << n << " " << to_string(c) << " " << alg2;
        const SymMatrix below = kn_matrix(n, n - 0.5);
        expect_certificate(below, test_copositive(below, config(c, alg2)));
      }
    }
  }
}

TEST(TestCopositive, CompleteGraphBoundaryIsPsd) {
  // gamma I - E at gamma = n is PSD, so even the boundary case is removed at once.
  const CopoResult r = test_copositive(kn_matrix(5, 5.0), config(Cone::Fpm, true, 1));
  EXPECT_EQ(r.outcome, Outcome::Copositive);
}

TEST(TestCopositive, BoundaryNeedsBudget) {
  // gamma = omega on a random graph: copositive, on the boundary, and slow.
  const Graph g = gen_random_graph(10, 0.5, 0, 2);
  const int w = oracle::brute_force_clique(10, {g.edges().begin(), g.edges().end()});
  const SymMatrix b = max_clique_matrix(g, w);
  const CopoResult r = test_copositive(b, config(Cone::Fpm, true, 50));
  EXPECT_EQ(r.outcome, Outcome::Inconclusive);
  EXPECT_EQ(r.reason, StopReason::IterationLimit);
  EXPECT_EQ(r.stats.iterations, 50u);
  EXPECT_GT(r.stats.worklist_at_exit, 0u);

  CopoConfig cfg = config(Cone::Fpm, true);
  cfg.time_limit = 1e-9;
  const CopoResult t = test_copositive(b, cfg);
  EXPECT_EQ(t.outcome, Outcome::Inconclusive);
  EXPECT_EQ(t.reason, StopReason::TimeLimit);
}

// The five-cycle boundary matrix (Horn) has its zeros at edge midpoints, which
// bisection reaches exactly.
TEST(TestCopositive, HornMatrixTerminates) {
  Graph c5(5);
  for (int k = 0; k < 5; ++k) c5.add_edge(k, (k + 1) % 5);
  const SymMatrix h = max_clique_matrix(c5, 2.0);
  EXPECT_FALSE(check_membership_lp(h, eigen_decompose(h), Family::Fpm).member());
  EXPECT_EQ(test_copositive(h, config(Cone::Fpm, true)).outcome, Outcome::Copositive);
}

TEST(TestCopositive, RejectsBadConfig) {
  EXPECT_THROW(test_copositive(SymMatrix::ones(2), config(Cone::L, false)), std::invalid_argument);
  EXPECT_THROW(test_copositive(SymMatrix::ones(2), config(Cone::DD, false)), std::invalid_argument);
  EXPECT_THROW(test_copositive(SymMatrix::ones(2), config(Cone::G, true, 0)), std::invalid_argument);
  CopoConfig cfg = config(Cone::G, true);
  cfg.eps_vertex = -1;
  EXPECT_THROW(test_copositive(SymMatrix::ones(2), cfg), std::invalid_argument);
  cfg = config(Cone::G, true);
  cfg.time_limit = 0;
  EXPECT_THROW(test_copositive(SymMatrix::ones(2), cfg), std::invalid_argument);
}

TEST(TestCopositive, ObserverSeesConsistentPartition) {
  const SymMatrix a = kn_matrix(4, 4.3);
  for (Cone c : {Cone::H, Cone::G, Cone::Fpm}) {
    std::size_t events = 0, last = 0;
    const CopoResult r = test_copositive(a, config(c, family_of(c).has_value()),
                                         [&](const IterationEvent &e, const Partition &p) {
                                           ++events;
                                           EXPECT_EQ(e.iteration, last + 1);
                                           last = e.iteration;
                                           EXPECT_EQ(e.worklist, p.size());
                                           EXPECT_EQ(e.fineness, p.fineness());
                                           if (p.size() <= 10000)
                                             EXPECT_NEAR(p.fineness(), p.recompute_fineness(), 1e-15);
                                           EXPECT_TRUE(e.action == "removed" || e.action == "removed-hat" ||
                                                       e.action == "bisected" || e.action == "negative-vertex");
                                         });
    EXPECT_EQ(r.outcome, Outcome::Copositive);
    EXPECT_EQ(events, r.stats.iterations);
    EXPECT_EQ(r.stats.fineness_at_exit, 0.0);
  }
}

TEST(TestCopositive, AuditedWitnessesReconstruct) {
  for (int trial = 0; trial < 12; ++trial) {
    const Graph g = gen_random_graph(6, 0.5, 3, 500 + trial);
    const SymMatrix a = max_clique_matrix(g, oracle::brute_force_clique(6, {g.edges().begin(), g.edges().end()}) + 0.5);
    for (Cone c : {Cone::N, Cone::H, Cone::G, Cone::Fplus, Cone::Fpm}) {
      CopoConfig cfg = config(c, trial % 2 == 0 && family_of(c));
      cfg.audit_samples = 10;
      cfg.audit_seed = trial;
      const CopoResult r = test_copositive(a, cfg);
      ASSERT_EQ(r.outcome, Outcome::Copositive) << trial << " " << to_string(c);
      EXPECT_EQ(r.audit.size(),
                std::min<std::size_t>(10, r.stats.removed_member + r.stats.removed_hat + r.stats.removed_warm));
      for (const RemovalAudit &rec : r.audit) {
        const SymMatrix m = congruence(a, rec.V);
        EXPECT_TRUE(Simplex::from_vertices(rec.V).valid());
        const WitnessCheck chk = check_witness(m, rec.witness);
        EXPECT_TRUE(chk.ok) << to_string(c) << " residual " << chk.recon_residual << " min N " << chk.min_n_entry;
      }
    }
  }
}

TEST(TestCopositive, Alg2Bookkeeping) {
  const Graph g = gen_random_graph(9, 0.5, 4, 77);
  const int w = oracle::brute_force_clique(9, {g.edges().begin(), g.edges().end()});
  const CopoResult r = test_copositive(max_clique_matrix(g, w + 0.5), config(Cone::G, true));
  ASSERT_EQ(r.outcome, Outcome::Copositive);
  EXPECT_EQ(r.stats.warm_from_exact + r.stats.warm_from_hat, r.stats.removed_warm);
  EXPECT_GT(r.stats.removed_hat + r.stats.removed_warm, 0u);
  EXPECT_EQ(r.stats.iterations, r.stats.removed_member + r.stats.removed_hat + r.stats.bisections);
  // Each bisection yields two children, each either screened or processed later.
  EXPECT_EQ(2 * r.stats.bisections + 1, r.stats.iterations + r.stats.removed_warm);

  const CopoResult a1 = test_copositive(max_clique_matrix(g, w + 0.5), config(Cone::G, false));
  ASSERT_EQ(a1.outcome, Outcome::Copositive);
  EXPECT_EQ(a1.stats.removed_hat + a1.stats.removed_warm, 0u);
  EXPECT_EQ(a1.stats.eigen_calls, a1.stats.iterations);
}

TEST(TestCopositive, StrictMarginTerminates) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    // S + N + 0.05 E: the quadratic form is at least 0.05 on the simplex.
    const Matrix b = oracle::random_normal(rng, n, n);
    const Matrix u = oracle::random_uniform(rng, n, n, -0.5, 1.0);
    const Matrix m = b * b.transpose() + (u + u.transpose()).cwiseMax(0.0) + 0.05 * Matrix::Ones(n, n);
    const SymMatrix a(m);
    for (Cone c : {Cone::H, Cone::G, Cone::Fplus, Cone::Fpm}) {
      for (bool alg2 : {false, true}) {
        if (alg2 && !family_of(c)) continue;
        const CopoResult r = test_copositive(a, config(c, alg2));
        EXPECT_EQ(r.outcome, Outcome::Copositive) << trial << " " << to_string(c);
      }
    }
  }
}

// Outcomes agree across cones and selection rules, and agree with sampling.
TEST(TestCopositive, SoundOnRandomMatrices) {
  std::mt19937_64 rng(109);
  int decided_pos = 0, decided_neg = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const Matrix b = oracle::random_normal(rng, n, n);
    const Matrix u = oracle::random_uniform(rng, n, n, 0.0, 1.0);
    const Matrix m = 0.5 * b * b.transpose() + u + u.transpose() - 1.2 * Matrix::Ones(n, n) +
                     0.3 * Matrix::Identity(n, n);
    const SymMatrix a(m);
    double sampled = INFINITY;
    for (int k = 0; k < 20000; ++k) sampled = std::min(sampled, a.quad(oracle::random_simplex_point(rng, n)));
    for (SelectionRule sel : {SelectionRule::Lifo, SelectionRule::Fifo}) {
      for (Cone c : {Cone::H, Cone::Fpm}) {
        CopoConfig cfg = config(c, c == Cone::Fpm, 20000);
        cfg.selection = sel;
        const CopoResult r = test_copositive(a, cfg);
        if (r.outcome == Outcome::Copositive) {
          EXPECT_GE(sampled, -1e-12) << trial;
          ++decided_pos;
        } else if (r.outcome == Outcome::NotCopositive) {
          expect_certificate(a, r);
          ++decided_neg;
        }
      }
    }
  }
  EXPECT_GT(decided_pos, 10);
  EXPECT_GT(decided_neg, 10);
}

TEST(Names, OutcomesAndReasons) {
  EXPECT_STREQ(to_string(Outcome::Copositive), "Copositive");
  EXPECT_STREQ(to_string(Outcome::NotCopositive), "NotCopositive");
  EXPECT_STREQ(to_string(Outcome::Inconclusive), "Inconclusive");
  EXPECT_STREQ(to_string(StopReason::IterationLimit), "iteration-limit");
  EXPECT_STREQ(to_string(StopReason::TimeLimit), "time-limit");
}
