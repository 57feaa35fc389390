#include "conekit/copositivity.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace conekit {

Edge longest_edge(const Matrix &v) {
  Edge e;
  e.length = -1.0;
  const int n = static_cast<int>(v.cols());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double len = (v.col(i) - v.col(j)).norm();
      if (len > e.length * (1.0 + 1e-12)) e = {i, j, len};
    }
  }
  if (e.length < 0.0) e = {0, 0, 0.0};
  return e;
}

Simplex Simplex::standard(Eigen::Index n) { return from_vertices(Matrix::Identity(n, n), 0); }

Simplex Simplex::from_vertices(Matrix v, int depth) {
  Simplex s;
  s.V = std::move(v);
  s.depth = depth;
  s.longest = longest_edge(s.V);
  return s;
}

bool Simplex::valid() const {
  if (V.rows() != V.cols() || V.size() == 0) return false;
  if (V.minCoeff() < 0.0) return false;
  for (Eigen::Index k = 0; k < V.cols(); ++k)
    if (std::abs(V.col(k).sum() - 1.0) > 1e-12) return false;
  Eigen::FullPivLU<Matrix> lu(V);
  return lu.rank() == V.rows();
}

Bisection bisect(const Simplex &s, EdgeRule rule) {
  (void)rule;  // only the longest-edge rule exists
  const Edge e = s.longest;
  if (e.length < 1e-14) throw DegenerateEdge("bisect: edge shorter than 1e-14");
  const Vector mid = 0.5 * (s.V.col(e.i) + s.V.col(e.j));
  Matrix v1 = s.V;
  v1.col(e.i) = mid;
  Matrix v2 = s.V;
  v2.col(e.j) = mid;
  return {Simplex::from_vertices(std::move(v1), s.depth + 1),
          Simplex::from_vertices(std::move(v2), s.depth + 1), e.i, e.j};
}

std::optional<Vector> vertex_negative(const SymMatrix &a, const Simplex &s, double eps_vertex) {
  for (Eigen::Index k = 0; k < s.V.cols(); ++k) {
    const Vector v = s.V.col(k);
    if (a.quad(v) < -eps_vertex) return v;
  }
  return std::nullopt;
}

void Partition::push(Simplex s) {
  diameters_.insert(s.diameter());
  list_.push_back(std::move(s));
}

Simplex Partition::pop() {
  Simplex s;
  if (rule_ == SelectionRule::Lifo) {
    s = std::move(list_.back());
    list_.pop_back();
  } else {
    s = std::move(list_.front());
    list_.pop_front();
  }
  diameters_.erase(diameters_.find(s.diameter()));
  return s;
}

double Partition::fineness() const { return diameters_.empty() ? 0.0 : *diameters_.rbegin(); }

double Partition::recompute_fineness() const {
  double d = 0.0;
  for (const Simplex &s : list_) {
    for (Eigen::Index i = 0; i < s.V.cols(); ++i)
      for (Eigen::Index j = i + 1; j < s.V.cols(); ++j)
        d = std::max(d, (s.V.col(i) - s.V.col(j)).norm());
  }
  return d;
}

const char *to_string(Outcome o) {
  switch (o) {
    case Outcome::Copositive: return "Copositive";
    case Outcome::NotCopositive: return "NotCopositive";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

const char *to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::IterationLimit: return "iteration-limit";
    case StopReason::TimeLimit: return "time-limit";
    case StopReason::DegenerateEdge: return "degenerate-edge";
  }
  return "?";
}

namespace {

// Barycentric transform of a child relative to its parent: V_child = V_parent T.
Matrix child_transform(Eigen::Index n, int replaced, int i, int j) {
  Matrix t = Matrix::Identity(n, n);
  t.col(replaced).setZero();
  t(i, replaced) = 0.5;
  t(j, replaced) = 0.5;
  return t;
}

class Auditor {
 public:
  Auditor(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {}

  bool wants() const { return capacity_ > 0; }

  void offer(std::vector<RemovalAudit> &out, RemovalAudit rec) {
    ++seen_;
    if (out.size() < capacity_) {
      out.push_back(std::move(rec));
      return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, seen_ - 1);
    const std::size_t k = pick(rng_);
    if (k < capacity_) out[k] = std::move(rec);
  }

 private:
  std::size_t capacity_;
  std::size_t seen_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace

CopoResult test_copositive(const SymMatrix &a, const CopoConfig &cfg,
                           const IterationObserver &observer) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  if (cfg.cone != Cone::N && cfg.cone != Cone::H && !family_of(cfg.cone))
    throw std::invalid_argument(std::string("test_copositive: cone ") + to_string(cfg.cone) +
                                " cannot drive the partition");
  if (cfg.max_iterations == 0 || !(cfg.time_limit > 0.0))
    throw std::invalid_argument("test_copositive: limits must be positive");
  if (!(cfg.eps_vertex >= 0.0)) throw std::invalid_argument("test_copositive: eps_vertex < 0");

  const Eigen::Index n = a.n();
  const std::optional<Family> fam = family_of(cfg.cone);
  CopoResult res;
  CopoStats &st = res.stats;

  std::optional<EigenPair> global;
  if (cfg.use_alg2 && fam) {
    try {
      global = eigen_decompose(a);
      ++st.eigen_calls;
    } catch (const NonConvergence &) {
      ++st.solver_failures;
    }
  }

  Auditor auditor(cfg.audit_samples, cfg.audit_seed);
  Partition part(cfg.selection);
  part.push(Simplex::standard(n));

  auto notify = [&](const char *action) {
    if (!observer) return;
    observer(IterationEvent{st.iterations, part.fineness(), part.size(), action}, part);
  };
  auto finish = [&](Outcome o, StopReason r) {
    res.outcome = o;
    res.reason = r;
    st.fineness_at_exit = part.fineness();
    st.worklist_at_exit = part.size();
    st.elapsed_s = elapsed();
    return res;
  };

  const double eps_alpha = cfg.lp.eps_alpha;

  while (!part.empty()) {
    if (st.iterations >= cfg.max_iterations) return finish(Outcome::Inconclusive, StopReason::IterationLimit);
    if (elapsed() > cfg.time_limit) return finish(Outcome::Inconclusive, StopReason::TimeLimit);

    Simplex s = part.pop();
    ++st.iterations;
    st.max_depth = std::max(st.max_depth, s.depth);

    if (auto v = vertex_negative(a, s, cfg.eps_vertex)) {
      const double val = a.quad(*v);
      if (val < 0.0) {
        res.certificate = *v;
        res.certificate_value = val;
        notify("negative-vertex");
        return finish(Outcome::NotCopositive, StopReason::None);
      }
    }

    const SymMatrix m = congruence(a, s.V);
    std::optional<Witness> removed_by;
    Removal via = Removal::Member;
    std::optional<Matrix> hat_n, exact_n;

    if (global) {
      const EigenPair hp{s.V.transpose() * global->P, global->lambda, false};
      const LpDecomposition dec = decompose_lp(hp, *fam, cfg.lp.solve);
      ++st.lp_calls;
      if (dec.status != lp::Status::Optimal) {
        ++st.solver_failures;
      } else if (dec.alpha_star >= -eps_alpha) {
        SymMatrix np(dec.n_part);
        removed_by = Witness{m - np, np};
        via = Removal::HatMember;
      } else {
        hat_n = dec.n_part;
      }
    }

    if (!removed_by) {
      if (fam) {
        try {
          const EigenPair ep = eigen_decompose(m);
          ++st.eigen_calls;
          const LpDecomposition dec = decompose_lp(ep, *fam, cfg.lp.solve);
          ++st.lp_calls;
          if (dec.status != lp::Status::Optimal) {
            ++st.solver_failures;
          } else if (dec.alpha_star >= -eps_alpha) {
            SymMatrix np(dec.n_part);
            removed_by = Witness{m - np, np};
          } else {
            exact_n = dec.n_part;
          }
        } catch (const NonConvergence &) {
          ++st.solver_failures;
        }
      } else if (cfg.cone == Cone::N) {
        if (is_nonnegative(m)) removed_by = Witness{SymMatrix::zero(n), m};
      } else {
        MembershipVerdict v = in_H(m);
        if (v.member()) removed_by = std::move(v.witness);
      }
    }

    if (removed_by) {
      (via == Removal::HatMember ? st.removed_hat : st.removed_member)++;
      if (auditor.wants()) auditor.offer(res.audit, {s.V, via, *removed_by});
      notify(via == Removal::HatMember ? "removed-hat" : "removed");
      continue;
    }

    Bisection bis;
    try {
      bis = bisect(s, cfg.edge);
    } catch (const DegenerateEdge &) {
      part.push(std::move(s));
      return finish(Outcome::Inconclusive, StopReason::DegenerateEdge);
    }
    ++st.bisections;

    const std::pair<Simplex *, int> children[2] = {{&bis.first, bis.i}, {&bis.second, bis.j}};
    for (const auto &[child, replaced] : children) {
      bool screened = false;
      if (cfg.use_alg2 && (exact_n || hat_n)) {
        const Matrix t = child_transform(n, replaced, bis.i, bis.j);
        // Exact-LP witness first, then the hat-LP one; both leave a PSD remainder.
        const std::optional<Matrix> *cands[2] = {&exact_n, &hat_n};
        for (int c = 0; c < 2 && !screened; ++c) {
          if (!*cands[c]) continue;
          Matrix nc = t.transpose() * (**cands[c]) * t;
          nc = 0.5 * (nc + nc.transpose());
          if (nc.minCoeff() >= -eps_alpha) {
            screened = true;
            ++st.removed_warm;
            (c == 0 ? st.warm_from_exact : st.warm_from_hat)++;
            if (auditor.wants()) {
              const SymMatrix mc = congruence(a, child->V);
              SymMatrix np(nc);
              auditor.offer(res.audit, {child->V, Removal::WarmStart, Witness{mc - np, np}});
            }
          }
        }
      }
      if (!screened) part.push(std::move(*child));
    }
    notify("bisected");
  }
  return finish(Outcome::Copositive, StopReason::None);
}

}  // namespace conekit
