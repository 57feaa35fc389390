#include "conekit/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace conekit::lp {

LinearProgram::LinearProgram(std::vector<double> objective)
    : objective_(std::move(objective)),
      lower_(objective_.size(), -kInf),
      upper_(objective_.size(), kInf) {
  for (double c : objective_)
    if (!std::isfinite(c)) throw std::invalid_argument("LinearProgram: non-finite objective");
}

void LinearProgram::add_row(std::vector<double> coeffs, Sense sense, double rhs) {
  if (coeffs.size() != objective_.size())
    throw std::invalid_argument("LinearProgram: row has " + std::to_string(coeffs.size()) +
                                " coefficients, expected " +
                                std::to_string(objective_.size()));
  for (double a : coeffs)
    if (!std::isfinite(a)) throw std::invalid_argument("LinearProgram: non-finite coefficient");
  if (!std::isfinite(rhs)) throw std::invalid_argument("LinearProgram: non-finite rhs");
  rows_.push_back(Row{std::move(coeffs), sense, rhs});
}

void LinearProgram::set_bounds(std::size_t var, double lower, double upper) {
  if (var >= objective_.size()) throw std::out_of_range("LinearProgram: bad variable index");
  if (std::isnan(lower) || std::isnan(upper) || lower == kInf || upper == -kInf)
    throw std::invalid_argument("LinearProgram: bad bounds");
  lower_[var] = lower;
  upper_[var] = upper;
}

const char *to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::IterationLimit: return "IterationLimit";
    case Status::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

double max_violation(const LinearProgram &lp, const std::vector<double> &x) {
  double viol = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    viol = std::max(viol, lp.lower()[j] - x[j]);
    viol = std::max(viol, x[j] - lp.upper()[j]);
  }
  for (const Row &row : lp.rows()) {
    double ax = 0.0;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) ax += row.coeffs[j] * x[j];
    switch (row.sense) {
      case Sense::LessEq: viol = std::max(viol, ax - row.rhs); break;
      case Sense::GreaterEq: viol = std::max(viol, row.rhs - ax); break;
      case Sense::Equal: viol = std::max(viol, std::abs(ax - row.rhs)); break;
    }
  }
  return viol;
}

namespace {

using Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kHarrisTol = 1e-9;
constexpr double kPerturb = 1e-6;
constexpr int kStallLimit = 50;
constexpr int kRefactorEvery = 64;

enum class ColKind { Structural, Slack, Artificial };

// Internal column z_c >= 0 contributes sign * z_c to original variable var.
struct ColInfo {
  ColKind kind;
  std::size_t var = 0;
  double sign = 1.0;
};

// Internal row in equality form with nonnegative rhs.
struct RowInfo {
  long orig = -1;  // original row index, -1 for box rows
  double flip = 1.0;
};

enum class Outcome { Optimal, Unbounded, IterationLimit, Singular };

struct Simplex {
  Mat a;  // m x ncols
  Vec b;
  std::vector<ColInfo> cols;
  std::vector<Index> head;
  std::vector<char> basic;
  Mat binv;
  Vec xb;
  std::size_t iters = 0;
  std::size_t max_iters = 0;
  // Set once the rhs has been perturbed against stalling; b0 is the original.
  bool perturbed = false;
  Vec b0;
  std::uint64_t lcg = 0x853c49e6748fea9bULL;

  double next_unit() {
    lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(lcg >> 11) * 0x1.0p-53;
  }

  // Lifts degenerate basic values off zero, keeping b = B xb.
  void perturb() {
    if (!perturbed) b0 = b;
    perturbed = true;
    const double scale = std::max(1.0, xb.cwiseAbs().maxCoeff());
    Vec delta = Vec::Zero(m());
    for (Index i = 0; i < m(); ++i)
      if (xb(i) <= kHarrisTol * scale) delta(i) = (1.0 + next_unit()) * kPerturb * scale;
    for (Index i = 0; i < m(); ++i)
      if (delta(i) != 0.0) b += delta(i) * a.col(head[static_cast<std::size_t>(i)]);
    xb += delta;
  }

  Index m() const { return a.rows(); }

  bool refactor() {
    const Index mm = m();
    if (mm == 0) return true;
    Mat bm(mm, mm);
    for (Index i = 0; i < mm; ++i) bm.col(i) = a.col(head[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Mat> lu(bm);
    binv = lu.inverse();
    if (!binv.allFinite()) return false;
    xb = binv * b;
    for (Index i = 0; i < mm; ++i)
      if (xb(i) < 0.0 && xb(i) > -1e-11) xb(i) = 0.0;
    return true;
  }

  void pivot(Index r, Index q, const Vec &w) { pivot(r, q, w, xb(r) / w(r)); }

  void pivot(Index r, Index q, const Vec &w, double theta) {
    const double wr = w(r);
    Eigen::RowVectorXd rowr = binv.row(r) / wr;
    binv.noalias() -= w * rowr;
    binv.row(r) = rowr;
    xb -= theta * w;
    xb(r) = theta;
    basic[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])] = 0;
    head[static_cast<std::size_t>(r)] = q;
    basic[static_cast<std::size_t>(q)] = 1;
  }

  // Minimizes cost^T z over columns with allowed[j] set. Stops early once the
  // objective drops to stop_below.
  Outcome run(const Vec &cost, const std::vector<char> &allowed, double stop_below = -kInf,
              bool may_perturb = false) {
    int stall = 0;
    bool bland = false;
    int since_refactor = 0;
    const Index ncols = a.cols();
    Vec cb(m());
    while (true) {
      if (iters >= max_iters) return Outcome::IterationLimit;
      for (Index i = 0; i < m(); ++i) cb(i) = cost(head[static_cast<std::size_t>(i)]);
      const double obj = cb.dot(xb);
      if (obj <= stop_below) return Outcome::Optimal;
      Vec y = binv.transpose() * cb;
      Vec d = cost - a.transpose() * y;

      Index q = -1;
      double best = -kCostTol;
      for (Index j = 0; j < ncols; ++j) {
        if (basic[static_cast<std::size_t>(j)] || !allowed[static_cast<std::size_t>(j)]) continue;
        if (d(j) < best) {
          q = j;
          if (bland) break;
          best = d(j);
        }
      }
      if (q < 0) return Outcome::Optimal;

      Vec w = binv * a.col(q);
      // Basic artificials that may not re-enter are pinned at zero from both sides.
      auto entry = [&](Index i, double &wi, double &val) {
        const Index h = head[static_cast<std::size_t>(i)];
        const bool art = cols[static_cast<std::size_t>(h)].kind == ColKind::Artificial &&
                         !allowed[static_cast<std::size_t>(h)];
        wi = art ? std::abs(w(i)) : w(i);
        val = art ? 0.0 : xb(i);
        return wi > kPivotTol;
      };
      Index r = -1;
      if (bland) {
        double ratio = kInf;
        for (Index i = 0; i < m(); ++i) {
          double wi, val;
          if (!entry(i, wi, val)) continue;
          const double t = std::max(val, 0.0) / wi;
          if (t < ratio - 1e-12 ||
              (t <= ratio + 1e-12 && head[static_cast<std::size_t>(i)] < head[static_cast<std::size_t>(r)])) {
            r = i;
            ratio = std::min(ratio, t);
          }
        }
      } else {
        // Harris: bound the step with relaxed bounds, then take the largest pivot.
        double tmax = kInf;
        for (Index i = 0; i < m(); ++i) {
          double wi, val;
          if (entry(i, wi, val)) tmax = std::min(tmax, (std::max(val, 0.0) + kHarrisTol) / wi);
        }
        double rw = 0.0;
        for (Index i = 0; i < m(); ++i) {
          double wi, val;
          if (entry(i, wi, val) && std::max(val, 0.0) / wi <= tmax && wi > rw) {
            r = i;
            rw = wi;
          }
        }
      }
      if (r < 0) return Outcome::Unbounded;

      double wr, vr;
      entry(r, wr, vr);
      const double theta = std::max(vr, 0.0) / wr;
      const double gain = -d(q) * theta;
      if (gain <= 1e-11 * std::max(1.0, std::abs(obj))) {
        if (++stall >= kStallLimit) {
          if (may_perturb && !perturbed) {
            perturb();
            stall = 0;
            continue;
          }
          bland = true;
        }
      } else {
        stall = 0;
        bland = false;
      }
      pivot(r, q, w, w(r) == wr ? theta : (xb(r) / w(r)));
      ++iters;
      if (++since_refactor >= kRefactorEvery) {
        since_refactor = 0;
        if (!refactor()) return Outcome::Singular;
      }
    }
  }

  // Dual simplex pivots from a dual-feasible basis until xb >= -tol.
  Outcome dual_cleanup(const Vec &cost, const std::vector<char> &allowed, double tol) {
    const Index ncols = a.cols();
    Vec cb(m());
    while (true) {
      Index r = -1;
      double worst = -tol;
      for (Index i = 0; i < m(); ++i)
        if (xb(i) < worst) {
          worst = xb(i);
          r = i;
        }
      if (r < 0) return Outcome::Optimal;
      if (iters >= max_iters) return Outcome::IterationLimit;
      for (Index i = 0; i < m(); ++i) cb(i) = cost(head[static_cast<std::size_t>(i)]);
      const Vec y = binv.transpose() * cb;
      const Vec d = cost - a.transpose() * y;
      const Eigen::RowVectorXd rowr = binv.row(r) * a;
      Index q = -1;
      double best = kInf;
      for (Index j = 0; j < ncols; ++j) {
        if (basic[static_cast<std::size_t>(j)] || !allowed[static_cast<std::size_t>(j)]) continue;
        if (rowr(j) >= -kPivotTol) continue;
        const double t = std::max(d(j), 0.0) / -rowr(j);
        if (t < best) {
          best = t;
          q = j;
        }
      }
      if (q < 0) return Outcome::Unbounded;  // primal infeasible
      const Vec w = binv * a.col(q);
      pivot(r, q, w, xb(r) / w(r));
      ++iters;
    }
  }

  // Drops the perturbation and repairs primal feasibility.
  Outcome unperturb(const Vec &cost, const std::vector<char> &allowed, double tol) {
    if (!perturbed) return Outcome::Optimal;
    b = b0;
    perturbed = false;
    if (!refactor()) return Outcome::Singular;
    return dual_cleanup(cost, allowed, tol);
  }
};

}  // namespace

LpSolution solve(const LinearProgram &lp, const SolveOptions &opts) {
  const std::size_t n = lp.num_vars();
  LpSolution sol;

  // Presolve: singleton rows become bounds; remember which row set each bound.
  std::vector<double> lo = lp.lower();
  std::vector<double> hi = lp.upper();
  std::vector<long> lo_row(n, -1), hi_row(n, -1);
  std::vector<double> lo_coef(n, 0.0), hi_coef(n, 0.0);
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const Row &row = lp.rows()[r];
    std::size_t nnz = 0, at = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (row.coeffs[j] != 0.0) {
        ++nnz;
        at = j;
      }
    if (nnz == 0) {
      const double tol = opts.feas_tol * std::max(1.0, std::abs(row.rhs));
      const bool ok = (row.sense == Sense::LessEq && row.rhs >= -tol) ||
                      (row.sense == Sense::GreaterEq && row.rhs <= tol) ||
                      (row.sense == Sense::Equal && std::abs(row.rhs) <= tol);
      if (!ok) {
        sol.status = Status::Infeasible;
        return sol;
      }
      continue;
    }
    if (nnz > 1) {
      kept.push_back(r);
      continue;
    }
    const double a = row.coeffs[at];
    const double v = row.rhs / a;
    const bool upper_side = (row.sense == Sense::LessEq) == (a > 0.0);
    auto tighten_hi = [&] {
      if (v < hi[at]) {
        hi[at] = v;
        hi_row[at] = static_cast<long>(r);
        hi_coef[at] = a;
      }
    };
    auto tighten_lo = [&] {
      if (v > lo[at]) {
        lo[at] = v;
        lo_row[at] = static_cast<long>(r);
        lo_coef[at] = a;
      }
    };
    if (row.sense == Sense::Equal) {
      tighten_hi();
      tighten_lo();
    } else if (upper_side) {
      tighten_hi();
    } else {
      tighten_lo();
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) {
      if (lo[j] - hi[j] > opts.feas_tol * std::max(1.0, std::abs(lo[j]))) {
        sol.status = Status::Infeasible;
        return sol;
      }
      hi[j] = lo[j];
    }
  }

  // Variable substitution: x_j = offset_j + sum sign_c * z_c with z >= 0.
  std::vector<double> offset(n, 0.0);
  std::vector<ColInfo> cols;
  std::vector<std::pair<std::size_t, double>> boxes;  // (column, width)
  for (std::size_t j = 0; j < n; ++j) {
    const bool fl = std::isfinite(lo[j]), fh = std::isfinite(hi[j]);
    if (fl && fh) {
      offset[j] = lo[j];
      if (hi[j] > lo[j]) {
        boxes.emplace_back(cols.size(), hi[j] - lo[j]);
        cols.push_back({ColKind::Structural, j, 1.0});
      }
    } else if (fl) {
      offset[j] = lo[j];
      cols.push_back({ColKind::Structural, j, 1.0});
    } else if (fh) {
      offset[j] = hi[j];
      cols.push_back({ColKind::Structural, j, -1.0});
    } else {
      cols.push_back({ColKind::Structural, j, 1.0});
      cols.push_back({ColKind::Structural, j, -1.0});
    }
  }
  const std::size_t nstruct = cols.size();

  // Internal rows: kept rows (equalities split in two) and box rows.
  struct Pending {
    std::vector<double> coef;  // over structural columns
    double rhs;
    double slack;  // +1 for <=, -1 for >=
    long orig;
  };
  std::vector<Pending> pend;
  for (std::size_t r : kept) {
    const Row &row = lp.rows()[r];
    std::vector<double> coef(nstruct, 0.0);
    double rhs = row.rhs;
    for (std::size_t j = 0; j < n; ++j) rhs -= row.coeffs[j] * offset[j];
    for (std::size_t c = 0; c < nstruct; ++c) coef[c] = row.coeffs[cols[c].var] * cols[c].sign;
    if (row.sense != Sense::GreaterEq) pend.push_back({coef, rhs, 1.0, static_cast<long>(r)});
    if (row.sense != Sense::LessEq) pend.push_back({coef, rhs, -1.0, static_cast<long>(r)});
  }
  for (const auto &[c, width] : boxes) {
    std::vector<double> coef(nstruct, 0.0);
    coef[c] = 1.0;
    pend.push_back({coef, width, 1.0, -1});
  }

  const Index m = static_cast<Index>(pend.size());
  std::vector<RowInfo> rows_info(pend.size());
  std::size_t nart = 0;
  for (std::size_t i = 0; i < pend.size(); ++i) {
    rows_info[i].orig = pend[i].orig;
    rows_info[i].flip = pend[i].rhs < 0.0 ? -1.0 : 1.0;
    if (pend[i].slack * rows_info[i].flip < 0.0) ++nart;
  }
  const std::size_t ncols = nstruct + pend.size() + nart;

  Simplex sx;
  sx.a = Mat::Zero(m, static_cast<Index>(ncols));
  sx.b = Vec(m);
  sx.cols = cols;
  sx.head.assign(pend.size(), 0);
  std::size_t art_at = nstruct + pend.size();
  for (std::size_t i = 0; i < pend.size(); ++i) {
    const double f = rows_info[i].flip;
    const Index ii = static_cast<Index>(i);
    for (std::size_t c = 0; c < nstruct; ++c) sx.a(ii, static_cast<Index>(c)) = f * pend[i].coef[c];
    sx.b(ii) = f * pend[i].rhs;
    const Index slack = static_cast<Index>(nstruct + i);
    sx.a(ii, slack) = f * pend[i].slack;
    sx.cols.push_back({ColKind::Slack, 0, 0.0});
    if (f * pend[i].slack > 0.0) {
      sx.head[i] = slack;
    } else {
      sx.a(ii, static_cast<Index>(art_at)) = 1.0;
      sx.head[i] = static_cast<Index>(art_at);
      ++art_at;
    }
  }
  for (std::size_t k = 0; k < nart; ++k) sx.cols.push_back({ColKind::Artificial, 0, 0.0});

  sx.basic.assign(ncols, 0);
  for (Index h : sx.head) sx.basic[static_cast<std::size_t>(h)] = 1;
  sx.binv = Mat::Identity(m, m);
  sx.xb = sx.b;
  sx.max_iters = opts.max_iters ? opts.max_iters : 50 * (lp.num_rows() + n);

  const double bscale = std::max(1.0, m ? sx.b.cwiseAbs().maxCoeff() : 0.0);

  auto finish = [&](Status st) {
    sol.status = st;
    sol.iterations = sx.iters;
    return sol;
  };

  if (nart > 0) {
    Vec cost1 = Vec::Zero(static_cast<Index>(ncols));
    std::vector<char> allowed(ncols, 1);
    for (std::size_t c = nstruct + pend.size(); c < ncols; ++c) cost1(static_cast<Index>(c)) = 1.0;
    // Artificials never re-enter once they leave.
    for (std::size_t c = nstruct + pend.size(); c < ncols; ++c) allowed[c] = 0;
    // Let basic artificials keep their real values during phase one.
    for (std::size_t c = nstruct + pend.size(); c < ncols; ++c) sx.cols[c].kind = ColKind::Slack;
    const Outcome o = sx.run(cost1, allowed, 0.1 * opts.feas_tol * bscale);
    for (std::size_t c = nstruct + pend.size(); c < ncols; ++c) sx.cols[c].kind = ColKind::Artificial;
    if (o == Outcome::IterationLimit) return finish(Status::IterationLimit);
    // Phase one is bounded below by zero; anything else is round-off.
    if (o != Outcome::Optimal) return finish(Status::NumericalFailure);
    if (!sx.refactor()) return finish(Status::NumericalFailure);
    double infeas = 0.0;
    for (Index i = 0; i < m; ++i)
      if (sx.cols[static_cast<std::size_t>(sx.head[static_cast<std::size_t>(i)])].kind ==
          ColKind::Artificial)
        infeas += std::max(sx.xb(i), 0.0);
    if (infeas > opts.feas_tol * bscale) return finish(Status::Infeasible);

    // Drive zero-level artificials out of the basis where a real column can replace them.
    for (Index i = 0; i < m; ++i) {
      const Index h = sx.head[static_cast<std::size_t>(i)];
      if (sx.cols[static_cast<std::size_t>(h)].kind != ColKind::Artificial) continue;
      Eigen::RowVectorXd rowi = sx.binv.row(i) * sx.a;
      Index q = -1;
      double best = 1e-7;
      for (std::size_t c = 0; c < nstruct + pend.size(); ++c) {
        if (sx.basic[c]) continue;
        const double v = std::abs(rowi(static_cast<Index>(c)));
        if (v > best) {
          best = v;
          q = static_cast<Index>(c);
        }
      }
      if (q >= 0) {
        Vec w = sx.binv * sx.a.col(q);
        sx.pivot(i, q, w);
      }
    }
  }

  Vec cost2 = Vec::Zero(static_cast<Index>(ncols));
  for (std::size_t c = 0; c < nstruct; ++c)
    cost2(static_cast<Index>(c)) = -lp.objective()[cols[c].var] * cols[c].sign;
  std::vector<char> allowed(ncols, 1);
  for (std::size_t c = nstruct + pend.size(); c < ncols; ++c) allowed[c] = 0;
  Outcome o = sx.run(cost2, allowed, -kInf, true);
  if (o == Outcome::Optimal) {
    o = sx.unperturb(cost2, allowed, 1e-9 * bscale);
    if (o == Outcome::Unbounded) return finish(Status::NumericalFailure);
    // A few primal pivots may remain after the repair.
    if (o == Outcome::Optimal) o = sx.run(cost2, allowed);
  }
  if (o == Outcome::IterationLimit) return finish(Status::IterationLimit);
  if (o == Outcome::Unbounded) return finish(Status::Unbounded);
  if (o == Outcome::Singular || !sx.refactor()) return finish(Status::NumericalFailure);

  // Primal recovery.
  Vec z = Vec::Zero(static_cast<Index>(ncols));
  for (Index i = 0; i < m; ++i) z(sx.head[static_cast<std::size_t>(i)]) = std::max(sx.xb(i), 0.0);
  sol.x = offset;
  for (std::size_t c = 0; c < nstruct; ++c)
    sol.x[cols[c].var] += cols[c].sign * z(static_cast<Index>(c));
  // Clamp onto bounds that round-off pushed us past.
  for (std::size_t j = 0; j < n; ++j) sol.x[j] = std::clamp(sol.x[j], lo[j], hi[j]);
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective()[j] * sol.x[j];

  double rscale = 1.0;
  for (const Row &row : lp.rows()) rscale = std::max(rscale, std::abs(row.rhs));
  if (max_violation(lp, sol.x) > opts.feas_tol * rscale) return finish(Status::NumericalFailure);

  // Dual recovery for the maximization: d(opt)/d(rhs_r).
  Vec cb(m);
  for (Index i = 0; i < m; ++i) cb(i) = cost2(sx.head[static_cast<std::size_t>(i)]);
  Vec y = sx.binv.transpose() * cb;
  sol.row_duals.assign(lp.num_rows(), 0.0);
  for (std::size_t i = 0; i < rows_info.size(); ++i)
    if (rows_info[i].orig >= 0)
      sol.row_duals[static_cast<std::size_t>(rows_info[i].orig)] +=
          -rows_info[i].flip * y(static_cast<Index>(i));
  for (std::size_t j = 0; j < n; ++j) {
    if (lo_row[j] < 0 && hi_row[j] < 0) continue;
    double red = lp.objective()[j];
    for (std::size_t r : kept) red -= sol.row_duals[r] * lp.rows()[r].coeffs[j];
    if (red > 0.0 && hi_row[j] >= 0)
      sol.row_duals[static_cast<std::size_t>(hi_row[j])] += red / hi_coef[j];
    else if (red < 0.0 && lo_row[j] >= 0)
      sol.row_duals[static_cast<std::size_t>(lo_row[j])] += red / lo_coef[j];
  }
  return finish(Status::Optimal);
}

}  // namespace conekit::lp
