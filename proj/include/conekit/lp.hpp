#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace conekit::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEq, GreaterEq, Equal };

struct Row {
  std::vector<double> coeffs;
  Sense sense = Sense::LessEq;
  double rhs = 0.0;
};

/// maximize objective^T x subject to rows and lower <= x <= upper.
///
/// The shape is checked as the problem is assembled, so a LinearProgram that
/// exists is always well formed.
class LinearProgram {
 public:
  /// All variables start free.
  explicit LinearProgram(std::vector<double> objective);

  void add_row(std::vector<double> coeffs, Sense sense, double rhs);
  void set_bounds(std::size_t var, double lower, double upper);

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_rows() const { return rows_.size(); }

  const std::vector<double> &objective() const { return objective_; }
  const std::vector<Row> &rows() const { return rows_; }
  const std::vector<double> &lower() const { return lower_; }
  const std::vector<double> &upper() const { return upper_; }

 private:
  std::vector<double> objective_;
  std::vector<Row> rows_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

const char *to_string(Status s);

struct LpSolution {
  Status status = Status::IterationLimit;
  std::vector<double> x;
  double objective_value = 0.0;
  /// Sensitivity of the optimal value to each row's rhs (>= 0 on binding
  /// <= rows of a maximization). Filled when Optimal.
  std::vector<double> row_duals;
  std::size_t iterations = 0;
};

struct SolveOptions {
  double feas_tol = 1e-8;
  /// 0 selects 50 * (rows + cols).
  std::size_t max_iters = 0;
};

/// Two-phase dense revised simplex. Deterministic for a fixed input.
///
/// Single-coefficient rows are folded into variable bounds, equality rows are
/// split into a <= / >= pair, and Bland's rule takes over after 50
/// consecutive degenerate pivots until the objective moves again.
LpSolution solve(const LinearProgram &lp, const SolveOptions &opts = {});

/// Largest violation of any row or bound by x.
double max_violation(const LinearProgram &lp, const std::vector<double> &x);

}  // namespace conekit::lp
