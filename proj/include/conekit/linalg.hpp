#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace conekit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MatrixFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest absolute entry, 0 for an empty matrix.
double max_abs(const Matrix &m);

/// Dense real symmetric matrix with finite entries.
///
/// Construction symmetrizes inputs whose asymmetry is at round-off level
/// (max |a_ij - a_ji| <= 1e-12 * max(1, max |a_ij|)) and rejects anything
/// else, so downstream code can rely on exact symmetry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix &m);

  static SymMatrix zero(Eigen::Index n);
  static SymMatrix identity(Eigen::Index n);
  static SymMatrix ones(Eigen::Index n);
  static SymMatrix diagonal(const Vector &d);

  Eigen::Index n() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix &matrix() const { return m_; }

  /// max(1, max |a_ij|); the reference magnitude for relative tolerances.
  double scale() const;
  double min_entry() const { return m_.minCoeff(); }

  SymMatrix operator+(const SymMatrix &o) const;
  SymMatrix operator-(const SymMatrix &o) const;
  SymMatrix operator*(double c) const;

  /// x^T A x
  double quad(const Vector &x) const { return x.dot(m_ * x); }

  bool operator==(const SymMatrix &o) const { return m_ == o.m_; }

 private:
  struct Trusted {};
  SymMatrix(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// A = P Diag(lambda) P^T. P is orthogonal for eigendecompositions and an
/// arbitrary nonsingular matrix for transformed pairs (V^T P, Lambda).
struct EigenPair {
  Matrix P;
  Vector lambda;
  bool orthogonal = true;

  Eigen::Index n() const { return lambda.size(); }
  Matrix reconstruct() const;
};

inline constexpr double kReconTol = 1e-9;
inline constexpr double kOrthTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;

/// Column sign rule applied by eigen_decompose.
enum class SignRule {
  FirstEntry,  // first entry above 1e-8 * max|p| is positive
  MaxAbs,      // largest-magnitude entry is nonnegative (first such on ties)
};

/// Cyclic Jacobi eigendecomposition.
///
/// Eigenvalues come back in descending order, eigenvectors signed by `sign`.
/// Throws NonConvergence when the off-diagonal Frobenius norm is still above
/// tol * ||A||_F after 100 sweeps.
EigenPair eigen_decompose(const SymMatrix &a, double tol = 1e-12,
                          SignRule sign = SignRule::FirstEntry);

/// Max-abs residual of P Lambda P^T - A, relative to max(1, max|A|).
double reconstruction_residual(const EigenPair &ep, const SymMatrix &a);

/// Max-abs entry of P^T P - I.
double orthogonality_residual(const EigenPair &ep);

/// Diagonally pivoted Cholesky. True iff every pivot is >= -tol * scale with
/// scale = max(1, max diagonal entry); once the largest remaining pivot drops
/// below tol * scale, the leftover Schur complement must vanish to the same
/// tolerance.
bool is_psd_cholesky(const SymMatrix &a, double tol = kPsdTol);

/// V^T A V, symmetrized. V must have A.n() rows.
SymMatrix congruence(const SymMatrix &a, const Matrix &v);

/// Text format: first token n, followed by n rows of n decimals.
SymMatrix read_matrix(std::istream &in);
SymMatrix load_matrix(const std::string &path);
void write_matrix(std::ostream &out, const SymMatrix &a);
void save_matrix(const std::string &path, const SymMatrix &a);

}  // namespace conekit
