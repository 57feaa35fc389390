#include "conekit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

namespace conekit {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix &a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

double max_abs(const Matrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

SymMatrix::SymMatrix(const Matrix &m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("SymMatrix: matrix is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()));
  if (!m.allFinite())
    throw std::invalid_argument("SymMatrix: non-finite entry");
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.transpose());
  if (asym > kSymmetryTol * scale)
    throw std::invalid_argument("SymMatrix: asymmetry " + std::to_string(asym));
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::zero(Eigen::Index n) {
  return SymMatrix(Matrix::Zero(n, n), Trusted{});
}
SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Matrix::Identity(n, n), Trusted{});
}
SymMatrix SymMatrix::ones(Eigen::Index n) {
  return SymMatrix(Matrix::Ones(n, n), Trusted{});
}
SymMatrix SymMatrix::diagonal(const Vector &d) {
  if (!d.allFinite()) throw std::invalid_argument("SymMatrix: non-finite entry");
  return SymMatrix(Matrix(d.asDiagonal()), Trusted{});
}

double SymMatrix::scale() const { return std::max(1.0, max_abs(m_)); }

SymMatrix SymMatrix::operator+(const SymMatrix &o) const {
  if (n() != o.n()) throw DimensionMismatch("SymMatrix::operator+");
  return SymMatrix(m_ + o.m_, Trusted{});
}
SymMatrix SymMatrix::operator-(const SymMatrix &o) const {
  if (n() != o.n()) throw DimensionMismatch("SymMatrix::operator-");
  return SymMatrix(m_ - o.m_, Trusted{});
}
SymMatrix SymMatrix::operator*(double c) const {
  if (!std::isfinite(c)) throw std::invalid_argument("SymMatrix: non-finite scale");
  return SymMatrix(m_ * c, Trusted{});
}

Matrix EigenPair::reconstruct() const {
  return P * lambda.asDiagonal() * P.transpose();
}

EigenPair eigen_decompose(const SymMatrix &a, double tol, SignRule sign) {
  const Eigen::Index n = a.n();
  if (n < 1) throw DimensionMismatch("eigen_decompose: empty matrix");

  Matrix d = a.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double frob = std::max(d.norm(), std::numeric_limits<double>::min());

  bool converged = off_diagonal_norm(d) <= tol * frob;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (apq == 0.0) continue;
        const double app = d(p, p);
        const double aqq = d(q, q);
        // Entries negligible next to both diagonals are dropped outright.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          d(p, q) = d(q, p) = 0.0;
          continue;
        }
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double dkp = d(k, p);
          const double dkq = d(k, q);
          d(k, p) = c * dkp - s * dkq;
          d(k, q) = s * dkp + c * dkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double dpk = d(p, k);
          const double dqk = d(q, k);
          d(p, k) = c * dpk - s * dqk;
          d(q, k) = s * dpk + c * dqk;
        }
        d(p, q) = d(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(d) <= tol * frob;
  }
  if (!converged)
    throw NonConvergence("eigen_decompose: no convergence after " +
                         std::to_string(kMaxSweeps) + " sweeps");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return d(x, x) > d(y, y);
  });

  EigenPair ep;
  ep.P.resize(n, n);
  ep.lambda.resize(n);
  ep.orthogonal = true;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    ep.lambda(k) = d(src, src);
    Vector col = v.col(src);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(col(i)) > best * (1.0 + 1e-12)) {
        best = std::abs(col(i));
        arg = i;
      }
    }
    if (sign == SignRule::FirstEntry) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(col(i)) > 1e-8 * best) {
          arg = i;
          break;
        }
      }
    }
    if (col(arg) < 0.0) col = -col;
    ep.P.col(k) = col;
  }
  return ep;
}

double reconstruction_residual(const EigenPair &ep, const SymMatrix &a) {
  return max_abs(ep.reconstruct() - a.matrix()) / a.scale();
}

double orthogonality_residual(const EigenPair &ep) {
  const Eigen::Index n = ep.P.cols();
  return max_abs(ep.P.transpose() * ep.P - Matrix::Identity(n, n));
}

bool is_psd_cholesky(const SymMatrix &a, double tol) {
  const Eigen::Index n = a.n();
  if (n == 0) return true;
  Matrix s = a.matrix();
  const double scale = std::max(1.0, s.diagonal().maxCoeff());
  const double eps = tol * scale;

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});

  for (Eigen::Index k = 0; k < n; ++k) {
    // Remaining indices live in idx[k..n).
    std::size_t best = static_cast<std::size_t>(k);
    for (std::size_t r = static_cast<std::size_t>(k) + 1; r < idx.size(); ++r)
      if (s(idx[r], idx[r]) > s(idx[best], idx[best])) best = r;
    std::swap(idx[static_cast<std::size_t>(k)], idx[best]);
    const Eigen::Index p = idx[static_cast<std::size_t>(k)];
    const double pivot = s(p, p);

    if (pivot < -eps) return false;
    if (pivot <= eps) {
      for (std::size_t r = static_cast<std::size_t>(k); r < idx.size(); ++r)
        for (std::size_t c = static_cast<std::size_t>(k); c < idx.size(); ++c)
          if (std::abs(s(idx[r], idx[c])) > eps) return false;
      return true;
    }
    for (std::size_t r = static_cast<std::size_t>(k) + 1; r < idx.size(); ++r) {
      const Eigen::Index i = idx[r];
      const double f = s(i, p) / pivot;
      if (f == 0.0) continue;
      for (std::size_t c = static_cast<std::size_t>(k) + 1; c < idx.size(); ++c) {
        const Eigen::Index j = idx[c];
        s(i, j) -= f * s(p, j);
      }
    }
  }
  return true;
}

SymMatrix congruence(const SymMatrix &a, const Matrix &v) {
  if (v.rows() != a.n())
    throw DimensionMismatch("congruence: V has " + std::to_string(v.rows()) +
                            " rows, A is " + std::to_string(a.n()) + "x" +
                            std::to_string(a.n()));
  Matrix m = v.transpose() * a.matrix() * v;
  return SymMatrix(Matrix(0.5 * (m + m.transpose())));
}

SymMatrix read_matrix(std::istream &in) {
  long long n = 0;
  if (!(in >> n) || n < 1)
    throw MatrixFormatError("matrix: expected a positive dimension on the first line");
  Matrix m(n, n);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw MatrixFormatError("matrix: expected " + std::to_string(n * n) +
                                " entries, got " + std::to_string(i * n + j));
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(tok, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tok.size() || !std::isfinite(x))
        throw MatrixFormatError("matrix: bad entry '" + tok + "' at row " +
                                std::to_string(i + 1));
      m(i, j) = x;
    }
  }
  std::string extra;
  if (in >> extra) throw MatrixFormatError("matrix: trailing data '" + extra + "'");
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.transpose()) > kSymmetryTol * scale)
    throw MatrixFormatError("matrix: not symmetric");
  return SymMatrix(m);
}

SymMatrix load_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw MatrixFormatError("cannot open '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream &out, const SymMatrix &a) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << a.n() << '\n';
  for (Eigen::Index i = 0; i < a.n(); ++i) {
    for (Eigen::Index j = 0; j < a.n(); ++j) {
      if (j) buf << ' ';
      buf << a(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

void save_matrix(const std::string &path, const SymMatrix &a) {
  std::ofstream out(path);
  if (!out) throw MatrixFormatError("cannot write '" + path + "'");
  write_matrix(out, a);
}

}  // namespace conekit
