#include "conekit/cones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conekit {

const char *to_string(Cone c) {
  switch (c) {
    case Cone::N: return "N";
    case Cone::DD: return "DD";
    case Cone::H: return "H";
    case Cone::G: return "G";
    case Cone::Fplus: return "F+";
    case Cone::Fpm: return "F+-";
    case Cone::L: return "L";
  }
  return "?";
}

const char *to_string(Family f) { return to_string(cone_of(f)); }

Cone parse_cone(const std::string &s) {
  if (s == "N") return Cone::N;
  if (s == "DD") return Cone::DD;
  if (s == "H") return Cone::H;
  if (s == "G") return Cone::G;
  if (s == "F+" || s == "Fplus") return Cone::Fplus;
  if (s == "F+-" || s == "F+/-" || s == "Fpm" || s == "F±") return Cone::Fpm;
  if (s == "L") return Cone::L;
  throw std::invalid_argument("unknown cone '" + s + "'");
}

std::optional<Family> family_of(Cone c) {
  switch (c) {
    case Cone::G: return Family::G;
    case Cone::Fplus: return Family::Fplus;
    case Cone::Fpm: return Family::Fpm;
    default: return std::nullopt;
  }
}

Cone cone_of(Family f) {
  switch (f) {
    case Family::G: return Cone::G;
    case Family::Fplus: return Cone::Fplus;
    case Family::Fpm: return Cone::Fpm;
  }
  return Cone::G;
}

const char *to_string(Verdict v) {
  return v == Verdict::Member ? "Member" : "NotIdentified";
}

std::string MembershipVerdict::tag() const {
  std::string t = to_string(cone);
  if (hat) t += "^";
  return t;
}

SdBasis sd_basis(const Matrix &p, BasisType type) {
  const Eigen::Index n = p.rows();
  if (p.cols() != n) throw DimensionMismatch("sd_basis: expected n vectors of length n");
  if (n == 0) throw DimensionMismatch("sd_basis: empty");
  Eigen::JacobiSVD<Matrix> svd(p);
  const Vector sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(n - 1) <= 1e-9 * sv(0))
    throw RankDeficient("sd_basis: vectors are linearly dependent");

  SdBasis basis;
  basis.source = p;
  auto add = [&](int i, int j, BasisType t) {
    const Vector u = t == BasisType::Plus ? Vector(p.col(i) + p.col(j)) : Vector(p.col(i) - p.col(j));
    basis.elements.push_back({i, j, t, 0.25 * u * u.transpose()});
  };
  if (type == BasisType::Plus) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) add(i, j, BasisType::Plus);
  } else {
    for (int i = 0; i < n; ++i) add(i, i, BasisType::Plus);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add(i, j, BasisType::Minus);
  }
  return basis;
}

Eigen::Index vectorized_rank(const SdBasis &basis, double tol) {
  const Eigen::Index n = basis.source.rows();
  const Eigen::Index dim = n * (n + 1) / 2;
  Matrix vecs(dim, static_cast<Eigen::Index>(basis.elements.size()));
  for (std::size_t e = 0; e < basis.elements.size(); ++e) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) vecs(r++, static_cast<Eigen::Index>(e)) = basis.elements[e].mat(i, j);
  }
  Eigen::JacobiSVD<Matrix> svd(vecs);
  const Vector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol * sv(0)) ++rank;
  return rank;
}

WitnessCheck check_witness(const SymMatrix &a, const Witness &w) {
  WitnessCheck c;
  c.recon_residual = max_abs(w.s_part.matrix() + w.n_part.matrix() - a.matrix()) / a.scale();
  c.min_n_entry = w.n_part.min_entry();
  c.s_psd = is_psd_cholesky(w.s_part);
  c.ok = c.recon_residual <= 1e-7 && c.s_psd && c.min_n_entry >= -1e-9;
  return c;
}

Witness split_nonneg(const SymMatrix &a) {
  Matrix n = Matrix::Zero(a.n(), a.n());
  for (Eigen::Index i = 0; i < a.n(); ++i)
    for (Eigen::Index j = 0; j < a.n(); ++j)
      if (i != j && a(i, j) > 0.0) n(i, j) = a(i, j);
  SymMatrix np(n);
  return {a - np, np};
}

bool is_nonnegative(const SymMatrix &a) { return a.n() == 0 || a.min_entry() >= 0.0; }

bool is_diagonally_dominant(const SymMatrix &a) {
  for (Eigen::Index i = 0; i < a.n(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < a.n(); ++j)
      if (j != i) off += std::abs(a(i, j));
    if (a(i, i) < off) return false;
  }
  return true;
}

MembershipVerdict in_N(const SymMatrix &a) {
  MembershipVerdict v;
  v.cone = Cone::N;
  if (is_nonnegative(a)) {
    v.status = Verdict::Member;
    v.witness = Witness{SymMatrix::zero(a.n()), a};
  }
  return v;
}

MembershipVerdict in_DD(const SymMatrix &a) {
  MembershipVerdict v;
  v.cone = Cone::DD;
  if (is_diagonally_dominant(a)) {
    v.status = Verdict::Member;
    v.witness = Witness{a, SymMatrix::zero(a.n())};
  }
  return v;
}

MembershipVerdict in_H(const SymMatrix &a) {
  MembershipVerdict v;
  v.cone = Cone::H;
  Witness w = split_nonneg(a);
  if (is_psd_cholesky(w.s_part)) {
    v.status = Verdict::Member;
    v.witness = std::move(w);
  }
  return v;
}

namespace {

struct Term {
  int k, l;
  BasisType type;
};

std::vector<Term> family_terms(Eigen::Index n, Family family) {
  std::vector<Term> terms;
  const int nn = static_cast<int>(n);
  if (family == Family::G) {
    for (int k = 0; k < nn; ++k) terms.push_back({k, k, BasisType::Plus});
    return terms;
  }
  for (int k = 0; k < nn; ++k)
    for (int l = k; l < nn; ++l) terms.push_back({k, l, BasisType::Plus});
  if (family == Family::Fpm)
    for (int k = 0; k < nn; ++k)
      for (int l = k + 1; l < nn; ++l) terms.push_back({k, l, BasisType::Minus});
  return terms;
}

// [Pi(p_k, p_l)]_ij for the given term.
double term_entry(const Matrix &p, const Term &t, Eigen::Index i, Eigen::Index j) {
  if (t.k == t.l) return p(i, t.k) * p(j, t.k);
  const double s = t.type == BasisType::Plus ? 1.0 : -1.0;
  return 0.25 * (p(i, t.k) + s * p(i, t.l)) * (p(j, t.k) + s * p(j, t.l));
}

}  // namespace

LpSize lp_size(Eigen::Index n, Family family) {
  const auto nn = static_cast<std::size_t>(n);
  switch (family) {
    case Family::G: return {nn + 1, nn * (nn + 3) / 2};
    case Family::Fplus: return {nn * (nn + 1) / 2 + 1, nn * (nn + 1)};
    case Family::Fpm: return {nn * nn + 1, nn * (3 * nn + 1) / 2};
  }
  return {0, 0};
}

lp::LinearProgram build_lp(const EigenPair &ep, Family family) {
  const Eigen::Index n = ep.n();
  if (ep.P.rows() != n || ep.P.cols() != n)
    throw DimensionMismatch("build_lp: P must be n x n with n = #eigenvalues");
  const std::vector<Term> terms = family_terms(n, family);
  const std::size_t nvars = terms.size() + 1;
  const std::size_t alpha = terms.size();

  std::vector<double> obj(nvars, 0.0);
  obj[alpha] = 1.0;
  lp::LinearProgram prog(std::move(obj));

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      std::vector<double> row(nvars, 0.0);
      for (std::size_t t = 0; t < terms.size(); ++t) row[t] = term_entry(ep.P, terms[t], i, j);
      row[alpha] = -1.0;
      prog.add_row(std::move(row), lp::Sense::GreaterEq, 0.0);
    }
  }
  for (std::size_t t = 0; t < terms.size(); ++t) {
    std::vector<double> row(nvars, 0.0);
    row[t] = 1.0;
    const double rhs = terms[t].k == terms[t].l ? ep.lambda(terms[t].k) : 0.0;
    prog.add_row(std::move(row), lp::Sense::LessEq, rhs);
  }
  // omega = lambda (off-diagonal terms 0) with alpha = min_ij A_ij is feasible,
  // so this bound never binds; it makes the origin of the shifted LP feasible.
  prog.set_bounds(alpha, ep.reconstruct().minCoeff() - 1.0, lp::kInf);
  return prog;
}

LpDecomposition decompose_lp(const EigenPair &ep, Family family, const lp::SolveOptions &opts) {
  const Eigen::Index n = ep.n();
  const std::vector<Term> terms = family_terms(n, family);
  const lp::LinearProgram prog = build_lp(ep, family);
  const lp::LpSolution sol = lp::solve(prog, opts);

  LpDecomposition out;
  out.status = sol.status;
  out.lp_iterations = sol.iterations;
  if (sol.status != lp::Status::Optimal) return out;
  out.alpha_star = sol.x[terms.size()];

  // sum omega Pi = P W P^T with W collecting the rank-one coefficients.
  Matrix w = Matrix::Zero(n, n);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double om = sol.x[t];
    const int k = terms[t].k, l = terms[t].l;
    if (k == l) {
      w(k, k) += om;
      continue;
    }
    const double s = terms[t].type == BasisType::Plus ? 1.0 : -1.0;
    w(k, k) += 0.25 * om;
    w(l, l) += 0.25 * om;
    w(k, l) += 0.25 * s * om;
    w(l, k) += 0.25 * s * om;
  }
  Matrix np = ep.P * w * ep.P.transpose();
  out.n_part = 0.5 * (np + np.transpose());
  return out;
}

MembershipVerdict check_membership_lp(const SymMatrix &a, const EigenPair &ep, Family family,
                                      const LpCheckOptions &opts) {
  if (ep.n() != a.n()) throw DimensionMismatch("check_membership_lp: pair and matrix sizes differ");
  MembershipVerdict v;
  v.cone = cone_of(family);
  v.hat = !ep.orthogonal;
  const LpDecomposition dec = decompose_lp(ep, family, opts.solve);
  if (dec.status != lp::Status::Optimal) {
    v.diagnostic = std::string("lp: ") + lp::to_string(dec.status);
    return v;
  }
  v.alpha_star = dec.alpha_star;
  if (dec.alpha_star >= -opts.eps_alpha) {
    v.status = Verdict::Member;
    SymMatrix np(dec.n_part);
    v.witness = Witness{a - np, np};
  }
  return v;
}

PsdSplit psd_split(const SymMatrix &a) {
  const EigenPair ep = eigen_decompose(a);
  const Vector lp = ep.lambda.cwiseMax(0.0);
  Matrix ap = ep.P * lp.asDiagonal() * ep.P.transpose();
  SymMatrix plus(Matrix(0.5 * (ap + ap.transpose())));
  return {plus, plus - a};
}

MembershipVerdict in_L_bomze(const SymMatrix &a, std::optional<Vector> f) {
  const Eigen::Index n = a.n();
  MembershipVerdict v;
  v.cone = Cone::L;
  const Vector obj = f.value_or(Vector::Ones(n));
  if (obj.size() != n) throw DimensionMismatch("in_L_bomze: objective length");

  const PsdSplit split = psd_split(a);
  const Matrix &ap = split.a_plus.matrix();

  std::vector<double> c(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) c[static_cast<std::size_t>(j)] = -obj(j);
  lp::LinearProgram prog(c);
  for (Eigen::Index j = 0; j < n; ++j) prog.set_bounds(static_cast<std::size_t>(j), 0.0, lp::kInf);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = ap(i, j);
    prog.add_row(std::move(row), lp::Sense::GreaterEq, 1.0);
  }
  const lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal) {
    v.diagnostic = std::string("lp: ") + lp::to_string(sol.status);
    return v;
  }
  Vector x(n);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = sol.x[static_cast<std::size_t>(j)];
  const Vector apx = ap * x;
  const double xax = x.dot(apx);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (apx(i) <= 0.0) return v;
    if (xax * split.a_minus(i, i) > apx(i) * apx(i)) return v;
  }
  v.status = Verdict::Member;
  return v;
}

std::vector<MembershipVerdict> membership_report(const SymMatrix &a,
                                                 const std::vector<Cone> &cones,
                                                 const ReportOptions &opts) {
  std::vector<MembershipVerdict> out;
  std::optional<EigenPair> pair = opts.pair;
  for (Cone c : cones) {
    MembershipVerdict v;
    v.cone = c;
    try {
      if (auto fam = family_of(c)) {
        if (!pair) pair = eigen_decompose(a);
        v = check_membership_lp(a, *pair, *fam, opts.lp);
      } else {
        switch (c) {
          case Cone::N: v = in_N(a); break;
          case Cone::DD: v = in_DD(a); break;
          case Cone::H: v = in_H(a); break;
          case Cone::L: v = in_L_bomze(a); break;
          default: break;
        }
      }
    } catch (const std::exception &e) {
      v = MembershipVerdict{};
      v.cone = c;
      v.diagnostic = e.what();
    }
    out.push_back(std::move(v));
    if (opts.stop_early && out.back().member()) break;
  }
  return out;
}

}  // namespace conekit
