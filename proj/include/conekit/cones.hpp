#pragma once

#include "conekit/linalg.hpp"
#include "conekit/lp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conekit {

/// Subcones of S+ + N with one-sided membership tests.
enum class Cone {
  N,    // entrywise nonnegative
  DD,   // diagonally dominant (inside S+)
  H,    // S(A) positive semidefinite
  G,    // (LP)_{P,Lambda}: diagonal shift of the eigenbasis
  Fplus,  // semidefinite basis type I
  Fpm,    // semidefinite bases type I and II
  L,    // LP certificate from the A+ / A- split (certifies COP, no S+N witness)
};

/// LP-detected families; which LP build_lp emits.
enum class Family { G, Fplus, Fpm };

/// Canonical short names: N, DD, H, G, F+, F+-, L.
const char *to_string(Cone c);
const char *to_string(Family f);
/// Accepts the canonical names plus "Fplus", "Fpm", "F+/-", "Fpm".
Cone parse_cone(const std::string &s);
std::optional<Family> family_of(Cone c);
Cone cone_of(Family f);

enum class BasisType { Plus, Minus };

struct SdBasisElement {
  int i = 0;
  int j = 0;
  BasisType type = BasisType::Plus;
  Matrix mat;
};

/// n(n+1)/2 rank-one PSD matrices spanning S_n.
///
/// Plus: Pi+(p_i, p_j) = (p_i + p_j)(p_i + p_j)^T / 4 for i <= j.
/// Minus: Pi+(p_i, p_i) for each i, then Pi-(p_i, p_j) = (p_i - p_j)(p_i - p_j)^T / 4
/// for i < j.
struct SdBasis {
  std::vector<SdBasisElement> elements;
  Matrix source;  // columns p_1..p_n
};

class RankDeficient : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws RankDeficient unless the columns of p are independent at 1e-9.
SdBasis sd_basis(const Matrix &p, BasisType type);

/// Rank of the n(n+1)/2 vectorized basis elements (upper triangles).
Eigen::Index vectorized_rank(const SdBasis &basis, double tol = 1e-9);

enum class Verdict { Member, NotIdentified };
const char *to_string(Verdict v);

struct Witness {
  SymMatrix s_part;  // PSD
  SymMatrix n_part;  // entrywise nonnegative
};

struct MembershipVerdict {
  Verdict status = Verdict::NotIdentified;
  Cone cone = Cone::N;
  /// LP families were tested with a non-orthogonal pair (P, Lambda).
  bool hat = false;
  std::optional<double> alpha_star;
  std::optional<Witness> witness;
  /// Non-empty when the test could not run to completion (LP limit, eigensolver
  /// failure, ...). Such verdicts are always NotIdentified.
  std::string diagnostic;

  bool member() const { return status == Verdict::Member; }
  /// "G", "G^" for the hat variant, ...
  std::string tag() const;
};

struct WitnessCheck {
  double recon_residual = 0.0;  // max |S + N - A| / scale(A)
  double min_n_entry = 0.0;
  bool s_psd = false;
  bool ok = false;
};

/// Checks S + N == A within 1e-7 * scale, S PSD, N >= -1e-9.
WitnessCheck check_witness(const SymMatrix &a, const Witness &w);

/// N(A) keeps the strictly positive off-diagonal entries, S(A) = A - N(A).
Witness split_nonneg(const SymMatrix &a);

bool is_nonnegative(const SymMatrix &a);
bool is_diagonally_dominant(const SymMatrix &a);

MembershipVerdict in_N(const SymMatrix &a);
MembershipVerdict in_DD(const SymMatrix &a);
MembershipVerdict in_H(const SymMatrix &a);

inline constexpr double kEpsAlpha = 1e-9;

/// Variable layout of the family LPs: omega+_{kl} for k <= l (row-major pairs,
/// only the diagonal ones for G), then omega-_{kl} for k < l (Fpm only), then
/// alpha last. Rows: one "[sum omega Pi]_ij - alpha >= 0" row per i <= j,
/// followed by the bound rows omega+_kk <= lambda_k, omega+_kl <= 0,
/// omega-_kl <= 0.
lp::LinearProgram build_lp(const EigenPair &ep, Family family);

/// Number of rows and variables build_lp produces for dimension n.
struct LpSize {
  std::size_t vars;
  std::size_t rows;
};
LpSize lp_size(Eigen::Index n, Family family);

/// Outcome of one family LP, including the decomposition it induces even when
/// alpha* < 0 (the S part is PSD by feasibility either way).
struct LpDecomposition {
  lp::Status status = lp::Status::IterationLimit;
  double alpha_star = 0.0;
  Matrix n_part;  // sum omega* Pi over the basis terms
  std::size_t lp_iterations = 0;
};

LpDecomposition decompose_lp(const EigenPair &ep, Family family,
                             const lp::SolveOptions &opts = {});

struct LpCheckOptions {
  double eps_alpha = kEpsAlpha;
  lp::SolveOptions solve;
};

/// Member iff the family LP for ep has alpha* >= -eps_alpha.
MembershipVerdict check_membership_lp(const SymMatrix &a, const EigenPair &ep, Family family,
                                      const LpCheckOptions &opts = {});

/// A+ = P Lambda+ P^T and A- = A+ - A.
struct PsdSplit {
  SymMatrix a_plus;
  SymMatrix a_minus;
};
PsdSplit psd_split(const SymMatrix &a);

/// LP test: min f^T x over A+ x >= e, x >= 0, then the coordinatewise
/// inequalities (x^T A+ x)(A-)_ii <= ((A+ x)_i)^2. f defaults to all ones.
MembershipVerdict in_L_bomze(const SymMatrix &a, std::optional<Vector> f = std::nullopt);

struct ReportOptions {
  /// Stop after the first Member verdict.
  bool stop_early = false;
  /// Use this pair for the LP families instead of eigen_decompose(A); a
  /// non-orthogonal pair selects the hat variants.
  std::optional<EigenPair> pair;
  LpCheckOptions lp;
};

/// Runs the selected tests in the given order. A failing test produces a
/// NotIdentified verdict with a diagnostic instead of aborting the report.
std::vector<MembershipVerdict> membership_report(const SymMatrix &a,
                                                 const std::vector<Cone> &cones,
                                                 const ReportOptions &opts = {});

}  // namespace conekit
