#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fwtopo/spectral.hpp"

namespace fwtopo {

// One matrix per momentum direction. For the pure gauge field the matrices
// act on the full space; for the Berry connection on the positive-energy
// subspace (dimension dim/2, basis = positive_isometry columns).
struct ConnectionField {
  std::vector<ComplexMatrix> components;
  Momentum evaluated_at;
};

// F_IJ stored for I < J only; the lower triangle is materialized on demand.
class CurvatureField {
 public:
  CurvatureField(int space_dim, Momentum at);

  int space_dim() const { return d_; }
  const Momentum& evaluated_at() const { return at_; }

  // Zero-based axes, i < j required.
  const ComplexMatrix& upper(int i, int j) const;
  ComplexMatrix& upper(int i, int j);
  // Any i != j; F_ji = -F_ij.
  ComplexMatrix operator()(int i, int j) const;

  std::vector<std::string> warnings;

 private:
  std::size_t slot(int i, int j) const;

  int d_;
  Momentum at_;
  std::vector<ComplexMatrix> upper_;
};

struct CurvatureMethod {
  enum class Kind { ClosedForm, AnalyticDiff, FiniteDiff };
  Kind kind = Kind::ClosedForm;
  double step = 0.0;  // finite differences; 0 selects 1e-4 * max(1, |k|)

  static CurvatureMethod closed_form() { return {Kind::ClosedForm, 0.0}; }
  static CurvatureMethod analytic_diff() { return {Kind::AnalyticDiff, 0.0}; }
  static CurvatureMethod finite_diff(double h = 0.0) { return {Kind::FiniteDiff, h}; }
};

double default_fd_step(const Momentum& k);

// A^U_I = iU d_I U^dag in closed form:
//   (i / 2E^2(E+|m|)) [E(E+|m|) alpha_I beta + beta (alpha.k) k_I - iE sigma_IJ k_J]
// with beta -> beta_eff.
ConnectionField pure_gauge_field(const Representation& rep, const Momentum& k, double m);

// The same field from central differences of the FW unitary.
ConnectionField pure_gauge_field_numeric(const Representation& rep, const Momentum& k, double m,
                                         double h = 0.0);

// A_I = -(i / 4E(E+|m|)) (rho_I rho_J^dag - rho_J rho_I^dag) k_J with rho taken
// in the beta_eff eigenbasis. Block-diagonal for Kronecker-extended
// representations because the rho blocks never mix blocks.
ConnectionField berry_connection(const Representation& rep, const Momentum& k, double m);

// True when a hand-derived curvature exists for the representation.
bool has_closed_form(const Representation& rep);

// ClosedForm throws std::invalid_argument when has_closed_form is false.
CurvatureField berry_curvature(const Representation& rep, const Momentum& k, double m,
                               CurvatureMethod method = CurvatureMethod::closed_form());

// d_I A_J - d_J A_I only (no commutator), differentiated analytically.
CurvatureField berry_curvature_abelian_part(const Representation& rep, const Momentum& k, double m);

// F_IJ = d_I A_J - d_J A_I - i[A_I, A_J] by central differences of an
// arbitrary connection.
CurvatureField finite_difference_curvature(const std::function<ConnectionField(const Momentum&)>& connection,
                                           const Momentum& k, double h, bool include_commutator = true);

// Closed form on one 4x4 block of the spin Hall family: the curvature of
// alpha.(t o k) + |m| beta in the positive-subspace gauge, mapped back with
// the signs t. Exposed for the closed-form tests.
std::vector<ComplexMatrix> dirac4p1_curvature_up_plus(const Momentum& k, double m);

// Real trace of F_12 over the positive subspace or over one block.
double first_chern_density(const Representation& rep, const Momentum& k, double m,
                           std::optional<int> block = std::nullopt);

// epsilon_ijkl tr(F_ij F_kl), optionally restricted to one block; requires
// d = 4. For the plain 4+1 Dirac representation this equals -12 m / E^5.
double chern_integrand_4p1(const Representation& rep, const Momentum& k, double m,
                           std::optional<int> block = std::nullopt);

// Same contraction for an already-evaluated curvature.
double epsilon_trace_ff(const CurvatureField& f, Eigen::Index offset = 0, Eigen::Index size = -1);

}  // namespace fwtopo
