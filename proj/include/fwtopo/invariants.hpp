#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "fwtopo/clifford.hpp"

namespace fwtopo {

// Signed-energy integration range for the energy-variable Chern integrals.
// The gap edges sit at +-|m|.
struct FillingDomain {
  enum class Kind { FullBothBands, HalfFilled, PositiveBandOnly, CustomSignedInterval };
  Kind kind = Kind::FullBothBands;
  double lo = 0.0;  // CustomSignedInterval only; may be -inf
  double hi = 0.0;  // CustomSignedInterval only; may be +inf

  static FillingDomain full() { return {Kind::FullBothBands}; }
  // Every level up to the Fermi energy E_F = |m|: (-inf, |m|].
  static FillingDomain half() { return {Kind::HalfFilled}; }
  static FillingDomain positive() { return {Kind::PositiveBandOnly}; }
  static FillingDomain custom(double lo, double hi) { return {Kind::CustomSignedInterval, lo, hi}; }
};

std::string to_string(const FillingDomain& d);

enum class ChernMethod { Antiderivative, Quadrature };
std::string to_string(ChernMethod m);

struct ChernValue {
  double value = 0.0;
  double abs_error = 0.0;
  ChernMethod method = ChernMethod::Antiderivative;
};

// Raised when adaptive quadrature runs out of subdivisions; carries the
// partial result.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, ChernValue partial) : std::runtime_error(what), partial_(partial) {}
  const ChernValue& partial() const { return partial_; }

 private:
  ChernValue partial_;
};

// Orientation linking the two evaluation routes: the half-filled energy
// prescription equals kOrientation times the positive-band momentum integral
// (+1/2 versus -1/2 for m > 0).
inline constexpr double kOrientation = -1.0;

// N1 = -(m/2) int_D dE/E^2, evaluated with the antiderivative -1/E at the
// domain endpoints (the FullBothBands and HalfFilled ranges pass formally
// through the gap, so no Riemann sum exists). Exact: no quadrature error.
// Throws std::invalid_argument for m == 0 or an endpoint inside the gap.
ChernValue chern1_energy(double m, const FillingDomain& domain);

// N2 = (3m/4) int_D (m^2 - E^2)/E^4 dE with antiderivative 1/E - m^2/(3E^3).
ChernValue chern2_energy(double m, const FillingDomain& domain);

enum class Band { Positive };

struct QuadratureScheme {
  double tol = 1e-8;
  double cutoff = 50.0;  // E_cut in units of |m|; the tail beyond is analytic
  int max_intervals = 200;
  std::optional<int> block;  // trace over one diagonal block only
  bool force_angular = false;  // skip the isotropy shortcut
  int circle_nodes = 64;       // 2-D angular trapezoid
  int sphere_nodes = 10;       // per polar angle on S^3; azimuth uses 2x
};

// N1 = (1/4pi) int d^2k eps_ab tr F_ab over the positive band. Isotropic
// integrands collapse to int tr F_12 E dE on [|m|, E_cut] (k dk = E dE);
// otherwise the angular average is taken on a periodic trapezoid grid.
ChernValue chern1_quadrature(const Representation& rep, double m, Band band = Band::Positive,
                             const QuadratureScheme& scheme = {});

// N2 = (1/32pi^2) int d^4k eps tr(FF); the radial form uses
// d^4k = 2 pi^2 k^3 dk and k^3 dk = (E^2 - m^2) E dE.
ChernValue chern2_quadrature(const Representation& rep, double m, Band band = Band::Positive,
                             const QuadratureScheme& scheme = {});

// Sign by which a diagonal block's invariant differs from the plain Dirac
// block with the same |m|: sgn(m) * block mass sign * product of alpha signs.
int block_orientation(const Representation& rep, int block, double m);

// Energy-prescription Chern number of one block.
ChernValue block_chern1_energy(const Representation& rep, int block, double m, const FillingDomain& domain);
ChernValue block_chern2_energy(const Representation& rep, int block, double m, const FillingDomain& domain);

// Kane-Mele blocks in the order up+, up-, down+, down-.
std::array<double, 4> kane_mele_block_cherns(double m, const FillingDomain& domain);

// (N1^{up+} + N1^{up-}) - (N1^{down+} + N1^{down-}).
double delta_chern_kane_mele(double m, const FillingDomain& domain = FillingDomain::half());

// Chern-Simons coefficient: N1/4pi for n = 1, N2/24pi^2 for n = 2.
double cs_coefficient(int n, const ChernValue& chern);

}  // namespace fwtopo
