#pragma once

#include "fwtopo/clifford.hpp"

namespace fwtopo {

// Spectral data of H = alpha.k + m beta at one momentum.
//
// The Foldy-Wouthuysen unitary is taken in closed form,
//   U = (beta_eff H + E) / sqrt(2E(E + |m|)),   beta_eff = sgn(m) beta,
// so U H U^dag = E beta_eff. Folding the mass sign into beta_eff keeps the
// denominator away from zero for either sign of m and fixes the gauge of the
// Berry connection without any eigen-solver phase choice.
struct SpectralData {
  double energy = 0.0;
  double mass = 0.0;  // signed, as passed in
  ComplexMatrix beta_eff;
  ComplexMatrix fw_unitary;
  ComplexMatrix iplus;
  ComplexMatrix iminus;
  ComplexMatrix proj_plus;   // U^dag I+ U
  ComplexMatrix proj_minus;  // U^dag I- U
};

// Throws std::invalid_argument on dimension mismatch or non-finite input.
void require_momentum(const Representation& rep, const Momentum& k);

double dirac_energy(const Momentum& k, double m);

ComplexMatrix hamiltonian(const Representation& rep, const Momentum& k, double m);

// Throws std::invalid_argument for m == 0 (gapless; the FW map is singular).
SpectralData spectral_data(const Representation& rep, const Momentum& k, double m);

ComplexMatrix fw_unitary(const Representation& rep, const Momentum& k, double m);

// Canonical isometry onto the beta_eff = +1 subspace (dim x dim/2).
ComplexMatrix positive_isometry(const Representation& rep, double m);

// Off-diagonal blocks rho_eff[I] = V+^dag alpha_I V- for beta_eff.
std::vector<ComplexMatrix> effective_rho(const Representation& rep, double m);

}  // namespace fwtopo
