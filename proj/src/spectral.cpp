#include "fwtopo/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace fwtopo {

namespace {

int mass_sign(double m) {
  if (m == 0.0 || !std::isfinite(m)) throw std::invalid_argument("mass must be finite and non-zero");
  return m > 0.0 ? 1 : -1;
}

}  // namespace

void require_momentum(const Representation& rep, const Momentum& k) {
  if (k.size() != rep.space_dim()) throw std::invalid_argument("momentum dimension does not match representation");
  if (!k.allFinite()) throw std::invalid_argument("momentum components must be finite");
}

double dirac_energy(const Momentum& k, double m) { return std::sqrt(k.squaredNorm() + m * m); }

ComplexMatrix hamiltonian(const Representation& rep, const Momentum& k, double m) {
  require_momentum(rep, k);
  ComplexMatrix h = m * rep.beta();
  for (int i = 0; i < rep.space_dim(); ++i) h += k(i) * rep.alpha(i);
  return h;
}

ComplexMatrix fw_unitary(const Representation& rep, const Momentum& k, double m) {
  const int s = mass_sign(m);
  const double e = dirac_energy(k, m);
  const double am = std::abs(m);
  const ComplexMatrix h = hamiltonian(rep, k, m);
  const ComplexMatrix beta_eff = static_cast<double>(s) * rep.beta();
  return (beta_eff * h + e * identity(rep.dim())) / std::sqrt(2.0 * e * (e + am));
}

SpectralData spectral_data(const Representation& rep, const Momentum& k, double m) {
  const int s = mass_sign(m);
  SpectralData out;
  out.energy = dirac_energy(k, m);
  out.mass = m;
  out.beta_eff = static_cast<double>(s) * rep.beta();
  out.fw_unitary = fw_unitary(rep, k, m);

  const ComplexMatrix one = identity(rep.dim());
  out.iplus = 0.5 * (one + out.beta_eff);
  out.iminus = 0.5 * (one - out.beta_eff);
  out.proj_plus = out.fw_unitary.adjoint() * out.iplus * out.fw_unitary;
  out.proj_minus = out.fw_unitary.adjoint() * out.iminus * out.fw_unitary;
  return out;
}

ComplexMatrix positive_isometry(const Representation& rep, double m) {
  const auto idx = rep.positive_indices(mass_sign(m));
  ComplexMatrix v = ComplexMatrix::Zero(rep.dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) v(idx[c], static_cast<Eigen::Index>(c)) = 1.0;
  return v;
}

std::vector<ComplexMatrix> effective_rho(const Representation& rep, double m) {
  if (mass_sign(m) > 0) return rep.rho();
  std::vector<ComplexMatrix> out;
  out.reserve(rep.rho().size());
  for (const auto& r : rep.rho()) out.push_back(r.adjoint());
  return out;
}

}  // namespace fwtopo
