#include "fwtopo/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fwtopo/spectral.hpp"

namespace fwtopo {

namespace {

std::vector<double> block_masses_of(const Representation& rep, double m) {
  std::vector<double> out;
  for (const auto& b : rep.blocks()) out.push_back(b.mass_sign * m);
  return out;
}

ModelSpec make(std::string name, Representation rep, double m, std::optional<TimeReversal> t = std::nullopt,
               std::vector<double> background = {}) {
  if (!std::isfinite(m)) throw std::invalid_argument("mass must be finite");
  auto masses = block_masses_of(rep, m);
  return {std::move(name), std::move(rep), m, std::move(masses), std::move(t), std::move(background)};
}

// (spin) (x) (valley) (x) orbital, matching the block order of kron_extend.
ComplexMatrix spin_valley_y(Eigen::Index orbital) { return kron(kron(pauli::y(), pauli::y()), identity(orbital)); }

// One 4+1 block: alpha_2 carries alpha2_sign, beta carries mass_sign.
Representation spin_hall_block(int alpha2_sign, int mass_sign) {
  const std::vector<SignStructure> labels = {{1}, {alpha2_sign}, {1}, {1}, {mass_sign}};
  return kron_extend(build_representation_4p1(), labels);
}

}  // namespace

ComplexMatrix ModelSpec::hamiltonian(const Momentum& k) const {
  if (k.size() != momentum_dim()) throw std::invalid_argument("momentum has the wrong number of components");
  Momentum full(rep.space_dim());
  full.head(k.size()) = k;
  for (std::size_t i = 0; i < background.size(); ++i) full(k.size() + static_cast<Eigen::Index>(i)) = background[i];
  return fwtopo::hamiltonian(rep, full, mass);
}

std::vector<std::string> catalog_names() {
  return {"dirac2p1",     "kane_mele",     "dirac4p1",      "tri_3p1",
          "app_up_plus", "app_up_minus", "app_down_plus", "app_down_minus"};
}

ModelSpec catalog(const std::string& name, double m) {
  if (name == "dirac2p1") return make(name, build_representation_2p1(), m);
  if (name == "kane_mele") return make(name, kane_mele_representation(), m, TimeReversal{spin_valley_y(2)});
  if (name == "dirac4p1") {
    auto rep = build_representation_4p1();
    ComplexMatrix u = rep.alpha(1) * rep.alpha(3);
    return make(name, std::move(rep), m, TimeReversal{u});
  }
  if (name == "tri_3p1")
    return make(name, spin_hall_4p1_representation(), m, TimeReversal{spin_valley_y(4)}, {kTriBackground});
  if (name == "app_up_plus") return make(name, spin_hall_block(1, 1), m);
  if (name == "app_up_minus") return make(name, spin_hall_block(-1, -1), m);
  if (name == "app_down_plus") return make(name, spin_hall_block(1, -1), m);
  if (name == "app_down_minus") return make(name, spin_hall_block(-1, 1), m);
  throw std::invalid_argument("unknown model '" + name + "'");
}

ModelSpec reduced_3p1(double theta, double m) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  auto rep = build_representation_4p1();
  ComplexMatrix u = rep.alpha(1) * rep.alpha(3);
  return make("reduced_3p1", std::move(rep), m, TimeReversal{u}, {theta});
}

double time_reversal_residual(const ModelSpec& spec, const Momentum& k) {
  if (!spec.time_reversal) throw std::invalid_argument("model '" + spec.name + "' has no time-reversal operator");
  const auto& t = *spec.time_reversal;
  const ComplexMatrix image = t.conjugate ? ComplexMatrix(spec.hamiltonian(-k).conjugate()) : spec.hamiltonian(k);
  return max_abs_diff(t.unitary * image * t.unitary.adjoint(), spec.hamiltonian(k));
}

bool time_reversal_check(const ModelSpec& spec, int samples, std::uint64_t seed, double tol) {
  if (!spec.time_reversal) throw std::invalid_argument("model '" + spec.name + "' has no time-reversal operator");
  if (!is_unitary(spec.time_reversal->unitary)) throw std::invalid_argument("time-reversal matrix is not unitary");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Momentum k(spec.momentum_dim());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = u(rng);
    if (!(time_reversal_residual(spec, k) < tol)) return false;
  }
  return true;
}

std::vector<LabeledChern> spin_chern_table(const FillingDomain& domain, double m) {
  const std::pair<const char*, const char*> rows[] = {
      {"up+", "app_up_plus"}, {"up-", "app_up_minus"}, {"down+", "app_down_plus"}, {"down-", "app_down_minus"}};
  std::vector<LabeledChern> out;
  for (const auto& [label, model] : rows) {
    const auto spec = catalog(model, m);
    out.push_back({label, block_chern2_energy(spec.rep, 0, m, domain).value});
  }
  return out;
}

}  // namespace fwtopo
