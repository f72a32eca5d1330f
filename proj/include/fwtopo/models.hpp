#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fwtopo/clifford.hpp"
#include "fwtopo/invariants.hpp"

namespace fwtopo {

// Antiunitary T = U K. With conjugate set, K conjugates and maps k -> -k.
struct TimeReversal {
  ComplexMatrix unitary;
  bool conjugate = true;
};

struct ModelSpec {
  std::string name;
  Representation rep;
  double mass = 1.0;
  std::vector<double> block_masses;  // mass times each block's mass sign
  std::optional<TimeReversal> time_reversal;
  // Constant values for the trailing alpha axes (e.g. a uniform theta~ in
  // alpha_4 theta~). They are parameters, not momenta: T leaves them alone.
  std::vector<double> background;

  int momentum_dim() const { return rep.space_dim() - static_cast<int>(background.size()); }
  ComplexMatrix hamiltonian(const Momentum& k) const;
};

// dirac2p1, kane_mele, dirac4p1, tri_3p1, app_up_plus, app_up_minus,
// app_down_plus, app_down_minus. Throws std::invalid_argument on other names.
ModelSpec catalog(const std::string& name, double m = 1.0);
std::vector<std::string> catalog_names();

// Theta~ default for tri_3p1's fixed fourth axis.
inline constexpr double kTriBackground = 0.5;

// alpha.k + alpha_4 theta + m beta in three momenta with T = alpha_2 alpha_4 K.
ModelSpec reduced_3p1(double theta, double m = 1.0);

// max |U conj(H(-k)) U^dag - H(k)| (or U H(k) U^dag - H(k) without conjugation).
double time_reversal_residual(const ModelSpec& spec, const Momentum& k);

// True iff the residual stays below tol at `samples` uniform momenta in
// [-3, 3]^d. Throws std::invalid_argument when the model has no T.
bool time_reversal_check(const ModelSpec& spec, int samples = 100, std::uint64_t seed = 20231,
                         double tol = kMatrixTol);

struct LabeledChern {
  std::string label;
  double value = 0.0;
};

// N2 of the four spin Hall blocks in the order up+, up-, down+, down-.
std::vector<LabeledChern> spin_chern_table(const FillingDomain& domain, double m = 1.0);

}  // namespace fwtopo
