#pragma once

#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fwtopo/invariants.hpp"
#include "fwtopo/models.hpp"

namespace fwtopo {

enum class ReductionKind { GTheta, G3Phi3, G2Phi2Phi3 };
std::string to_string(ReductionKind k);

// Coefficient of a dimensionally reduced Chern-Simons term, built from a
// Chern number. Single-angle kinds ignore the second argument.
struct ReductionCoefficient {
  ReductionKind kind = ReductionKind::GTheta;
  ChernValue chern_input;
  std::function<double(double, double)> evaluator;

  double operator()(double a, double b = 0.0) const { return evaluator(a, b); }
  // Direct quadrature of the evaluator over its angular domain; returns the
  // Chern number it was built from.
  double normalization() const;
};

ReductionCoefficient g_theta(double n1);
ReductionCoefficient g3_phi3(double n2);
ReductionCoefficient g2_phi2phi3(double n2);

// (1/2pi) int_0^inf k F_12(k) dk for the single 2+1 cone, by adaptive
// quadrature of the curvature; equals N1(positive band)/2pi.
double g_theta_radial(double m, double tol = 1e-10);

// Sampled field zeta(x) or theta(z); coordinates strictly ascending.
class DomainWallProfile {
 public:
  DomainWallProfile(std::vector<double> x, std::vector<double> values);

  // Two comma-separated columns per line, no header. Blank lines skipped.
  static DomainWallProfile parse_csv(std::istream& in);
  static DomainWallProfile read_csv(const std::string& path);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& values() const { return values_; }
  double delta() const { return values_.back() - values_.front(); }

 private:
  std::vector<double> x_;
  std::vector<double> values_;
};

// N1 theta / 2pi, theta in [0, 2pi].
double charge_polarization(double theta, double n1);

// (1/2pi) int d zeta/dx dx, trapezoid over the sampled gradient.
double goldstone_wilczek_charge(const DomainWallProfile& profile);

// N2 phi3 / 2pi, phi3 in [0, 2pi].
double magnetoelectric_polarization(double phi3, double n2);

// N2 Delta theta / (2pi)^2 in units of e^2/hbar.
double surface_hall_conductivity(const DomainWallProfile& profile, double n2);
double surface_hall_conductivity(double delta_theta, double n2);

// (up+ + up- - down+ - down-) / 4pi in units of e, for Delta theta = 2pi.
// Throws std::invalid_argument if a label is missing.
double spin_hall_conductivity_3p1(const std::vector<LabeledChern>& table);

// Delta N1 / 4pi in units of e.
double spin_hall_conductivity_graphene(double delta_n1);

// Omega_theta = -(N2/4) cos phi, Omega_phi = -(N2/4) theta sin phi sampled on
// a (theta, phi) grid; rows follow theta. field_strength is
// d_phi Omega_theta - d_theta Omega_phi by second-order finite differences.
struct OmegaField {
  std::vector<double> theta;
  std::vector<double> phi;
  double n2 = 0.0;
  Eigen::MatrixXd omega_theta;
  Eigen::MatrixXd omega_phi;
  Eigen::MatrixXd field_strength;
};

std::vector<double> uniform_grid(double lo, double hi, int n);

// Grids must be uniform with at least 3 points, theta in [0, 2pi], phi in [0, pi].
OmegaField omega_field(const std::vector<double>& theta_grid, const std::vector<double>& phi_grid, double n2);

// (1/2pi) times the trapezoid integral of the field strength over the grid.
double skyrmion_charge(const OmegaField& field);

// P3(theta) = -(1/pi) int_0^pi Omega_phi dphi; returns P3(2pi) - P3(0).
double pumped_charge(double n2);

}  // namespace fwtopo
