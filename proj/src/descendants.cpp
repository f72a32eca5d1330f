#include "fwtopo/descendants.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fwtopo/berry.hpp"
#include "fwtopo/quadrature.hpp"

namespace fwtopo {

using std::numbers::pi;

namespace {

constexpr double kAngleSlack = 1e-12;

void require_angle(double a, double hi, const char* what) {
  if (!std::isfinite(a) || a < -kAngleSlack || a > hi + kAngleSlack)
    throw std::invalid_argument(std::string(what) + " outside its range");
}

double grid_step(const std::vector<double>& g, const char* what) {
  if (g.size() < 3) throw std::invalid_argument(std::string(what) + " grid needs at least 3 points");
  const double h = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
  if (!(h > 0.0)) throw std::invalid_argument(std::string(what) + " grid must ascend");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g[i] - g[i - 1] - h) > 1e-9 * h) throw std::invalid_argument(std::string(what) + " grid must be uniform");
  return h;
}

// Second-order derivative along rows (axis 0) or columns (axis 1).
Eigen::MatrixXd derivative(const Eigen::MatrixXd& f, double h, int axis) {
  const Eigen::MatrixXd g = axis == 0 ? f : Eigen::MatrixXd(f.transpose());
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd d(g.rows(), g.cols());
  d.row(0) = (-3.0 * g.row(0) + 4.0 * g.row(1) - g.row(2)) / (2.0 * h);
  for (Eigen::Index i = 1; i + 1 < n; ++i) d.row(i) = (g.row(i + 1) - g.row(i - 1)) / (2.0 * h);
  d.row(n - 1) = (3.0 * g.row(n - 1) - 4.0 * g.row(n - 2) + g.row(n - 3)) / (2.0 * h);
  return axis == 0 ? d : Eigen::MatrixXd(d.transpose());
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

}  // namespace

std::string to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::GTheta: return "G_theta";
    case ReductionKind::G3Phi3: return "G3_phi3";
    case ReductionKind::G2Phi2Phi3: return "G2_phi2phi3";
  }
  return "unknown";
}

double ReductionCoefficient::normalization() const {
  auto over_circle = [&](double second) {
    return integrate_periodic([&](double a) { return evaluator(a, second); }, 0.0, 2.0 * pi, 256);
  };
  if (kind != ReductionKind::G2Phi2Phi3) return over_circle(0.0);
  // G2(phi2, phi3): phi2 in [0, pi], phi3 periodic.
  const auto rule = gauss_legendre(24);
  return integrate_fixed(
      [&](double phi2) {
        return integrate_periodic([&](double phi3) { return evaluator(phi2, phi3); }, 0.0, 2.0 * pi, 256);
      },
      0.0, pi, rule);
}

ReductionCoefficient g_theta(double n1) {
  const double c = n1 / (2.0 * pi);
  return {ReductionKind::GTheta, {n1, 0.0, ChernMethod::Antiderivative}, [c](double, double) { return c; }};
}

ReductionCoefficient g3_phi3(double n2) {
  const double c = n2 / (2.0 * pi);
  return {ReductionKind::G3Phi3, {n2, 0.0, ChernMethod::Antiderivative}, [c](double, double) { return c; }};
}

ReductionCoefficient g2_phi2phi3(double n2) {
  const double c = n2 / (4.0 * pi);
  return {ReductionKind::G2Phi2Phi3, {n2, 0.0, ChernMethod::Antiderivative},
          [c](double phi2, double) { return c * std::sin(phi2); }};
}

double g_theta_radial(double m, double tol) {
  if (m == 0.0 || !std::isfinite(m)) throw std::invalid_argument("mass must be finite and non-zero");
  const auto rep = build_representation_2p1();
  // k = t / (1 - t) maps [0, 1) onto [0, inf).
  auto f = [&](double t) {
    const double k = t / (1.0 - t);
    Momentum q(2);
    q << k, 0.0;
    return k * first_chern_density(rep, q, m) / ((1.0 - t) * (1.0 - t));
  };
  const auto r = integrate_adaptive(f, 0.0, 1.0, tol, 400);
  if (!r.converged) throw std::runtime_error("radial integral of the curvature did not converge");
  return r.value / (2.0 * pi);
}

DomainWallProfile::DomainWallProfile(std::vector<double> x, std::vector<double> values)
    : x_(std::move(x)), values_(std::move(values)) {
  if (x_.size() != values_.size()) throw std::invalid_argument("profile columns differ in length");
  if (x_.size() < 2) throw std::invalid_argument("profile needs at least two samples");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(values_[i])) throw std::invalid_argument("profile has non-finite entries");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw std::invalid_argument("profile coordinates must ascend strictly");
  }
}

DomainWallProfile DomainWallProfile::parse_csv(std::istream& in) {
  std::vector<double> x, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    char comma = 0;
    std::string rest;
    if (!(row >> a >> comma >> b) || comma != ',' || (row >> rest && rest.find_first_not_of("\r") != std::string::npos))
      throw std::invalid_argument("profile line " + std::to_string(lineno) + " is not 'coordinate,value'");
    x.push_back(a);
    v.push_back(b);
  }
  return {std::move(x), std::move(v)};
}

DomainWallProfile DomainWallProfile::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile '" + path + "'");
  return parse_csv(in);
}

double charge_polarization(double theta, double n1) {
  require_angle(theta, 2.0 * pi, "theta");
  return n1 * theta / (2.0 * pi);
}

double goldstone_wilczek_charge(const DomainWallProfile& profile) {
  const auto& x = profile.x();
  const auto& z = profile.values();
  double total = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = x[i] - x[i - 1];
    total += (z[i] - z[i - 1]) / dx * dx;
  }
  return total / (2.0 * pi);
}

double magnetoelectric_polarization(double phi3, double n2) {
  require_angle(phi3, 2.0 * pi, "phi3");
  return n2 * phi3 / (2.0 * pi);
}

double surface_hall_conductivity(const DomainWallProfile& profile, double n2) {
  return surface_hall_conductivity(profile.delta(), n2);
}

double surface_hall_conductivity(double delta_theta, double n2) { return n2 * delta_theta / (4.0 * pi * pi); }

double spin_hall_conductivity_3p1(const std::vector<LabeledChern>& table) {
  auto find = [&](const std::string& label) {
    for (const auto& row : table)
      if (row.label == label) return row.value;
    throw std::invalid_argument("spin Chern table lacks '" + label + "'");
  };
  return (find("up+") + find("up-") - find("down+") - find("down-")) / (4.0 * pi);
}

double spin_hall_conductivity_graphene(double delta_n1) { return delta_n1 / (4.0 * pi); }

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("grid needs n >= 2 and hi > lo");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

OmegaField omega_field(const std::vector<double>& theta_grid, const std::vector<double>& phi_grid, double n2) {
  const double ht = grid_step(theta_grid, "theta");
  const double hp = grid_step(phi_grid, "phi");
  require_angle(theta_grid.front(), 2.0 * pi, "theta");
  require_angle(theta_grid.back(), 2.0 * pi, "theta");
  require_angle(phi_grid.front(), pi, "phi");
  require_angle(phi_grid.back(), pi, "phi");

  OmegaField out{theta_grid, phi_grid, n2, {}, {}, {}};
  const auto nt = static_cast<Eigen::Index>(theta_grid.size());
  const auto np = static_cast<Eigen::Index>(phi_grid.size());
  out.omega_theta.resize(nt, np);
  out.omega_phi.resize(nt, np);
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const double th = theta_grid[static_cast<std::size_t>(i)];
      const double ph = phi_grid[static_cast<std::size_t>(j)];
      out.omega_theta(i, j) = -0.25 * n2 * std::cos(ph);
      out.omega_phi(i, j) = -0.25 * n2 * th * std::sin(ph);
    }
  }
  out.field_strength = derivative(out.omega_theta, hp, 1) - derivative(out.omega_phi, ht, 0);
  return out;
}

double skyrmion_charge(const OmegaField& field) {
  const auto wt = trapezoid_weights(field.theta.size(), grid_step(field.theta, "theta"));
  const auto wp = trapezoid_weights(field.phi.size(), grid_step(field.phi, "phi"));
  double total = 0.0;
  for (std::size_t i = 0; i < wt.size(); ++i)
    for (std::size_t j = 0; j < wp.size(); ++j)
      total += wt[i] * wp[j] * field.field_strength(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return total / (2.0 * pi);
}

double pumped_charge(double n2) {
  const auto rule = gauss_legendre(32);
  auto p3 = [&](double theta) {
    return -integrate_fixed([&](double phi) { return -0.25 * n2 * theta * std::sin(phi); }, 0.0, pi, rule) / pi;
  };
  return p3(2.0 * pi) - p3(0.0);
}

}  // namespace fwtopo
