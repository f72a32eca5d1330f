#include "fwtopo/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "fwtopo/berry.hpp"
#include "fwtopo/quadrature.hpp"

namespace fwtopo {

using std::numbers::pi;

std::string to_string(const FillingDomain& d) {
  switch (d.kind) {
    case FillingDomain::Kind::FullBothBands: return "full";
    case FillingDomain::Kind::HalfFilled: return "half";
    case FillingDomain::Kind::PositiveBandOnly: return "positive";
    case FillingDomain::Kind::CustomSignedInterval: {
      std::ostringstream s;
      s.precision(12);
      s << "custom:" << d.lo << ":" << d.hi;
      return s.str();
    }
  }
  return "unknown";
}

std::string to_string(ChernMethod m) { return m == ChernMethod::Antiderivative ? "antiderivative" : "quadrature"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo;
  double hi;
};

double require_gapped(double m) {
  if (m == 0.0 || !std::isfinite(m)) throw std::invalid_argument("mass must be finite and non-zero");
  return std::abs(m);
}

std::vector<Interval> domain_intervals(const FillingDomain& d, double gap) {
  using K = FillingDomain::Kind;
  switch (d.kind) {
    case K::FullBothBands: return {{-kInf, gap}, {-gap, kInf}};
    case K::HalfFilled: return {{-kInf, gap}};
    case K::PositiveBandOnly: return {{gap, kInf}};
    case K::CustomSignedInterval: {
      if (std::isnan(d.lo) || std::isnan(d.hi) || !(d.lo < d.hi))
        throw std::invalid_argument("custom interval needs lo < hi");
      for (double e : {d.lo, d.hi}) {
        if (std::isfinite(e) && std::abs(e) < gap * (1.0 - 1e-12))
          throw std::invalid_argument("custom interval endpoint lies inside the gap (no states with |E| < |m|)");
      }
      return {{d.lo, d.hi}};
    }
  }
  throw std::logic_error("unknown filling domain");
}

// Antiderivatives in x = |m|/E (x = 0 at E = +-inf), with the sgn(m) and
// 1/|m| factors pulled out: N1 uses x/2, N2 uses (3x - x^3)/4.
double reduced_variable(double e, double gap) { return std::isinf(e) ? 0.0 : gap / e; }

template <typename Antiderivative>
ChernValue energy_prescription(double m, const FillingDomain& domain, Antiderivative prim) {
  const double gap = require_gapped(m);
  const double sign = m > 0.0 ? 1.0 : -1.0;
  double total = 0.0;
  for (const auto& iv : domain_intervals(domain, gap))
    total += prim(reduced_variable(iv.hi, gap)) - prim(reduced_variable(iv.lo, gap));
  return {sign * total, 0.0, ChernMethod::Antiderivative};
}

// Tail beyond E_cut for integrands decaying like c0/E^2 + c2/E^4, fitted
// through E_cut and far * E_cut.
double power_tail(const std::function<double(double)>& g, double ecut, double far) {
  const double e1 = ecut, e2 = far * ecut;
  const double y1 = g(e1) * e1 * e1, y2 = g(e2) * e2 * e2;
  const double inv1 = 1.0 / (e1 * e1), inv2 = 1.0 / (e2 * e2);
  const double c2 = (y1 - y2) / (inv1 - inv2);
  const double c0 = y1 - c2 * inv1;
  return c0 / ecut + c2 / (3.0 * ecut * ecut * ecut);
}

Momentum random_direction(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal;
  Momentum n(d);
  do {
    for (int i = 0; i < d; ++i) n(i) = normal(rng);
  } while (n.norm() < 1e-6);
  return n / n.norm();
}

// 16 random directions on each of 4 shells; the radial collapse is allowed
// only if every shell spreads by at most 1e-9 |mean|.
bool is_isotropic(const std::function<double(const Momentum&)>& density, int d, double gap) {
  std::mt19937_64 rng(0x150720);
  for (double shell : {1.5, 3.0, 8.0, 25.0}) {
    const double k = gap * std::sqrt(shell * shell - 1.0);
    double lo = kInf, hi = -kInf, sum = 0.0;
    for (int s = 0; s < 16; ++s) {
      const double v = density(k * random_direction(rng, d));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    if (hi - lo > 1e-9 * std::abs(sum / 16.0)) return false;
  }
  return true;
}

double circle_average(const std::function<double(const Momentum&)>& density, double k, int nodes) {
  auto f = [&](double theta) {
    Momentum q(2);
    q << k * std::cos(theta), k * std::sin(theta);
    return density(q);
  };
  return integrate_periodic(f, 0.0, 2.0 * pi, nodes) / (2.0 * pi);
}

// Hyperspherical angles: k1 = k cos p1, k2 = k sin p1 cos p2,
// k3 = k sin p1 sin p2 cos p3, k4 = k sin p1 sin p2 sin p3.
double sphere3_average(const std::function<double(const Momentum&)>& density, double k, int nodes) {
  const auto rule = gauss_legendre(nodes);
  auto over_p1 = [&](double p1) {
    auto over_p2 = [&](double p2) {
      auto over_p3 = [&](double p3) {
        Momentum q(4);
        q << k * std::cos(p1), k * std::sin(p1) * std::cos(p2), k * std::sin(p1) * std::sin(p2) * std::cos(p3),
            k * std::sin(p1) * std::sin(p2) * std::sin(p3);
        return density(q);
      };
      return std::sin(p2) * integrate_periodic(over_p3, 0.0, 2.0 * pi, 2 * nodes);
    };
    return std::sin(p1) * std::sin(p1) * integrate_fixed(over_p2, 0.0, pi, rule);
  };
  return integrate_fixed(over_p1, 0.0, pi, rule) / (2.0 * pi * pi);
}

// radial_weight(E) multiplies the angular average to give the integrand in E.
ChernValue radial_quadrature(const std::function<double(const Momentum&)>& density, int d, double gap,
                             const std::function<double(double)>& radial_weight, const QuadratureScheme& scheme) {
  if (!(scheme.tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (!(scheme.cutoff > 1.0)) throw std::invalid_argument("energy cutoff must exceed the gap");

  const bool isotropic = !scheme.force_angular && is_isotropic(density, d, gap);
  Momentum axis = Momentum::Zero(d);
  axis(0) = 1.0;

  auto g = [&](double e) {
    const double k = std::sqrt(std::max(e * e - gap * gap, 0.0));
    double avg;
    if (isotropic)
      avg = density(k * axis);
    else if (d == 2)
      avg = circle_average(density, k, scheme.circle_nodes);
    else
      avg = sphere3_average(density, k, scheme.sphere_nodes);
    return avg * radial_weight(e);
  };

  const double ecut = scheme.cutoff * gap;
  const auto body = integrate_adaptive(g, gap, ecut, scheme.tol, scheme.max_intervals);
  const double tail = power_tail(g, ecut, 2.0);
  const double tail_check = power_tail(g, ecut, 4.0);

  ChernValue out{body.value + tail, body.abs_error + std::abs(tail - tail_check), ChernMethod::Quadrature};
  if (!body.converged) {
    std::ostringstream msg;
    msg << "quadrature did not converge in " << body.intervals << " intervals (error estimate " << body.abs_error
        << ", tolerance " << scheme.tol << ")";
    throw QuadratureError(msg.str(), out);
  }
  return out;
}

}  // namespace

ChernValue chern1_energy(double m, const FillingDomain& domain) {
  return energy_prescription(m, domain, [](double x) { return 0.5 * x; });
}

ChernValue chern2_energy(double m, const FillingDomain& domain) {
  return energy_prescription(m, domain, [](double x) { return (3.0 * x - x * x * x) / 4.0; });
}

ChernValue chern1_quadrature(const Representation& rep, double m, Band, const QuadratureScheme& scheme) {
  if (rep.space_dim() != 2) throw std::invalid_argument("first Chern number needs a 2-dimensional representation");
  const double gap = require_gapped(m);
  auto density = [&](const Momentum& k) { return first_chern_density(rep, k, m, scheme.block); };
  // (1/2pi) int d^2k tr F_12 = int tr F_12 k dk, and k dk = E dE.
  return radial_quadrature(density, 2, gap, [](double e) { return e; }, scheme);
}

ChernValue chern2_quadrature(const Representation& rep, double m, Band, const QuadratureScheme& scheme) {
  if (rep.space_dim() != 4) throw std::invalid_argument("second Chern number needs a 4-dimensional representation");
  const double gap = require_gapped(m);
  auto density = [&](const Momentum& k) { return chern_integrand_4p1(rep, k, m, scheme.block); };
  // (1/32pi^2) 2pi^2 k^3 dk = k^3 dk / 16.
  return radial_quadrature(density, 4, gap, [gap](double e) { return (e * e - gap * gap) * e / 16.0; }, scheme);
}

int block_orientation(const Representation& rep, int block, double m) {
  require_gapped(m);
  if (block < 0 || block >= static_cast<int>(rep.blocks().size())) throw std::out_of_range("block index out of range");
  const auto& b = rep.blocks()[static_cast<std::size_t>(block)];
  int s = (m > 0.0 ? 1 : -1) * b.mass_sign;
  for (int a : b.alpha_signs) s *= a;
  return s;
}

ChernValue block_chern1_energy(const Representation& rep, int block, double m, const FillingDomain& domain) {
  auto v = chern1_energy(std::abs(m), domain);
  v.value *= block_orientation(rep, block, m);
  return v;
}

ChernValue block_chern2_energy(const Representation& rep, int block, double m, const FillingDomain& domain) {
  auto v = chern2_energy(std::abs(m), domain);
  v.value *= block_orientation(rep, block, m);
  return v;
}

std::array<double, 4> kane_mele_block_cherns(double m, const FillingDomain& domain) {
  const auto rep = kane_mele_representation();
  std::array<double, 4> out{};
  for (int b = 0; b < 4; ++b) out[static_cast<std::size_t>(b)] = block_chern1_energy(rep, b, m, domain).value;
  return out;
}

double delta_chern_kane_mele(double m, const FillingDomain& domain) {
  const auto n = kane_mele_block_cherns(m, domain);
  return (n[0] + n[1]) - (n[2] + n[3]);
}

double cs_coefficient(int n, const ChernValue& chern) {
  if (n == 1) return chern.value / (4.0 * pi);
  if (n == 2) return chern.value / (24.0 * pi * pi);
  throw std::invalid_argument("Chern-Simons coefficient defined for n = 1 or 2 only");
}

}  // namespace fwtopo
