#include "fwtopo/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "fwtopo/berry.hpp"
#include "fwtopo/descendants.hpp"
#include "fwtopo/invariants.hpp"
#include "fwtopo/models.hpp"
#include "fwtopo/spectral.hpp"

namespace fwtopo {

using std::numbers::pi;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  Outcome() { detail.precision(12); }
  // Records one check; returns its result so callers can short-circuit.
  bool check(bool cond, const std::string& what) {
    if (!detail.str().empty()) detail << "; ";
    detail << what << (cond ? "" : " [violated]");
    ok = ok && cond;
    return cond;
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

Momentum random_in_ball(std::mt19937_64& rng, int d, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Momentum k(d);
  do {
    for (int i = 0; i < d; ++i) k(i) = normal(rng);
  } while (k.norm() < 1e-9);
  return k / k.norm() * radius * std::pow(unit(rng), 1.0 / d);
}

Momentum random_in_box(std::mt19937_64& rng, int d, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  Momentum k(d);
  for (int i = 0; i < d; ++i) k(i) = u(rng);
  return k;
}

void claim_n1_full(Outcome& o, const VerifyOptions& opt) {
  double v = chern1_energy(1.0, FillingDomain::full()).value;
  if (opt.inject_sign_fault) v = -v;
  o.check(v == 1.0, "N1(full) = " + fmt(v) + ", expected 1 exactly");
}

void claim_n1_half(Outcome& o) {
  const double v = chern1_energy(1.0, FillingDomain::half()).value;
  o.check(v == 0.5, "N1(half) = " + fmt(v) + ", expected 1/2 exactly (sigma_H = e^2/2h)");
}

void claim_n1_quadrature(Outcome& o) {
  const auto q = chern1_quadrature(build_representation_2p1(), 1.0);
  const double oracle = chern1_energy(1.0, FillingDomain::positive()).value;
  o.check(std::abs(q.value + 0.5) < 1e-6, "quadrature N1 = " + fmt(q.value) + " +- " + fmt(q.abs_error));
  o.check(std::abs(q.value - oracle) < 1e-6, "radial oracle " + fmt(oracle) + ", tol 1e-6");
}

void claim_kane_mele(Outcome& o) {
  const double dn = delta_chern_kane_mele(1.0, FillingDomain::half());
  const double sigma = spin_hall_conductivity_graphene(dn);
  o.check(dn == 2.0, "Delta N1 = " + fmt(dn) + ", expected 2 exactly");
  o.check(std::abs(sigma - 1.0 / (2.0 * pi)) < 1e-12, "sigma_SH = " + fmt(sigma) + " e, expected 1/2pi within 1e-12");
}

void claim_n2_energy(Outcome& o) {
  const double full = chern2_energy(1.0, FillingDomain::full()).value;
  const double half = chern2_energy(1.0, FillingDomain::half()).value;
  o.check(full == 1.0, "N2(full) = " + fmt(full) + ", expected 1");
  o.check(half == 0.5, "N2(half) = " + fmt(half) + ", expected 1/2");
}

void claim_n2_quadrature(Outcome& o) {
  const auto q = chern2_quadrature(build_representation_4p1(), 1.0);
  const double oracle = chern2_energy(1.0, FillingDomain::positive()).value;
  o.check(std::abs(q.value + 0.5) < 1e-5, "quadrature N2 = " + fmt(q.value) + " +- " + fmt(q.abs_error));
  o.check(std::abs(q.value - oracle) < 1e-5, "antiderivative oracle " + fmt(oracle) + ", tol 1e-5");
}

void claim_pointwise_curvature(Outcome& o) {
  std::mt19937_64 rng(7001);
  const double m = 1.0;
  for (const auto& rep : {build_representation_2p1(), build_representation_4p1()}) {
    const int d = rep.space_dim();
    double fd_worst = 0.0, eps_worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const Momentum k = random_in_ball(rng, d, 5.0);
      const auto cf = berry_curvature(rep, k, m, CurvatureMethod::closed_form());
      const auto fd = berry_curvature(rep, k, m, CurvatureMethod::finite_diff());
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) fd_worst = std::max(fd_worst, max_abs_diff(cf.upper(i, j), fd.upper(i, j)));
      if (d == 4) {
        const double e = dirac_energy(k, m);
        eps_worst = std::max(eps_worst, std::abs(epsilon_trace_ff(cf) + 12.0 * m / std::pow(e, 5)));
      }
    }
    o.check(fd_worst < 1e-6, "d=" + std::to_string(d) + " |F_closed - F_fd| = " + fmt(fd_worst) + " < 1e-6");
    if (d == 4) o.check(eps_worst < 1e-10, "|eps tr FF + 12m/E^5| = " + fmt(eps_worst) + " < 1e-10");
  }
}

void claim_pure_gauge_flat(Outcome& o) {
  std::mt19937_64 rng(7002);
  for (const auto& rep : {build_representation_2p1(), build_representation_4p1(), kane_mele_representation()}) {
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      const Momentum k = random_in_box(rng, rep.space_dim(), 3.0);
      const double m = s % 2 ? 1.0 : -0.7;
      auto field = [&](const Momentum& q) { return pure_gauge_field(rep, q, m); };
      const auto f = finite_difference_curvature(field, k, default_fd_step(k), true);
      for (int i = 0; i < rep.space_dim(); ++i)
        for (int j = i + 1; j < rep.space_dim(); ++j) worst = std::max(worst, max_abs(f.upper(i, j)));
    }
    o.check(worst < 1e-5, "dim " + std::to_string(rep.dim()) + " max |F[A^U]| = " + fmt(worst) + " < 1e-5");
  }
}

void claim_spin_blocks(Outcome& o) {
  std::mt19937_64 rng(7003);
  const double m = 1.0;
  const std::pair<const char*, const char*> pairs[] = {{"app_up_plus", "app_down_plus"},
                                                       {"app_up_minus", "app_down_minus"}};
  double worst = 0.0;
  for (const auto& [up_name, down_name] : pairs) {
    const auto up = catalog(up_name, m);
    const auto down = catalog(down_name, m);
    for (int s = 0; s < 100; ++s) {
      const Momentum k = random_in_box(rng, 4, 3.0);
      Momentum reflected = k;
      reflected(3) = -k(3);
      const auto a_up = berry_connection(up.rep, reflected, m);
      const auto a_down = berry_connection(down.rep, k, m);
      for (int i = 0; i < 4; ++i)
        worst = std::max(worst, max_abs_diff(a_down.components[static_cast<std::size_t>(i)],
                                             (i == 3 ? -1.0 : 1.0) * a_up.components[static_cast<std::size_t>(i)]));
      const auto f_up = berry_curvature(up.rep, reflected, m, CurvatureMethod::analytic_diff());
      const auto f_down = berry_curvature(down.rep, k, m, CurvatureMethod::analytic_diff());
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          const double sign = (j == 3) ? -1.0 : 1.0;
          worst = std::max(worst, max_abs_diff(f_down.upper(i, j), sign * f_up.upper(i, j)));
        }
    }
  }
  o.check(worst < 1e-12, "k4 -> -k4 sign maps, max deviation " + fmt(worst) + " < 1e-12");
  const auto table = spin_chern_table(FillingDomain::half(), m);
  const double expected[] = {0.5, 0.5, -0.5, -0.5};
  std::string row;
  bool table_ok = table.size() == 4;
  for (std::size_t i = 0; i < table.size(); ++i) {
    row += (i ? ", " : "") + table[i].label + " " + fmt(table[i].value);
    table_ok = table_ok && i < 4 && table[i].value == expected[i];
  }
  o.check(table_ok, "spin Chern table (" + row + ")");
}

void claim_time_reversal(Outcome& o) {
  for (const char* name : {"kane_mele", "dirac4p1", "tri_3p1"}) {
    const bool tri = time_reversal_check(catalog(name), 100);
    o.check(tri, std::string(name) + (tri ? " invariant" : " not invariant"));
  }
  const bool broken = !time_reversal_check(reduced_3p1(kTriBackground), 100);
  o.check(broken, std::string("alpha_4 theta~ term with T = alpha_2 alpha_4 K ") + (broken ? "breaks T" : "keeps T"));
}

void claim_descendants(Outcome& o) {
  const double dp = charge_polarization(2.0 * pi, 1.0) - charge_polarization(0.0, 1.0);
  o.check(std::abs(dp - 1.0) < 1e-12, "Delta P = " + fmt(dp));

  for (const double dz : {pi, 2.0 * pi / 3.0}) {
    std::vector<double> x, z;
    const double l = 8.0;
    for (int i = 0; i <= 200; ++i) {
      const double xi = -l + 2.0 * l * i / 200.0;
      x.push_back(xi);
      z.push_back(dz * (std::tanh(xi) + std::tanh(l)) / (2.0 * std::tanh(l)));
    }
    const double q = goldstone_wilczek_charge(DomainWallProfile(x, z));
    o.check(std::abs(q - dz / (2.0 * pi)) < 1e-12, "Q(" + fmt(dz) + ") = " + fmt(q));
  }

  const double dp3 = magnetoelectric_polarization(2.0 * pi, 1.0) - magnetoelectric_polarization(0.0, 1.0);
  o.check(std::abs(dp3 - 1.0) < 1e-12, "Delta P3 = " + fmt(dp3));

  const double sh = surface_hall_conductivity(2.0 * pi, 0.5);
  o.check(std::abs(sh - 1.0 / (4.0 * pi)) < 1e-12, "sigma_H = " + fmt(sh) + " e^2/hbar");

  const double ssh = spin_hall_conductivity_3p1(spin_chern_table(FillingDomain::half()));
  o.check(std::abs(ssh - 1.0 / (2.0 * pi)) < 1e-12, "sigma_SH = " + fmt(ssh) + " e");

  for (const double n2 : {1.0, 0.5}) {
    const auto field = omega_field(uniform_grid(0.0, 2.0 * pi, 400), uniform_grid(0.0, pi, 400), n2);
    const double q = skyrmion_charge(field);
    o.check(std::abs(q - n2) < 1e-4, "Skyrmion charge(N2=" + fmt(n2) + ") = " + fmt(q));
  }

  const double pumped = pumped_charge(0.5);
  o.check(std::abs(pumped - 0.5) < 1e-12, "pumped charge = " + fmt(pumped));
}

void claim_structural(Outcome& o) {
  std::vector<Representation> reps = {build_representation_2p1(), build_representation_4p1(),
                                      kane_mele_representation(), spin_hall_4p1_representation()};
  for (const auto& name : catalog_names()) reps.push_back(catalog(name).rep);
  double clifford = 0.0;
  for (const auto& r : reps) clifford = std::max(clifford, clifford_residual(r));
  o.check(clifford < kMatrixTol, "Clifford residual " + fmt(clifford));

  std::mt19937_64 rng(7012);
  std::uniform_real_distribution<double> mass(0.2, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  double unitary = 0.0, diag = 0.0, proj = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    const auto& rep = reps[static_cast<std::size_t>(s) % 4];
    const double m = coin(rng) ? mass(rng) : -mass(rng);
    const Momentum k = random_in_box(rng, rep.space_dim(), 5.0);
    const auto sd = spectral_data(rep, k, m);
    const auto n = rep.dim();
    const ComplexMatrix one = identity(n);
    const double scale = std::max(1.0, sd.energy);
    unitary = std::max(unitary, max_abs_diff(sd.fw_unitary * sd.fw_unitary.adjoint(), one));
    const ComplexMatrix h = hamiltonian(rep, k, m);
    diag = std::max(diag, max_abs_diff(sd.fw_unitary * h * sd.fw_unitary.adjoint(), sd.energy * sd.beta_eff) / scale);
    proj = std::max({proj, max_abs_diff(sd.proj_plus + sd.proj_minus, one),
                     max_abs_diff(sd.proj_plus * sd.proj_plus, sd.proj_plus), max_abs(sd.proj_plus * sd.proj_minus),
                     max_abs_diff(h * sd.proj_plus, sd.energy * sd.proj_plus) / scale});
  }
  o.check(unitary < kMatrixTol, "|U U^dag - 1| = " + fmt(unitary));
  o.check(diag < kMatrixTol, "|U H U^dag - E beta_eff| / E = " + fmt(diag));
  o.check(proj < kMatrixTol, "projector residual " + fmt(proj));

  std::uniform_real_distribution<double> chern(-3.0, 3.0);
  double norm = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double c = chern(rng);
    const ReductionCoefficient g = s % 3 == 0 ? g_theta(c) : s % 3 == 1 ? g3_phi3(c) : g2_phi2phi3(c);
    norm = std::max(norm, std::abs(g.normalization() - c));
  }
  o.check(norm < 1e-10, "reduction normalization deviation " + fmt(norm));
  o.detail << " (" << samples << " samples)";
}

struct Claim {
  int id;
  const char* anchor;
  double budget_ms;
  std::function<void(Outcome&)> run;
};

}  // namespace

std::vector<ClaimResult> run_acceptance(const VerifyOptions& options) {
  const std::vector<Claim> claims = {
      {1, "N1 over both energy branches = 1", 1.0, [&](Outcome& o) { claim_n1_full(o, options); }},
      {2, "N1 half-filled (E_F = m) = 1/2, sigma_H = e^2/2h", 1.0, claim_n1_half},
      {3, "N1 positive band by momentum quadrature = -1/2", 1000.0, claim_n1_quadrature},
      {4, "Kane-Mele Delta N1 = 2, sigma_SH = e/2pi", 10.0, claim_kane_mele},
      {5, "N2 both branches = 1, half-filled = 1/2", 1.0, claim_n2_energy},
      {6, "N2 positive band by momentum quadrature = -1/2", 30000.0, claim_n2_quadrature},
      {7, "closed-form curvature vs finite differences; eps tr FF = -12m/E^5", 10000.0, claim_pointwise_curvature},
      {8, "pure gauge field A^U has vanishing field strength", 5000.0, claim_pure_gauge_flat},
      {9, "spin-down blocks from spin-up under k4 -> -k4; N2 table (1/2, 1/2, -1/2, -1/2)", 10000.0, claim_spin_blocks},
      {10, "time reversal: Kane-Mele, 4+1 Dirac, decorated 3+1 invariant; alpha_4 theta~ breaks it", 1000.0,
       claim_time_reversal},
      {11, "descendants: Delta P, Goldstone-Wilczek Q, Delta P3, sigma_H, sigma_SH, Skyrmion and pumped charge",
       5000.0, claim_descendants},
      {12, "structural invariants: Clifford algebra, FW unitarity, projectors, coefficient normalization", 30000.0,
       claim_structural},
  };

  std::vector<ClaimResult> out;
  for (const auto& c : claims) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    ClaimResult r{c.id, c.anchor, o.ok, o.detail.str(), ms, c.budget_ms};
    if (ms > c.budget_ms) {
      r.passed = false;
      r.detail += "; runtime " + fmt(ms) + " ms over budget " + fmt(c.budget_ms) + " ms";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fwtopo
