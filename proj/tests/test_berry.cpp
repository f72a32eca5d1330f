#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "fwtopo/berry.hpp"
#include "fwtopo/models.hpp"
#include "support.hpp"

using namespace fwtopo;
using testing::momentum;

namespace {

const Complex I{0.0, 1.0};

std::vector<Representation> all_reps() {
  std::vector<Representation> reps = {build_representation_2p1(), build_representation_4p1(),
                                      kane_mele_representation(), spin_hall_4p1_representation()};
  for (const char* n : {"app_up_minus", "app_down_plus", "app_down_minus"}) reps.push_back(catalog(n).rep);
  return reps;
}

// Explicit spin-up block connection; pm = +1 for up+, -1 for up-.
std::array<ComplexMatrix, 4> up_connection_oracle(const Momentum& k, double m, int pm) {
  const double e = std::sqrt(k.squaredNorm() + m * m);
  const double c = 1.0 / (2.0 * e * (e + m));
  const ComplexMatrix s1 = pauli::x(), s2 = pauli::y(), s3 = pauli::z();
  return {c * (pm * s3 * k(1) - s2 * k(2) - pm * s1 * k(3)), c * (-pm * s3 * k(0) + pm * s1 * k(2) - s2 * k(3)),
          c * (s2 * k(0) - pm * s1 * k(1) - pm * s3 * k(3)), c * (pm * s1 * k(0) + s2 * k(1) + pm * s3 * k(2))};
}

// Explicit spin-up block curvature, in the order 12, 13, 14, 23, 24, 34.
std::array<ComplexMatrix, 6> up_curvature_oracle(const Momentum& k, double m, int pm) {
  const double e = std::sqrt(k.squaredNorm() + m * m);
  const double p = e * (e + m);
  const double c = 1.0 / (2.0 * e * e * e * (e + m));
  const ComplexMatrix s1 = pauli::x(), s2 = pauli::y(), s3 = pauli::z();
  const double k1 = k(0), k2 = k(1), k3 = k(2), k4 = k(3);
  return {c * (-pm * s3 * (p - k1 * k1 - k2 * k2) + s2 * (k1 * k4 - k2 * k3) - pm * s1 * (k2 * k4 + k1 * k3)),
          c * (s2 * (p - k1 * k1 - k3 * k3) + pm * s1 * (k1 * k2 - k3 * k4) + pm * s3 * (k1 * k4 + k2 * k3)),
          c * (pm * s1 * (p - k1 * k1 - k4 * k4) - s2 * (k1 * k2 + k3 * k4) - pm * s3 * (k1 * k3 - k2 * k4)),
          c * (-pm * s1 * (p - k2 * k2 - k3 * k3) - s2 * (k1 * k2 + k3 * k4) - pm * s3 * (k1 * k3 - k2 * k4)),
          c * (s2 * (p - k2 * k2 - k4 * k4) - pm * s1 * (k1 * k2 - k3 * k4) - pm * s3 * (k1 * k4 + k2 * k3)),
          c * (pm * s3 * (p - k3 * k3 - k4 * k4) + s2 * (k1 * k4 - k2 * k3) - pm * s1 * (k2 * k4 + k1 * k3))};
}

// Brute-force contraction over all 24 permutations.
double levi_civita_oracle(const CurvatureField& f) {
  std::array<int, 4> p = {0, 1, 2, 3};
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) inversions += p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)];
    const double sign = inversions % 2 ? -1.0 : 1.0;
    total += sign * (f(p[0], p[1]) * f(p[2], p[3])).trace().real();
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace

TEST_SUITE("berry") {
  TEST_CASE("pure gauge field at k = 0 is (i/2m) alpha beta") {
    for (const auto& rep : {build_representation_2p1(), build_representation_4p1()}) {
      const double m = 0.9;
      const auto a = pure_gauge_field(rep, Momentum::Zero(rep.space_dim()), m);
      for (int i = 0; i < rep.space_dim(); ++i) {
        const ComplexMatrix expected = (I / (2.0 * m)) * rep.alpha(i) * rep.beta();
        CHECK(max_abs_diff(a.components[static_cast<std::size_t>(i)], expected) < kMatrixTol);
      }
    }
  }

  TEST_CASE("pure gauge closed form agrees with differentiated U") {
    std::mt19937_64 rng(5);
    for (const auto& rep : all_reps()) {
      double worst = 0.0;
      for (int s = 0; s < 50; ++s) {
        const double m = testing::random_mass(rng);
        const auto k = testing::random_box(rng, rep.space_dim(), 3.0);
        const auto a = pure_gauge_field(rep, k, m);
        const auto b = pure_gauge_field_numeric(rep, k, m, 1e-4);
        for (std::size_t i = 0; i < a.components.size(); ++i)
          worst = std::max(worst, max_abs_diff(a.components[i], b.components[i]));
      }
      CHECK(worst < 1e-6);
    }
  }

  TEST_CASE("connection examples") {
    const auto r2 = build_representation_2p1();
    const auto a = berry_connection(r2, momentum({1, 0}), 1.0);
    const double s2 = std::sqrt(2.0);
    CHECK(std::abs(a.components[0](0, 0)) < kMatrixTol);
    CHECK(std::abs(a.components[1](0, 0) - Complex(-1.0 / (2.0 * s2 * (s2 + 1.0)), 0.0)) < kMatrixTol);
    CHECK(a.components[1](0, 0).real() == doctest::Approx(-0.146447).epsilon(1e-5));

    const auto r4 = build_representation_4p1();
    const auto b = berry_connection(r4, momentum({0, 0, 0, 1}), 1.0);
    CHECK(max_abs(b.components[3]) < kMatrixTol);
    CHECK(max_abs_diff(b.components[0], -pauli::x() / (2.0 * s2 * (s2 + 1.0))) < kMatrixTol);

    for (const auto& rep : all_reps()) {
      const auto z = berry_connection(rep, Momentum::Zero(rep.space_dim()), 1.3);
      for (const auto& c : z.components) CHECK(max_abs(c) == 0.0);
    }
  }

  TEST_CASE("projected pure gauge field equals the Berry connection") {
    std::mt19937_64 rng(6);
    for (const auto& rep : all_reps()) {
      double worst = 0.0, herm = 0.0;
      for (int s = 0; s < 1000; ++s) {
        const double m = testing::random_mass(rng);
        const auto k = testing::random_box(rng, rep.space_dim(), 4.0);
        const auto full = pure_gauge_field(rep, k, m);
        const auto a = berry_connection(rep, k, m);
        const ComplexMatrix v = positive_isometry(rep, m);
        for (std::size_t i = 0; i < a.components.size(); ++i) {
          worst = std::max(worst, max_abs_diff(v.adjoint() * full.components[i] * v, a.components[i]));
          herm = std::max(herm, max_abs_diff(a.components[i], a.components[i].adjoint()));
        }
      }
      CHECK(worst < kMatrixTol);
      CHECK(herm < kMatrixTol);
    }
  }

  TEST_CASE("curvature examples") {
    const auto r2 = build_representation_2p1();
    CHECK(berry_curvature(r2, momentum({0, 0}), 1.0).upper(0, 1)(0, 0).real() == doctest::Approx(-0.5).epsilon(1e-15));

    const auto r4 = build_representation_4p1();
    const auto f = berry_curvature(r4, Momentum::Zero(4), 1.0);
    CHECK(max_abs_diff(f.upper(0, 1), -0.5 * pauli::z()) < kMatrixTol);
    CHECK(max_abs_diff(f.upper(0, 3), 0.5 * pauli::x()) < kMatrixTol);

    const auto km = kane_mele_representation();
    std::mt19937_64 rng(8);
    for (int s = 0; s < 20; ++s) {
      const auto k = testing::random_box(rng, 2, 3.0);
      const double m = 0.7;
      const double e = std::sqrt(k.squaredNorm() + m * m);
      const double scalar = -m / (2.0 * e * e * e);
      const auto g = berry_curvature(km, k, m);
      Eigen::VectorXd expected(4);
      expected << scalar, scalar, -scalar, -scalar;
      CHECK(max_abs_diff(g.upper(0, 1), ComplexMatrix(expected.cast<Complex>().asDiagonal())) < kMatrixTol);
    }
  }

  TEST_CASE("curvature storage is antisymmetric") {
    const auto f = berry_curvature(build_representation_4p1(), momentum({0.2, 0.4, -0.1, 0.9}), 1.0);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) CHECK(max_abs_diff(f(j, i), -f.upper(i, j)) == 0.0);
    CHECK_THROWS(f.upper(2, 1));
    CHECK_THROWS(f(1, 1));
  }

  TEST_CASE("closed form, analytic and finite-difference curvature agree") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& rep : all_reps()) {
      double analytic = 0.0, numeric = 0.0, herm = 0.0;
      const int d = rep.space_dim();
      for (int s = 0; s < 200; ++s) {
        const double m = testing::random_mass(rng);
        Momentum k(d);
        for (int i = 0; i < d; ++i) k(i) = normal(rng);
        k *= 5.0 * std::abs(m) * std::pow(unit(rng), 1.0 / d) / k.norm();
        const auto cf = berry_curvature(rep, k, m, CurvatureMethod::closed_form());
        const auto ad = berry_curvature(rep, k, m, CurvatureMethod::analytic_diff());
        const auto fd = berry_curvature(rep, k, m, CurvatureMethod::finite_diff(1e-4));
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) {
            analytic = std::max(analytic, max_abs_diff(cf.upper(i, j), ad.upper(i, j)));
            numeric = std::max(numeric, max_abs_diff(cf.upper(i, j), fd.upper(i, j)));
            herm = std::max(herm, max_abs_diff(cf.upper(i, j), cf.upper(i, j).adjoint()));
          }
      }
      CAPTURE(rep.dim());
      CHECK(analytic < 1e-10);
      CHECK(numeric < 1e-6);
      CHECK(herm < kMatrixTol);
    }
  }

  TEST_CASE("dropping the commutator breaks the 4+1 closed form") {
    const auto r4 = build_representation_4p1();
    const auto k = momentum({1, 0, 0, 0});
    const auto full = berry_curvature(r4, k, 1.0);
    const auto abelian = berry_curvature_abelian_part(r4, k, 1.0);
    double gap = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) gap = std::max(gap, max_abs_diff(full.upper(i, j), abelian.upper(i, j)));
    CHECK(gap >= 1e-2);

    auto connection = [&](const Momentum& q) { return berry_connection(r4, q, 1.0); };
    const auto fd_abelian = finite_difference_curvature(connection, k, 1e-4, false);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) CHECK(max_abs_diff(fd_abelian.upper(i, j), abelian.upper(i, j)) < 1e-6);
  }

  TEST_CASE("pure gauge field is flat") {
    std::mt19937_64 rng(10);
    for (const auto& rep : all_reps()) {
      double worst = 0.0;
      for (int s = 0; s < 20; ++s) {
        const double m = testing::random_mass(rng);
        const auto k = testing::random_box(rng, rep.space_dim(), 3.0);
        auto field = [&](const Momentum& q) { return pure_gauge_field(rep, q, m); };
        const auto f = finite_difference_curvature(field, k, 1e-4);
        for (int i = 0; i < rep.space_dim(); ++i)
          for (int j = i + 1; j < rep.space_dim(); ++j) worst = std::max(worst, max_abs(f.upper(i, j)));
      }
      CHECK(worst < 1e-5);
    }
  }

  TEST_CASE("spin-up block connection and curvature match the explicit formulas") {
    std::mt19937_64 rng(12);
    const std::pair<const char*, int> blocks[] = {{"app_up_plus", 1}, {"app_up_minus", -1}};
    for (const auto& [name, pm] : blocks) {
      const auto spec = catalog(name);
      double a_worst = 0.0, f_worst = 0.0;
      for (int s = 0; s < 100; ++s) {
        const auto k = testing::random_box(rng, 4, 3.0);
        const double m = 0.5 + std::abs(testing::random_mass(rng));
        const auto a = berry_connection(spec.rep, k, m);
        const auto a_ref = up_connection_oracle(k, m, pm);
        for (std::size_t i = 0; i < 4; ++i) a_worst = std::max(a_worst, max_abs_diff(a.components[i], a_ref[i]));
        const auto f = berry_curvature(spec.rep, k, m, CurvatureMethod::analytic_diff());
        const auto f_ref = up_curvature_oracle(k, m, pm);
        std::size_t slot = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) f_worst = std::max(f_worst, max_abs_diff(f.upper(i, j), f_ref[slot++]));
        const auto cf = berry_curvature(spec.rep, k, m, CurvatureMethod::closed_form());
        slot = 0;
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) f_worst = std::max(f_worst, max_abs_diff(cf.upper(i, j), f_ref[slot++]));
      }
      CAPTURE(name);
      CHECK(a_worst < kMatrixTol);
      CHECK(f_worst < kMatrixTol);
    }
    const auto up = dirac4p1_curvature_up_plus(momentum({0.3, -0.2, 0.5, 1.1}), 1.4);
    const auto ref = up_curvature_oracle(momentum({0.3, -0.2, 0.5, 1.1}), 1.4, 1);
    for (std::size_t i = 0; i < 6; ++i) CHECK(max_abs_diff(up[i], ref[i]) < kMatrixTol);
  }

  TEST_CASE("spin-down blocks follow from spin-up under k4 -> -k4") {
    std::mt19937_64 rng(13);
    const std::pair<const char*, const char*> pairs[] = {{"app_up_plus", "app_down_plus"},
                                                         {"app_up_minus", "app_down_minus"}};
    for (const auto& [u, d] : pairs) {
      const auto up = catalog(u), down = catalog(d);
      double worst = 0.0;
      for (int s = 0; s < 100; ++s) {
        const auto k = testing::random_box(rng, 4, 3.0);
        Momentum r = k;
        r(3) = -k(3);
        const double m = 1.0;
        const auto au = berry_connection(up.rep, r, m), ad = berry_connection(down.rep, k, m);
        for (std::size_t i = 0; i < 4; ++i)
          worst = std::max(worst, max_abs_diff(ad.components[i], (i == 3 ? -1.0 : 1.0) * au.components[i]));
        const auto fu = berry_curvature(up.rep, r, m, CurvatureMethod::analytic_diff());
        const auto fdn = berry_curvature(down.rep, k, m, CurvatureMethod::analytic_diff());
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j)
            worst = std::max(worst, max_abs_diff(fdn.upper(i, j), (j == 3 ? -1.0 : 1.0) * fu.upper(i, j)));
      }
      CHECK(worst < kMatrixTol);
    }
  }

  TEST_CASE("second Chern integrand") {
    const auto r4 = build_representation_4p1();
    CHECK(chern_integrand_4p1(r4, Momentum::Zero(4), 1.0) == doctest::Approx(-12.0).epsilon(1e-14));
    CHECK(chern_integrand_4p1(r4, momentum({1, 1, 1, 1}), 1.0) == doctest::Approx(-0.214663).epsilon(1e-6));
    CHECK(std::abs(chern_integrand_4p1(r4, momentum({1, 1, 1, 1}), 1.0) + 12.0 / std::pow(5.0, 2.5)) < 1e-14);
    std::mt19937_64 rng(14);
    for (int s = 0; s < 200; ++s) {
      const auto k = testing::random_box(rng, 4, 4.0);
      const double m = std::abs(testing::random_mass(rng));
      const double e = std::sqrt(k.squaredNorm() + m * m);
      CHECK(std::abs(chern_integrand_4p1(r4, k, m) + 12.0 * m / std::pow(e, 5)) < 1e-10);
      CHECK(std::abs(chern_integrand_4p1(r4, k, -m) + chern_integrand_4p1(r4, k, m)) < 1e-12);
      const auto f = berry_curvature(r4, k, m, CurvatureMethod::analytic_diff());
      CHECK(std::abs(epsilon_trace_ff(f) - levi_civita_oracle(f)) < 1e-12);
    }
    CHECK_THROWS_AS(chern_integrand_4p1(build_representation_2p1(), momentum({0, 0}), 1.0), std::invalid_argument);
  }

  TEST_CASE("closed form needs a known family; tiny steps warn") {
    const auto custom = Representation::from_matrices({pauli::x(), pauli::y()}, pauli::z());
    CHECK_FALSE(has_closed_form(custom));
    CHECK_THROWS_AS(berry_curvature(custom, momentum({0.1, 0.2}), 1.0, CurvatureMethod::closed_form()),
                    std::invalid_argument);
    const auto ad = berry_curvature(custom, momentum({0.1, 0.2}), 1.0, CurvatureMethod::analytic_diff());
    const auto cf = berry_curvature(build_representation_2p1(), momentum({0.1, 0.2}), 1.0);
    CHECK(max_abs_diff(ad.upper(0, 1), cf.upper(0, 1)) < 1e-12);

    const auto tiny = berry_curvature(build_representation_2p1(), momentum({0.1, 0.2}), 1.0, CurvatureMethod::finite_diff(1e-9));
    CHECK_FALSE(tiny.warnings.empty());
    const auto fine = berry_curvature(build_representation_2p1(), momentum({0.1, 0.2}), 1.0, CurvatureMethod::finite_diff(1e-4));
    CHECK(fine.warnings.empty());
    CHECK(default_fd_step(momentum({0.1, 0.2})) == 1e-4);
    CHECK(default_fd_step(momentum({3.0, 4.0})) == doctest::Approx(5e-4));
    CHECK_THROWS_AS(berry_curvature(build_representation_2p1(), momentum({0.1, 0.2}), 1.0, CurvatureMethod::finite_diff(-1.0)),
                    std::invalid_argument);
  }
}
