#include <doctest.h>

#include <random>

#include "fwtopo/models.hpp"
#include "fwtopo/spectral.hpp"
#include "support.hpp"

using namespace fwtopo;
using testing::momentum;

TEST_SUITE("models") {
  TEST_CASE("catalog shapes") {
    struct Row {
      const char* name;
      Eigen::Index dim;
      int momenta;
      bool has_t;
    };
    const Row rows[] = {{"dirac2p1", 2, 2, false},     {"kane_mele", 8, 2, true},      {"dirac4p1", 4, 4, true},
                        {"tri_3p1", 16, 3, true},       {"app_up_plus", 4, 4, false},   {"app_up_minus", 4, 4, false},
                        {"app_down_plus", 4, 4, false}, {"app_down_minus", 4, 4, false}};
    CHECK(catalog_names().size() == std::size(rows));
    for (const auto& r : rows) {
      const auto spec = catalog(r.name, 1.5);
      CAPTURE(r.name);
      CHECK(spec.name == r.name);
      CHECK(spec.rep.dim() == r.dim);
      CHECK(spec.momentum_dim() == r.momenta);
      CHECK(spec.time_reversal.has_value() == r.has_t);
      CHECK(spec.block_masses.size() == spec.rep.blocks().size());
      CHECK(spec.mass == 1.5);
    }
    CHECK_THROWS_AS(catalog("graphene"), std::invalid_argument);
    CHECK_THROWS_AS(catalog(""), std::invalid_argument);
  }

  TEST_CASE("block masses follow the mass signs") {
    const auto km = catalog("kane_mele", 0.7);
    REQUIRE(km.block_masses.size() == 4);
    CHECK(km.block_masses[0] == 0.7);
    CHECK(km.block_masses[1] == -0.7);
    CHECK(km.block_masses[2] == -0.7);
    CHECK(km.block_masses[3] == 0.7);
    CHECK(catalog("app_up_minus", 2.0).block_masses == std::vector<double>{-2.0});
  }

  TEST_CASE("Hamiltonians are Hermitian with the Dirac spectrum") {
    std::mt19937_64 rng(3);
    for (const auto& name : catalog_names()) {
      const auto spec = catalog(name, 0.9);
      for (int s = 0; s < 50; ++s) {
        const auto k = testing::random_box(rng, spec.momentum_dim(), 3.0);
        const ComplexMatrix h = spec.hamiltonian(k);
        CHECK(is_hermitian(h));
        double e2 = k.squaredNorm() + 0.81;
        for (double b : spec.background) e2 += b * b;
        CHECK(max_abs_diff(h * h, e2 * identity(h.rows())) < 1e-10);
      }
      CHECK_THROWS_AS(spec.hamiltonian(Momentum::Zero(spec.momentum_dim() + 1)), std::invalid_argument);
    }
  }

  TEST_CASE("Kane-Mele time reversal is s_y tau_y") {
    const auto km = catalog("kane_mele");
    const ComplexMatrix expected = kron(kron(pauli::y(), pauli::y()), pauli::id());
    CHECK(max_abs_diff(km.time_reversal->unitary, expected) == 0.0);
    CHECK(km.time_reversal->conjugate);
  }

  TEST_CASE("up-minus block written out") {
    const auto r4 = build_representation_4p1();
    const auto spec = catalog("app_up_minus", 1.2);
    const auto k = momentum({0.3, -1.1, 0.4, 2.0});
    const ComplexMatrix explicit_h = r4.alpha(0) * k(0) - r4.alpha(1) * k(1) + r4.alpha(2) * k(2) +
                                     r4.alpha(3) * k(3) - 1.2 * r4.beta();
    CHECK(max_abs_diff(spec.hamiltonian(k), explicit_h) < 1e-15);
  }

  TEST_CASE("single blocks reassemble the spin Hall Hamiltonian") {
    const auto tri = catalog("tri_3p1", 0.8);
    const char* order[] = {"app_up_plus", "app_up_minus", "app_down_plus", "app_down_minus"};
    std::mt19937_64 rng(4);
    for (int s = 0; s < 50; ++s) {
      const auto k3 = testing::random_box(rng, 3, 2.0);
      Momentum k4(4);
      k4 << k3, kTriBackground;
      const ComplexMatrix h = tri.hamiltonian(k3);
      ComplexMatrix assembled = ComplexMatrix::Zero(16, 16);
      for (int b = 0; b < 4; ++b) assembled.block(4 * b, 4 * b, 4, 4) = catalog(order[b], 0.8).hamiltonian(k4);
      CHECK(max_abs_diff(h, assembled) < 1e-15);
    }
  }

  TEST_CASE("time-reversal invariance") {
    CHECK(time_reversal_check(catalog("kane_mele")));
    CHECK(time_reversal_check(catalog("dirac4p1", -0.4)));
    CHECK(time_reversal_check(catalog("tri_3p1")));
    CHECK(time_reversal_check(reduced_3p1(0.0)));
    CHECK_FALSE(time_reversal_check(reduced_3p1(0.7)));
    CHECK_FALSE(time_reversal_check(reduced_3p1(-0.1)));
    CHECK(time_reversal_residual(reduced_3p1(0.7), momentum({0, 0, 0})) == doctest::Approx(1.4));
    for (const char* name : {"dirac2p1", "app_up_plus"}) CHECK_THROWS_AS(time_reversal_check(catalog(name)), std::invalid_argument);
    CHECK_THROWS_AS(reduced_3p1(std::nan("")), std::invalid_argument);
  }

  TEST_CASE("no 2x2 unitary makes the 2+1 Dirac model time-reversal invariant") {
    auto spec = catalog("dirac2p1");
    for (const ComplexMatrix& u : {pauli::id(), pauli::x(), pauli::y(), pauli::z(),
                                    ComplexMatrix((pauli::x() + pauli::y()) / std::sqrt(2.0))}) {
      spec.time_reversal = TimeReversal{u};
      CHECK_FALSE(time_reversal_check(spec));
    }
    spec.time_reversal = TimeReversal{2.0 * pauli::id()};
    CHECK_THROWS_AS(time_reversal_check(spec), std::invalid_argument);
  }

  TEST_CASE("spin Chern table") {
    const auto half = spin_chern_table(FillingDomain::half());
    REQUIRE(half.size() == 4);
    const char* labels[] = {"up+", "up-", "down+", "down-"};
    const double expected[] = {0.5, 0.5, -0.5, -0.5};
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(half[i].label == labels[i]);
      CHECK(half[i].value == doctest::Approx(expected[i]).epsilon(1e-15));
      total += half[i].value;
    }
    CHECK(total == doctest::Approx(0.0));
    const auto full = spin_chern_table(FillingDomain::full(), 2.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(full[i].value == doctest::Approx(2.0 * expected[i]));
    const auto flipped = spin_chern_table(FillingDomain::half(), -1.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(flipped[i].value == doctest::Approx(-expected[i]));
  }

  TEST_CASE("per-block quadrature reproduces the spin Chern table") {
    const auto table = spin_chern_table(FillingDomain::half(), 1.0);
    const auto tri = catalog("tri_3p1");
    for (int b = 0; b < 4; ++b) {
      QuadratureScheme scheme;
      scheme.block = b;
      const double q = chern2_quadrature(tri.rep, 1.0, Band::Positive, scheme).value;
      CHECK(std::abs(table[static_cast<std::size_t>(b)].value - kOrientation * q) < 1e-6);
    }
  }
}
