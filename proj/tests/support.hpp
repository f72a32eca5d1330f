#pragma once

#include <random>

#include "fwtopo/matrix.hpp"

namespace testing {

inline fwtopo::Momentum random_box(std::mt19937_64& rng, int d, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  fwtopo::Momentum k(d);
  for (int i = 0; i < d; ++i) k(i) = u(rng);
  return k;
}

inline fwtopo::Momentum momentum(std::initializer_list<double> v) {
  fwtopo::Momentum k(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) k(i++) = x;
  return k;
}

inline double random_mass(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  std::bernoulli_distribution negative(0.5);
  const double m = mag(rng);
  return negative(rng) ? -m : m;
}

}  // namespace testing
