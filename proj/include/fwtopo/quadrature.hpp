#pragma once

#include <functional>
#include <vector>

namespace fwtopo {

struct IntegrationResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  int evaluations = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b] (GSL qag). converged is
// false when max_intervals runs out or roundoff stalls the refinement; the
// value and error estimate are still filled in.
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                     int max_intervals = 200);

// Nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

double integrate_fixed(const std::function<double(double)>& f, double a, double b, const GaussLegendreRule& rule);

// Trapezoid rule for a 2*pi-periodic integrand over one period (n nodes).
double integrate_periodic(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace fwtopo
