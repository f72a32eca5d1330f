#include "fwtopo/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <exception>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fwtopo {

namespace {

// GSL aborts on errors by default; status codes are checked instead.
void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

// Carries the integrand through GSL's C callback. Exceptions must not unwind
// through C frames, so the first one is parked and rethrown afterwards.
struct Trampoline {
  const std::function<double(double)>* f;
  std::exception_ptr error;

  static double call(double x, void* self) {
    auto* t = static_cast<Trampoline*>(self);
    if (t->error) return 0.0;
    try {
      return (*t->f)(x);
    } catch (...) {
      t->error = std::current_exception();
      return 0.0;
    }
  }
};

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

struct TableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                     int max_intervals) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(b > a)) throw std::invalid_argument("integration interval must have b > a");
  if (max_intervals < 1) throw std::invalid_argument("max_intervals must be positive");
  silence_gsl();

  const auto limit = static_cast<std::size_t>(max_intervals);
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> work(gsl_integration_workspace_alloc(limit));
  if (!work) throw std::bad_alloc();

  Trampoline t{&f, nullptr};
  gsl_function fn{&Trampoline::call, &t};
  IntegrationResult out;
  const int status =
      gsl_integration_qag(&fn, a, b, abs_tol, 0.0, limit, GSL_INTEG_GAUSS15, work.get(), &out.value, &out.abs_error);
  if (t.error) std::rethrow_exception(t.error);

  out.intervals = static_cast<int>(work->size);
  out.evaluations = 15 * (2 * out.intervals - 1);
  out.converged = status == GSL_SUCCESS;
  return out;
}

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  std::unique_ptr<gsl_integration_glfixed_table, TableDeleter> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)));
  if (!table) throw std::bad_alloc();
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    gsl_integration_glfixed_point(-1.0, 1.0, i, &rule.nodes[i], &rule.weights[i], table.get());
  return rule;
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b, const GaussLegendreRule& rule) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  return sum * h;
}

double integrate_periodic(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("node count must be positive");
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

}  // namespace fwtopo
