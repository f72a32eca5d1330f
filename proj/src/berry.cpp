#include "fwtopo/berry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fwtopo {

CurvatureField::CurvatureField(int space_dim, Momentum at) : d_(space_dim), at_(std::move(at)) {
  upper_.resize(static_cast<std::size_t>(d_ * (d_ - 1) / 2));
}

std::size_t CurvatureField::slot(int i, int j) const {
  if (i < 0 || j >= d_ || i >= j) throw std::out_of_range("curvature component requires 0 <= i < j < d");
  // Row-major strictly-upper-triangular index.
  return static_cast<std::size_t>(i * d_ - i * (i + 1) / 2 + (j - i - 1));
}

const ComplexMatrix& CurvatureField::upper(int i, int j) const { return upper_[slot(i, j)]; }
ComplexMatrix& CurvatureField::upper(int i, int j) { return upper_[slot(i, j)]; }

ComplexMatrix CurvatureField::operator()(int i, int j) const {
  if (i == j) throw std::invalid_argument("F_ii is not stored");
  return i < j ? upper(i, j) : ComplexMatrix(-upper(j, i));
}

double default_fd_step(const Momentum& k) { return 1e-4 * std::max(1.0, k.norm()); }

namespace {

Momentum shifted(const Momentum& k, int axis, double delta) {
  Momentum q = k;
  q(axis) += delta;
  return q;
}

// (rho_I rho_J^dag - rho_J rho_I^dag) for every pair.
std::vector<std::vector<ComplexMatrix>> rho_pairs(const std::vector<ComplexMatrix>& rho) {
  const std::size_t d = rho.size();
  std::vector<std::vector<ComplexMatrix>> m(d, std::vector<ComplexMatrix>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m[i][j] = rho[i] * rho[j].adjoint() - rho[j] * rho[i].adjoint();
  return m;
}

// Curvature of alpha.k + |m| beta on one plain block with the positive
// subspace in the upper half.
std::vector<ComplexMatrix> block_curvature_up(BaseFamily family, const Momentum& k, double am) {
  if (family == BaseFamily::Dirac2p1) {
    const double e = dirac_energy(k, am);
    ComplexMatrix f(1, 1);
    f(0, 0) = -am / (2.0 * e * e * e);
    return {f};
  }
  return dirac4p1_curvature_up_plus(k, am);
}

}  // namespace

std::vector<ComplexMatrix> dirac4p1_curvature_up_plus(const Momentum& k, double m) {
  if (k.size() != 4) throw std::invalid_argument("4+1 curvature needs four momentum components");
  if (!(m > 0.0)) throw std::invalid_argument("up-plus block curvature needs m > 0");
  const double k1 = k(0), k2 = k(1), k3 = k(2), k4 = k(3);
  const double e = dirac_energy(k, m);
  const double p = e * (e + m);
  const double den = 2.0 * e * e * e * (e + m);
  const ComplexMatrix s1 = pauli::x(), s2 = pauli::y(), s3 = pauli::z();

  std::vector<ComplexMatrix> f(6);
  f[0] = s3 * (-p + k1 * k1 + k2 * k2) + s2 * (k1 * k4 - k2 * k3) - s1 * (k2 * k4 + k1 * k3);  // 12
  f[1] = s2 * (p - k1 * k1 - k3 * k3) + s1 * (k1 * k2 - k3 * k4) + s3 * (k1 * k4 + k2 * k3);   // 13
  f[2] = s1 * (p - k1 * k1 - k4 * k4) - s2 * (k1 * k2 + k3 * k4) - s3 * (k1 * k3 - k2 * k4);   // 14
  f[3] = s1 * (-p + k2 * k2 + k3 * k3) - s2 * (k1 * k2 + k3 * k4) - s3 * (k1 * k3 - k2 * k4);  // 23
  f[4] = s2 * (p - k2 * k2 - k4 * k4) - s1 * (k1 * k2 - k3 * k4) - s3 * (k1 * k4 + k2 * k3);   // 24
  f[5] = s3 * (p - k3 * k3 - k4 * k4) + s2 * (k1 * k4 - k2 * k3) - s1 * (k2 * k4 + k1 * k3);   // 34
  for (auto& c : f) c /= den;
  return f;
}

ConnectionField pure_gauge_field(const Representation& rep, const Momentum& k, double m) {
  const SpectralData sd = spectral_data(rep, k, m);
  const double e = sd.energy;
  const double am = std::abs(m);
  const int d = rep.space_dim();
  const auto& beta = sd.beta_eff;

  ComplexMatrix alpha_k = ComplexMatrix::Zero(rep.dim(), rep.dim());
  for (int j = 0; j < d; ++j) alpha_k += k(j) * rep.alpha(j);

  const Complex pref = kI / (2.0 * e * e * (e + am));
  ConnectionField out{{}, k};
  for (int i = 0; i < d; ++i) {
    ComplexMatrix term = e * (e + am) * rep.alpha(i) * beta + beta * alpha_k * k(i);
    for (int j = 0; j < d; ++j)
      if (j != i) term -= kI * e * k(j) * sigma_tensor(rep, i, j);
    out.components.push_back(pref * term);
  }
  return out;
}

ConnectionField pure_gauge_field_numeric(const Representation& rep, const Momentum& k, double m, double h) {
  if (h <= 0.0) h = default_fd_step(k);
  const ComplexMatrix u = fw_unitary(rep, k, m);
  ConnectionField out{{}, k};
  for (int i = 0; i < rep.space_dim(); ++i) {
    const ComplexMatrix du = (fw_unitary(rep, shifted(k, i, h), m) - fw_unitary(rep, shifted(k, i, -h), m)) / (2.0 * h);
    out.components.push_back(kI * u * du.adjoint());
  }
  return out;
}

ConnectionField berry_connection(const Representation& rep, const Momentum& k, double m) {
  require_momentum(rep, k);
  const auto rho = effective_rho(rep, m);
  const double e = dirac_energy(k, m);
  const double am = std::abs(m);
  const auto pairs = rho_pairs(rho);
  const Complex c = -kI / (4.0 * e * (e + am));
  const auto h = rep.dim() / 2;

  ConnectionField out{{}, k};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(h, h);
    for (std::size_t j = 0; j < rho.size(); ++j)
      if (j != i) a += k(static_cast<Eigen::Index>(j)) * pairs[i][j];
    out.components.push_back(c * a);
  }
  return out;
}

bool has_closed_form(const Representation& rep) { return rep.family() != BaseFamily::Custom; }

namespace {

CurvatureField closed_form_curvature(const Representation& rep, const Momentum& k, double m) {
  if (!has_closed_form(rep))
    throw std::invalid_argument("no closed-form curvature for a custom representation");
  require_momentum(rep, k);
  const int d = rep.space_dim();
  const double am = std::abs(m);
  const int msign = m > 0.0 ? 1 : -1;
  const auto half = rep.block_size() / 2;
  const auto total = rep.dim() / 2;

  CurvatureField f(d, k);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) f.upper(i, j) = ComplexMatrix::Zero(total, total);

  for (std::size_t b = 0; b < rep.blocks().size(); ++b) {
    const auto& block = rep.blocks()[b];
    // Sign flips t map this block onto the up-plus block: a flipped alpha is a
    // reflected momentum axis, a flipped mass reflects the last axis (the
    // rho -> rho^dag swap equals that reflection for both base families).
    std::vector<double> t(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) t[static_cast<std::size_t>(a)] = block.alpha_signs[static_cast<std::size_t>(a)];
    if (block.mass_sign * msign < 0) t.back() = -t.back();

    Momentum q = k;
    for (int a = 0; a < d; ++a) q(a) *= t[static_cast<std::size_t>(a)];
    const auto base = block_curvature_up(rep.family(), q, am);

    const auto offset = static_cast<Eigen::Index>(b) * half;
    std::size_t n = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j, ++n) {
        const double sign = t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)];
        f.upper(i, j).block(offset, offset, half, half) = sign * base[n];
      }
    }
  }
  return f;
}

CurvatureField analytic_curvature(const Representation& rep, const Momentum& k, double m, bool commutator_term) {
  require_momentum(rep, k);
  const int d = rep.space_dim();
  const auto rho = effective_rho(rep, m);
  const auto pairs = rho_pairs(rho);
  const double e = dirac_energy(k, m);
  const double am = std::abs(m);
  const Complex c = -kI / (4.0 * e * (e + am));
  const Complex dc = kI * (2.0 * e + am) / (4.0 * e * e * (e + am) * (e + am));
  const auto h = rep.dim() / 2;

  // B_I = sum_J M_IJ k_J so that A_I = c(E) B_I.
  std::vector<ComplexMatrix> b(static_cast<std::size_t>(d), ComplexMatrix::Zero(h, h));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) b[static_cast<std::size_t>(i)] += k(j) * pairs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  // d_K A_I = c'(E) (k_K / E) B_I + c M_IK
  auto deriv = [&](int kk, int i) -> ComplexMatrix {
    ComplexMatrix out = dc * (k(kk) / e) * b[static_cast<std::size_t>(i)];
    if (kk != i) out += c * pairs[static_cast<std::size_t>(i)][static_cast<std::size_t>(kk)];
    return out;
  };

  CurvatureField f(d, k);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix fij = deriv(i, j) - deriv(j, i);
      if (commutator_term) {
        const ComplexMatrix ai = c * b[static_cast<std::size_t>(i)];
        const ComplexMatrix aj = c * b[static_cast<std::size_t>(j)];
        fij -= kI * commutator(ai, aj);
      }
      f.upper(i, j) = fij;
    }
  }
  return f;
}

}  // namespace

CurvatureField finite_difference_curvature(const std::function<ConnectionField(const Momentum&)>& connection,
                                           const Momentum& k, double h, bool include_commutator) {
  const int d = static_cast<int>(k.size());
  const ConnectionField a0 = connection(k);
  std::vector<std::vector<ComplexMatrix>> da(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto plus = connection(shifted(k, i, h));
    const auto minus = connection(shifted(k, i, -h));
    for (int j = 0; j < d; ++j) {
      da[static_cast<std::size_t>(i)].push_back((plus.components[static_cast<std::size_t>(j)] -
                                                 minus.components[static_cast<std::size_t>(j)]) /
                                                (2.0 * h));
    }
  }

  CurvatureField f(d, k);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix fij = da[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                          da[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (include_commutator)
        fij -= kI * commutator(a0.components[static_cast<std::size_t>(i)], a0.components[static_cast<std::size_t>(j)]);
      f.upper(i, j) = fij;
    }
  }
  return f;
}

CurvatureField berry_curvature(const Representation& rep, const Momentum& k, double m, CurvatureMethod method) {
  switch (method.kind) {
    case CurvatureMethod::Kind::ClosedForm:
      return closed_form_curvature(rep, k, m);
    case CurvatureMethod::Kind::AnalyticDiff:
      return analytic_curvature(rep, k, m, true);
    case CurvatureMethod::Kind::FiniteDiff: {
      require_momentum(rep, k);
      if (method.step < 0.0 || !std::isfinite(method.step))
        throw std::invalid_argument("finite-difference step must be positive (0 selects the default)");
      const double h = method.step > 0.0 ? method.step : default_fd_step(k);
      auto f = finite_difference_curvature([&](const Momentum& q) { return berry_connection(rep, q, m); }, k, h);
      if (h < 1e-8) {
        std::ostringstream msg;
        msg << "finite-difference step " << h << " is below 1e-8; expect cancellation error";
        f.warnings.push_back(msg.str());
      }
      return f;
    }
  }
  throw std::logic_error("unknown curvature method");
}

CurvatureField berry_curvature_abelian_part(const Representation& rep, const Momentum& k, double m) {
  return analytic_curvature(rep, k, m, false);
}

namespace {

CurvatureField best_curvature(const Representation& rep, const Momentum& k, double m) {
  return berry_curvature(rep, k, m,
                         has_closed_form(rep) ? CurvatureMethod::closed_form() : CurvatureMethod::analytic_diff());
}

std::pair<Eigen::Index, Eigen::Index> trace_window(const Representation& rep, std::optional<int> block) {
  if (!block) return {0, rep.dim() / 2};
  if (*block < 0 || *block >= static_cast<int>(rep.blocks().size()))
    throw std::out_of_range("block index out of range");
  const auto half = rep.block_size() / 2;
  return {static_cast<Eigen::Index>(*block) * half, half};
}

}  // namespace

double first_chern_density(const Representation& rep, const Momentum& k, double m, std::optional<int> block) {
  if (rep.space_dim() != 2) throw std::invalid_argument("first Chern density needs a 2-dimensional representation");
  const auto f = best_curvature(rep, k, m);
  const auto [offset, size] = trace_window(rep, block);
  return f.upper(0, 1).block(offset, offset, size, size).trace().real();
}

double epsilon_trace_ff(const CurvatureField& f, Eigen::Index offset, Eigen::Index size) {
  if (f.space_dim() != 4) throw std::invalid_argument("epsilon tr(FF) needs d = 4");
  if (size < 0) size = f.upper(0, 1).rows() - offset;
  auto blk = [&](int i, int j) { return f.upper(i, j).block(offset, offset, size, size); };
  // The 24 terms of epsilon_ijkl F_ij F_kl collapse to 8 times the three
  // pairings of {1,2,3,4}.
  const Complex t = (blk(0, 1) * blk(2, 3)).trace() - (blk(0, 2) * blk(1, 3)).trace() + (blk(0, 3) * blk(1, 2)).trace();
  return 8.0 * t.real();
}

double chern_integrand_4p1(const Representation& rep, const Momentum& k, double m, std::optional<int> block) {
  if (rep.space_dim() != 4) throw std::invalid_argument("second Chern integrand needs a 4-dimensional representation");
  const auto f = best_curvature(rep, k, m);
  const auto [offset, size] = trace_window(rep, block);
  return epsilon_trace_ff(f, offset, size);
}

}  // namespace fwtopo
