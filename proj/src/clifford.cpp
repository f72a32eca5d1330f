#include "fwtopo/clifford.hpp"

#include <algorithm>
#include <stdexcept>

namespace fwtopo {

namespace {

ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<Eigen::Index>& rows,
                        const std::vector<Eigen::Index>& cols) {
  ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
  return out;
}

void require_sign_structure(const SignStructure& s) {
  for (int v : s)
    if (v != 1 && v != -1) throw std::invalid_argument("sign structure entries must be +1 or -1");
}

}  // namespace

std::vector<Eigen::Index> Representation::positive_indices(int sign) const {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (sign * beta_(i, i).real() > 0.0) idx.push_back(i);
  return idx;
}

void Representation::finalize() {
  const auto plus = positive_indices(1);
  const auto minus = positive_indices(-1);
  rho_.clear();
  for (const auto& a : alphas_) rho_.push_back(submatrix(a, plus, minus));
}

Representation Representation::from_matrices(std::vector<ComplexMatrix> alphas, ComplexMatrix beta) {
  const int d = static_cast<int>(alphas.size());
  if (d != 2 && d != 4) throw std::invalid_argument("space dimension must be 2 or 4");
  const auto n = beta.rows();
  if (beta.cols() != n || !is_supported_dim(n) || n < 2)
    throw std::invalid_argument("beta must be square with dimension 2, 4, 8 or 16");
  for (const auto& a : alphas)
    if (a.rows() != n || a.cols() != n) throw std::invalid_argument("alpha dimension mismatch");

  int plus = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && std::abs(beta(i, j)) > kMatrixTol)
        throw std::invalid_argument("beta must be diagonal");
    }
    const Complex b = beta(i, i);
    if (std::abs(std::abs(b.real()) - 1.0) > kMatrixTol || std::abs(b.imag()) > kMatrixTol)
      throw std::invalid_argument("beta diagonal entries must be +1 or -1");
    if (b.real() > 0.0) ++plus;
  }
  if (2 * plus != n) throw std::invalid_argument("beta must have equal numbers of +1 and -1 entries");

  Representation rep;
  rep.alphas_ = std::move(alphas);
  rep.beta_ = std::move(beta);
  rep.family_ = BaseFamily::Custom;
  rep.blocks_ = {BlockSigns{std::vector<int>(static_cast<std::size_t>(d), 1), 1}};
  rep.finalize();
  if (clifford_residual(rep) >= kMatrixTol)
    throw std::invalid_argument("matrices violate the Dirac algebra");
  return rep;
}

Representation build_representation_2p1() {
  Representation rep;
  rep.alphas_ = {pauli::x(), pauli::y()};
  rep.beta_ = pauli::z();
  rep.family_ = BaseFamily::Dirac2p1;
  rep.blocks_ = {BlockSigns{{1, 1}, 1}};
  rep.finalize();
  return rep;
}

Representation build_representation_4p1() {
  const std::array<ComplexMatrix, 3> s = {pauli::x(), pauli::y(), pauli::z()};
  const ComplexMatrix one = identity(2);
  const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);

  auto block = [&](const ComplexMatrix& upper_right) {
    ComplexMatrix a(4, 4);
    a << zero, upper_right, upper_right.adjoint(), zero;
    return a;
  };

  Representation rep;
  for (const auto& sigma : s) rep.alphas_.push_back(block(kI * sigma));
  rep.alphas_.push_back(block(-one));
  rep.beta_ = ComplexMatrix(4, 4);
  rep.beta_ << one, zero, zero, -one;
  rep.family_ = BaseFamily::Dirac4p1;
  rep.blocks_ = {BlockSigns{{1, 1, 1, 1}, 1}};
  rep.finalize();
  return rep;
}

ComplexMatrix sigma_tensor(const Representation& rep, int i, int j) {
  const int d = rep.space_dim();
  if (i < 0 || j < 0 || i >= d || j >= d) throw std::out_of_range("sigma_tensor axis out of range");
  if (i == j) throw std::invalid_argument("sigma_tensor requires distinct axes");
  return -0.5 * kI * commutator(rep.alpha(i), rep.alpha(j));
}

Representation kron_extend(const Representation& rep, std::span<const SignStructure> labels,
                           std::vector<BlockLabel> named) {
  const int d = rep.space_dim();
  if (static_cast<int>(labels.size()) != d + 1)
    throw std::invalid_argument("kron_extend needs one sign structure per alpha plus one for the mass");
  const std::size_t nb = labels.front().size();
  if (nb == 0) throw std::invalid_argument("sign structures must be non-empty");
  for (const auto& l : labels) {
    if (l.size() != nb) throw std::invalid_argument("sign structures differ in length");
    require_sign_structure(l);
  }
  const auto new_dim = static_cast<Eigen::Index>(nb) * rep.dim();
  if (!is_supported_dim(new_dim)) throw std::invalid_argument("extended dimension exceeds 16");
  for (const auto& n : named) {
    if (n.signs.size() != nb) throw std::invalid_argument("block label length mismatch");
    require_sign_structure(n.signs);
  }

  Representation out;
  for (int a = 0; a < d; ++a)
    out.alphas_.push_back(kron(sign_diagonal(labels[static_cast<std::size_t>(a)]), rep.alpha(a)));
  out.beta_ = kron(sign_diagonal(labels[static_cast<std::size_t>(d)]), rep.beta());
  out.family_ = rep.family();

  const std::size_t inner = rep.blocks().size();
  for (std::size_t b = 0; b < nb; ++b) {
    for (const auto& old : rep.blocks()) {
      BlockSigns bs;
      for (int a = 0; a < d; ++a)
        bs.alpha_signs.push_back(labels[static_cast<std::size_t>(a)][b] * old.alpha_signs[static_cast<std::size_t>(a)]);
      bs.mass_sign = labels[static_cast<std::size_t>(d)][b] * old.mass_sign;
      out.blocks_.push_back(std::move(bs));
    }
  }

  for (const auto& old : rep.block_labels()) {
    BlockLabel l{old.name, {}};
    for (std::size_t b = 0; b < nb; ++b) l.signs.insert(l.signs.end(), old.signs.begin(), old.signs.end());
    out.block_labels_.push_back(std::move(l));
  }
  for (auto& n : named) {
    BlockLabel l{std::move(n.name), {}};
    for (std::size_t b = 0; b < nb; ++b) l.signs.insert(l.signs.end(), inner, n.signs[b]);
    out.block_labels_.push_back(std::move(l));
  }

  out.finalize();
  return out;
}

SignStructure valley_tau_z() { return {1, -1, 1, -1}; }
SignStructure spin_s_z() { return {1, 1, -1, -1}; }
SignStructure block_identity(std::size_t blocks) { return SignStructure(blocks, 1); }

SignStructure sign_product(const SignStructure& a, const SignStructure& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sign structures differ in length");
  SignStructure out(a.size());
  std::transform(a.begin(), a.end(), b.begin(), out.begin(), std::multiplies<>());
  return out;
}

Representation kane_mele_representation() {
  const std::vector<SignStructure> labels = {valley_tau_z(), block_identity(4),
                                             sign_product(valley_tau_z(), spin_s_z())};
  return kron_extend(build_representation_2p1(), labels,
                     {{"tau_z", valley_tau_z()}, {"s_z", spin_s_z()}});
}

Representation spin_hall_4p1_representation() {
  const std::vector<SignStructure> labels = {block_identity(4), valley_tau_z(), block_identity(4),
                                             block_identity(4), sign_product(valley_tau_z(), spin_s_z())};
  return kron_extend(build_representation_4p1(), labels,
                     {{"tau_z", valley_tau_z()}, {"s_z", spin_s_z()}});
}

double clifford_residual(const Representation& rep) {
  const auto n = rep.dim();
  const ComplexMatrix one = identity(n);
  double worst = max_abs_diff(rep.beta() * rep.beta(), one);
  worst = std::max(worst, max_abs_diff(rep.beta(), rep.beta().adjoint()));

  const auto plus = rep.positive_indices(1);
  const auto minus = rep.positive_indices(-1);
  for (int i = 0; i < rep.space_dim(); ++i) {
    const auto& ai = rep.alpha(i);
    worst = std::max(worst, max_abs_diff(ai, ai.adjoint()));
    worst = std::max(worst, max_abs(anticommutator(ai, rep.beta())));
    for (int j = i; j < rep.space_dim(); ++j) {
      const ComplexMatrix expected = (i == j ? 2.0 : 0.0) * one;
      worst = std::max(worst, max_abs_diff(anticommutator(ai, rep.alpha(j)), expected));
    }

    ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
    const auto& r = rep.rho()[static_cast<std::size_t>(i)];
    for (std::size_t p = 0; p < plus.size(); ++p) {
      for (std::size_t q = 0; q < minus.size(); ++q) {
        const auto pi = static_cast<Eigen::Index>(p);
        const auto qi = static_cast<Eigen::Index>(q);
        rebuilt(plus[p], minus[q]) = r(pi, qi);
        rebuilt(minus[q], plus[p]) = std::conj(r(pi, qi));
      }
    }
    worst = std::max(worst, max_abs_diff(rebuilt, ai));
  }
  return worst;
}

}  // namespace fwtopo
