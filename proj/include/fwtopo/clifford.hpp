#pragma once

#include <span>
#include <string>
#include <vector>

#include "fwtopo/matrix.hpp"

namespace fwtopo {

// Which hand-derived closed forms apply to the orbital block.
enum class BaseFamily { Dirac2p1, Dirac4p1, Custom };

// Sign decorations of one diagonal block of a Kronecker-extended
// representation: the block Hamiltonian is sum_I s_I alpha_I k_I + s_m m beta.
struct BlockSigns {
  std::vector<int> alpha_signs;
  int mass_sign = 1;
};

// A +-1 diagonal over the block index, e.g. tau_z or s_z.
using SignStructure = std::vector<int>;

struct BlockLabel {
  std::string name;
  SignStructure signs;
};

// A set {alpha_I, beta} of Hermitian Dirac matrices with beta diagonal.
// rho[I] is the off-diagonal block of alpha_I in the beta eigenbasis,
// alpha_I = V+ rho_I V-^dag + V- rho_I^dag V+^dag, with V+- the canonical
// isometries onto the beta = +-1 subspaces in ascending index order.
class Representation {
 public:
  // Validates Clifford relations; throws std::invalid_argument otherwise.
  static Representation from_matrices(std::vector<ComplexMatrix> alphas, ComplexMatrix beta);

  int space_dim() const { return static_cast<int>(alphas_.size()); }
  Eigen::Index dim() const { return beta_.rows(); }
  const std::vector<ComplexMatrix>& alphas() const { return alphas_; }
  const ComplexMatrix& alpha(int axis) const { return alphas_.at(static_cast<std::size_t>(axis)); }
  const ComplexMatrix& beta() const { return beta_; }
  const std::vector<ComplexMatrix>& rho() const { return rho_; }

  BaseFamily family() const { return family_; }
  const std::vector<BlockSigns>& blocks() const { return blocks_; }
  Eigen::Index block_size() const { return dim() / static_cast<Eigen::Index>(blocks_.size()); }
  const std::vector<BlockLabel>& block_labels() const { return block_labels_; }
  bool is_decorated() const { return blocks_.size() > 1 || !block_labels_.empty(); }

  // Indices with beta_eff = +1 (resp. -1), ascending; beta_eff = sign * beta.
  std::vector<Eigen::Index> positive_indices(int sign = 1) const;
  std::vector<Eigen::Index> negative_indices(int sign = 1) const { return positive_indices(-sign); }

 private:
  Representation() = default;
  void finalize();

  std::vector<ComplexMatrix> alphas_;
  ComplexMatrix beta_;
  std::vector<ComplexMatrix> rho_;
  BaseFamily family_ = BaseFamily::Custom;
  std::vector<BlockSigns> blocks_;
  std::vector<BlockLabel> block_labels_;

  friend Representation build_representation_2p1();
  friend Representation build_representation_4p1();
  friend Representation kron_extend(const Representation&, std::span<const SignStructure>,
                                    std::vector<BlockLabel>);
};

// alpha = (sigma_x, sigma_y), beta = sigma_z, rho = (1, -i).
Representation build_representation_2p1();

// alpha_{1,2,3} = ((0, i sigma), (-i sigma, 0)), alpha_4 = ((0, -1), (-1, 0)),
// beta = diag(1, -1); rho = (i sigma_1, i sigma_2, i sigma_3, -1).
Representation build_representation_4p1();

// sigma_IJ = -(i/2)[alpha_I, alpha_J]; axes are zero-based.
ComplexMatrix sigma_tensor(const Representation& rep, int i, int j);

// Kronecker extension by block sign structures. labels[I] decorates alpha_I
// for I < d and labels[d] decorates the mass term, so the new generators are
// diag(labels[I]) (x) alpha_I and diag(labels[d]) (x) beta. The block index is
// the outer factor; extending an already-decorated representation nests the
// new blocks outside the existing ones.
Representation kron_extend(const Representation& rep, std::span<const SignStructure> labels,
                           std::vector<BlockLabel> named = {});

// Block-space factors on the four-block space, ordered (spin) (x) (valley):
// blocks are up+, up-, down+, down-.
SignStructure valley_tau_z();
SignStructure spin_s_z();
SignStructure block_identity(std::size_t blocks);
SignStructure sign_product(const SignStructure& a, const SignStructure& b);

// sigma_x tau_z k_x + sigma_y k_y + m sigma_z tau_z s_z.
Representation kane_mele_representation();
// alpha~ = (alpha_1, tau_z alpha_2, alpha_3, alpha_4), mass tau_z s_z beta.
Representation spin_hall_4p1_representation();

// Largest violation of the Clifford relations, Hermiticity and the rho block
// reassembly. Zero up to rounding for every valid representation.
double clifford_residual(const Representation& rep);

}  // namespace fwtopo
