#pragma once

#include <array>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

/// Operator stored as dense diagonal blocks of a block-diagonal matrix.
using BlockOperator = std::vector<Operator>;

/// Partition of basis indices into invariant blocks. Index lists are sorted
/// and blocks are ordered by their smallest index, so the layout is a
/// deterministic function of the sparsity patterns it was built from.
class SectorLayout {
 public:
  static SectorLayout single(Index dim);
  /// Connected components of the union of the nonzero patterns.
  static SectorLayout from_patterns(const std::vector<const Operator*>& ops, Index dim);

  Index dim() const noexcept { return dim_; }
  size_t size() const noexcept { return blocks_.size(); }
  const std::vector<Index>& block(size_t b) const { return blocks_[b]; }
  /// (block, local index) of global index i.
  std::pair<size_t, Index> locate(Index i) const { return where_[static_cast<size_t>(i)]; }

  /// Diagonal blocks of `full`; off-block entries are dropped.
  BlockOperator gather(const Operator& full) const;
  Operator scatter(const BlockOperator& blocks) const;
  /// Largest |entry| of `full` outside the blocks.
  double off_block_norm(const Operator& full) const;

 private:
  Index dim_ = 0;
  std::vector<std::vector<Index>> blocks_;
  std::vector<std::pair<size_t, Index>> where_;
};

BlockOperator zeros_like(const BlockOperator& a);
/// Tr[rho O] for block-diagonal rho, O with rho Hermitian.
Complex trace_product(const BlockOperator& rho, const BlockOperator& op);
Complex trace(const BlockOperator& a);
void hermitize(BlockOperator& a);

/// Block-sparse form of a real Hamiltonian with separate term values, used
/// by the unitary integrator: within each block the union sparsity pattern
/// of the three terms is stored column by column.
class SectorHamiltonian {
 public:
  SectorHamiltonian(const Hamiltonian& h, const SectorLayout& layout);

  const SectorLayout& layout() const noexcept { return layout_; }

  /// Writes the per-block entry values of sum_k c_k T_k into `values`.
  void combine(const Hamiltonian::Coefficients& c, std::vector<std::vector<double>>& values) const;
  /// out = -i [H, rho] for the given combined values.
  void commutator(const std::vector<std::vector<double>>& values, const BlockOperator& rho,
                  BlockOperator& out) const;
  /// Dense blocks of term k.
  const BlockOperator& term_blocks(int k) const { return term_blocks_[static_cast<size_t>(k)]; }
  BlockOperator dense(const Hamiltonian::Coefficients& c) const;

 private:
  struct Entry {
    Index row;
    Index col;
  };
  SectorLayout layout_;
  std::vector<std::vector<Entry>> entries_;
  // term_values_[b][k][e]
  std::vector<std::array<std::vector<double>, Hamiltonian::kTerms>> term_values_;
  std::array<BlockOperator, Hamiltonian::kTerms> term_blocks_;
  mutable BlockOperator scratch_;
};

}  // namespace cqed
