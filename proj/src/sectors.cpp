#include "cqed/sectors.hpp"

#include <algorithm>
#include <numeric>

namespace cqed {

SectorLayout SectorLayout::single(Index dim) {
  SectorLayout s;
  s.dim_ = dim;
  s.blocks_.emplace_back(static_cast<size_t>(dim));
  std::iota(s.blocks_[0].begin(), s.blocks_[0].end(), Index{0});
  s.where_.resize(static_cast<size_t>(dim));
  for (Index i = 0; i < dim; ++i) s.where_[static_cast<size_t>(i)] = {0, i};
  return s;
}

SectorLayout SectorLayout::from_patterns(const std::vector<const Operator*>& ops, Index dim) {
  std::vector<Index> parent(static_cast<size_t>(dim));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[static_cast<size_t>(i)] != i) {
      auto& p = parent[static_cast<size_t>(i)];
      p = parent[static_cast<size_t>(p)];
      i = p;
    }
    return i;
  };
  for (const Operator* op : ops) {
    if (op->rows() != dim || op->cols() != dim) {
      throw ValidationError("sector pattern has the wrong dimension");
    }
    for (Index j = 0; j < dim; ++j) {
      for (Index i = 0; i < dim; ++i) {
        if ((*op)(i, j) == Complex(0.0, 0.0)) continue;
        const Index a = find(i);
        const Index b = find(j);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }

  SectorLayout s;
  s.dim_ = dim;
  s.where_.resize(static_cast<size_t>(dim));
  std::vector<long> block_of_root(static_cast<size_t>(dim), -1);
  for (Index i = 0; i < dim; ++i) {
    const Index r = find(i);
    auto& slot = block_of_root[static_cast<size_t>(r)];
    if (slot < 0) {
      slot = static_cast<long>(s.blocks_.size());
      s.blocks_.emplace_back();
    }
    auto& blk = s.blocks_[static_cast<size_t>(slot)];
    s.where_[static_cast<size_t>(i)] = {static_cast<size_t>(slot), static_cast<Index>(blk.size())};
    blk.push_back(i);
  }
  return s;
}

BlockOperator SectorLayout::gather(const Operator& full) const {
  BlockOperator out(blocks_.size());
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = blocks_[b];
    const Index n = static_cast<Index>(idx.size());
    out[b].resize(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        out[b](i, j) = full(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      }
    }
  }
  return out;
}

Operator SectorLayout::scatter(const BlockOperator& blocks) const {
  Operator full = Operator::Zero(dim_, dim_);
  for (size_t b = 0; b < blocks_.size(); ++b) {
    const auto& idx = blocks_[b];
    const Index n = static_cast<Index>(idx.size());
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        full(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]) = blocks[b](i, j);
      }
    }
  }
  return full;
}

double SectorLayout::off_block_norm(const Operator& full) const {
  double worst = 0.0;
  for (Index j = 0; j < dim_; ++j) {
    for (Index i = 0; i < dim_; ++i) {
      if (where_[static_cast<size_t>(i)].first != where_[static_cast<size_t>(j)].first) {
        worst = std::max(worst, std::abs(full(i, j)));
      }
    }
  }
  return worst;
}

BlockOperator zeros_like(const BlockOperator& a) {
  BlockOperator out(a.size());
  for (size_t b = 0; b < a.size(); ++b) out[b] = Operator::Zero(a[b].rows(), a[b].cols());
  return out;
}

Complex trace_product(const BlockOperator& rho, const BlockOperator& op) {
  // Tr[rho O] = sum_ij rho_ij O_ji = sum_ij conj(rho_ji) O_ji for Hermitian rho.
  Complex total = 0.0;
  for (size_t b = 0; b < rho.size(); ++b) total += rho[b].cwiseProduct(op[b].transpose()).sum();
  return total;
}

Complex trace(const BlockOperator& a) {
  Complex total = 0.0;
  for (const auto& blk : a) total += blk.trace();
  return total;
}

void hermitize(BlockOperator& a) {
  for (auto& blk : a) {
    const Index n = blk.rows();
    for (Index j = 0; j < n; ++j) {
      blk(j, j).imag(0.0);
      for (Index i = j + 1; i < n; ++i) {
        const Complex m = 0.5 * (blk(i, j) + std::conj(blk(j, i)));
        blk(i, j) = m;
        blk(j, i) = std::conj(m);
      }
    }
  }
}

SectorHamiltonian::SectorHamiltonian(const Hamiltonian& h, const SectorLayout& layout)
    : layout_(layout) {
  const auto& terms = h.terms();
  for (int k = 0; k < Hamiltonian::kTerms; ++k) {
    const Operator& t = terms[static_cast<size_t>(k)];
    if (t.imag().cwiseAbs().maxCoeff() != 0.0) {
      throw ValidationError("block integrator needs real Hamiltonian terms");
    }
    if (layout.off_block_norm(t) != 0.0) {
      throw ValidationError("Hamiltonian term couples different sectors");
    }
    term_blocks_[static_cast<size_t>(k)] = layout.gather(t);
  }

  const size_t nb = layout.size();
  entries_.resize(nb);
  term_values_.resize(nb);
  scratch_.resize(nb);
  for (size_t b = 0; b < nb; ++b) {
    const Index n = static_cast<Index>(layout.block(b).size());
    scratch_[b] = Operator::Zero(n, n);
    for (Index c = 0; c < n; ++c) {
      for (Index r = 0; r < n; ++r) {
        bool any = false;
        for (int k = 0; k < Hamiltonian::kTerms; ++k) {
          any = any || term_blocks_[static_cast<size_t>(k)][b](r, c) != Complex(0.0, 0.0);
        }
        if (!any) continue;
        entries_[b].push_back({r, c});
        for (int k = 0; k < Hamiltonian::kTerms; ++k) {
          term_values_[b][static_cast<size_t>(k)].push_back(
              term_blocks_[static_cast<size_t>(k)][b](r, c).real());
        }
      }
    }
  }
}

void SectorHamiltonian::combine(const Hamiltonian::Coefficients& c,
                                std::vector<std::vector<double>>& values) const {
  values.resize(entries_.size());
  for (size_t b = 0; b < entries_.size(); ++b) {
    auto& v = values[b];
    v.assign(entries_[b].size(), 0.0);
    for (int k = 0; k < Hamiltonian::kTerms; ++k) {
      const double ck = c[static_cast<size_t>(k)];
      if (ck == 0.0) continue;
      const auto& tv = term_values_[b][static_cast<size_t>(k)];
      for (size_t e = 0; e < v.size(); ++e) v[e] += ck * tv[e];
    }
  }
}

void SectorHamiltonian::commutator(const std::vector<std::vector<double>>& values,
                                   const BlockOperator& rho, BlockOperator& out) const {
  for (size_t b = 0; b < entries_.size(); ++b) {
    // Y = rho H column by column; then -i[H, rho] = -i (Y^dag - Y).
    Operator& y = scratch_[b];
    y.setZero();
    const auto& ent = entries_[b];
    const auto& val = values[b];
    for (size_t e = 0; e < ent.size(); ++e) {
      y.col(ent[e].col) += val[e] * rho[b].col(ent[e].row);
    }
    const Index n = y.rows();
    Operator& o = out[b];
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const Complex d = std::conj(y(j, i)) - y(i, j);
        o(i, j) = Complex(d.imag(), -d.real());
      }
    }
  }
}

BlockOperator SectorHamiltonian::dense(const Hamiltonian::Coefficients& c) const {
  BlockOperator out(layout_.size());
  for (size_t b = 0; b < layout_.size(); ++b) {
    out[b] = c[0] * term_blocks_[0][b];
    for (int k = 1; k < Hamiltonian::kTerms; ++k) {
      out[b] += c[static_cast<size_t>(k)] * term_blocks_[static_cast<size_t>(k)][b];
    }
  }
  return out;
}

}  // namespace cqed
