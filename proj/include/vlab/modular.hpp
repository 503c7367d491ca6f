#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vlab/matrix.hpp"

namespace vlab {

// Kernel of a rational matrix computed modulo the prime 2^61 - 1 and lifted by
// rational reconstruction. The result is exact: the lifted vectors are checked
// against the rational matrix, and since rank over Q is at least the rank mod p,
// dim ker over Q cannot exceed the number of lifted vectors. When lifting or the
// check fails the routine falls back to rational elimination.
// Incremental reduced row echelon form modulo p = 2^61 - 1. The rank mod p is a
// lower bound for the rank over Q, so reaching full column rank certifies it.
class ModularEchelon {
 public:
  explicit ModularEchelon(std::size_t cols) : cols_(cols) {}

  // Returns false when the row reduces to zero mod p.
  bool add(std::span<const Rat> row);
  bool add_integers(std::span<const Int> row);

  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rows_.size() == cols_; }
  const std::vector<std::vector<std::uint64_t>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  bool insert(std::vector<std::uint64_t> w);

  std::size_t cols_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::size_t> pivots_;
};

struct CertifiedKernel {
  std::vector<RatVector> basis;
  std::size_t rank_mod_p = 0;
  bool modular_path = false;  // false when the rational fallback was used
};

CertifiedKernel certified_kernel(const RatMatrix& a);

}  // namespace vlab
