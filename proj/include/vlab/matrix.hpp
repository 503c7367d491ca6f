#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vlab/rational.hpp"

namespace vlab {

using RatVector = std::vector<Rat>;

// Dense row-major matrix of exact rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Rat> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Rat> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  RatVector row_vector(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }

  const std::vector<Rat>& data() const { return data_; }

  void append_row(std::span<const Rat> r);

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const Rat& c, const RatMatrix& a);
RatVector operator*(const RatMatrix& a, std::span<const Rat> x);

RatMatrix transpose(const RatMatrix& a);
Rat trace(const RatMatrix& a);
bool is_symmetric(const RatMatrix& a);
bool is_zero(const RatMatrix& a);
bool is_integral(const RatMatrix& a);
Rat dot(std::span<const Rat> a, std::span<const Rat> b);
RatMatrix block_diagonal(const RatMatrix& a, const RatMatrix& b);

// Reduced row echelon form computed in place; returns the pivot columns.
std::vector<std::size_t> rref(RatMatrix& a);

std::size_t rank(RatMatrix a);

// Rank by Bareiss fraction-free elimination on the integer matrix obtained by
// clearing row denominators. Independent of the rref route.
std::size_t rank_fraction_free(const RatMatrix& a);

// Basis of {x : a x = 0}. Each vector is normalized so that its first nonzero
// entry is positive and the free coordinate that defines it equals 1.
std::vector<RatVector> kernel(const RatMatrix& a);

Rat determinant(RatMatrix a);

// Throws PreconditionError when singular.
RatMatrix inverse(const RatMatrix& a);

// Index k (1-based) of the first leading principal minor that is not positive,
// or 0 when all are positive. The value of that minor is written to *minor.
std::size_t first_nonpositive_minor(const RatMatrix& a, Rat* minor = nullptr);

// Incrementally maintained row echelon basis of a subspace of Q^n.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t n) : n_(n) {}

  // Adds v to the spanning set; returns false when v was already in the span.
  bool add(std::span<const Rat> v);
  bool contains(std::span<const Rat> v) const;
  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient() const { return n_; }

 private:
  RatVector reduce(std::span<const Rat> v) const;

  std::size_t n_;
  std::vector<RatVector> rows_;  // rows_[k] has a 1 at pivots_[k], zero at other pivots
  std::vector<std::size_t> pivots_;
};

// Indices of a maximal independent subset of vectors, selected greedily in order.
std::vector<std::size_t> independent_subset(const std::vector<RatVector>& vectors);

}  // namespace vlab
