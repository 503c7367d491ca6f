#include "vlab/matrix.hpp"

#include <algorithm>
#include <utility>

#include "vlab/error.hpp"

namespace vlab {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
  if (rows.empty()) return {};
  RatMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw DimensionError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

void RatMatrix::append_row(std::span<const Rat> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw DimensionError("append_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rat& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (sgn(b(k, j)) != 0) c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix sum: shapes differ");
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix difference: shapes differ");
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RatMatrix operator*(const Rat& s, const RatMatrix& a) {
  RatMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

RatVector operator*(const RatMatrix& a, std::span<const Rat> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: size mismatch");
  RatVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rat acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(x[j]) != 0) acc += a(i, j) * x[j];
    }
    y[i] = acc;
  }
  return y;
}

RatMatrix transpose(const RatMatrix& a) {
  RatMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Rat trace(const RatMatrix& a) {
  if (!a.square()) throw DimensionError("trace of a non-square matrix");
  Rat t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

bool is_symmetric(const RatMatrix& a) {
  if (!a.square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

bool is_zero(const RatMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Rat& r) { return sgn(r) == 0; });
}

bool is_integral(const RatMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Rat& r) { return r.get_den() == 1; });
}

Rat dot(std::span<const Rat> a, std::span<const Rat> b) {
  if (a.size() != b.size()) throw DimensionError("dot product: size mismatch");
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) acc += a[i] * b[i];
  }
  return acc;
}

RatMatrix block_diagonal(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && sgn(a(p, c)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    }
    Rat inv = 1 / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) {
        if (sgn(a(r, j)) != 0) a(i, j) -= f * a(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RatMatrix a) { return rref(a).size(); }

std::size_t rank_fraction_free(const RatMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<Int> w(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    auto row = a.row(i);
    Int l = lcm_of_denominators(row.data(), n);
    for (std::size_t j = 0; j < n; ++j) {
      Rat scaled = row[j] * l;
      w[i * n + j] = scaled.get_num();
    }
  }
  auto at = [&](std::size_t i, std::size_t j) -> Int& { return w[i * n + j]; };
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && sgn(at(p, c)) == 0) ++p;
    if (p == m) continue;
    if (p != r) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(p, j), at(r, j));
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        Int v = at(r, c) * at(i, j) - at(i, c) * at(r, j);
        mpz_divexact(at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

std::vector<RatVector> kernel(const RatMatrix& a) {
  RatMatrix e = a;
  auto pivots = rref(e);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -e(k, f);
    auto first = std::find_if(v.begin(), v.end(), [](const Rat& x) { return sgn(x) != 0; });
    if (first != v.end() && sgn(*first) < 0) {
      for (auto& x : v) x = -x;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Rat determinant(RatMatrix a) {
  if (!a.square()) throw DimensionError("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a(i, c)) == 0) continue;
      Rat f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

RatMatrix inverse(const RatMatrix& a) {
  if (!a.square()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw PreconditionError("matrix is singular");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::size_t first_nonpositive_minor(const RatMatrix& a, Rat* minor) {
  if (!a.square()) throw DimensionError("leading minors of a non-square matrix");
  RatMatrix w = a;
  const std::size_t n = w.rows();
  Rat running = 1;
  for (std::size_t k = 0; k < n; ++k) {
    // Without pivoting, the k-th pivot equals minor_{k+1} / minor_k.
    running *= w(k, k);
    if (sgn(w(k, k)) <= 0) {
      if (minor != nullptr) {
        RatMatrix lead(k + 1, k + 1);
        for (std::size_t i = 0; i <= k; ++i)
          for (std::size_t j = 0; j <= k; ++j) lead(i, j) = a(i, j);
        *minor = determinant(lead);
      }
      return k + 1;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(w(i, k)) == 0) continue;
      Rat f = w(i, k) / w(k, k);
      for (std::size_t j = k; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return 0;
}

RatVector EchelonBasis::reduce(std::span<const Rat> v) const {
  if (v.size() != n_) throw DimensionError("EchelonBasis: vector length mismatch");
  RatVector w(v.begin(), v.end());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Rat f = w[pivots_[k]];
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sgn(rows_[k][j]) != 0) w[j] -= f * rows_[k][j];
    }
  }
  return w;
}

bool EchelonBasis::contains(std::span<const Rat> v) const {
  auto w = reduce(v);
  return std::all_of(w.begin(), w.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool EchelonBasis::add(std::span<const Rat> v) {
  auto w = reduce(v);
  auto it = std::find_if(w.begin(), w.end(), [](const Rat& x) { return sgn(x) != 0; });
  if (it == w.end()) return false;
  const std::size_t p = static_cast<std::size_t>(it - w.begin());
  const Rat inv = 1 / w[p];
  for (auto& x : w) x *= inv;
  for (auto& r : rows_) {
    const Rat f = r[p];
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (sgn(w[j]) != 0) r[j] -= f * w[j];
    }
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  return true;
}

std::vector<std::size_t> independent_subset(const std::vector<RatVector>& vectors) {
  std::vector<std::size_t> chosen;
  if (vectors.empty()) return chosen;
  EchelonBasis basis(vectors.front().size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (basis.add(vectors[i])) chosen.push_back(i);
  }
  return chosen;
}

}  // namespace vlab
