#pragma once

#include <initializer_list>
#include <random>

#include "vlab/matrix.hpp"
#include "vlab/qform.hpp"

namespace vlab::test {

inline RatMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<RatVector> r;
  for (auto row : rows) {
    RatVector v;
    for (long x : row) v.emplace_back(x);
    r.push_back(std::move(v));
  }
  return RatMatrix::from_rows(r);
}

inline RatVector vec(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline QForm form(std::initializer_list<std::initializer_list<long>> rows) { return QForm::from_gram(mat(rows)); }

// Random rational in [-range, range] with denominator at most den.
inline Rat random_rat(std::mt19937_64& rng, long range, long den) {
  std::uniform_int_distribution<long> d(1, den);
  const long q = d(rng);
  std::uniform_int_distribution<long> p(-range * q, range * q);
  Rat r(p(rng), q);
  r.canonicalize();
  return r;
}

// Random symmetric n x n rational matrix.
inline RatMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, long range = 5, long den = 4) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = random_rat(rng, range, den);
  return m;
}

// Random Q-selfadjoint endomorphism G^{-1} S.
inline RatMatrix random_selfadjoint(std::mt19937_64& rng, const QForm& q, long range = 5, long den = 4) {
  return inverse(q.gram()) * random_symmetric(rng, q.dim(), range, den);
}

}  // namespace vlab::test
