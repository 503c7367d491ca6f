#include <omp.h>

#include <algorithm>
#include <cstdlib>

#include "vlab/kernels.hpp"

namespace vlab::kernels {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::int64_t kSmall = 4096;  // |x|^4 * kChunk < 2^63

struct Plan {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;     // (i, j), i <= j
  std::vector<std::pair<std::size_t, std::size_t>> quartics;  // indices into pairs: (ij, kl)
};

Plan make_plan(std::size_t n, bool fourth) {
  Plan p;
  p.n = n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) p.pairs.emplace_back(i, j);
  if (fourth) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = j; k < n; ++k)
          for (std::size_t l = k; l < n; ++l)
            p.quartics.emplace_back(monomial_index2(i, j, n), monomial_index2(k, l, n));
  }
  return p;
}

template <typename Acc>
void accumulate(const Plan& plan, const std::vector<const std::int64_t*>& points, std::size_t begin, std::size_t end,
                std::vector<Acc>& s2, std::vector<Acc>& s4) {
  std::vector<Acc> prod(plan.pairs.size());
  for (std::size_t p = begin; p < end; ++p) {
    const std::int64_t* x = points[p];
    for (std::size_t t = 0; t < plan.pairs.size(); ++t) {
      prod[t] = static_cast<Acc>(x[plan.pairs[t].first]) * x[plan.pairs[t].second];
      s2[t] += prod[t];
    }
    for (std::size_t t = 0; t < plan.quartics.size(); ++t) {
      s4[t] += prod[plan.quartics[t].first] * prod[plan.quartics[t].second];
    }
  }
}

// Sums of one chunk, widened to __int128.
void chunk_sums(const Plan& plan, const std::vector<const std::int64_t*>& points, std::size_t begin,
                std::size_t end, bool small, std::vector<__int128>& s2, std::vector<__int128>& s4) {
  if (small) {
    std::vector<std::int64_t> a2(plan.pairs.size(), 0), a4(plan.quartics.size(), 0);
    accumulate(plan, points, begin, end, a2, a4);
    for (std::size_t t = 0; t < a2.size(); ++t) s2[t] += a2[t];
    for (std::size_t t = 0; t < a4.size(); ++t) s4[t] += a4[t];
  } else {
    accumulate(plan, points, begin, end, s2, s4);
  }
}

template <bool Parallel>
MonomialSums monomial_sums(const std::vector<const std::int64_t*>& points, std::size_t n, bool fourth) {
  const Plan plan = make_plan(n, fourth);
  bool small = true;
  for (const auto* x : points)
    for (std::size_t i = 0; i < n; ++i) small = small && std::llabs(x[i]) < kSmall;

  MonomialSums out{n, std::vector<__int128>(plan.pairs.size(), 0), std::vector<__int128>(plan.quartics.size(), 0)};
  const std::size_t chunks = (points.size() + kChunk - 1) / kChunk;
  const auto nc = static_cast<std::int64_t>(chunks);
#pragma omp parallel if (Parallel)
  {
    std::vector<__int128> s2(out.second.size(), 0), s4(out.fourth.size(), 0);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::int64_t c = 0; c < nc; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      chunk_sums(plan, points, begin, std::min(points.size(), begin + kChunk), small, s2, s4);
    }
    // Integer sums: the merge order does not affect the result.
#pragma omp critical
    {
      for (std::size_t t = 0; t < s2.size(); ++t) out.second[t] += s2[t];
      for (std::size_t t = 0; t < s4.size(); ++t) out.fourth[t] += s4[t];
    }
  }
  return out;
}

}  // namespace

std::size_t monomial_index2(std::size_t i, std::size_t j, std::size_t n) {
  // Rows 0..i-1 hold n, n-1, ..., n-i+1 entries.
  return i * n - i * (i - 1) / 2 + (j - i);
}

std::size_t monomial_index4(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t n) {
  // Count sorted tuples that precede (i, j, k, l) lexicographically.
  auto multisets = [](std::size_t m, std::size_t r) -> std::size_t {
    // Multisets of size r from m symbols: C(m + r - 1, r).
    if (r == 0) return 1;
    if (m == 0) return 0;
    std::size_t num = 1, den = 1;
    for (std::size_t t = 1; t <= r; ++t) {
      num *= m + r - t;
      den *= t;
    }
    return num / den;
  };
  const std::size_t idx[4] = {i, j, k, l};
  std::size_t pos = 0, lo = 0;
  for (std::size_t d = 0; d < 4; ++d) {
    for (std::size_t v = lo; v < idx[d]; ++v) pos += multisets(n - v, 3 - d);
    lo = idx[d];
  }
  return pos;
}

MonomialSums monomial_sums_serial(const std::vector<const std::int64_t*>& points, std::size_t n, bool fourth) {
  return monomial_sums<false>(points, n, fourth);
}

MonomialSums monomial_sums_parallel(const std::vector<const std::int64_t*>& points, std::size_t n, bool fourth) {
  return monomial_sums<true>(points, n, fourth);
}

}  // namespace vlab::kernels
