#pragma once

// Data-parallel inner loops. Every kernel comes in a serial reference version
// and an OpenMP version; both return identical results (the parallel ones use
// fixed work splitting and ordered merges). Tests compare the two and the
// benchmark target times them.

#include <atomic>
#include <cstdint>
#include <vector>

#include "vlab/rational.hpp"

namespace vlab::kernels {

// ---- Fincke-Pohst tree search ----------------------------------------------

// Q(y) = sum_i diag[i] * (y_i + sum_{j>i} mu[j*n+i] y_j)^2.
struct TreeProblem {
  std::size_t n = 0;
  std::vector<double> diag;
  std::vector<double> mu;
  double bound = 0.0;  // already inflated by the caller
};

// Nonzero y with Q(y) <= bound (floating test) whose last nonzero coordinate is
// positive. Throws ResourceError past node_budget visited nodes.
std::vector<std::vector<std::int64_t>> tree_search_serial(const TreeProblem& p, std::uint64_t node_budget,
                                                          std::uint64_t* nodes = nullptr);
std::vector<std::vector<std::int64_t>> tree_search_parallel(const TreeProblem& p, std::uint64_t node_budget,
                                                            std::uint64_t* nodes = nullptr);

// ---- exhaustive box scan ----------------------------------------------------

// Integer Gram g (n x n, row-major), scan |y_i| <= radius[i], keep nonzero y with
// y^T g y <= limit.
struct BoxProblem {
  std::size_t n = 0;
  std::vector<std::int64_t> gram;
  std::vector<std::int64_t> radius;
  __int128 limit = 0;
};

std::vector<std::vector<std::int64_t>> box_scan_serial(const BoxProblem& p);
std::vector<std::vector<std::int64_t>> box_scan_parallel(const BoxProblem& p);

// ---- second moments of epsilon functionals -----------------------------------

// num is points x cols (row-major); point i contributes num[i][a] * num[i][b] / q[i]^2.
// Points sharing q are accumulated in 128-bit integers. Result: for every pair
// a <= b (packed, row-major upper triangle) the exact sum, plus first moments.
struct MomentInput {
  std::size_t points = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> num;
  std::vector<std::int64_t> q;
};

struct MomentSums {
  std::vector<Rat> first;   // cols
  std::vector<Rat> second;  // cols * (cols + 1) / 2
};

MomentSums moment_sums_serial(const MomentInput& in);
MomentSums moment_sums_parallel(const MomentInput& in);

inline std::size_t packed_index(std::size_t a, std::size_t b, std::size_t cols) {
  return a * cols - a * (a - 1) / 2 + (b - a);
}

// ---- monomial sums -----------------------------------------------------------

// Exact sums over points of the monomials x_i x_j (i <= j) and, when requested,
// x_i x_j x_k x_l (i <= j <= k <= l), both in lexicographic index order. Points
// are pointers to n int64 coordinates. Chunks of 4096 points accumulate in
// int64 when every |x_i| < 4096 and in __int128 otherwise.
struct MonomialSums {
  std::size_t n = 0;
  std::vector<__int128> second;
  std::vector<__int128> fourth;
};

MonomialSums monomial_sums_serial(const std::vector<const std::int64_t*>& points, std::size_t n, bool fourth);
MonomialSums monomial_sums_parallel(const std::vector<const std::int64_t*>& points, std::size_t n, bool fourth);

// Position of the sorted index tuple in the lexicographic monomial order.
std::size_t monomial_index2(std::size_t i, std::size_t j, std::size_t n);
std::size_t monomial_index4(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t n);

// ---- power sums -------------------------------------------------------------

// sum_k weight[k] * value[k]^(-s), computed in fixed chunks of 4096 terms whose
// partial sums are combined in chunk order with compensated summation.
double power_sum_serial(const std::vector<double>& value, const std::vector<double>& weight, double s);
double power_sum_parallel(const std::vector<double>& value, const std::vector<double>& weight, double s);

// sum over points x (row-major n-vectors) of 2 * (x^T m x)^(-s), m is n x n row-major.
double quadratic_power_sum_serial(const std::vector<double>& points, std::size_t n, const std::vector<double>& m,
                                  double s);
double quadratic_power_sum_parallel(const std::vector<double>& points, std::size_t n,
                                    const std::vector<double>& m, double s);

// Compensated accumulator (Neumaier).
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace vlab::kernels
