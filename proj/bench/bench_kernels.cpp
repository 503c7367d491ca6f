// Serial reference kernels against their OpenMP versions on catalog inputs.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vlab/catalog.hpp"
#include "vlab/enumerate.hpp"
#include "vlab/kernels.hpp"
#include "vlab/matrix.hpp"
#include "vlab/qform.hpp"

namespace {

using namespace vlab;
using namespace vlab::kernels;

constexpr std::uint64_t kBudget = 4'000'000'000ULL;

// LDL^T of the LLL-reduced Gram, as the enumerator builds it.
TreeProblem tree_problem(const char* name, double bound) {
  const QForm q = catalog_entry(name).form;
  const std::size_t n = q.dim();
  const auto u = lll_transform(q);
  RatMatrix ur(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ur(i, j) = Rat(static_cast<long>(u[i * n + j]));
  const Eigen::MatrixXd a = to_eigen(transpose(ur) * q.gram() * ur);
  TreeProblem p;
  p.n = n;
  p.diag.assign(n, 0.0);
  p.mu.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double d = a(i, i);
    for (std::size_t k = 0; k < i; ++k) d -= p.diag[k] * p.mu[i * n + k] * p.mu[i * n + k];
    p.diag[i] = d;
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = a(j, i);
      for (std::size_t k = 0; k < i; ++k) v -= p.diag[k] * p.mu[j * n + k] * p.mu[i * n + k];
      p.mu[j * n + i] = v / d;
    }
  }
  p.bound = bound * (1.0 + 1e-9);
  return p;
}

// E8 vectors up to radius 6 (9120 classes), flattened row-major.
const std::vector<std::int64_t>& e8_points() {
  static const std::vector<std::int64_t> pts = [] {
    std::vector<std::int64_t> out;
    for (const auto& layer : vectors_up_to(catalog_entry("E8").form, 6))
      for (const auto& v : layer.vectors) out.insert(out.end(), v.coords.begin(), v.coords.end());
    return out;
  }();
  return pts;
}

// Epsilon numerators (Gx)_i x_j for i <= j and Q(x), the classic moment input.
MomentInput e8_moments() {
  const QForm q = catalog_entry("E8").form;
  const auto& pts = e8_points();
  const std::size_t n = 8;
  MomentInput in;
  in.points = pts.size() / n;
  in.cols = n * (n + 1) / 2;
  for (std::size_t p = 0; p < in.points; ++p) {
    const std::int64_t* x = &pts[p * n];
    std::vector<std::int64_t> gx(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gx[i] += q.gram()(i, j).get_num().get_si() * x[j];
    std::int64_t qx = 0;
    for (std::size_t i = 0; i < n; ++i) qx += gx[i] * x[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) in.num.push_back(gx[i] * x[j]);
    in.q.push_back(qx);
  }
  return in;
}

std::vector<const std::int64_t*> e8_pointers() {
  const auto& pts = e8_points();
  std::vector<const std::int64_t*> out;
  for (std::size_t p = 0; p < pts.size(); p += 8) out.push_back(&pts[p]);
  return out;
}

void BM_Tree(benchmark::State& state, const char* name, double bound, bool parallel) {
  const TreeProblem p = tree_problem(name, bound);
  const auto kernel = parallel ? tree_search_parallel : tree_search_serial;
  for (auto _ : state) benchmark::DoNotOptimize(kernel(p, kBudget, nullptr));
}

template <auto Kernel>
void BM_Box(benchmark::State& state) {
  // Z^4 with Gram 2I scanned over |y_i| <= 6.
  BoxProblem p;
  p.n = 4;
  p.gram.assign(16, 0);
  for (std::size_t i = 0; i < 4; ++i) p.gram[i * 5] = 2;
  p.radius.assign(4, 6);
  p.limit = 72;
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(p));
}

template <auto Kernel>
void BM_Moments(benchmark::State& state) {
  const MomentInput in = e8_moments();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(in));
}

template <auto Kernel>
void BM_Monomials(benchmark::State& state) {
  const auto ptrs = e8_pointers();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(ptrs, 8, true));
}

template <auto Kernel>
void BM_PowerSum(benchmark::State& state) {
  const std::size_t size = static_cast<std::size_t>(state.range(0));
  std::vector<double> value(size), weight(size);
  for (std::size_t k = 0; k < size; ++k) {
    value[k] = 1.0 + static_cast<double>(k) / 7.0;
    weight[k] = static_cast<double>(2 + k % 5);
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(value, weight, 6.0));
}

template <auto Kernel>
void BM_QuadraticPowerSum(benchmark::State& state) {
  const auto& pts = e8_points();
  const std::vector<double> points(pts.begin(), pts.end());
  const Eigen::MatrixXd g = to_eigen(catalog_entry("E8").form.gram());
  std::vector<double> m(64);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) m[i * 8 + j] = g(i, j) + (i == j ? 1e-3 : 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(points, 8, m, 6.0));
}

BENCHMARK_CAPTURE(BM_Tree, E8_r6_serial, "E8", 6.0, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tree, E8_r6_parallel, "E8", 6.0, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tree, BW16_r4_serial, "BW16", 4.0, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tree, BW16_r4_parallel, "BW16", 4.0, true)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Box<box_scan_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Box<box_scan_parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments<moment_sums_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments<moment_sums_parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Monomials<monomial_sums_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Monomials<monomial_sums_parallel>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerSum<power_sum_serial>)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerSum<power_sum_parallel>)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadraticPowerSum<quadratic_power_sum_serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadraticPowerSum<quadratic_power_sum_parallel>)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
