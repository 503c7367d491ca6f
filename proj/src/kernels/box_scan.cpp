#include <omp.h>

#include "vlab/kernels.hpp"

namespace vlab::kernels {

namespace {

using Point = std::vector<std::int64_t>;

// Odometer over coordinates 0..n-2 with the last coordinate fixed to `last`.
// Keeps g*y and y^T g y updated incrementally, O(n) per step.
void scan_slice(const BoxProblem& p, std::int64_t last, std::vector<Point>& out) {
  const std::size_t n = p.n;
  const std::size_t m = n - 1;
  Point y(n);
  for (std::size_t i = 0; i < m; ++i) y[i] = -p.radius[i];
  y[m] = last;
  std::vector<std::int64_t> gy(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gy[i] += p.gram[i * n + j] * y[j];
  __int128 q = 0;
  for (std::size_t i = 0; i < n; ++i) q += static_cast<__int128>(y[i]) * gy[i];

  const auto shift = [&](std::size_t k, std::int64_t delta) {
    q += 2 * static_cast<__int128>(delta) * gy[k] +
         static_cast<__int128>(delta) * delta * p.gram[k * n + k];
    for (std::size_t i = 0; i < n; ++i) gy[i] += delta * p.gram[i * n + k];
    y[k] += delta;
  };

  while (true) {
    if (q <= p.limit && q > 0) out.push_back(y);
    std::size_t k = 0;
    for (; k < m; ++k) {
      if (y[k] < p.radius[k]) {
        shift(k, 1);
        break;
      }
      shift(k, -2 * p.radius[k]);
    }
    if (k == m) return;
  }
}

}  // namespace

std::vector<Point> box_scan_serial(const BoxProblem& p) {
  std::vector<Point> out;
  if (p.n == 0) return out;
  const std::int64_t r = p.radius[p.n - 1];
  for (std::int64_t v = -r; v <= r; ++v) scan_slice(p, v, out);
  return out;
}

std::vector<Point> box_scan_parallel(const BoxProblem& p) {
  if (p.n == 0) return {};
  const std::int64_t r = p.radius[p.n - 1];
  std::vector<std::vector<Point>> parts(static_cast<std::size_t>(2 * r + 1));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t v = -r; v <= r; ++v) scan_slice(p, v, parts[static_cast<std::size_t>(v + r)]);
  std::vector<Point> out;
  for (auto& part : parts) {
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace vlab::kernels
