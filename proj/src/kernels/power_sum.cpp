#include <omp.h>

#include <cmath>

#include "vlab/kernels.hpp"

namespace vlab::kernels {

namespace {

constexpr std::size_t kChunk = 4096;

template <class Term>
double chunked_sum(std::size_t count, Term term, bool parallel) {
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nc = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < nc; ++c) {
    KahanSum s;
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(count, begin + kChunk);
    for (std::size_t k = begin; k < end; ++k) s.add(term(k));
    partial[static_cast<std::size_t>(c)] = s.value();
  }
  KahanSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

double quadratic_term(const std::vector<double>& points, std::size_t n, const std::vector<double>& m, double s,
                      std::size_t k) {
  const double* x = points.data() + k * n;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += m[i * n + j] * x[j];
    q += x[i] * row;
  }
  return 2.0 * std::pow(q, -s);
}

}  // namespace

void KahanSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double power_sum_serial(const std::vector<double>& value, const std::vector<double>& weight, double s) {
  return chunked_sum(value.size(), [&](std::size_t k) { return weight[k] * std::pow(value[k], -s); }, false);
}

double power_sum_parallel(const std::vector<double>& value, const std::vector<double>& weight, double s) {
  return chunked_sum(value.size(), [&](std::size_t k) { return weight[k] * std::pow(value[k], -s); }, true);
}

double quadratic_power_sum_serial(const std::vector<double>& points, std::size_t n, const std::vector<double>& m,
                                  double s) {
  return chunked_sum(points.size() / n, [&](std::size_t k) { return quadratic_term(points, n, m, s, k); }, false);
}

double quadratic_power_sum_parallel(const std::vector<double>& points, std::size_t n,
                                    const std::vector<double>& m, double s) {
  return chunked_sum(points.size() / n, [&](std::size_t k) { return quadratic_term(points, n, m, s, k); }, true);
}

}  // namespace vlab::kernels
