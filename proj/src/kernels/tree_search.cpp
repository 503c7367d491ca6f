#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "vlab/error.hpp"
#include "vlab/kernels.hpp"

namespace vlab::kernels {

namespace {

using Point = std::vector<std::int64_t>;

[[noreturn]] void budget_exceeded(std::uint64_t budget) {
  throw ResourceError("enumeration exceeded the node budget of " + std::to_string(budget) +
                      " nodes (raise --node-budget or VLAB_NODE_BUDGET)");
}

// Depth-first walk from `level` down to `stop`. On choosing a value at level
// `stop`, calls sink(y, used, all_zero).
class Walker {
 public:
  Walker(const TreeProblem& p, std::uint64_t budget, std::atomic<std::uint64_t>* shared)
      : p_(p), budget_(budget), shared_(shared), y_(p.n, 0) {}

  template <class Sink>
  void walk(std::size_t level, std::size_t stop, double used, bool all_zero, Sink&& sink) {
    if (aborted_) return;
    const std::size_t n = p_.n;
    double c = 0.0;
    for (std::size_t j = level + 1; j < n; ++j) c -= p_.mu[j * n + level] * static_cast<double>(y_[j]);
    const double remaining = p_.bound - used;
    if (remaining < 0.0) return;
    const double r = std::sqrt(remaining / p_.diag[level]);
    auto lo = static_cast<std::int64_t>(std::ceil(c - r));
    const auto hi = static_cast<std::int64_t>(std::floor(c + r));
    if (all_zero) lo = std::max<std::int64_t>(lo, level == 0 ? 1 : 0);
    for (std::int64_t v = lo; v <= hi; ++v) {
      if (!tick()) return;
      const double d = static_cast<double>(v) - c;
      const double next = used + p_.diag[level] * d * d;
      if (next > p_.bound) continue;
      y_[level] = v;
      const bool zero = all_zero && v == 0;
      if (level == stop) {
        sink(y_, next, zero);
      } else {
        walk(level - 1, stop, next, zero, sink);
      }
      if (aborted_) break;
    }
    y_[level] = 0;
  }

  void set_prefix(const Point& y) { y_ = y; }
  bool aborted() const { return aborted_; }
  std::uint64_t nodes() const { return nodes_; }

  void flush() {
    if (shared_ != nullptr && pending_ != 0) {
      shared_->fetch_add(pending_, std::memory_order_relaxed);
      pending_ = 0;
    }
  }

 private:
  bool tick() {
    ++nodes_;
    if (shared_ == nullptr) {
      if (nodes_ > budget_) budget_exceeded(budget_);
      return true;
    }
    if (++pending_ == 4096) {
      const auto total = shared_->fetch_add(pending_, std::memory_order_relaxed) + pending_;
      pending_ = 0;
      if (total > budget_) aborted_ = true;
    }
    return !aborted_;
  }

  const TreeProblem& p_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>* shared_;
  Point y_;
  std::uint64_t nodes_ = 0;
  std::uint64_t pending_ = 0;
  bool aborted_ = false;
};

struct Prefix {
  Point y;
  double used;
  bool all_zero;
};

}  // namespace

std::vector<Point> tree_search_serial(const TreeProblem& p, std::uint64_t node_budget, std::uint64_t* nodes) {
  std::vector<Point> out;
  if (p.n == 0) return out;
  Walker w(p, node_budget, nullptr);
  w.walk(p.n - 1, 0, 0.0, true, [&](const Point& y, double, bool) { out.push_back(y); });
  if (nodes != nullptr) *nodes = w.nodes();
  return out;
}

std::vector<Point> tree_search_parallel(const TreeProblem& p, std::uint64_t node_budget, std::uint64_t* nodes) {
  if (p.n < 3) return tree_search_serial(p, node_budget, nodes);

  // Split after the two top levels; prefixes are processed independently and
  // their outputs concatenated in prefix order, which is the serial order.
  std::vector<Prefix> prefixes;
  Walker top(p, node_budget, nullptr);
  top.walk(p.n - 1, p.n - 2, 0.0, true,
           [&](const Point& y, double used, bool zero) { prefixes.push_back({y, used, zero}); });

  std::atomic<std::uint64_t> shared{top.nodes()};
  std::vector<std::vector<Point>> parts(prefixes.size());
  bool aborted = false;
  const auto count = static_cast<std::int64_t>(prefixes.size());

#pragma omp parallel for schedule(dynamic, 1) reduction(|| : aborted)
  for (std::int64_t k = 0; k < count; ++k) {
    if (shared.load(std::memory_order_relaxed) > node_budget) {
      aborted = true;
      continue;
    }
    const auto& pre = prefixes[static_cast<std::size_t>(k)];
    Walker w(p, node_budget, &shared);
    w.set_prefix(pre.y);
    auto& part = parts[static_cast<std::size_t>(k)];
    w.walk(p.n - 3, 0, pre.used, pre.all_zero, [&](const Point& y, double, bool) { part.push_back(y); });
    w.flush();
    aborted = aborted || w.aborted();
  }
  if (aborted || shared.load() > node_budget) budget_exceeded(node_budget);

  std::vector<Point> out;
  for (auto& part : parts) {
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (nodes != nullptr) *nodes = shared.load();
  return out;
}

}  // namespace vlab::kernels
