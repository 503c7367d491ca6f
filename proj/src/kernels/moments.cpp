#include <omp.h>

#include <algorithm>
#include <numeric>

#include "vlab/kernels.hpp"

namespace vlab::kernels {

namespace {

// Points sharing one value of q, in input order within each group.
struct Group {
  std::int64_t q;
  std::vector<std::size_t> idx;
};

std::vector<Group> group_by_q(const MomentInput& in) {
  std::vector<std::size_t> order(in.points);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return in.q[a] < in.q[b]; });
  std::vector<Group> groups;
  for (auto i : order) {
    if (groups.empty() || groups.back().q != in.q[i]) groups.push_back({in.q[i], {}});
    groups.back().idx.push_back(i);
  }
  return groups;
}

template <bool Parallel>
MomentSums moment_sums(const MomentInput& in) {
  const std::size_t cols = in.cols;
  const std::size_t pairs = cols * (cols + 1) / 2;
  MomentSums out{std::vector<Rat>(cols), std::vector<Rat>(pairs)};
  std::vector<std::pair<std::size_t, std::size_t>> pair_list;
  for (std::size_t a = 0; a < cols; ++a)
    for (std::size_t b = a; b < cols; ++b) pair_list.emplace_back(a, b);

  for (const auto& g : group_by_q(in)) {
    std::vector<__int128> s1(cols, 0);
    std::vector<__int128> s2(pairs, 0);
    const auto np = static_cast<std::int64_t>(pairs);
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t k = 0; k < np; ++k) {
      const auto [a, b] = pair_list[static_cast<std::size_t>(k)];
      __int128 acc = 0;
      for (auto i : g.idx) {
        acc += static_cast<__int128>(in.num[i * cols + a]) * in.num[i * cols + b];
      }
      s2[static_cast<std::size_t>(k)] = acc;
    }
    for (std::size_t a = 0; a < cols; ++a) {
      __int128 acc = 0;
      for (auto i : g.idx) acc += in.num[i * cols + a];
      s1[a] = acc;
    }
    const Int q = static_cast<long>(g.q);
    const Int q2 = q * q;
    for (std::size_t a = 0; a < cols; ++a) out.first[a] += make_rat(from_int128(s1[a]), q);
    for (std::size_t k = 0; k < pairs; ++k) out.second[k] += make_rat(from_int128(s2[k]), q2);
  }
  return out;
}

}  // namespace

MomentSums moment_sums_serial(const MomentInput& in) { return moment_sums<false>(in); }
MomentSums moment_sums_parallel(const MomentInput& in) { return moment_sums<true>(in); }

}  // namespace vlab::kernels
