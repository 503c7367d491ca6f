#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "vlab/json_io.hpp"
#include "vlab/qform.hpp"

namespace vlab {

// Nonzero lattice vector in the coordinates of the form's basis.
struct IntVector {
  std::vector<std::int64_t> coords;

  std::size_t size() const { return coords.size(); }
  std::span<const std::int64_t> span() const { return coords; }
  auto operator<=>(const IntVector&) const = default;
};

RatVector to_rational(const IntVector& v);

// All lattice vectors of Q-value `radius`, one per antipodal pair, each with
// its first nonzero coordinate positive, sorted lexicographically.
struct Layer {
  Rat radius;
  std::vector<IntVector> vectors;

  std::size_t count() const { return 2 * vectors.size(); }
  friend bool operator==(const Layer&, const Layer&) = default;
};

// Default 10^8 tree nodes, overridden by the VLAB_NODE_BUDGET environment variable.
std::uint64_t default_node_budget();

struct EnumOptions {
  std::uint64_t node_budget = default_node_budget();
  bool parallel = true;
};

// Every layer with radius <= bound, sorted by radius. Fincke-Pohst search on an
// LLL-reduced basis; all candidates are re-evaluated exactly. Throws
// ResourceError when the node budget is exhausted.
std::vector<Layer> vectors_up_to(const QForm& q, const Rat& bound, const EnumOptions& opts = {});

// The nonempty layer of smallest radius; its radius is the minimum of Q.
Layer minimal_vectors(const QForm& q, const EnumOptions& opts = {});

struct OracleLimits {
  std::size_t max_dim = 10;
  std::uint64_t max_box = 400'000'000;
  bool parallel = true;
};

// Exhaustive box search: |y_i| <= floor(sqrt(bound * G'^{-1}_{ii})) in a basis
// whose dual was pairwise reduced. Independent of the tree search; meant for tests.
std::vector<Layer> brute_force_oracle(const QForm& q, const Rat& bound, const OracleLimits& limits = {});

// Canonical antipodal representative: first nonzero coordinate positive.
IntVector canonical_sign(IntVector v);

// {"radii": [...], "counts": [...], "vectors": {"<r>": [[...], ...]}}
json layers_to_json(const std::vector<Layer>& layers);
std::vector<Layer> layers_from_json(const json& j);

// Basis change U (column j = j-th new basis vector) produced by LLL with
// delta = 0.99 on the Gram matrix. Deterministic.
std::vector<std::int64_t> lll_transform(const QForm& q);

}  // namespace vlab
