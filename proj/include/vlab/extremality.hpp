#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vlab/spaces.hpp"

namespace vlab {

// eps_x(B_j) = Q(x, B_j x) / Q(x); rows follow space.points, columns follow
// space.extended_basis (identity column last, all ones).
struct EpsilonMatrix {
  RatMatrix values;
};

EpsilonMatrix epsilon_matrix(const SpaceDescriptor& space);

// eps_x(B) for an arbitrary list of selfadjoint endomorphisms of the ambient space.
RatMatrix epsilon_values(const SpaceDescriptor& space, const std::vector<SymEndo>& basis);

// Same values in integer form: eps_x(B_j) = factor * num[x][j] / q[x]. Points
// are rescaled to primitive integer vectors (eps is scale invariant). ok is
// false when some quantity does not fit in 64 bits.
struct IntegerEpsilon {
  bool ok = false;
  std::size_t points = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> num;
  std::vector<std::int64_t> q;
  Rat factor;
};

IntegerEpsilon integer_epsilon(const SpaceDescriptor& space, const std::vector<SymEndo>& basis);

struct EutaxyVerdict {
  bool eutactic = false;
  bool strongly_eutactic = false;
  std::optional<RatVector> weights;              // per point, positive, sum 1
  Rat margin;                                    // LP optimum: min weight
  std::optional<RatVector> violating_direction;  // gp coefficients of H with eps_x(H) >= 0, sum 1
};

// max t s.t. sum_x w_x eps_x(B_j) = tau_j, w_x >= t, solved exactly with
// w = u + t, u >= 0, t >= 0. Eutactic iff t > 0.
EutaxyVerdict test_eutaxy(const SpaceDescriptor& space);

struct PerfectionVerdict {
  bool perfect = false;
  bool weakly_perfect = false;
  std::size_t rank = 0;
  std::size_t gp_dim = 0;
  std::vector<SymEndo> kernel_basis;  // {H in gp + R Id : H x = 0 for all x}
  std::optional<std::vector<RatVector>> reducible_subspace;
};

PerfectionVerdict test_perfection(const SpaceDescriptor& space);

// Basis of U = intersection of ker H over the kernel basis. Requires weakly
// perfect and not perfect.
std::vector<RatVector> reducibility_subspace(const PerfectionVerdict& v);

enum class Extremality { strictly_extreme, extreme, not_extreme, inconclusive };
std::string to_string(Extremality e);

struct ExtremalityOptions {
  std::size_t subset_limit = 12;
};

struct ExtremalityReport {
  Extremality verdict = Extremality::inconclusive;
  EutaxyVerdict eutaxy;
  PerfectionVerdict perfection;
  std::size_t classes = 0;
  bool subset_search = false;                   // the exhaustive search ran
  std::size_t subsets_checked = 0;
  std::optional<std::vector<std::size_t>> witness;  // subset certifying "extreme"
};

// strictly_extreme iff perfect and eutactic. extreme iff some nonempty subset of
// the points is weakly perfect and eutactic; the full set is tried first, proper
// subsets only when there are at most subset_limit classes.
ExtremalityReport classify_extremality(const SpaceDescriptor& space, const ExtremalityOptions& opts = {});

// The space restricted to the points with the given indices.
SpaceDescriptor restrict_points(const SpaceDescriptor& space, const std::vector<std::size_t>& idx);

// Strong eutaxy and perfection of one layer in the classic space, streamed from
// the integer coordinates. The rank is built modulo a prime and stops at full
// rank, which certifies perfection; otherwise the rational point path decides,
// which throws ResourceError beyond max_exact_points classes.
struct LayerVoronoi {
  bool strongly_eutactic = false;
  bool perfect = false;
  std::size_t rank = 0;
  std::size_t dim = 0;  // dim gp + 1
};

struct LayerVoronoiOptions {
  bool rank = true;  // false: strong eutaxy only
  bool parallel = true;
  std::size_t max_exact_points = 200'000;
};

LayerVoronoi layer_voronoi(const QForm& q, const Layer& layer, const LayerVoronoiOptions& opts = {});

}  // namespace vlab
