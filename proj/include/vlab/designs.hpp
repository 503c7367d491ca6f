#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlab/spaces.hpp"

namespace vlab {

enum class Strength { S2, S22, S4, Four };
std::string to_string(Strength s);
Strength strength_from_string(const std::string& s);  // "2", "2,2", "{4}", "4"

// <Q(x, Hx)/Q(x)> over the projective space: tr(H)/n.
Rat average_quadratic(const SymEndo& h, std::size_t n);

// <eps(H) eps(J)> = (2 tr(HJ) + tr(H) tr(J)) / (n (n + 2)).
Rat average_quartic(const SymEndo& h, const SymEndo& j, std::size_t n);

// Basis of span{B_i B_j + B_j B_i} over the extended basis.
std::vector<SymEndo> pp2_basis(const SpaceDescriptor& space);

struct Residual {
  std::string key;  // "s2:j", "s22:i,j" or "s4:k"; indices refer to the basis used
  Rat value;        // sum_x W_x f(x) - <f>
};

struct DesignVerdict {
  Strength strength = Strength::Four;
  bool holds = false;
  std::vector<Residual> residuals;  // every tested functional, zeros included
  std::optional<RatVector> weights;
  std::size_t points = 0;
};

struct DesignOptions {
  std::optional<RatVector> weights;  // positive, sum 1; equal weights otherwise
  bool parallel = true;
};

// Exact test in the classic space (or an exterior power with m = 1). Throws
// PreconditionError for other spaces.
DesignVerdict test_design(const SpaceDescriptor& space, Strength strength, const DesignOptions& opts = {});

// Exact test on one layer of the classic space from monomial sums of the integer
// coordinates; gives the residuals of test_design on points_from_layer(q, layer)
// without forming rational points.
DesignVerdict test_layer_design(const QForm& q, const Layer& layer, Strength strength, bool parallel = true);

struct LayerDesign {
  Rat radius;
  DesignVerdict verdict;
};

struct LayersDesignReport {
  std::vector<LayerDesign> layers;
  bool all_hold = true;
};

// Unweighted runs go through test_layer_design.
LayersDesignReport test_layers_design(const QForm& q, const Rat& bound, Strength strength,
                                      const EnumOptions& enum_opts = {}, const DesignOptions& opts = {});

struct McEntry {
  std::string key;
  double residual = 0.0;  // design average minus Monte Carlo estimate of <f>
  double std_error = 0.0;
};

struct MonteCarloVerdict {
  Strength strength = Strength::S2;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<McEntry> entries;
  double threshold = 3.0;  // per-entry z threshold (Sidak-corrected 3 sigma)
  double max_z = 0.0;
  bool consistent = true;
};

// Haar-random Q-orthogonal images of a reference point of the space's orbit;
// fixed chunks of 1024 samples seeded by (seed, chunk), merged in chunk order.
MonteCarloVerdict monte_carlo_design(const SpaceDescriptor& space, Strength strength, std::size_t samples,
                                     std::uint64_t seed, bool parallel = true);

}  // namespace vlab
