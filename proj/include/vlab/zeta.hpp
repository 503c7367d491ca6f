#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vlab/enumerate.hpp"
#include "vlab/json_io.hpp"
#include "vlab/qform.hpp"

namespace vlab {

// Truncated Epstein zeta sum over 0 < Q(x) <= bound; requires s > n/2.
struct ZetaResult {
  double s = 0.0;
  double value = 0.0;
  Rat bound;
  double tail_estimate = 0.0;  // heuristic, from the fitted shell-count model
  double fitted_constant = 0.0;  // c in N(r) ~ c r^(n/2)
  std::size_t layers_used = 0;
};

// Counts N(r) of points with Q <= r are fitted by c r^(n/2) (least squares on
// the upper half of the shells); tail <= 2c (n/2) B^(n/2-s) / (s - n/2).
ZetaResult zeta_direct(const QForm& q, double s, const Rat& bound, const EnumOptions& opts = {});

// Same sum from precomputed layers, all of radius <= bound.
ZetaResult zeta_from_layers(const QForm& q, double s, const Rat& bound, const std::vector<Layer>& layers);

// zeta(Q_{tH}, s) = zeta(Q, s) + A t + B t^2 + O(t^3) over the truncated sum:
// A = -s sum Q^-s eps, B = s^2/2 sum Q^-s eps^2 - s/2 sum Q^-s (Q(Hx,Hx)/Q(x) - eps^2).
struct Directional {
  double a = 0.0;
  double b = 0.0;
};

Directional zeta_directional(const QForm& q, const SymEndo& h, double s, const Rat& bound,
                             const EnumOptions& opts = {});
Directional zeta_directional(const QForm& q, const SymEndo& h, double s, const std::vector<Layer>& layers);

// Truncated sum of Q_{tH}(x)^-s over the points of the given layers (the point
// set is that of Q, not of Q_{tH}).
double zeta_deformed(const QForm& q, const SymEndo& h, double t, double s, const std::vector<Layer>& layers,
                     bool parallel = true);

enum class ZetaCheck { delone_ryshkov, coulangeon };
std::string to_string(ZetaCheck k);

// Bound-scoped verdicts: holds_to_bound only speaks about layers of radius
// <= certified_bound.
struct ZetaVerdict {
  ZetaCheck kind = ZetaCheck::coulangeon;
  bool holds_to_bound = false;
  Rat certified_bound;
  double s_threshold = 0.0;
  std::optional<Rat> failing_layer;
  std::string failing_leg;  // "strong_eutaxy", "perfection" or "design"
  std::size_t layers_checked = 0;
  std::string statement;
};

// Every layer <= bound strongly eutactic and the minimal layer perfect.
ZetaVerdict delone_ryshkov_check(const QForm& q, const Rat& bound, const EnumOptions& opts = {});
// Every layer <= bound an exact 4-design; s_threshold = n/2.
ZetaVerdict coulangeon_check(const QForm& q, const Rat& bound, const EnumOptions& opts = {});

struct ProbeDirection {
  RatMatrix h;                // traceless, Q-selfadjoint, max |entry| = 1
  std::vector<double> values;  // t = -2d, -d, 0, d, 2d
  double second_difference = 0.0;  // f(d) - 2 f(0) + f(-d)
  double second_difference_wide = 0.0;  // f(2d) - 2 f(0) + f(-2d)
  double finite_difference = 0.0;  // (f(d) - f(-d)) / 2d
  double analytic_a = 0.0;
  double analytic_b = 0.0;
  // A counts as zero below 1e-9 s f(0); then |FD| <= 1e-4 s f(0) is required
  // instead of the relative test.
  bool first_order_vanishes = false;
  double relative_error = 0.0;  // |FD - A| / |A|, 0 when A vanishes
};

struct ProbeReport {
  double s = 0.0;
  double step = 0.0;
  Rat bound;
  std::uint64_t seed = 0;
  double value = 0.0;  // f(0)
  std::vector<ProbeDirection> directions;
  bool all_second_differences_positive = true;
  bool first_differences_consistent = true;
  double max_relative_error = 0.0;
};

// Numerical probe along seeded random directions; never a certificate.
ProbeReport zeta_local_probe(const QForm& q, double s, std::size_t directions, double step, std::uint64_t seed,
                             const Rat& bound, const EnumOptions& opts = {});

// Seeded random traceless Q-selfadjoint rational direction with max |entry| = 1.
RatMatrix random_traceless_direction(const QForm& q, std::uint64_t seed, std::size_t index);

json zeta_to_json(const ZetaResult& r);
json zeta_verdict_to_json(const ZetaVerdict& v);
json probe_to_json(const ProbeReport& r);

}  // namespace vlab
