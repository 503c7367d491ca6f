#pragma once

// Serialized verdicts, the analyses behind every CLI command, and the replay
// of their certificates.

#include <optional>
#include <string>
#include <vector>

#include "vlab/designs.hpp"
#include "vlab/extremality.hpp"
#include "vlab/invariants.hpp"
#include "vlab/json_io.hpp"
#include "vlab/spaces.hpp"
#include "vlab/zeta.hpp"

namespace vlab {

inline constexpr const char* kVersion = "0.1.0";

// How a Voronoi space is built from a form. Stored in reports so that replay
// rebuilds the same space.
struct SpaceRequest {
  SpaceKind kind = SpaceKind::classic;
  std::optional<GroupGenSet> generators;  // invariant
  std::optional<RatMatrix> sigma;         // isodual
  std::size_t wedge = 1;                  // exterior
  std::optional<Rat> bound;               // exterior: tuples of vectors of value <= bound, default the minimum
};

json space_request_to_json(const SpaceRequest& r);
SpaceRequest space_request_from_json(const json& j);

// classic, invariant and isodual spaces take the minimal layer as points.
SpaceDescriptor build_space(const QForm& q, const SpaceRequest& r, const EnumOptions& opts = {});

// Weights are always "p/q" strings; other rationals follow rat_to_json.
json extremality_to_json(const ExtremalityReport& r);
ExtremalityReport extremality_from_json(const json& j, const RatMatrix& ambient_gram);
json design_to_json(const DesignVerdict& v);
DesignVerdict design_from_json(const json& j);
json monte_carlo_to_json(const MonteCarloVerdict& v);
MonteCarloVerdict monte_carlo_from_json(const json& j);
json rankin_to_json(const RankinResult& r);
RankinResult rankin_from_json(const json& j);
InvarianceVerdict invariance_from_json(const json& j);
ZetaResult zeta_from_json(const json& j);
ZetaVerdict zeta_verdict_from_json(const json& j);
ProbeReport probe_from_json(const json& j);

struct Analysis {
  std::string kind;  // minvec, layers, extremality, design, monte_carlo, zeta, invariant, rankin, catalog
  json result;
  friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct Report {
  std::string tool = "vlab";
  std::string version = kVersion;
  std::string command;
  json source;                 // {"catalog": name} or {"file": path}; null without an input form
  Rat scale = 1;
  std::optional<QForm> form;   // after scaling
  std::vector<Analysis> analyses;
  std::optional<json> timing;  // seconds per analysis, only when requested
};

bool operator==(const Report& a, const Report& b);
json report_to_json(const Report& r);
Report report_from_json(const json& j);
// Lossy human summary.
std::string report_to_text(const Report& r);

Analysis analyze_minvec(const QForm& q, const EnumOptions& opts = {});
Analysis analyze_layers(const QForm& q, const Rat& bound, const EnumOptions& opts = {});
Analysis analyze_extremality(const QForm& q, const SpaceRequest& space, const ExtremalityOptions& options = {},
                             const EnumOptions& opts = {});
Analysis analyze_design(const QForm& q, Strength strength, const Rat& bound, const EnumOptions& opts = {});
// Monte Carlo test of the minimal layer in the classic space.
Analysis analyze_monte_carlo(const QForm& q, Strength strength, std::size_t samples, std::uint64_t seed,
                             const EnumOptions& opts = {});

struct ZetaRequest {
  double s = 0.0;
  Rat bound;
  std::size_t directions = 0;  // probe directions, 0 skips the probe
  double step = 1e-3;
  std::uint64_t seed = 1;
  bool checks = false;  // run both bound-scoped checkers
};

Analysis analyze_zeta(const QForm& q, const ZetaRequest& request, const EnumOptions& opts = {});
Analysis analyze_invariant(const QForm& q, GroupGenSet generators);
Analysis analyze_rankin(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts = {});
Analysis analyze_catalog();

struct VerifyCheck {
  std::string analysis;
  std::string check;
  bool ok = false;
  std::string detail;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool ok() const;
};

// Re-derives every certificate of the report from its input form with code
// paths independent of the ones that produced it: exact epsilon values and
// fraction-free ranks instead of the LP and modular elimination, point-based
// residuals instead of monomial streaming, direct fixed-vector checks, and
// serial enumeration.
VerifyResult verify_report(const Report& r, const EnumOptions& opts = {});
json verify_to_json(const VerifyResult& v);

}  // namespace vlab
