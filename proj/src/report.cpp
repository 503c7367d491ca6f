#include "vlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vlab/catalog.hpp"
#include "vlab/error.hpp"
#include "vlab/kernels.hpp"

namespace vlab {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

json weights_to_json(const RatVector& w) {
  json a = json::array();
  for (const auto& x : w) a.push_back(to_string(x));
  return a;
}

json optional_vector(const std::optional<RatVector>& v) { return v ? vector_to_json(*v) : json(nullptr); }

std::optional<RatVector> optional_vector_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return vector_from_json(j);
}

json points_to_json(const std::vector<SpacePoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vector_to_json(p.coords));
  return a;
}

}  // namespace

// ---- space requests ------------------------------------------------------------

json space_request_to_json(const SpaceRequest& r) {
  json j{{"kind", to_string(r.kind)}};
  if (r.generators) j["generators"] = group_to_json(*r.generators);
  if (r.sigma) j["sigma"] = matrix_to_json(*r.sigma);
  if (r.kind == SpaceKind::exterior) {
    j["wedge"] = r.wedge;
    j["bound"] = r.bound ? rat_to_json(*r.bound) : json(nullptr);
  }
  return j;
}

SpaceRequest space_request_from_json(const json& j) {
  SpaceRequest r;
  r.kind = space_kind_from_string(get<std::string>(j, "kind"));
  if (j.contains("generators")) r.generators = group_from_json(j.at("generators"));
  if (j.contains("sigma")) r.sigma = matrix_from_json(j.at("sigma"));
  if (j.contains("wedge")) r.wedge = get<std::size_t>(j, "wedge");
  if (j.contains("bound") && !j.at("bound").is_null()) r.bound = rat_from_json(j.at("bound"));
  return r;
}

SpaceDescriptor build_space(const QForm& q, const SpaceRequest& r, const EnumOptions& opts) {
  switch (r.kind) {
    case SpaceKind::classic:
      return classic_space(q, points_from_layer(q, minimal_vectors(q, opts)));
    case SpaceKind::invariant:
      if (!r.generators) throw ParseError("the invariant space needs group generators");
      return invariant_family_space(q, points_from_layer(q, minimal_vectors(q, opts)), *r.generators);
    case SpaceKind::isodual:
      if (!r.sigma) throw ParseError("the isodual space needs sigma");
      return isodual_family_space(q, points_from_layer(q, minimal_vectors(q, opts)), *r.sigma);
    case SpaceKind::duality_product:
      return duality_product_space(q, opts);
    case SpaceKind::exterior: {
      const Rat bound = r.bound ? *r.bound : minimal_vectors(q, opts).radius;
      return exterior_power_space(q, r.wedge, bound, opts);
    }
  }
  throw ParseError("unknown space kind");
}

// ---- verdict serialization -------------------------------------------------------

json extremality_to_json(const ExtremalityReport& r) {
  const auto& e = r.eutaxy;
  const auto& p = r.perfection;
  json kernel = json::array();
  for (const auto& k : p.kernel_basis) kernel.push_back(matrix_to_json(k.matrix()));
  json reducible = nullptr;
  if (p.reducible_subspace) reducible = matrix_to_json(RatMatrix::from_rows(*p.reducible_subspace));
  json witness = nullptr;
  if (r.witness) witness = *r.witness;
  return json{{"verdict", to_string(r.verdict)},
              {"extreme", r.verdict == Extremality::strictly_extreme || r.verdict == Extremality::extreme},
              {"strictly_extreme", r.verdict == Extremality::strictly_extreme},
              {"classes", r.classes},
              {"eutaxy",
               {{"eutactic", e.eutactic},
                {"strongly_eutactic", e.strongly_eutactic},
                {"weights", e.weights ? weights_to_json(*e.weights) : json(nullptr)},
                {"margin", to_string(e.margin)},
                {"violating_direction", optional_vector(e.violating_direction)}}},
              {"perfection",
               {{"perfect", p.perfect},
                {"weakly_perfect", p.weakly_perfect},
                {"rank", p.rank},
                {"gp_dim", p.gp_dim},
                {"kernel_basis", kernel},
                {"reducible_subspace", reducible}}},
              {"subset_search", r.subset_search},
              {"subsets_checked", r.subsets_checked},
              {"witness", witness}};
}

ExtremalityReport extremality_from_json(const json& j, const RatMatrix& ambient_gram) {
  ExtremalityReport r;
  const auto verdict = get<std::string>(j, "verdict");
  bool known = false;
  for (auto v : {Extremality::strictly_extreme, Extremality::extreme, Extremality::not_extreme,
                 Extremality::inconclusive}) {
    if (to_string(v) == verdict) {
      r.verdict = v;
      known = true;
    }
  }
  if (!known) throw ParseError("unknown extremality verdict \"" + verdict + "\"");
  r.classes = get<std::size_t>(j, "classes");
  const auto& e = field(j, "eutaxy");
  r.eutaxy.eutactic = get<bool>(e, "eutactic");
  r.eutaxy.strongly_eutactic = get<bool>(e, "strongly_eutactic");
  r.eutaxy.weights = optional_vector_from(field(e, "weights"));
  r.eutaxy.margin = rat_from_json(field(e, "margin"));
  r.eutaxy.violating_direction = optional_vector_from(field(e, "violating_direction"));
  const auto& p = field(j, "perfection");
  r.perfection.perfect = get<bool>(p, "perfect");
  r.perfection.weakly_perfect = get<bool>(p, "weakly_perfect");
  r.perfection.rank = get<std::size_t>(p, "rank");
  r.perfection.gp_dim = get<std::size_t>(p, "gp_dim");
  for (const auto& k : field(p, "kernel_basis")) {
    r.perfection.kernel_basis.push_back(SymEndo::make(matrix_from_json(k), ambient_gram));
  }
  if (!field(p, "reducible_subspace").is_null()) {
    const RatMatrix u = matrix_from_json(p.at("reducible_subspace"));
    std::vector<RatVector> rows;
    for (std::size_t i = 0; i < u.rows(); ++i) rows.push_back(u.row_vector(i));
    r.perfection.reducible_subspace = rows;
  }
  r.subset_search = get<bool>(j, "subset_search");
  r.subsets_checked = get<std::size_t>(j, "subsets_checked");
  if (!field(j, "witness").is_null()) r.witness = j.at("witness").get<std::vector<std::size_t>>();
  return r;
}

json design_to_json(const DesignVerdict& v) {
  json residuals = json::array();
  for (const auto& r : v.residuals) residuals.push_back({{"key", r.key}, {"value", rat_to_json(r.value)}});
  return json{{"strength", to_string(v.strength)},
              {"holds", v.holds},
              {"points", v.points},
              {"weights", v.weights ? weights_to_json(*v.weights) : json(nullptr)},
              {"residuals", residuals}};
}

DesignVerdict design_from_json(const json& j) {
  DesignVerdict v;
  v.strength = strength_from_string(get<std::string>(j, "strength"));
  v.holds = get<bool>(j, "holds");
  v.points = get<std::size_t>(j, "points");
  v.weights = optional_vector_from(field(j, "weights"));
  for (const auto& r : field(j, "residuals")) v.residuals.push_back({get<std::string>(r, "key"), rat_from_json(field(r, "value"))});
  return v;
}

json monte_carlo_to_json(const MonteCarloVerdict& v) {
  json entries = json::array();
  for (const auto& e : v.entries) {
    entries.push_back({{"key", e.key}, {"residual", e.residual}, {"std_error", e.std_error}});
  }
  return json{{"strength", to_string(v.strength)},
              {"samples", v.samples},
              {"seed", v.seed},
              {"threshold", v.threshold},
              {"max_z", v.max_z},
              {"consistent", v.consistent},
              {"entries", entries}};
}

MonteCarloVerdict monte_carlo_from_json(const json& j) {
  MonteCarloVerdict v;
  v.strength = strength_from_string(get<std::string>(j, "strength"));
  v.samples = get<std::size_t>(j, "samples");
  v.seed = get<std::uint64_t>(j, "seed");
  v.threshold = get<double>(j, "threshold");
  v.max_z = get<double>(j, "max_z");
  v.consistent = get<bool>(j, "consistent");
  for (const auto& e : field(j, "entries")) {
    v.entries.push_back({get<std::string>(e, "key"), get<double>(e, "residual"), get<double>(e, "std_error")});
  }
  return v;
}

json rankin_to_json(const RankinResult& r) {
  return json{{"m", r.m},
              {"bound", rat_to_json(r.bound)},
              {"min_det", rat_to_json(r.min_det)},
              {"tuples", r.tuples},
              {"value", r.value},
              {"exact", r.exact ? rat_to_json(*r.exact) : json(nullptr)},
              {"scope", "minimum over tuples of vectors of value <= bound"}};
}

RankinResult rankin_from_json(const json& j) {
  RankinResult r;
  r.m = get<std::size_t>(j, "m");
  r.bound = rat_from_json(field(j, "bound"));
  r.min_det = rat_from_json(field(j, "min_det"));
  r.tuples = get<std::size_t>(j, "tuples");
  r.value = get<double>(j, "value");
  if (!field(j, "exact").is_null()) r.exact = rat_from_json(j.at("exact"));
  return r;
}

InvarianceVerdict invariance_from_json(const json& j) {
  auto space = [](const json& s) {
    FixedSpace f;
    f.degree = get<std::size_t>(s, "degree");
    for (const auto& b : field(s, "basis")) f.basis.push_back(vector_from_json(b));
    if (get<std::size_t>(s, "dim") != f.basis.size()) throw ParseError("fixed space dim disagrees with its basis");
    return f;
  };
  InvarianceVerdict v;
  v.degree2 = space(field(j, "fixed_degree2"));
  v.degree4 = space(field(j, "fixed_degree4"));
  v.fc22_dim = get<std::size_t>(j, "fc22_dim");
  v.passes_Fc22 = get<bool>(j, "passes_Fc22");
  v.passes_Fc4 = get<bool>(j, "passes_Fc4");
  return v;
}

ZetaResult zeta_from_json(const json& j) {
  ZetaResult r;
  r.s = get<double>(j, "s");
  r.value = get<double>(j, "value");
  r.bound = rat_from_json(field(j, "bound"));
  r.tail_estimate = get<double>(j, "tail_estimate");
  r.fitted_constant = get<double>(j, "fitted_constant");
  r.layers_used = get<std::size_t>(j, "layers_used");
  return r;
}

ZetaVerdict zeta_verdict_from_json(const json& j) {
  ZetaVerdict v;
  const auto kind = get<std::string>(j, "kind");
  if (kind == to_string(ZetaCheck::delone_ryshkov)) {
    v.kind = ZetaCheck::delone_ryshkov;
  } else if (kind == to_string(ZetaCheck::coulangeon)) {
    v.kind = ZetaCheck::coulangeon;
  } else {
    throw ParseError("unknown zeta check \"" + kind + "\"");
  }
  v.holds_to_bound = get<bool>(j, "holds_to_bound");
  v.certified_bound = rat_from_json(field(j, "certified_bound"));
  v.s_threshold = get<double>(j, "s_threshold");
  v.layers_checked = get<std::size_t>(j, "layers_checked");
  v.statement = get<std::string>(j, "statement");
  if (!field(j, "failing_layer").is_null()) v.failing_layer = rat_from_json(j.at("failing_layer"));
  if (!field(j, "failing_leg").is_null()) v.failing_leg = j.at("failing_leg").get<std::string>();
  return v;
}

ProbeReport probe_from_json(const json& j) {
  ProbeReport r;
  r.s = get<double>(j, "s");
  r.step = get<double>(j, "step");
  r.bound = rat_from_json(field(j, "bound"));
  r.seed = get<std::uint64_t>(j, "seed");
  r.value = get<double>(j, "value");
  for (const auto& d : field(j, "directions")) {
    ProbeDirection p;
    p.h = matrix_from_json(field(d, "h"));
    p.values = get<std::vector<double>>(d, "values");
    p.second_difference = get<double>(d, "second_difference");
    p.second_difference_wide = get<double>(d, "second_difference_wide");
    p.finite_difference = get<double>(d, "finite_difference");
    p.analytic_a = get<double>(d, "analytic_a");
    p.analytic_b = get<double>(d, "analytic_b");
    p.first_order_vanishes = get<bool>(d, "first_order_vanishes");
    p.relative_error = get<double>(d, "relative_error");
    r.directions.push_back(std::move(p));
  }
  r.all_second_differences_positive = get<bool>(j, "all_second_differences_positive");
  r.first_differences_consistent = get<bool>(j, "first_differences_consistent");
  r.max_relative_error = get<double>(j, "max_relative_error");
  return r;
}

// ---- reports ---------------------------------------------------------------------

bool operator==(const Report& a, const Report& b) {
  const bool forms = a.form.has_value() == b.form.has_value() &&
                     (!a.form || (a.form->gram() == b.form->gram() && a.form->name() == b.form->name()));
  return forms && a.tool == b.tool && a.version == b.version && a.command == b.command && a.source == b.source &&
         a.scale == b.scale && a.analyses == b.analyses && a.timing == b.timing;
}

json report_to_json(const Report& r) {
  json analyses = json::array();
  for (const auto& a : r.analyses) analyses.push_back({{"kind", a.kind}, {"result", a.result}});
  json j{{"tool", r.tool}, {"version", r.version}, {"command", r.command}, {"analyses", analyses}};
  if (r.form) {
    j["input"] = {{"source", r.source}, {"scale", rat_to_json(r.scale)}, {"form", qform_to_json(*r.form)}};
  } else {
    j["input"] = nullptr;
  }
  if (r.timing) j["timing"] = *r.timing;
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.tool = get<std::string>(j, "tool");
  r.version = get<std::string>(j, "version");
  r.command = get<std::string>(j, "command");
  const auto& input = field(j, "input");
  if (!input.is_null()) {
    r.source = field(input, "source");
    r.scale = rat_from_json(field(input, "scale"));
    r.form = qform_from_json(field(input, "form"));
  }
  for (const auto& a : field(j, "analyses")) r.analyses.push_back({get<std::string>(a, "kind"), field(a, "result")});
  if (j.contains("timing")) r.timing = j.at("timing");
  return r;
}

std::string report_to_text(const Report& r) {
  std::ostringstream out;
  out << r.tool << ' ' << r.version << ' ' << r.command;
  if (r.form) out << "  form " << (r.form->name().empty() ? "(unnamed)" : r.form->name()) << " dim " << r.form->dim();
  if (r.scale != 1) out << " scaled by " << to_string(r.scale);
  out << '\n';
  for (const auto& a : r.analyses) {
    const json& j = a.result;
    out << a.kind << ": ";
    if (a.kind == "minvec") {
      out << "minimum " << to_string(rat_from_json(j.at("radius"))) << ", " << j.at("count").get<std::size_t>()
          << " vectors";
    } else if (a.kind == "layers") {
      const auto& l = j.at("layers");
      for (std::size_t i = 0; i < l.at("radii").size(); ++i) {
        out << (i ? ", " : "") << to_string(rat_from_json(l.at("radii")[i])) << ':' << l.at("counts")[i].get<std::size_t>();
      }
    } else if (a.kind == "extremality") {
      const auto& e = j.at("extremality");
      out << e.at("verdict").get<std::string>() << " in the " << j.at("space").at("label").get<std::string>()
          << " space (eutactic " << e.at("eutaxy").at("eutactic") << ", strongly eutactic "
          << e.at("eutaxy").at("strongly_eutactic") << ", rank " << e.at("perfection").at("rank") << " of "
          << e.at("perfection").at("gp_dim").get<std::size_t>() + 1 << ")";
    } else if (a.kind == "design") {
      out << "strength " << j.at("strength").get<std::string>() << " up to " << to_string(rat_from_json(j.at("bound")))
          << ": " << (j.at("all_hold").get<bool>() ? "all layers hold" : "fails");
      for (const auto& l : j.at("layers")) {
        out << "\n  layer " << to_string(rat_from_json(l.at("radius"))) << ": "
            << (l.at("verdict").at("holds").get<bool>() ? "holds" : "fails");
      }
    } else if (a.kind == "monte_carlo") {
      out << "strength " << j.at("strength").get<std::string>() << ", " << j.at("samples") << " samples: "
          << (j.at("consistent").get<bool>() ? "consistent" : "rejected") << " (max z " << j.at("max_z") << ")";
    } else if (a.kind == "zeta") {
      const auto& z = j.at("zeta");
      out << "zeta(s=" << z.at("s") << ") = " << z.at("value") << " over Q <= " << to_string(rat_from_json(z.at("bound")))
          << ", heuristic tail " << z.at("tail_estimate");
      if (j.contains("checks")) {
        for (const auto& c : j.at("checks")) out << "\n  " << c.at("statement").get<std::string>();
      }
      if (j.contains("probe")) {
        const auto& p = j.at("probe");
        out << "\n  probe: second differences " << (p.at("all_second_differences_positive").get<bool>() ? "all positive" : "not all positive")
            << ", max relative derivative error " << p.at("max_relative_error");
      }
    } else if (a.kind == "invariant") {
      const auto& v = j.at("verdict");
      out << "fixed dims (" << v.at("fixed_dims")[0] << ", " << v.at("fixed_dims")[1] << "), "
          << (v.at("passes_Fc4").get<bool>() ? "passes" : "fails") << "; " << j.at("statement").get<std::string>();
    } else if (a.kind == "rankin") {
      out << "m = " << j.at("m") << ", minimal determinant " << to_string(rat_from_json(j.at("min_det")))
          << ", value " << j.at("value");
      if (!j.at("exact").is_null()) out << " = " << to_string(rat_from_json(j.at("exact")));
    } else if (a.kind == "catalog") {
      for (const auto& e : j.at("entries")) {
        out << "\n  " << e.at("name").get<std::string>() << "  dim " << e.at("dim") << "  det "
            << to_string(rat_from_json(e.at("det"))) << "  min " << to_string(rat_from_json(e.at("min")))
            << "  kissing " << e.at("kissing");
      }
    }
    out << '\n';
  }
  return out.str();
}

// ---- analyses --------------------------------------------------------------------

Analysis analyze_minvec(const QForm& q, const EnumOptions& opts) {
  const Layer l = minimal_vectors(q, opts);
  return {"minvec", json{{"radius", rat_to_json(l.radius)}, {"count", l.count()}, {"layers", layers_to_json({l})}}};
}

Analysis analyze_layers(const QForm& q, const Rat& bound, const EnumOptions& opts) {
  return {"layers", json{{"bound", rat_to_json(bound)}, {"layers", layers_to_json(vectors_up_to(q, bound, opts))}}};
}

Analysis analyze_extremality(const QForm& q, const SpaceRequest& request, const ExtremalityOptions& options,
                             const EnumOptions& opts) {
  const SpaceDescriptor space = build_space(q, request, opts);
  const ExtremalityReport r = classify_extremality(space, options);
  json s{{"request", space_request_to_json(request)},
         {"label", space.label},
         {"ambient_dim", space.ambient_dim},
         {"gp_dim", space.gp_dim()},
         {"points", points_to_json(space.points)}};
  return {"extremality", json{{"space", s}, {"subset_limit", options.subset_limit}, {"extremality", extremality_to_json(r)}}};
}

Analysis analyze_design(const QForm& q, Strength strength, const Rat& bound, const EnumOptions& opts) {
  const auto report = test_layers_design(q, bound, strength, opts);
  json layers = json::array();
  for (const auto& l : report.layers) {
    layers.push_back({{"radius", rat_to_json(l.radius)}, {"verdict", design_to_json(l.verdict)}});
  }
  return {"design", json{{"strength", to_string(strength)},
                         {"bound", rat_to_json(bound)},
                         {"all_hold", report.all_hold},
                         {"layers", layers}}};
}

Analysis analyze_monte_carlo(const QForm& q, Strength strength, std::size_t samples, std::uint64_t seed,
                             const EnumOptions& opts) {
  const auto space = classic_space(q, points_from_layer(q, minimal_vectors(q, opts)));
  return {"monte_carlo", monte_carlo_to_json(monte_carlo_design(space, strength, samples, seed, opts.parallel))};
}

Analysis analyze_zeta(const QForm& q, const ZetaRequest& request, const EnumOptions& opts) {
  json j{{"zeta", zeta_to_json(zeta_direct(q, request.s, request.bound, opts))}};
  if (request.checks) {
    j["checks"] = json::array({zeta_verdict_to_json(delone_ryshkov_check(q, request.bound, opts)),
                               zeta_verdict_to_json(coulangeon_check(q, request.bound, opts))});
  }
  if (request.directions > 0) {
    j["probe"] = probe_to_json(
        zeta_local_probe(q, request.s, request.directions, request.step, request.seed, request.bound, opts));
  }
  return {"zeta", j};
}

Analysis analyze_invariant(const QForm& q, GroupGenSet generators) {
  check_generators(q, generators);
  const InvarianceVerdict v = invariance_criterion(generators);
  std::string statement;
  const std::string half = to_string(make_rat(static_cast<long>(q.dim()), 2));
  if (v.passes_Fc4) {
    statement = "only Q and Q^2 are invariant: every layer is a 4-design, so the form is strictly extreme and "
                "zeta-extreme for every s > " + half;
  } else if (v.passes_Fc22) {
    statement = "every layer is a {2,2}-design, so the form is strictly extreme";
  } else {
    statement = "nonconstant invariants exist: the criterion does not apply";
  }
  return {"invariant",
          json{{"generators", group_to_json(generators)}, {"verdict", invariance_to_json(v)}, {"statement", statement}}};
}

Analysis analyze_rankin(const QForm& q, std::size_t m, const Rat& bound, const EnumOptions& opts) {
  return {"rankin", rankin_to_json(rankin_invariant(q, m, bound, opts))};
}

Analysis analyze_catalog() {
  json entries = json::array();
  for (const auto& name : catalog_names()) {
    const auto e = catalog_entry(name);
    entries.push_back({{"name", e.name},
                       {"dim", e.form.dim()},
                       {"det", rat_to_json(e.det)},
                       {"min", rat_to_json(e.min)},
                       {"kissing", e.kissing},
                       {"automorphisms", e.aut.has_value()},
                       {"notes", e.notes}});
  }
  return {"catalog", json{{"entries", entries}}};
}

// ---- replay ----------------------------------------------------------------------

bool VerifyResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.ok; });
}

json verify_to_json(const VerifyResult& v) {
  json checks = json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"analysis", c.analysis}, {"check", c.check}, {"ok", c.ok}, {"detail", c.detail}});
  }
  return json{{"ok", v.ok()}, {"checks", checks}};
}

namespace {

class Checks {
 public:
  Checks(VerifyResult& out, std::string analysis) : out_(out), analysis_(std::move(analysis)) {}
  bool expect(bool ok, const std::string& check, const std::string& detail = {}) {
    out_.checks.push_back({analysis_, check, ok, detail});
    return ok;
  }

 private:
  VerifyResult& out_;
  std::string analysis_;
};

// Q(x, Bx) / Q(x) straight from the ambient Gram matrix.
Rat eps(const RatMatrix& gram, const RatMatrix& b, const RatVector& x) {
  const RatVector gx = gram * x;
  const RatVector bx = b * x;
  return dot(gx, bx) / dot(gx, x);
}

RatMatrix flatten(const std::vector<RatMatrix>& ms) {
  RatMatrix out(0, ms.empty() ? 0 : ms.front().rows() * ms.front().cols());
  for (const auto& m : ms) out.append_row(m.data());
  return out;
}

// Certificates of one point configuration: weights, violating direction,
// strong eutaxy, rank, common kernel, reducible subspace.
void check_configuration(const SpaceDescriptor& space, const EutaxyVerdict& eu, const PerfectionVerdict& pf,
                         Checks& c, const std::string& label) {
  const auto& basis = space.extended_basis;
  const std::size_t d = basis.size();
  const std::size_t k = space.points.size();
  const std::size_t n = space.ambient_dim;
  RatMatrix e(k, d);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t j = 0; j < d; ++j) e(x, j) = eps(space.gram, basis[j].matrix(), space.points[x].coords);

  auto satisfies = [&](const RatVector& w) {
    for (std::size_t j = 0; j < d; ++j) {
      Rat s = 0;
      for (std::size_t x = 0; x < k; ++x) s += w[x] * e(x, j);
      if (s != space.tau[j]) return false;
    }
    return true;
  };

  if (eu.eutactic) {
    bool ok = eu.weights && eu.weights->size() == k;
    if (ok) {
      Rat sum = 0;
      Rat least = (*eu.weights)[0];
      for (const auto& w : *eu.weights) {
        ok = ok && w > 0;
        sum += w;
        least = std::min(least, w);
      }
      ok = ok && sum == 1 && least == eu.margin && satisfies(*eu.weights);
    }
    c.expect(ok, label + ": eutaxy weights", "positive, sum 1, sum_x w_x eps_x(B_j) = tau_j exactly, margin = min weight");
  } else {
    bool ok = eu.violating_direction && eu.violating_direction->size() == space.gp_dim();
    if (ok) {
      RatMatrix h(n, n);
      for (std::size_t j = 0; j < space.gp_dim(); ++j) h = h + (*eu.violating_direction)[j] * space.gp_basis[j].matrix();
      Rat sum = 0;
      for (const auto& p : space.points) {
        const Rat v = eps(space.gram, h, p.coords);
        ok = ok && v >= 0;
        sum += v;
      }
      ok = ok && sum == 1;
    }
    c.expect(ok, label + ": violating direction", "traceless H with eps_x(H) >= 0 for all x and sum 1");
  }
  c.expect(satisfies(RatVector(k, Rat(1, static_cast<long>(k)))) == eu.strongly_eutactic,
           label + ": strong eutaxy", "equal weights tested directly");

  const std::size_t rank = rank_fraction_free(e);
  c.expect(rank == pf.rank && pf.perfect == (rank == d) && pf.gp_dim == space.gp_dim(), label + ": rank",
           "fraction-free rank " + std::to_string(rank) + " of " + std::to_string(d));

  if (pf.perfect) {
    c.expect(pf.kernel_basis.empty() && pf.weakly_perfect, label + ": kernel", "perfect, no common kernel");
    return;
  }
  RatMatrix sys(k * n, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t x = 0; x < k; ++x) {
      const RatVector bx = basis[j].matrix() * space.points[x].coords;
      for (std::size_t i = 0; i < n; ++i) sys(x * n + i, j) = bx[i];
    }
  }
  std::vector<RatMatrix> basis_m;
  for (const auto& b : basis) basis_m.push_back(b.matrix());
  std::vector<RatMatrix> kernel_m;
  bool ok = true;
  for (const auto& kb : pf.kernel_basis) {
    kernel_m.push_back(kb.matrix());
    for (const auto& p : space.points) ok = ok && is_zero(RatMatrix::from_rows({kb.matrix() * p.coords}));
    auto with = basis_m;
    with.push_back(kb.matrix());
    ok = ok && rank_fraction_free(flatten(with)) == d;
  }
  const std::size_t kernel_dim = d - rank_fraction_free(sys);
  ok = ok && kernel_dim == pf.kernel_basis.size() &&
       (kernel_m.empty() || rank_fraction_free(flatten(kernel_m)) == kernel_m.size());
  c.expect(ok, label + ": kernel", "H x = 0 on every point, H in gp + R Id, independent, dim " + std::to_string(kernel_dim));
  c.expect(pf.weakly_perfect == (rank == d - kernel_dim), label + ": weak perfection");

  if (pf.reducible_subspace) {
    const auto& u = *pf.reducible_subspace;
    bool red = !u.empty() && u.size() < n;
    for (const auto& v : u)
      for (const auto& kb : pf.kernel_basis) red = red && is_zero(RatMatrix::from_rows({kb.matrix() * v}));
    if (red) {
      const RatMatrix um = RatMatrix::from_rows(u);
      const std::size_t ur = rank_fraction_free(um);
      red = ur == u.size();
      for (const auto& p : space.points) {
        RatMatrix with = um;
        with.append_row(p.coords);
        red = red && rank_fraction_free(with) == ur;
      }
    }
    c.expect(red, label + ": reducible subspace", "kernel directions vanish on U, points lie in U, U proper");
  } else {
    c.expect(!(pf.weakly_perfect && !pf.perfect), label + ": reducible subspace", "present whenever weakly perfect and not perfect");
  }
}

EnumOptions serial(EnumOptions opts) {
  opts.parallel = false;
  return opts;
}

// Completeness through the brute-force box oracle when it fits, serial tree search otherwise.
std::vector<Layer> reference_layers(const QForm& q, const Rat& bound, const EnumOptions& opts) {
  if (q.dim() <= 10) {
    try {
      return brute_force_oracle(q, bound, OracleLimits{10, 50'000'000, false});
    } catch (const ResourceError&) {
    }
  }
  return vectors_up_to(q, bound, serial(opts));
}

void verify_layers(const QForm& q, const std::vector<Layer>& claimed, const Rat& bound, const EnumOptions& opts,
                   Checks& c) {
  bool exact = true;
  for (const auto& l : claimed) {
    for (std::size_t i = 0; i < l.vectors.size(); ++i) {
      const auto& v = l.vectors[i];
      exact = exact && v.size() == q.dim() && eval(q, v.span()) == l.radius && canonical_sign(v) == v &&
              (i == 0 || l.vectors[i - 1] < v);
    }
  }
  c.expect(exact, "vector values", "every vector has its layer's value, canonical sign, sorted without repeats");
  const auto ref = reference_layers(q, bound, opts);
  c.expect(ref == claimed, "completeness", "independent enumeration up to " + to_string(bound));
}

void verify_extremality(const QForm& q, const json& res, const EnumOptions& opts, Checks& c) {
  const SpaceRequest req = space_request_from_json(field(field(res, "space"), "request"));
  const SpaceDescriptor space = build_space(q, req, serial(opts));
  const auto& pts = field(res.at("space"), "points");
  bool same = pts.size() == space.points.size();
  for (std::size_t i = 0; same && i < pts.size(); ++i) same = vector_from_json(pts[i]) == space.points[i].coords;
  if (!c.expect(same, "points", "rebuilt space has the reported points")) return;
  const ExtremalityReport r = extremality_from_json(field(res, "extremality"), space.gram);
  c.expect(r.classes == space.points.size(), "classes");
  check_configuration(space, r.eutaxy, r.perfection, c, "full set");

  const bool full_ok = r.eutaxy.eutactic && r.perfection.weakly_perfect;
  switch (r.verdict) {
    case Extremality::strictly_extreme:
      c.expect(r.eutaxy.eutactic && r.perfection.perfect, "verdict", "perfect and eutactic");
      break;
    case Extremality::extreme: {
      if (!c.expect(r.witness.has_value() && !r.witness->empty(), "verdict", "witness subset present")) break;
      const auto sub = restrict_points(space, *r.witness);
      const auto eu = test_eutaxy(sub);
      const auto pf = test_perfection(sub);
      check_configuration(sub, eu, pf, c, "witness");
      c.expect(!r.perfection.perfect || !r.eutaxy.eutactic, "verdict", "not strictly extreme");
      c.expect(eu.eutactic && pf.weakly_perfect, "witness", "witness subset weakly perfect and eutactic");
      break;
    }
    case Extremality::not_extreme: {
      c.expect(!full_ok && r.subset_search, "verdict", "full set fails and the subset search ran");
      const auto again = classify_extremality(space, {space.points.size()});
      const std::size_t expected = (std::size_t{1} << space.points.size()) - 2;
      c.expect(again.verdict == Extremality::not_extreme && r.subsets_checked == expected, "subset search",
               "replayed over all " + std::to_string(expected) + " proper subsets");
      break;
    }
    case Extremality::inconclusive:
      c.expect(!full_ok && r.classes > get<std::size_t>(res, "subset_limit"), "verdict",
               "full set fails and the class count exceeds the subset limit");
      break;
  }
}

bool same_residuals(const DesignVerdict& a, const DesignVerdict& b) {
  if (a.residuals.size() != b.residuals.size()) return false;
  for (std::size_t i = 0; i < a.residuals.size(); ++i) {
    if (a.residuals[i].key != b.residuals[i].key || a.residuals[i].value != b.residuals[i].value) return false;
  }
  return true;
}

void verify_design(const QForm& q, const json& res, const EnumOptions& opts, Checks& c) {
  const Strength strength = strength_from_string(get<std::string>(res, "strength"));
  const Rat bound = rat_from_json(field(res, "bound"));
  const auto layers = vectors_up_to(q, bound, serial(opts));
  const auto& claimed = field(res, "layers");
  if (!c.expect(claimed.size() == layers.size(), "layers", "independent enumeration up to " + to_string(bound))) return;
  bool all = true;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DesignVerdict v = design_from_json(field(claimed[i], "verdict"));
    const std::string at = "layer " + to_string(layers[i].radius);
    c.expect(rat_from_json(field(claimed[i], "radius")) == layers[i].radius && v.points == layers[i].vectors.size() &&
                 v.strength == strength,
             at + ": layer");
    // Rational point path for moderate layers; the serial monomial path beyond.
    const DesignVerdict ref = layers[i].vectors.size() <= 20000
                                  ? test_design(classic_space(q, points_from_layer(q, layers[i])), strength,
                                                DesignOptions{std::nullopt, false})
                                  : test_layer_design(q, layers[i], strength, false);
    const bool zero = std::all_of(v.residuals.begin(), v.residuals.end(), [](const Residual& r) { return r.value == 0; });
    c.expect(same_residuals(v, ref) && v.holds == zero, at + ": residuals",
             std::to_string(v.residuals.size()) + " residuals recomputed exactly");
    all = all && v.holds;
  }
  c.expect(all == get<bool>(res, "all_hold"), "all_hold");
}

void verify_monte_carlo(const QForm& q, const json& res, const EnumOptions& opts, Checks& c) {
  const MonteCarloVerdict v = monte_carlo_from_json(res);
  const auto space = classic_space(q, points_from_layer(q, minimal_vectors(q, serial(opts))));
  const auto again = monte_carlo_design(space, v.strength, v.samples, v.seed, false);
  bool same = again.entries.size() == v.entries.size() && again.consistent == v.consistent && again.max_z == v.max_z;
  for (std::size_t i = 0; same && i < v.entries.size(); ++i) {
    same = again.entries[i].key == v.entries[i].key && again.entries[i].residual == v.entries[i].residual &&
           again.entries[i].std_error == v.entries[i].std_error;
  }
  c.expect(same, "replay", "serial rerun with seed " + std::to_string(v.seed) + " reproduces every entry");
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

void verify_zeta(const QForm& q, const json& res, const EnumOptions& opts, Checks& c) {
  const ZetaResult z = zeta_from_json(field(res, "zeta"));
  const auto layers = vectors_up_to(q, z.bound, serial(opts));
  std::vector<double> value;
  std::vector<double> weight;
  for (const auto& l : layers) {
    value.push_back(to_double(l.radius));
    weight.push_back(static_cast<double>(l.count()));
  }
  const double direct = kernels::power_sum_serial(value, weight, z.s);
  const auto again = zeta_from_layers(q, z.s, z.bound, layers);
  c.expect(close(direct, z.value, 1e-12) && again.layers_used == z.layers_used &&
               close(again.tail_estimate, z.tail_estimate, 1e-12),
           "value", "serial layer sum " + std::to_string(direct));
  if (res.contains("checks")) {
    for (const auto& cj : res.at("checks")) {
      const ZetaVerdict v = zeta_verdict_from_json(cj);
      const ZetaVerdict w = v.kind == ZetaCheck::delone_ryshkov ? delone_ryshkov_check(q, v.certified_bound, serial(opts))
                                                                : coulangeon_check(q, v.certified_bound, serial(opts));
      c.expect(w.holds_to_bound == v.holds_to_bound && w.failing_layer == v.failing_layer &&
                   w.failing_leg == v.failing_leg && w.layers_checked == v.layers_checked,
               to_string(v.kind), "layer tests rerun serially");
    }
  }
  if (res.contains("probe")) {
    const ProbeReport p = probe_from_json(res.at("probe"));
    const ProbeReport again_p = zeta_local_probe(q, p.s, p.directions.size(), p.step, p.seed, p.bound, serial(opts));
    bool same = again_p.directions.size() == p.directions.size() &&
                again_p.all_second_differences_positive == p.all_second_differences_positive &&
                again_p.first_differences_consistent == p.first_differences_consistent;
    for (std::size_t i = 0; same && i < p.directions.size(); ++i) {
      const auto& a = p.directions[i];
      const auto& b = again_p.directions[i];
      same = a.h == b.h && close(a.analytic_a, b.analytic_a, 1e-12) && close(a.analytic_b, b.analytic_b, 1e-12);
      for (std::size_t t = 0; same && t < a.values.size(); ++t) same = close(a.values[t], b.values[t], 1e-12);
    }
    c.expect(same, "probe", "serial rerun of every direction");
  }
}

void verify_invariant(const QForm& q, const json& res, Checks& c) {
  GroupGenSet gens = group_from_json(field(res, "generators"));
  check_generators(q, gens);
  c.expect(true, "generators", "integral and orthogonal for the form");
  const InvarianceVerdict v = invariance_from_json(field(res, "verdict"));
  for (const FixedSpace* f : {&v.degree2, &v.degree4}) {
    const std::size_t d = f->degree;
    std::vector<RatMatrix> actions;
    for (const auto& g : gens.generators) actions.push_back(sym_power_action(g, d));
    const std::size_t size = monomials(q.dim(), d).size();
    bool fixed = true;
    for (const auto& b : f->basis) {
      fixed = fixed && b.size() == size;
      for (const auto& a : actions) fixed = fixed && a * b == b;
    }
    const bool independent = f->basis.empty() || rank_fraction_free(RatMatrix::from_rows(f->basis)) == f->basis.size();
    RatMatrix stacked(0, size);
    for (const auto& a : actions) {
      const RatMatrix m = a - RatMatrix::identity(size);
      for (std::size_t i = 0; i < size; ++i) stacked.append_row(m.row(i));
    }
    const std::size_t dim = size - (stacked.rows() ? rank_fraction_free(stacked) : 0);
    c.expect(fixed && independent && dim == f->dim(), "degree " + std::to_string(d),
             "basis fixed by every generator, independent, fixed dim " + std::to_string(dim));
  }
  const bool fc4 = v.degree2.dim() == 1 && v.degree4.dim() == 1;
  c.expect(v.passes_Fc4 == fc4 && v.passes_Fc22 == (fc4 || (v.degree2.dim() == 1 && v.fc22_dim == 1)) &&
               v.fc22_dim == invariance_criterion(gens).fc22_dim,
           "verdict");
}

// Gram determinant of the listed vectors.
Rat gram_det(const QForm& q, const std::vector<RatVector>& vs) {
  RatMatrix g(vs.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) g(i, j) = bilinear(q, vs[i], vs[j]);
  return determinant(g);
}

void verify_rankin(const QForm& q, const json& res, const EnumOptions& opts, Checks& c) {
  const RankinResult r = rankin_from_json(res);
  std::vector<RatVector> vs;
  for (const auto& l : reference_layers(q, r.bound, opts))
    for (const auto& v : l.vectors) vs.push_back(to_rational(v));
  const std::size_t m = r.m;
  // Every m-subset of the antipodal classes when there are few enough.
  double tuples = 1;
  for (std::size_t i = 0; i < m; ++i) tuples *= static_cast<double>(vs.size() - i) / static_cast<double>(i + 1);
  if (m == 0 || m > q.dim() || vs.size() < m) {
    c.expect(false, "tuples", "no m-subset of vectors of value <= bound");
    return;
  }
  if (tuples <= 2e6) {
    std::optional<Rat> best;
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      std::vector<RatVector> t;
      for (auto i : idx) t.push_back(vs[i]);
      const Rat d = gram_det(q, t);
      if (d != 0 && (!best || d < *best)) best = d;
      std::size_t i = m;
      while (i > 0 && idx[i - 1] == vs.size() - m + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    c.expect(best && *best == r.min_det, "minimal determinant",
             "exhaustive Gram determinants over " + std::to_string(static_cast<long long>(tuples)) + " subsets");
  } else {
    c.expect(rankin_invariant(q, m, r.bound, serial(opts)).min_det == r.min_det, "minimal determinant",
             "serial rerun");
  }
  const Rat det = determinant(q);
  const double expected = std::exp(std::log(r.min_det.get_d()) -
                                   static_cast<double>(m) / static_cast<double>(q.dim()) * std::log(det.get_d()));
  bool exact_ok = true;
  if (r.exact) {
    Rat lhs = 1;
    Rat rhs = 1;
    for (std::size_t i = 0; i < q.dim(); ++i) lhs *= *r.exact / r.min_det;
    for (std::size_t i = 0; i < m; ++i) rhs *= det;
    exact_ok = lhs * rhs == 1;
  }
  c.expect(exact_ok && close(r.value, expected, 1e-12), "normalization", "(min_det / value)^n = det^m");
}

void verify_catalog(const json& res, const EnumOptions& opts, Checks& c) {
  for (const auto& e : field(res, "entries")) {
    const auto name = get<std::string>(e, "name");
    const auto entry = catalog_entry(name);
    const Layer l = minimal_vectors(entry.form, serial(opts));
    c.expect(determinant(entry.form) == rat_from_json(field(e, "det")) && l.radius == rat_from_json(field(e, "min")) &&
                 l.count() == get<std::size_t>(e, "kissing"),
             name, "determinant, minimum and kissing number recomputed");
  }
}

}  // namespace

VerifyResult verify_report(const Report& r, const EnumOptions& opts) {
  VerifyResult out;
  for (const auto& a : r.analyses) {
    Checks c(out, a.kind);
    try {
      if (a.kind == "catalog") {
        verify_catalog(a.result, opts, c);
        continue;
      }
      if (!r.form) {
        c.expect(false, "input", "no input form");
        continue;
      }
      const QForm& q = *r.form;
      if (a.kind == "minvec") {
        const auto layers = layers_from_json(field(a.result, "layers"));
        const bool one = layers.size() == 1 && rat_from_json(field(a.result, "radius")) == layers[0].radius &&
                         get<std::size_t>(a.result, "count") == layers[0].count();
        c.expect(one, "layer", "one layer matching radius and count");
        if (one) verify_layers(q, layers, layers[0].radius, opts, c);
      } else if (a.kind == "layers") {
        verify_layers(q, layers_from_json(field(a.result, "layers")), rat_from_json(field(a.result, "bound")), opts, c);
      } else if (a.kind == "extremality") {
        verify_extremality(q, a.result, opts, c);
      } else if (a.kind == "design") {
        verify_design(q, a.result, opts, c);
      } else if (a.kind == "monte_carlo") {
        verify_monte_carlo(q, a.result, opts, c);
      } else if (a.kind == "zeta") {
        verify_zeta(q, a.result, opts, c);
      } else if (a.kind == "invariant") {
        verify_invariant(q, a.result, c);
      } else if (a.kind == "rankin") {
        verify_rankin(q, a.result, opts, c);
      } else {
        c.expect(false, "kind", "unknown analysis kind");
      }
    } catch (const std::exception& e) {
      c.expect(false, "replay", e.what());
    }
  }
  return out;
}

}  // namespace vlab
