// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 resource
// limit reached, 3 a certificate failed to replay.

#include <omp.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vlab/catalog.hpp"
#include "vlab/error.hpp"
#include "vlab/report.hpp"

namespace {

using namespace vlab;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kResource = 2;
constexpr int kReplayFailed = 3;

struct Global {
  std::string format = "json";
  int threads = 0;
  bool timing = false;
  bool verify = false;
  std::uint64_t node_budget = 0;  // 0: VLAB_NODE_BUDGET or the default

  EnumOptions enum_options() const {
    EnumOptions o;
    if (node_budget > 0) o.node_budget = node_budget;
    return o;
  }
};

struct Source {
  std::string catalog;
  std::string file;
  std::string scale = "1";
};

void add_source(CLI::App* cmd, Source& s) {
  auto* cat = cmd->add_option("--catalog", s.catalog, "catalog name (see `vlab catalog`)");
  auto* file = cmd->add_option("--file", s.file, "form JSON {\"name\", \"dim\", \"gram\"}");
  cat->excludes(file);
  cmd->add_option("--scale", s.scale, "multiply the Gram matrix by this positive rational");
}

struct Input {
  json source;
  Rat scale = 1;
  QForm form;
  std::optional<GroupGenSet> aut;
};

Input load(const Source& s) {
  if (s.catalog.empty() == s.file.empty()) throw ParseError("exactly one of --catalog and --file is required");
  const Rat scale = parse_rat(s.scale);
  if (s.catalog.empty()) {
    const QForm q = load_qform_file(s.file);
    return {json{{"file", s.file}}, scale, q.scaled(scale), std::nullopt};
  }
  auto e = catalog_entry(s.catalog);
  return {json{{"catalog", e.name}}, scale, e.form.scaled(scale), e.aut};
}

GroupGenSet load_generators(const std::string& path, const std::optional<GroupGenSet>& fallback) {
  if (!path.empty()) return group_from_json(load_json_file(path));
  if (!fallback) throw ParseError("no generators: pass --generators or use a catalog form with automorphisms");
  return *fallback;
}

RatMatrix load_matrix(const std::string& path) {
  const json j = load_json_file(path);
  return matrix_from_json(j.is_object() ? j.at("sigma") : j);
}

// Collects the analyses of one command and times each of them.
class Runner {
 public:
  explicit Runner(const Global& g) : global_(g) {}

  void add(const std::function<Analysis()>& f) {
    const auto start = std::chrono::steady_clock::now();
    report_.analyses.push_back(f());
    seconds_.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }

  Report& report() { return report_; }

  int emit() {
    if (global_.timing) {
      double total = 0;
      for (double s : seconds_) total += s;
      report_.timing = json{{"analyses_seconds", seconds_}, {"total_seconds", total}};
    }
    json out = report_to_json(report_);
    std::optional<VerifyResult> v;
    if (global_.verify) {
      // Replay what was emitted, not the in-memory structures.
      v = verify_report(report_from_json(json::parse(out.dump())), global_.enum_options());
      out["verification"] = verify_to_json(*v);
    }
    if (global_.format == "text") {
      std::cout << report_to_text(report_);
      if (v) std::cout << "verification: " << (v->ok() ? "ok" : "FAILED") << " (" << v->checks.size() << " checks)\n";
    } else {
      std::cout << out.dump(2) << '\n';
    }
    return v && !v->ok() ? kReplayFailed : kOk;
  }

 private:
  const Global& global_;
  Report report_;
  std::vector<double> seconds_;
};

void set_input(Report& r, const Input& in, const std::string& command) {
  r.command = command;
  r.source = in.source;
  r.scale = in.scale;
  r.form = in.form;
}

int run(int argc, char** argv) {
  CLI::App app{"Extremality, designs and Epstein zeta checks for lattices"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--format", g.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--threads", g.threads, "OpenMP threads (default: runtime choice)")->check(CLI::PositiveNumber);
  app.add_flag("--timing", g.timing, "record wall-clock seconds per analysis");
  app.add_flag("--verify", g.verify, "replay every certificate of the output");
  app.add_option("--node-budget", g.node_budget, "enumeration node budget (overrides VLAB_NODE_BUDGET)")
      ->check(CLI::PositiveNumber);

  Source src;
  std::string bound;
  std::string space = "classic";
  std::string generators;
  std::string sigma;
  std::size_t wedge = 1;
  std::size_t subset_limit = 12;
  std::string strength = "4";
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double s = 0.0;
  std::size_t directions = 0;
  double step = 1e-3;
  bool checks = false;
  std::size_t m = 2;
  std::string replay;

  auto* minvec = app.add_subcommand("minvec", "minimal vectors");
  add_source(minvec, src);
  auto* layers = app.add_subcommand("layers", "all layers up to a bound");
  add_source(layers, src);
  layers->add_option("--bound", bound, "largest radius")->required();
  auto* extremality = app.add_subcommand("extremality", "Voronoi characterization in a form space");
  add_source(extremality, src);
  extremality->add_option("--space", space, "classic|invariant|isodual|dual-product|exterior");
  extremality->add_option("--generators", generators, "group JSON for the invariant space");
  extremality->add_option("--sigma", sigma, "matrix JSON for the isodual space");
  extremality->add_option("--wedge", wedge, "m for the exterior power");
  extremality->add_option("--bound", bound, "exterior power: tuples of vectors of value <= bound");
  extremality->add_option("--subset-limit", subset_limit, "largest class count for the exhaustive subset search");
  auto* dual = app.add_subcommand("dual-extreme", "extremality in the duality product space");
  add_source(dual, src);
  dual->add_option("--subset-limit", subset_limit, "largest class count for the exhaustive subset search");
  auto* design = app.add_subcommand("design", "exact design test of every layer up to a bound");
  add_source(design, src);
  design->add_option("--strength", strength, "2 | 2,2 | {4} | 4");
  design->add_option("--bound", bound, "largest radius (default: the minimum)");
  design->add_option("--samples", samples, "also run a Monte Carlo test of the minimal layer");
  design->add_option("--seed", seed, "Monte Carlo seed");
  auto* zeta = app.add_subcommand("zeta", "truncated Epstein zeta function");
  add_source(zeta, src);
  zeta->add_option("--s", s, "real s > n/2")->required();
  zeta->add_option("--bound", bound, "largest radius summed")->required();
  zeta->add_option("--directions", directions, "random directions for the local probe");
  zeta->add_option("--step", step, "probe step");
  zeta->add_option("--seed", seed, "probe seed");
  zeta->add_flag("--checks", checks, "run both bound-scoped zeta-extremality checkers");
  auto* invariant = app.add_subcommand("invariant", "invariant quadratic and quartic forms of a group");
  add_source(invariant, src);
  invariant->add_option("--generators", generators, "group JSON (default: the catalog automorphisms)");
  auto* rankin = app.add_subcommand("rankin", "Rankin invariant from enumerated tuples");
  add_source(rankin, src);
  rankin->add_option("--m", m, "sublattice dimension")->required();
  rankin->add_option("--bound", bound, "tuples of vectors of value <= bound (default: the minimum)");
  auto* catalog = app.add_subcommand("catalog", "list the catalog");
  auto* report = app.add_subcommand("report", "standard analyses of a form, or replay of a saved report");
  add_source(report, src);
  report->add_option("--replay", replay, "saved report JSON to verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  if (g.threads > 0) omp_set_num_threads(g.threads);

  Runner run(g);
  Report& r = run.report();
  if (*catalog) {
    r.command = "catalog";
    run.add([] { return analyze_catalog(); });
    return run.emit();
  }
  if (*report && !replay.empty()) {
    const Report saved = report_from_json(load_json_file(replay));
    const VerifyResult v = verify_report(saved, g.enum_options());
    if (g.format == "text") {
      for (const auto& c : v.checks) std::cout << (c.ok ? "ok    " : "FAIL  ") << c.analysis << ": " << c.check << '\n';
      std::cout << "verification: " << (v.ok() ? "ok" : "FAILED") << '\n';
    } else {
      std::cout << verify_to_json(v).dump(2) << '\n';
    }
    return v.ok() ? kOk : kReplayFailed;
  }

  const Input in = load(src);
  const QForm& q = in.form;
  const EnumOptions eo = g.enum_options();
  const auto minimum = [&] { return bound.empty() ? minimal_vectors(q, eo).radius : parse_rat(bound); };

  if (*minvec) {
    set_input(r, in, "minvec");
    run.add([&] { return analyze_minvec(q, eo); });
  } else if (*layers) {
    set_input(r, in, "layers");
    run.add([&] { return analyze_layers(q, parse_rat(bound), eo); });
  } else if (*extremality || *dual) {
    set_input(r, in, *dual ? "dual-extreme" : "extremality");
    SpaceRequest req;
    req.kind = *dual ? SpaceKind::duality_product : space_kind_from_string(space);
    if (req.kind == SpaceKind::invariant) req.generators = load_generators(generators, in.aut);
    if (req.kind == SpaceKind::isodual) {
      if (sigma.empty()) throw ParseError("the isodual space needs --sigma");
      req.sigma = load_matrix(sigma);
    }
    if (req.kind == SpaceKind::exterior) {
      req.wedge = wedge;
      if (!bound.empty()) req.bound = parse_rat(bound);
    }
    run.add([&] { return analyze_extremality(q, req, {subset_limit}, eo); });
  } else if (*design) {
    set_input(r, in, "design");
    const Strength st = strength_from_string(strength);
    run.add([&] { return analyze_design(q, st, minimum(), eo); });
    if (samples > 0) run.add([&] { return analyze_monte_carlo(q, st, samples, seed, eo); });
  } else if (*zeta) {
    set_input(r, in, "zeta");
    run.add([&] { return analyze_zeta(q, {s, parse_rat(bound), directions, step, seed, checks}, eo); });
  } else if (*invariant) {
    set_input(r, in, "invariant");
    const GroupGenSet gens = load_generators(generators, in.aut);
    run.add([&] { return analyze_invariant(q, gens); });
  } else if (*rankin) {
    set_input(r, in, "rankin");
    run.add([&] { return analyze_rankin(q, m, minimum(), eo); });
  } else if (*report) {
    set_input(r, in, "report");
    const Rat min = minimal_vectors(q, eo).radius;
    const double n = static_cast<double>(q.dim());
    run.add([&] { return analyze_minvec(q, eo); });
    run.add([&] { return analyze_extremality(q, {}, {}, eo); });
    run.add([&] { return analyze_design(q, Strength::Four, min, eo); });
    if (in.aut) run.add([&] { return analyze_invariant(q, *in.aut); });
    run.add([&] { return analyze_zeta(q, {n / 2 + 2, 3 * min, 0, 1e-3, 1, true}, eo); });
  }
  return run.emit();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}
