#include <gtest/gtest.h>

#include <functional>

#include "helpers.hpp"
#include "vlab/catalog.hpp"
#include "vlab/error.hpp"
#include "vlab/report.hpp"

using namespace vlab;
using vlab::test::mat;

namespace {

Report make_report(const QForm& q, std::string command, std::vector<Analysis> analyses) {
  Report r;
  r.command = std::move(command);
  r.source = json{{"file", "inline"}};
  r.form = q;
  r.analyses = std::move(analyses);
  return r;
}

QForm cat(const char* name) { return catalog_entry(name).form; }

// Reports covering every analysis kind and every certificate type.
std::vector<Report> sample_reports() {
  const QForm a2 = cat("A2");
  const QForm e8 = cat("E8");
  const QForm d4 = cat("D4");
  const QForm z2 = cat("Z2");
  // Minimal layer {+-e1} only: not eutactic, certified by a violating direction.
  const QForm skew = QForm::from_gram(mat({{2, 1}, {1, 3}}), "skew");
  SpaceRequest inv{SpaceKind::invariant, catalog_entry("D4").aut, std::nullopt, 1, std::nullopt};
  SpaceRequest ext{SpaceKind::exterior, std::nullopt, std::nullopt, 2, Rat(2)};
  return {
      make_report(e8, "minvec", {analyze_minvec(e8)}),
      make_report(a2, "layers", {analyze_layers(a2, 14)}),
      make_report(a2, "extremality", {analyze_extremality(a2, {})}),
      make_report(z2, "extremality", {analyze_extremality(z2, {})}),
      make_report(skew, "extremality", {analyze_extremality(skew, {})}),
      make_report(d4, "extremality", {analyze_extremality(d4, inv)}),
      make_report(d4, "extremality", {analyze_extremality(d4, ext)}),
      make_report(e8, "dual-extreme", {analyze_extremality(e8, {SpaceKind::duality_product})}),
      make_report(e8, "design", {analyze_design(e8, Strength::Four, 6)}),
      make_report(z2, "design", {analyze_design(z2, Strength::S22, 2), analyze_monte_carlo(z2, Strength::S22, 2000, 5)}),
      make_report(a2.scaled(Rat(1, 2)), "zeta", {analyze_zeta(a2.scaled(Rat(1, 2)), {2.0, 50, 3, 1e-3, 7, true})}),
      make_report(e8, "invariant", {analyze_invariant(e8, *catalog_entry("E8").aut)}),
      make_report(z2, "invariant", {analyze_invariant(z2, *catalog_entry("Z2").aut)}),
      make_report(d4, "rankin", {analyze_rankin(d4, 2, 2)}),
  };
}

const std::vector<Report>& reports() {
  static const std::vector<Report> r = sample_reports();
  return r;
}

// Applies an edit to the first analysis of a serialized report and replays it.
bool replays_after(const Report& r, const std::function<void(json&)>& edit) {
  json j = report_to_json(r);
  edit(j["analyses"][0]["result"]);
  return verify_report(report_from_json(j)).ok();
}

}  // namespace

TEST(Report, RoundTripIsLossless) {
  for (const auto& r : reports()) {
    const json j = report_to_json(r);
    const Report back = report_from_json(json::parse(j.dump()));
    EXPECT_TRUE(back == r) << r.command;
    EXPECT_EQ(report_to_json(back).dump(), j.dump()) << r.command;
  }
  Report catalog;
  catalog.command = "catalog";
  catalog.analyses = {analyze_catalog()};
  catalog.timing = json{{"total_seconds", 0.5}};
  EXPECT_TRUE(report_from_json(report_to_json(catalog)) == catalog);
}

TEST(Report, TypedVerdictsRoundTrip) {
  const auto space = build_space(cat("Z3"), {});
  const json e = extremality_to_json(classify_extremality(space));
  EXPECT_EQ(extremality_to_json(extremality_from_json(e, space.gram)), e);
  const json d = design_to_json(test_design(build_space(cat("A3"), {}), Strength::S22));
  EXPECT_EQ(design_to_json(design_from_json(d)), d);
  const json mc = monte_carlo_to_json(monte_carlo_design(space, Strength::S2, 1000, 3));
  EXPECT_EQ(monte_carlo_to_json(monte_carlo_from_json(mc)), mc);
  const json rk = rankin_to_json(rankin_invariant(cat("A2"), 1, 2));
  EXPECT_EQ(rankin_to_json(rankin_from_json(rk)), rk);
  const json iv = invariance_to_json(invariance_criterion(*catalog_entry("A2").aut));
  EXPECT_EQ(invariance_to_json(invariance_from_json(iv)), iv);
  const json z = zeta_to_json(zeta_direct(cat("Z2"), 2.0, 30));
  EXPECT_EQ(zeta_to_json(zeta_from_json(z)), z);
  const json zv = zeta_verdict_to_json(coulangeon_check(cat("Z2"), 4));
  EXPECT_EQ(zeta_verdict_to_json(zeta_verdict_from_json(zv)), zv);
  const json p = probe_to_json(zeta_local_probe(cat("A2"), 2.0, 2, 1e-3, 3, 20));
  EXPECT_EQ(probe_to_json(probe_from_json(p)), p);
  SpaceRequest req{SpaceKind::isodual, std::nullopt, mat({{0, 1}, {1, 0}}), 1, std::nullopt};
  EXPECT_EQ(space_request_to_json(space_request_from_json(space_request_to_json(req))), space_request_to_json(req));
}

TEST(Report, WeightsAreFractionStrings) {
  const json j = analyze_extremality(cat("A2"), {}).result;
  for (const auto& w : j["extremality"]["eutaxy"]["weights"]) EXPECT_EQ(w, "1/3");
  EXPECT_EQ(j["extremality"]["perfection"]["rank"], 3);
}

TEST(Report, EveryCertificateReplays) {
  for (const auto& r : reports()) {
    const auto v = verify_report(report_from_json(report_to_json(r)));
    EXPECT_TRUE(v.ok()) << r.command << "\n" << verify_to_json(v).dump(1);
    EXPECT_FALSE(v.checks.empty());
  }
}

TEST(Report, NonEutacticCertificate) {
  const json j = analyze_extremality(QForm::from_gram(mat({{2, 1}, {1, 3}})), {}).result;
  EXPECT_EQ(j["extremality"]["verdict"], "not_extreme");
  EXPECT_FALSE(j["extremality"]["eutaxy"]["eutactic"].get<bool>());
  EXPECT_FALSE(j["extremality"]["eutaxy"]["violating_direction"].is_null());
}

TEST(Report, TamperingIsDetected) {
  const auto& r = reports();
  // Weights, rank, strong eutaxy and the verdict of A2.
  EXPECT_FALSE(replays_after(r[2], [](json& j) { j["extremality"]["eutaxy"]["weights"][0] = "1/2"; }));
  EXPECT_FALSE(replays_after(r[2], [](json& j) { j["extremality"]["perfection"]["rank"] = 2; }));
  EXPECT_FALSE(replays_after(r[2], [](json& j) { j["extremality"]["eutaxy"]["strongly_eutactic"] = false; }));
  EXPECT_FALSE(replays_after(r[2], [](json& j) {
    j["extremality"]["verdict"] = "extreme";
    j["extremality"]["witness"] = {0, 1, 2};
  }));
  EXPECT_FALSE(replays_after(r[2], [](json& j) { j["space"]["points"][0][0] = 2; }));
  // Violating direction of the skew form.
  EXPECT_FALSE(replays_after(r[4], [](json& j) { j["extremality"]["eutaxy"]["violating_direction"][0] = 0; }));
  // Z2: claims about the exhaustive search and the kernel.
  EXPECT_FALSE(replays_after(r[3], [](json& j) { j["extremality"]["subsets_checked"] = 1; }));
  EXPECT_FALSE(replays_after(r[3], [](json& j) {
    j["extremality"]["perfection"]["kernel_basis"] = json::array({json::array({{1, 0}, {0, 0}})});
  }));
  // Enumeration: a dropped vector and a wrong count.
  EXPECT_FALSE(replays_after(r[1], [](json& j) { j["layers"]["vectors"]["6"].erase(0); }));
  EXPECT_FALSE(replays_after(r[0], [](json& j) { j["count"] = 238; }));
  // Residuals.
  EXPECT_FALSE(replays_after(r[8], [](json& j) { j["layers"][1]["verdict"]["residuals"][0]["value"] = "1/7"; }));
  EXPECT_FALSE(replays_after(r[9], [](json& j) { j["layers"][0]["verdict"]["holds"] = true; }));
  EXPECT_FALSE(replays_after(r[9], [](json& j) { j["all_hold"] = true; }));
  // Zeta value and checker claims.
  EXPECT_FALSE(replays_after(r[10], [](json& j) { j["zeta"]["value"] = 7.7111457329; }));
  EXPECT_FALSE(replays_after(r[10], [](json& j) { j["checks"][0]["holds_to_bound"] = false; }));
  EXPECT_FALSE(replays_after(r[10], [](json& j) { j["probe"]["directions"][0]["analytic_b"] = 0.0; }));
  // Invariant bases and dims.
  EXPECT_FALSE(replays_after(r[12], [](json& j) { j["verdict"]["fixed_degree4"]["basis"][0][1] = 5; }));
  EXPECT_FALSE(replays_after(r[12], [](json& j) {
    j["verdict"]["fixed_degree4"]["basis"].erase(1);
    j["verdict"]["fixed_degree4"]["dim"] = 1;
    j["verdict"]["fixed_dims"][1] = 1;
    j["verdict"]["passes_Fc4"] = true;
  }));
  // Rankin minimum.
  EXPECT_FALSE(replays_after(r[13], [](json& j) { j["min_det"] = 4; }));
}

TEST(Report, Deterministic) {
  const QForm d4 = cat("D4");
  auto make = [&] {
    return report_to_json(make_report(d4, "report",
                                      {analyze_minvec(d4), analyze_extremality(d4, {}),
                                       analyze_monte_carlo(d4, Strength::S2, 3000, 11),
                                       analyze_zeta(d4, {4.0, 8, 2, 1e-3, 3, false})}))
        .dump();
  };
  EXPECT_EQ(make(), make());
}

TEST(Report, BuildSpaceErrors) {
  EXPECT_THROW(build_space(cat("A2"), {SpaceKind::invariant}), ParseError);
  EXPECT_THROW(build_space(cat("A2"), {SpaceKind::isodual}), ParseError);
  EXPECT_THROW(report_from_json(json{{"tool", "vlab"}}), ParseError);
}

TEST(Report, TextSummary) {
  const std::string t = report_to_text(reports()[2]);
  EXPECT_NE(t.find("strictly_extreme"), std::string::npos);
  EXPECT_NE(report_to_text(reports()[13]).find("3/2"), std::string::npos);
}
