#include <gtest/gtest.h>

#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <optional>

#include "helpers.hpp"
#include "vlab/catalog.hpp"
#include "vlab/designs.hpp"
#include "vlab/error.hpp"
#include "vlab/zeta.hpp"

using namespace vlab;
using vlab::test::mat;

namespace {

// Catalan's constant and L_{-3}(2) from the trigamma reflection sums.
double catalan() {
  return (boost::math::trigamma(0.25) - boost::math::trigamma(0.75)) / 16.0;
}
double l_minus3_2() {
  return (boost::math::trigamma(1.0 / 3.0) - boost::math::trigamma(2.0 / 3.0)) / 9.0;
}
double zeta2() { return M_PI * M_PI / 6.0; }

// sum over E8 of Q^-s = 240 2^-s zeta(s) zeta(s - 3).
double e8_zeta(double s) { return 240.0 * std::pow(2.0, -s) * boost::math::zeta(s) * boost::math::zeta(s - 3.0); }

QForm cat(const char* name) { return catalog_entry(name).form; }

}  // namespace

TEST(Oracles, Constants) {
  EXPECT_NEAR(4 * zeta2() * catalan(), 6.026812, 5e-7);
  // Independent high-precision value of 6 zeta(2) L_{-3}(2).
  EXPECT_NEAR(6 * zeta2() * l_minus3_2(), 7.7111457329, 1e-9);
}

TEST(ZetaDirect, SquareAndHexagonal) {
  const Rat bound(200000);
  const auto z2 = zeta_direct(cat("Z2"), 2.0, bound);
  const double o1 = 4 * zeta2() * catalan();
  EXPECT_LE(std::abs(z2.value - o1) / o1, 1e-5);
  EXPECT_LE(o1 - z2.value, z2.tail_estimate);
  EXPECT_GT(o1, z2.value);

  // Hexagonal form x^2 + xy + y^2 of minimum 1.
  const auto a2 = zeta_direct(cat("A2").scaled(Rat(1, 2)), 2.0, bound);
  const double o2 = 6 * zeta2() * l_minus3_2();
  EXPECT_LE(std::abs(a2.value - o2) / o2, 1e-5);
  EXPECT_LE(o2 - a2.value, a2.tail_estimate);
}

TEST(ZetaDirect, E8ClosedForm) {
  for (double s : {5.0, 6.0}) {
    const auto r = zeta_direct(cat("E8"), s, Rat(14));
    const double oracle = e8_zeta(s);
    EXPECT_LT(r.value, oracle);
    EXPECT_LE(oracle - r.value, r.tail_estimate) << s;
  }
  // Exact truncation: layers 2 and 4 only.
  const auto r = zeta_direct(cat("E8"), 6.0, Rat(4));
  EXPECT_NEAR(r.value, 240 * std::pow(2.0, -6) + 2160 * std::pow(4.0, -6), 1e-12);
}

TEST(ZetaDirect, TailSelfConsistency) {
  const std::vector<std::tuple<std::string, double, long>> cases = {
      {"Z2", 2.0, 2000}, {"A2", 2.0, 2000}, {"D4", 4.0, 40}, {"E8", 6.0, 8}, {"Z3", 2.5, 200}};
  for (const auto& [name, s, b] : cases) {
    const auto lo = zeta_direct(cat(name.c_str()), s, Rat(b));
    const auto hi = zeta_direct(cat(name.c_str()), s, Rat(2 * b));
    EXPECT_GE(lo.tail_estimate, 0.0);
    EXPECT_LE(hi.value - lo.value, lo.tail_estimate) << name;
    EXPECT_GE(hi.value, lo.value);
  }
}

TEST(ZetaDirect, Preconditions) {
  EXPECT_THROW(zeta_direct(cat("Z2"), 1.0, Rat(10)), PreconditionError);
  EXPECT_THROW(zeta_direct(cat("E8"), 4.0, Rat(10)), PreconditionError);
  EXPECT_LT(zeta_direct(cat("Z2"), 3.0, Rat(100)).value, zeta_direct(cat("Z2"), 2.0, Rat(100)).value);
}

TEST(Directional, SquareSymmetry) {
  const auto q = cat("Z2");
  const auto h = SymEndo::make(mat({{1, 0}, {0, -1}}), q.gram());
  const auto d = zeta_directional(q, h, 2.0, Rat(50));
  EXPECT_LE(std::abs(d.a), 1e-12);
  EXPECT_GT(d.b, 0.0);
}

TEST(Directional, E8SecondOrderPositive) {
  const auto q = cat("E8");
  const auto layers = vectors_up_to(q, Rat(6));
  for (std::size_t k = 0; k < 4; ++k) {
    const auto h = SymEndo::make(random_traceless_direction(q, 3, k), q.gram());
    const auto d = zeta_directional(q, h, 6.0, layers);
    EXPECT_GT(d.b, 0.0);
    // Every E8 layer is strongly eutactic: the first-order term vanishes.
    EXPECT_LE(std::abs(d.a), 1e-12 * zeta_from_layers(q, 6.0, Rat(6), layers).value);
  }
}

TEST(Directional, FiniteDifferences) {
  for (const auto* name : {"A2", "Z3", "D4", "A3"}) {
    const auto q = cat(name);
    const double s = q.dim() / 2.0 + 2.0;
    const auto layers = vectors_up_to(q, 3 * catalog_entry(name).min);
    for (std::size_t k = 0; k < 3; ++k) {
      // Non-traceless direction so that A_H is far from zero.
      const RatMatrix hm = random_traceless_direction(q, 9, k) + Rat(1, 3) * RatMatrix::identity(q.dim());
      const auto h = SymEndo::make(hm, q.gram());
      const double delta = 1e-3;
      const double fd = (zeta_deformed(q, h, delta, s, layers) - zeta_deformed(q, h, -delta, s, layers)) / (2 * delta);
      const double sd = (zeta_deformed(q, h, delta, s, layers) - 2 * zeta_deformed(q, h, 0, s, layers) +
                         zeta_deformed(q, h, -delta, s, layers)) /
                        (delta * delta);
      const auto d = zeta_directional(q, h, s, layers);
      EXPECT_LE(std::abs(fd - d.a) / std::abs(d.a), 1e-4) << name;
      EXPECT_LE(std::abs(sd - 2 * d.b) / std::abs(2 * d.b), 1e-3) << name;
    }
  }
}

TEST(Directional, SerialParallel) {
  const auto q = cat("D4");
  const auto layers = vectors_up_to(q, Rat(10));
  const auto h = SymEndo::make(random_traceless_direction(q, 1, 0), q.gram());
  EXPECT_EQ(zeta_deformed(q, h, 0.01, 4.0, layers, true), zeta_deformed(q, h, 0.01, 4.0, layers, false));
}

TEST(Checks, DeloneRyshkov) {
  const auto a2 = delone_ryshkov_check(cat("A2"), Rat(14));
  EXPECT_TRUE(a2.holds_to_bound);
  EXPECT_EQ(a2.layers_checked, 4u);
  EXPECT_TRUE(delone_ryshkov_check(cat("E8"), Rat(6)).holds_to_bound);
  const auto z2 = delone_ryshkov_check(cat("Z2"), Rat(10));
  EXPECT_FALSE(z2.holds_to_bound);
  EXPECT_EQ(z2.failing_leg, "perfection");
  EXPECT_EQ(*z2.failing_layer, 1);
  EXPECT_EQ(delone_ryshkov_check(cat("Z3"), Rat(6)).failing_leg, "perfection");
  EXPECT_THROW(delone_ryshkov_check(cat("E8"), Rat(1)), PreconditionError);
}

TEST(Checks, Coulangeon) {
  const auto e8 = coulangeon_check(cat("E8"), Rat(6));
  EXPECT_TRUE(e8.holds_to_bound);
  EXPECT_EQ(e8.s_threshold, 4.0);
  const auto a2 = coulangeon_check(cat("A2"), Rat(14));
  EXPECT_TRUE(a2.holds_to_bound);
  EXPECT_EQ(a2.s_threshold, 1.0);
  const auto z2 = coulangeon_check(cat("Z2"), Rat(4));
  EXPECT_FALSE(z2.holds_to_bound);
  EXPECT_EQ(*z2.failing_layer, 1);
  EXPECT_EQ(z2.failing_leg, "design");
}

TEST(Checks, Monotonicity) {
  for (const auto* name : {"A2", "Z2", "D4", "A3", "Z3"}) {
    const auto e = catalog_entry(name);
    std::optional<bool> larger;  // verdict at the next larger bound
    for (long b = 14; Rat(b) >= e.min; --b) {
      const bool c = coulangeon_check(e.form, Rat(b)).holds_to_bound;
      const bool d = delone_ryshkov_check(e.form, Rat(b)).holds_to_bound;
      if (larger && *larger) EXPECT_TRUE(c) << name << " " << b;
      larger = c;
      if (c) EXPECT_TRUE(d || !test_layer_design(e.form, minimal_vectors(e.form), Strength::Four).holds) << name;
    }
  }
}

TEST(Probe, PositiveCurvature) {
  const auto e8 = zeta_local_probe(cat("E8"), 6.0, 8, 1e-3, 17, Rat(6));
  EXPECT_EQ(e8.directions.size(), 8u);
  EXPECT_TRUE(e8.all_second_differences_positive);
  for (const auto& d : e8.directions) {
    EXPECT_TRUE(d.first_order_vanishes);
    EXPECT_GT(d.analytic_b, 0.0);
  }
  EXPECT_NEAR(e8.value, zeta_direct(cat("E8"), 6.0, Rat(6)).value, 1e-12 * e8.value);

  const auto a2 = zeta_local_probe(cat("A2"), 2.0, 4, 1e-3, 5, Rat(14));
  EXPECT_TRUE(a2.all_second_differences_positive);
  EXPECT_NEAR(a2.value, zeta_direct(cat("A2"), 2.0, Rat(14)).value, 1e-12 * a2.value);
}

TEST(Probe, DirectionsAreTracelessSelfadjoint) {
  const auto q = cat("A3");
  for (std::size_t k = 0; k < 5; ++k) {
    const auto h = random_traceless_direction(q, 2, k);
    EXPECT_EQ(trace(h), 0);
    EXPECT_EQ(transpose(q.gram() * h), q.gram() * h);
    EXPECT_EQ(random_traceless_direction(q, 2, k), h);
  }
}

TEST(Json, Fields) {
  const auto z = zeta_to_json(zeta_direct(cat("A2"), 2.0, Rat(20)));
  EXPECT_TRUE(z.contains("tail_model"));
  EXPECT_EQ(rat_from_json(z["bound"]), 20);
  const auto v = zeta_verdict_to_json(coulangeon_check(cat("Z2"), Rat(4)));
  EXPECT_EQ(rat_from_json(v["failing_layer"]), 1);
  EXPECT_FALSE(v["holds_to_bound"].get<bool>());
  const auto p = probe_to_json(zeta_local_probe(cat("A2"), 2.0, 1, 1e-3, 1, Rat(6)));
  EXPECT_EQ(p["kind"], "probe");
  EXPECT_EQ(p["directions"].size(), 1u);
}
