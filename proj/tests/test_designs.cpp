#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vlab/catalog.hpp"
#include "vlab/designs.hpp"
#include "vlab/error.hpp"
#include "vlab/extremality.hpp"
#include "vlab/kernels.hpp"

using namespace vlab;
using vlab::test::mat;

namespace {

SpaceDescriptor classic_min(const QForm& q) { return classic_space(q, points_from_layer(q, minimal_vectors(q))); }

const Residual* find(const DesignVerdict& v, const std::string& key) {
  for (const auto& r : v.residuals)
    if (r.key == key) return &r;
  return nullptr;
}

// <eps(H) eps(J)> over Q-isotropic Gaussian directions, with its standard error.
std::pair<double, double> quartic_mc(const QForm& q, const RatMatrix& h, const RatMatrix& j, std::size_t samples,
                                     std::uint64_t seed) {
  const Eigen::MatrixXd g = q.gram_double();
  const Eigen::MatrixXd l = g.llt().matrixL();
  const Eigen::MatrixXd lt_inv = l.transpose().inverse();
  const Eigen::MatrixXd gh = g * to_eigen(h), gj = g * to_eigen(j);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  double s = 0, s2 = 0;
  Eigen::VectorXd z(q.dim());
  for (std::size_t k = 0; k < samples; ++k) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = n01(rng);
    const Eigen::VectorXd x = lt_inv * z;
    const double qx = x.dot(g * x);
    const double f = (x.dot(gh * x) / qx) * (x.dot(gj * x) / qx);
    s += f;
    s2 += f * f;
  }
  const double mean = s / static_cast<double>(samples);
  const double var = s2 / static_cast<double>(samples) - mean * mean;
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace

TEST(Averages, Quadratic) {
  const auto id2 = catalog_entry("Z2").form;
  EXPECT_EQ(average_quadratic(SymEndo::make(mat({{1, 0}, {0, -1}}), id2.gram()), 2), 0);
  EXPECT_EQ(average_quadratic(SymEndo::identity(2), 2), 1);
  EXPECT_EQ(average_quadratic(SymEndo::make(mat({{3, 0}, {0, 1}}), id2.gram()), 2), 2);
}

TEST(Averages, QuarticExamples) {
  const auto id2 = catalog_entry("Z2").form;
  const auto id3 = catalog_entry("Z3").form;
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(average_quartic(SymEndo::identity(n), SymEndo::identity(n), n), 1);
  const auto h2 = SymEndo::make(mat({{1, 0}, {0, -1}}), id2.gram());
  EXPECT_EQ(average_quartic(h2, h2, 2), Rat(1, 2));
  const auto h3 = SymEndo::make(mat({{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}), id3.gram());
  EXPECT_EQ(average_quartic(h3, h3, 3), Rat(4, 15));

  // 1-D integral of cos^2(2 theta) over the circle, midpoint rule.
  double integral = 0;
  const int steps = 100000;
  for (int k = 0; k < steps; ++k) {
    const double t = 2 * M_PI * (k + 0.5) / steps;
    integral += std::cos(2 * t) * std::cos(2 * t);
  }
  EXPECT_NEAR(integral / steps, 0.5, 1e-12);
}

TEST(Averages, QuarticMatchesMonteCarlo) {
  std::mt19937_64 rng(31);
  const auto id2 = catalog_entry("Z2").form;
  const auto id3 = catalog_entry("Z3").form;
  {
    const auto [mean, se] = quartic_mc(id2, mat({{1, 0}, {0, -1}}), mat({{1, 0}, {0, -1}}), 1'000'000, 1);
    EXPECT_LE(std::abs(mean - 0.5), 3 * se);
  }
  {
    const auto h = mat({{1, 0, 0}, {0, -1, 0}, {0, 0, 0}});
    const auto [mean, se] = quartic_mc(id3, h, h, 1'000'000, 2);
    EXPECT_LE(std::abs(mean - 4.0 / 15.0), 3 * se);
  }
  // General selfadjoint pairs on non-identity forms.
  int within = 0;
  for (const auto* name : {"A2", "D4", "A3", "E6"}) {
    const auto q = catalog_entry(name).form;
    const auto h = test::random_selfadjoint(rng, q, 2, 2), j = test::random_selfadjoint(rng, q, 2, 2);
    const auto exact = average_quartic(SymEndo::make(h, q.gram()), SymEndo::make(j, q.gram()), q.dim()).get_d();
    const auto [mean, se] = quartic_mc(q, h, j, 400'000, 3);
    if (std::abs(mean - exact) <= 3 * se) ++within;
    EXPECT_LE(std::abs(mean - exact), 5 * se) << name;
  }
  EXPECT_GE(within, 3);
}

TEST(Designs, Pp2IsAllSelfadjoint) {
  for (std::size_t n = 2; n <= 8; ++n) {
    EXPECT_EQ(pp2_basis(classic_min(catalog_entry("A" + std::to_string(n)).form)).size(), n * (n + 1) / 2) << n;
    if (n <= 5 || n == 8)
      EXPECT_EQ(pp2_basis(classic_min(catalog_entry("Z" + std::to_string(n)).form)).size(), n * (n + 1) / 2) << n;
  }
}

TEST(Designs, Examples) {
  const auto z2 = classic_min(catalog_entry("Z2").form);
  EXPECT_TRUE(test_design(z2, Strength::S2).holds);
  const auto s22 = test_design(z2, Strength::S22);
  EXPECT_FALSE(s22.holds);
  ASSERT_NE(find(s22, "s22:0,0"), nullptr);
  EXPECT_EQ(find(s22, "s22:0,0")->value, Rat(1, 2));
  for (const auto* name : {"D4", "E8", "A2", "E6", "E7"}) {
    EXPECT_TRUE(test_design(classic_min(catalog_entry(name).form), Strength::Four).holds) << name;
  }
  EXPECT_FALSE(test_design(classic_min(catalog_entry("A3").form), Strength::S22).holds);
}

TEST(Designs, Layers) {
  const auto a2 = test_layers_design(catalog_entry("A2").form, 14, Strength::Four);
  EXPECT_EQ(a2.layers.size(), 4u);
  EXPECT_TRUE(a2.all_hold);
  const auto z2 = test_layers_design(catalog_entry("Z2").form, 4, Strength::S22);
  EXPECT_FALSE(z2.layers[0].verdict.holds);
  EXPECT_FALSE(z2.all_hold);
  const auto e8 = test_layers_design(catalog_entry("E8").form, 6, Strength::Four);
  ASSERT_EQ(e8.layers.size(), 3u);
  EXPECT_TRUE(e8.all_hold);
  for (const auto& l : e8.layers)
    for (const auto& r : l.verdict.residuals) EXPECT_EQ(r.value, 0);
}

TEST(Designs, VenkovChain) {
  std::size_t checked = 0;
  for (const auto& name : catalog_names()) {
    const auto e = catalog_entry(name);
    if (e.form.dim() > 8) continue;
    for (const auto& layer : vectors_up_to(e.form, 3 * e.min)) {
      const auto s = classic_space(e.form, points_from_layer(e.form, layer));
      const bool s2 = test_design(s, Strength::S2).holds;
      const bool s22 = test_design(s, Strength::S22).holds;
      if (s2 || s22) {
        const auto ev = test_eutaxy(s);
        if (s2) EXPECT_TRUE(ev.strongly_eutactic) << name << " r=" << to_string(layer.radius);
        if (s22) {
          EXPECT_TRUE(ev.eutactic) << name;
          EXPECT_TRUE(test_perfection(s).perfect) << name;
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 20u);
}

TEST(Designs, BasisChangeInvariance) {
  std::mt19937_64 rng(41);
  for (const auto* name : {"Z3", "D4", "A3"}) {
    const auto s = classic_min(catalog_entry(name).form);
    const bool base = test_design(s, Strength::S22).holds;
    for (int trial = 0; trial < 3; ++trial) {
      SpaceDescriptor t = s;
      const std::size_t d = s.gp_dim();
      RatMatrix c(d, d);
      do {
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) c(i, j) = test::random_rat(rng, 2, 3);
      } while (determinant(c) == 0);
      t.gp_basis.clear();
      for (std::size_t i = 0; i < d; ++i) {
        RatMatrix h(s.ambient_dim, s.ambient_dim);
        for (std::size_t j = 0; j < d; ++j) h = h + c(i, j) * s.gp_basis[j].matrix();
        t.gp_basis.push_back(SymEndo::make(h, s.gram));
      }
      t.extended_basis = t.gp_basis;
      t.extended_basis.push_back(SymEndo::identity(s.ambient_dim));
      EXPECT_EQ(test_design(t, Strength::S22).holds, base) << name;
      EXPECT_EQ(test_design(t, Strength::S2).holds, test_design(s, Strength::S2).holds) << name;
    }
  }
}

TEST(Designs, OrthogonalInvariance) {
  std::mt19937_64 rng(43);
  for (const auto* name : {"Z2", "Z3", "A2", "D4"}) {
    const auto e = catalog_entry(name);
    const auto layer = vectors_up_to(e.form, 3 * e.min);
    for (const auto& l : layer) {
      const auto s = classic_space(e.form, points_from_layer(e.form, l));
      for (const auto& g : e.aut->generators) {
        SpaceDescriptor t = s;
        for (auto& p : t.points) p.coords = g * p.coords;
        for (auto st : {Strength::S2, Strength::S22, Strength::Four}) {
          EXPECT_EQ(test_design(t, st).holds, test_design(s, st).holds) << name;
        }
        EXPECT_EQ(test_eutaxy(t).eutactic, test_eutaxy(s).eutactic);
        EXPECT_EQ(test_perfection(t).rank, test_perfection(s).rank);
      }
    }
  }
}

TEST(Designs, AntipodalAndWeighted) {
  for (const auto* name : {"Z2", "A2", "D4"}) {
    const auto s = classic_min(catalog_entry(name).form);
    SpaceDescriptor both = s;
    for (const auto& p : s.points) {
      RatVector neg = p.coords;
      for (auto& x : neg) x = -x;
      both.points.push_back({neg, p.value});
    }
    DesignOptions halved;
    halved.weights = RatVector(both.points.size(), Rat(1, static_cast<long>(both.points.size())));
    for (auto st : {Strength::S2, Strength::S22, Strength::S4}) {
      const auto a = test_design(s, st), b = test_design(both, st, halved);
      EXPECT_EQ(a.holds, b.holds);
      ASSERT_EQ(a.residuals.size(), b.residuals.size());
      for (std::size_t i = 0; i < a.residuals.size(); ++i) EXPECT_EQ(a.residuals[i].value, b.residuals[i].value);
    }
  }
  // Nonuniform weights on A3 minimal vectors are not a {2,2}-design and the
  // weight validation rejects bad input.
  const auto a3 = classic_min(catalog_entry("A3").form);
  DesignOptions bad;
  bad.weights = RatVector(a3.points.size(), Rat(0));
  EXPECT_THROW(test_design(a3, Strength::S2, bad), PreconditionError);
  bad.weights = RatVector(a3.points.size(), Rat(1));
  EXPECT_THROW(test_design(a3, Strength::S2, bad), PreconditionError);
}

TEST(Designs, SerialParallelAndErrors) {
  const auto s = classic_space(catalog_entry("E8").form, points_from_layer(catalog_entry("E8").form,
                                                                           vectors_up_to(catalog_entry("E8").form, 4)[1]));
  DesignOptions serial;
  serial.parallel = false;
  const auto a = test_design(s, Strength::Four, serial), b = test_design(s, Strength::Four);
  ASSERT_EQ(a.residuals.size(), b.residuals.size());
  for (std::size_t i = 0; i < a.residuals.size(); ++i) EXPECT_EQ(a.residuals[i].value, b.residuals[i].value);
  EXPECT_THROW(test_design(duality_product_space(catalog_entry("A2").form), Strength::S2), PreconditionError);
  EXPECT_THROW(strength_from_string("3"), ParseError);
}

TEST(MonteCarlo, Verdicts) {
  // m = 1 reproduces the exact verdicts.
  const auto a2 = exterior_power_space(catalog_entry("A2").form, 1, 2);
  EXPECT_TRUE(monte_carlo_design(a2, Strength::Four, 200'000, 7).consistent);
  const auto z2 = exterior_power_space(catalog_entry("Z2").form, 1, 1);
  EXPECT_FALSE(monte_carlo_design(z2, Strength::S22, 200'000, 7).consistent);

  const auto d4 = exterior_power_space(catalog_entry("D4").form, 2, 2);
  const auto v = monte_carlo_design(d4, Strength::S2, 200'000, 11);
  EXPECT_TRUE(v.consistent) << v.max_z;
  const auto z4 = exterior_power_space(catalog_entry("Z4").form, 2, 1);
  EXPECT_FALSE(monte_carlo_design(z4, Strength::S22, 200'000, 11).consistent);
}

TEST(MonteCarlo, Deterministic) {
  const auto d4 = exterior_power_space(catalog_entry("D4").form, 2, 2);
  const auto a = monte_carlo_design(d4, Strength::S22, 20'000, 5, true);
  const auto b = monte_carlo_design(d4, Strength::S22, 20'000, 5, false);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].residual, b.entries[i].residual);
    EXPECT_EQ(a.entries[i].std_error, b.entries[i].std_error);
  }
  const auto c = monte_carlo_design(d4, Strength::S22, 20'000, 6);
  EXPECT_NE(a.entries[0].residual, c.entries[0].residual);
  EXPECT_THROW(monte_carlo_design(duality_product_space(catalog_entry("A2").form), Strength::S2, 10, 1),
               PreconditionError);
}

TEST(LayerPath, MatchesPointPath) {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_entry(name);
    if (e.form.dim() > 8) continue;
    for (const auto& layer : vectors_up_to(e.form, 3 * e.min)) {
      const auto s = classic_space(e.form, points_from_layer(e.form, layer));
      for (auto st : {Strength::S2, Strength::Four}) {
        const auto a = test_design(s, st), b = test_layer_design(e.form, layer, st);
        ASSERT_EQ(a.residuals.size(), b.residuals.size());
        for (std::size_t i = 0; i < a.residuals.size(); ++i) {
          EXPECT_EQ(a.residuals[i].key, b.residuals[i].key);
          EXPECT_EQ(a.residuals[i].value, b.residuals[i].value) << name << " " << a.residuals[i].key;
        }
      }
      const auto lv = layer_voronoi(e.form, layer);
      EXPECT_EQ(lv.strongly_eutactic, test_eutaxy(s).strongly_eutactic) << name;
      const auto pv = test_perfection(s);
      EXPECT_EQ(lv.rank, pv.rank) << name;
      EXPECT_EQ(lv.perfect, pv.perfect) << name;
    }
  }
}

TEST(LayerPath, MonomialKernels) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    for (std::int64_t range : {3, 5000}) {
      std::uniform_int_distribution<std::int64_t> u(-range, range);
      std::vector<std::vector<std::int64_t>> xs(5000, std::vector<std::int64_t>(n));
      for (auto& x : xs)
        for (auto& c : x) c = u(rng);
      std::vector<const std::int64_t*> pts;
      for (const auto& x : xs) pts.push_back(x.data());
      const auto s = kernels::monomial_sums_serial(pts, n, true);
      const auto p = kernels::monomial_sums_parallel(pts, n, true);
      EXPECT_TRUE(s.second == p.second && s.fourth == p.fourth);
      std::size_t pos = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          for (std::size_t k = j; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) {
              ASSERT_EQ(kernels::monomial_index4(i, j, k, l, n), pos++);
              Int naive = 0;
              for (const auto& x : xs) naive += Int(static_cast<long>(x[i] * x[j])) * Int(static_cast<long>(x[k] * x[l]));
              EXPECT_EQ(from_int128(s.fourth[kernels::monomial_index4(i, j, k, l, n)]), naive);
            }
      EXPECT_EQ(pos, s.fourth.size());
    }
  }
}
