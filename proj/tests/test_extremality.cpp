#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "vlab/catalog.hpp"
#include "vlab/error.hpp"
#include "vlab/extremality.hpp"

using namespace vlab;
using vlab::test::mat;

namespace {

SpaceDescriptor classic_min(const QForm& q) { return classic_space(q, points_from_layer(q, minimal_vectors(q))); }

// Replays the eutaxy certificate directly from the definition of eps.
void replay_weights(const SpaceDescriptor& s, const EutaxyVerdict& v) {
  ASSERT_TRUE(v.weights.has_value());
  const auto& w = *v.weights;
  ASSERT_EQ(w.size(), s.points.size());
  Rat sum = 0;
  for (const auto& x : w) {
    EXPECT_GE(x, v.margin);
    sum += x;
  }
  EXPECT_EQ(sum, 1);
  for (std::size_t j = 0; j < s.extended_basis.size(); ++j) {
    Rat acc = 0;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      acc += w[i] * dot(p.coords, s.gram * (s.extended_basis[j].matrix() * p.coords)) / eval(QForm::from_gram(s.gram), p.coords);
    }
    EXPECT_EQ(acc, s.tau[j]) << "basis element " << j;
  }
}

}  // namespace

TEST(Epsilon, IdentityRows) {
  const auto s = classic_min(catalog_entry("Z2").form);
  const auto e = epsilon_matrix(s).values;
  // Points in order (0,1), (1,0).
  EXPECT_EQ(e.row_vector(1), test::vec({1, 0, 1}));
  EXPECT_EQ(e.row_vector(0), test::vec({-1, 0, 1}));
  const auto a2 = epsilon_matrix(classic_min(catalog_entry("A2").form)).values;
  for (std::size_t i = 0; i < a2.rows(); ++i) EXPECT_EQ(a2(i, a2.cols() - 1), 1);
}

TEST(Eutaxy, Examples) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto v = test_eutaxy(classic_min(catalog_entry("Z" + std::to_string(n)).form));
    EXPECT_TRUE(v.strongly_eutactic);
    EXPECT_TRUE(v.eutactic);
  }
  const auto s = classic_min(catalog_entry("A2").form);
  const auto v = test_eutaxy(s);
  ASSERT_TRUE(v.eutactic);
  // Equal weight 1/6 per vector, i.e. 1/3 per antipodal class.
  for (const auto& w : *v.weights) EXPECT_EQ(w, Rat(1, 3));
  replay_weights(s, v);

  // X = {+-e1} is not eutactic; the LP alternative gives a direction where all
  // eps are >= 0 and not all 0.
  auto one = restrict_points(classic_min(catalog_entry("Z2").form), {1});
  const auto bad = test_eutaxy(one);
  EXPECT_FALSE(bad.eutactic);
  ASSERT_TRUE(bad.violating_direction.has_value());
  RatMatrix h(2, 2);
  for (std::size_t j = 0; j < one.gp_dim(); ++j) h = h + (*bad.violating_direction)[j] * one.gp_basis[j].matrix();
  EXPECT_GT(h(0, 0), 0);
}

TEST(Perfection, Examples) {
  const auto a2 = test_perfection(classic_min(catalog_entry("A2").form));
  EXPECT_EQ(a2.rank, 3u);
  EXPECT_TRUE(a2.perfect);
  const auto z2 = test_perfection(classic_min(catalog_entry("Z2").form));
  EXPECT_EQ(z2.rank, 2u);
  EXPECT_FALSE(z2.perfect);
  EXPECT_TRUE(z2.kernel_basis.empty());
  EXPECT_FALSE(z2.weakly_perfect);
  EXPECT_THROW(reducibility_subspace(a2), PreconditionError);
  const auto e8 = test_perfection(classic_min(catalog_entry("E8").form));
  EXPECT_EQ(e8.rank, 36u);
  EXPECT_TRUE(e8.perfect);
}

TEST(Perfection, ReducibleDualityHalf) {
  const auto full = duality_product_space(catalog_entry("A2").form);
  std::vector<std::size_t> primal;
  for (std::size_t i = 0; i < full.primal_points; ++i) primal.push_back(i);
  const auto half = restrict_points(full, primal);
  const auto v = test_perfection(half);
  EXPECT_TRUE(v.weakly_perfect);
  EXPECT_FALSE(v.perfect);
  ASSERT_EQ(v.kernel_basis.size(), 1u);
  ASSERT_TRUE(v.reducible_subspace.has_value());
  const auto& u = *v.reducible_subspace;
  ASSERT_EQ(u.size(), 2u);
  EchelonBasis span(4);
  for (const auto& b : u) span.add(b);
  EXPECT_TRUE(span.contains(test::vec({1, 0, 0, 0})));
  EXPECT_TRUE(span.contains(test::vec({0, 1, 0, 0})));
  for (const auto& p : half.points) EXPECT_TRUE(span.contains(p.coords));
}

TEST(Classify, Catalog) {
  for (const auto* name : {"A2", "A3", "D4", "E6", "E7", "E8"}) {
    const auto r = classify_extremality(classic_min(catalog_entry(name).form));
    EXPECT_EQ(r.verdict, Extremality::strictly_extreme) << name;
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto r = classify_extremality(classic_min(catalog_entry("Z" + std::to_string(n)).form));
    EXPECT_EQ(r.verdict, Extremality::not_extreme);
    EXPECT_TRUE(r.subset_search);
    EXPECT_EQ(r.subsets_checked, (1u << n) - 2);
    EXPECT_EQ(r.perfection.rank, n);
  }
  ExtremalityOptions tight;
  tight.subset_limit = 1;
  EXPECT_EQ(classify_extremality(classic_min(catalog_entry("Z2").form), tight).verdict, Extremality::inconclusive);
}

TEST(Classify, DualityProduct) {
  const auto r = classify_extremality(duality_product_space(catalog_entry("E8").form));
  EXPECT_EQ(r.verdict, Extremality::strictly_extreme);
  replay_weights(duality_product_space(catalog_entry("E8").form), r.eutaxy);
}

// Definition-level sign condition: if some eps_x(H) > 0 then some eps_y(H) < 0.
TEST(Eutaxy, SignDefinitionConsistency) {
  std::mt19937_64 rng(23);
  std::vector<SpaceDescriptor> spaces = {classic_min(catalog_entry("A2").form), classic_min(catalog_entry("D4").form),
                                         classic_min(catalog_entry("Z3").form)};
  auto partial = classic_min(catalog_entry("A2").form);
  spaces.push_back(restrict_points(partial, {0, 1}));
  auto z3 = classic_min(catalog_entry("Z3").form);
  spaces.push_back(restrict_points(z3, {0, 2}));
  for (const auto& s : spaces) {
    const auto v = test_eutaxy(s);
    const auto e = epsilon_matrix(s).values;
    const std::size_t gp = s.gp_dim();
    if (v.eutactic) {
      for (int k = 0; k < 100; ++k) {
        RatVector c(gp);
        for (auto& x : c) x = test::random_rat(rng, 3, 3);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < e.rows(); ++i) {
          Rat val = 0;
          for (std::size_t j = 0; j < gp; ++j) val += c[j] * e(i, j);
          pos = pos || val > 0;
          neg = neg || val < 0;
        }
        EXPECT_TRUE(!pos || neg);
      }
    } else {
      ASSERT_TRUE(v.violating_direction.has_value());
      bool pos = false;
      for (std::size_t i = 0; i < e.rows(); ++i) {
        Rat val = 0;
        for (std::size_t j = 0; j < gp; ++j) val += (*v.violating_direction)[j] * e(i, j);
        EXPECT_GE(val, 0);
        pos = pos || val > 0;
      }
      EXPECT_TRUE(pos);
    }
  }
}

TEST(Classify, Implications) {
  for (const auto& name : catalog_names()) {
    const auto e = catalog_entry(name);
    if (e.form.dim() > 8) continue;
    const auto s = classic_min(e.form);
    const auto ev = test_eutaxy(s);
    const auto pv = test_perfection(s);
    if (ev.strongly_eutactic) EXPECT_TRUE(ev.eutactic) << name;
    if (pv.perfect) EXPECT_TRUE(pv.weakly_perfect) << name;
    if (ev.eutactic) replay_weights(s, ev);
  }
}

TEST(Classify, ScaleInvariance) {
  for (const auto* name : {"A2", "D4", "Z3"}) {
    const auto q = catalog_entry(name).form;
    const auto base = classify_extremality(classic_min(q));
    for (const Rat c : {Rat(2), Rat(1, 3)}) {
      const auto r = classify_extremality(classic_min(q.scaled(c)));
      EXPECT_EQ(r.verdict, base.verdict);
      EXPECT_EQ(r.perfection.rank, base.perfection.rank);
      EXPECT_EQ(r.eutaxy.eutactic, base.eutaxy.eutactic);
      EXPECT_EQ(r.eutaxy.strongly_eutactic, base.eutaxy.strongly_eutactic);
      EXPECT_EQ(r.eutaxy.weights, base.eutaxy.weights);
    }
  }
}
