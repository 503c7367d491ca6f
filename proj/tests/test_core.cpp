#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vlab/catalog.hpp"
#include "vlab/error.hpp"
#include "vlab/json_io.hpp"
#include "vlab/modular.hpp"

using namespace vlab;
using vlab::test::form;
using vlab::test::mat;
using vlab::test::vec;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rat("3"), Rat(3));
  EXPECT_EQ(parse_rat("-2/3"), Rat(-2, 3));
  EXPECT_EQ(to_string(Rat(-2, 3)), "-2/3");
  EXPECT_THROW(parse_rat("2/4"), ParseError);
  EXPECT_THROW(parse_rat("1/-3"), ParseError);
  EXPECT_THROW(parse_rat("1/0"), ParseError);
  EXPECT_THROW(parse_rat("x"), ParseError);
}

TEST(Rational, FloorSqrtAndRoots) {
  EXPECT_EQ(floor_sqrt(Rat(17, 4)), 2);
  EXPECT_EQ(floor_sqrt(Rat(9)), 3);
  EXPECT_EQ(exact_root(Rat(9, 4), 2), Rat(3, 2));
  EXPECT_FALSE(exact_root(Rat(2), 2).has_value());
}

TEST(QForm, EvalExamples) {
  const auto id2 = form({{1, 0}, {0, 1}});
  const auto a2 = form({{2, 1}, {1, 2}});
  EXPECT_EQ(eval(id2, vec({1, 0})), 1);
  EXPECT_EQ(eval(a2, vec({1, 0})), 2);
  EXPECT_EQ(eval(a2, vec({1, -1})), 2);
  EXPECT_THROW(eval(a2, vec({1, 0, 0})), DimensionError);
}

TEST(QForm, BilinearExamples) {
  const auto id2 = form({{1, 0}, {0, 1}});
  const auto a2 = form({{2, 1}, {1, 2}});
  EXPECT_EQ(bilinear(id2, vec({1, 0}), vec({0, 1})), 0);
  EXPECT_EQ(bilinear(a2, vec({1, 0}), vec({0, 1})), 1);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    RatVector x(2), y(2);
    for (auto& v : x) v = test::random_rat(rng, 4, 3);
    for (auto& v : y) v = test::random_rat(rng, 4, 3);
    EXPECT_EQ(bilinear(a2, x, y), bilinear(a2, y, x));
    EXPECT_EQ(bilinear(a2, x, x), eval(a2, x));
    RatVector s(2);
    for (int i = 0; i < 2; ++i) s[i] = x[i] + y[i];
    EXPECT_EQ(bilinear(a2, x, y), (eval(a2, s) - eval(a2, x) - eval(a2, y)) / 2);
  }
}

TEST(QForm, DualAndDeterminant) {
  const auto id2 = form({{1, 0}, {0, 1}});
  const auto a2 = form({{2, 1}, {1, 2}});
  EXPECT_EQ(dual_form(id2).gram(), id2.gram());
  RatMatrix expect(2, 2);
  expect(0, 0) = Rat(2, 3);
  expect(0, 1) = Rat(-1, 3);
  expect(1, 0) = Rat(-1, 3);
  expect(1, 1) = Rat(2, 3);
  EXPECT_EQ(dual_form(a2).gram(), expect);
  EXPECT_EQ(determinant(form({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})), 1);
  EXPECT_EQ(determinant(a2), 3);
  EXPECT_EQ(determinant(catalog_entry("D4").form), 4);
  const auto e8 = catalog_entry("E8").form;
  EXPECT_EQ(determinant(dual_form(e8)), 1);
  EXPECT_EQ(dual_form(dual_form(e8)).gram(), e8.gram());
  for (const auto* name : {"A3", "D5", "E6", "E7"}) {
    const auto q = catalog_entry(name).form;
    EXPECT_EQ(determinant(dual_form(q)), 1 / determinant(q)) << name;
    EXPECT_EQ(dual_form(dual_form(q)).gram(), q.gram()) << name;
  }
}

TEST(QForm, RejectsBadGram) {
  try {
    QForm::from_gram(mat({{1, 2}, {3, 1}}));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("not symmetric"), std::string::npos);
  }
  try {
    QForm::from_gram(mat({{1, 2}, {2, 1}}));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("minor 2 = -3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(QForm::from_gram(mat({{0}})), ParseError);
}

TEST(QForm, SelfadjointCheck) {
  const auto a2 = form({{2, 1}, {1, 2}});
  EXPECT_NO_THROW(SymEndo::make(mat({{1, 0}, {0, 1}}), a2.gram()));
  EXPECT_THROW(SymEndo::make(mat({{1, 0}, {0, -1}}), a2.gram()), PreconditionError);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) EXPECT_TRUE(is_selfadjoint(test::random_selfadjoint(rng, a2), a2.gram()));
}

TEST(QForm, DeformEvalExamples) {
  const auto id2 = form({{1, 0}, {0, 1}});
  const auto h = SymEndo::make(mat({{1, 0}, {0, -1}}), id2.gram());
  Deformation d{id2, h, std::log(2.0)};
  EXPECT_NEAR(deform_eval(d, vec({1, 0})), 2.0, 1e-9);
  EXPECT_NEAR(deform_eval(d, vec({0, 1})), 0.5, 1e-9);
  d.t = 0.0;
  const auto e8 = catalog_entry("E8").form;
  std::mt19937_64 rng(11);
  Deformation d8{e8, SymEndo::make(test::random_selfadjoint(rng, e8), e8.gram()), 0.0};
  for (int k = 0; k < 10; ++k) {
    RatVector x(8);
    for (auto& v : x) v = test::random_rat(rng, 3, 1);
    if (eval(e8, x) == 0) continue;
    const double exact = eval(e8, x).get_d();
    EXPECT_LE(std::abs(deform_eval(d8, x) - exact), 1e-12 * exact);
  }
}

// exp(tH) by the order-10 rational Taylor polynomial at rational t <= 1/10.
TEST(QForm, DeformEvalMatchesRationalTaylor) {
  std::mt19937_64 rng(5);
  for (const auto* name : {"A2", "D4", "E6"}) {
    const auto q = catalog_entry(name).form;
    const std::size_t n = q.dim();
    for (int k = 0; k < 5; ++k) {
      RatMatrix h = test::random_selfadjoint(rng, q, 2, 3);
      // Scale to infinity-norm <= 1 so that |tH| <= 1/10.
      Rat norm = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Rat row = 0;
        for (std::size_t j = 0; j < n; ++j) row += abs(h(i, j));
        norm = std::max(norm, row);
      }
      if (norm > 1) h = (1 / norm) * h;
      for (const Rat t : {Rat(1, 10), Rat(-1, 20), Rat(1, 37)}) {
        RatMatrix term = RatMatrix::identity(n);
        RatMatrix sum = term;
        for (int j = 1; j <= 10; ++j) {
          term = (t / j) * (term * h);
          sum = sum + term;
        }
        RatVector x(n);
        for (auto& v : x) v = test::random_rat(rng, 3, 1);
        if (eval(q, x) == 0) continue;
        const double taylor = dot(x, q.gram() * (sum * x)).get_d();
        Deformation d{q, SymEndo::make(h, q.gram()), t.get_d()};
        EXPECT_LE(std::abs(deform_eval(d, x) - taylor), 1e-10 * std::abs(taylor)) << name;
      }
    }
  }
}

TEST(QForm, HermiteInvariant) {
  EXPECT_NEAR(hermite_invariant(form({{1, 0}, {0, 1}}), 1), 1.0, 1e-12);
  EXPECT_NEAR(hermite_invariant(form({{2, 1}, {1, 2}}), 2), 2.0 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(hermite_invariant(catalog_entry("E8").form, 2), 2.0, 1e-9);
  EXPECT_THROW(hermite_invariant(form({{1}}), 0), PreconditionError);
  const auto d4 = catalog_entry("D4").form;
  for (const Rat c : {Rat(2), Rat(1, 3)}) {
    EXPECT_NEAR(hermite_invariant(d4.scaled(c), 2 * c), hermite_invariant(d4, 2), 1e-12);
  }
}

TEST(Matrix, RankRoutesAgree) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    std::uniform_int_distribution<int> dim(1, 7);
    const std::size_t r = dim(rng), c = dim(rng);
    // Low rank by construction: product of r x k and k x c.
    const std::size_t inner = std::uniform_int_distribution<std::size_t>(1, std::min(r, c))(rng);
    RatMatrix a(r, inner), b(inner, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < inner; ++j) a(i, j) = test::random_rat(rng, 3, 3);
    for (std::size_t i = 0; i < inner; ++i)
      for (std::size_t j = 0; j < c; ++j) b(i, j) = test::random_rat(rng, 3, 3);
    const RatMatrix m = a * b;
    EXPECT_EQ(rank(m), rank_fraction_free(m));
    const auto ker = kernel(m);
    EXPECT_EQ(ker.size() + rank(m), c);
    for (const auto& v : ker) {
      for (const auto& e : m * v) EXPECT_EQ(e, 0);
    }
    const auto cert = certified_kernel(m);
    EXPECT_EQ(cert.basis.size(), ker.size());
    EchelonBasis span(c);
    for (const auto& v : ker) span.add(v);
    for (const auto& v : cert.basis) EXPECT_TRUE(span.contains(v));
  }
}

TEST(Matrix, InverseAndDeterminant) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = test::random_rat(rng, 4, 3);
    if (determinant(m) == 0) {
      EXPECT_THROW(inverse(m), PreconditionError);
      continue;
    }
    EXPECT_EQ(m * inverse(m), RatMatrix::identity(n));
    EXPECT_EQ(determinant(inverse(m)), 1 / determinant(m));
  }
}

TEST(Json, FormRoundTrip) {
  const auto e7 = catalog_entry("E7").form;
  const auto back = qform_from_json(json::parse(qform_to_json(e7).dump()));
  EXPECT_EQ(back.gram(), e7.gram());
  const auto j = json::parse(R"({"dim": 2, "gram": [["1/2", 0], [0, "3"]]})");
  EXPECT_EQ(qform_from_json(j).gram()(0, 0), Rat(1, 2));
  EXPECT_THROW(qform_from_json(json::parse(R"({"dim": 3, "gram": [[1,0],[0,1]]})")), ParseError);
  EXPECT_THROW(qform_from_json(json::parse(R"({"gram": [["2/4",0],[0,1]]})")), ParseError);
}
