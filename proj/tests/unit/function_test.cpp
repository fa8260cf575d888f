#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ultradiff/field/sampling.hpp"
#include "ultradiff/function/expr.hpp"

using namespace ultradiff;

namespace {

const Field kExact = Field::exact(5);

PadicVector at(std::initializer_list<long> xs) {
  std::vector<mpq_class> v;
  for (long x : xs) v.emplace_back(x);
  return PadicVector::lift(kExact, v);
}

PadicVector at_q(const std::vector<mpq_class>& xs) { return PadicVector::lift(kExact, xs); }

// Occasionally zero, otherwise valuation in [-2, 3].
mpq_class any_rational(Rng& rng) {
  if (rng.range(0, 9) == 0) return 0;
  return random_rational_with_valuation(rng, 5, rng.range(-2, 3), 8);
}

MultiPolynomial random_univariate(Rng& rng, unsigned max_degree) {
  RationalVector c;
  unsigned d = static_cast<unsigned>(rng.range(0, max_degree));
  for (unsigned i = 0; i <= d; ++i) c.push_back(random_bounded_rational(rng, 5, 2, true, 6));
  return MultiPolynomial::univariate(c);
}

}  // namespace

TEST(Expr, PolynomialExample) {
  auto f = FunctionExpr::poly(MultiPolynomial::univariate({0, 0, 1}));
  EXPECT_EQ(f.eval_scalar(at({3})).to_rational(), 9);
}

TEST(Expr, BallIndicatorExample) {
  auto f = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1));
  EXPECT_EQ(f.eval_scalar(at({5})).to_rational(), 1);
  EXPECT_EQ(f.eval_scalar(at({1})).to_rational(), 0);
}

TEST(Expr, ComposeSumWithCurve) {
  MultiPolynomial sum(2, 1);
  sum.add_term({1, 0}, {mpq_class(1)});
  sum.add_term({0, 1}, {mpq_class(1)});
  Curve u = Curve::polynomial({{0, 0}, {1, 0}, {0, 1}});
  auto g = compose(FunctionExpr::poly(sum), u);
  EXPECT_EQ(g.eval_scalar(at({2})).to_rational(), 6);
  EXPECT_EQ(g.to_polynomial()->to_string(), "1*x0^2 + 1*x0");
}

TEST(Expr, IndicatorAfterScalingIsSmallerBallIndicator) {
  auto ind = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 0));
  auto g = FunctionExpr::compose(ind, FunctionExpr::poly(MultiPolynomial::univariate({0, mpq_class(1, 5)})));
  auto h = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1));
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    mpq_class x = any_rational(rng);
    EXPECT_TRUE(g.eval(at_q({x})).identical(h.eval(at_q({x})))) << x.get_str();
  }
}

TEST(Expr, ShiftAndAffineAgreeWithPolynomialForms) {
  auto p = MultiPolynomial::univariate({1, -2, 0, 3});
  auto shifted = FunctionExpr::shift({mpq_class(2, 3)}, FunctionExpr::poly(p));
  auto affine = FunctionExpr::affine_precompose({mpq_class(7)}, mpq_class(5), FunctionExpr::poly(p));
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    mpq_class x = any_rational(rng);
    oracle::QVec c = {1, -2, 0, 3};
    EXPECT_EQ(shifted.eval_scalar(at_q({x})).to_rational(), oracle::poly_eval(c, x + mpq_class(2, 3)));
    EXPECT_EQ(affine.eval_scalar(at_q({x})).to_rational(), oracle::poly_eval(c, (x - 7) / 5));
    EXPECT_EQ(shifted.to_polynomial()->evaluate(at_q({x}))[0].to_rational(),
              shifted.eval_scalar(at_q({x})).to_rational());
    EXPECT_EQ(affine.to_polynomial()->evaluate(at_q({x}))[0].to_rational(),
              affine.eval_scalar(at_q({x})).to_rational());
  }
}

TEST(Expr, ReciprocalRejectsZero) {
  auto f = FunctionExpr::reciprocal(FunctionExpr::identity(1));
  EXPECT_THROW(f.eval(at({0})), DomainError);
  EXPECT_EQ(f.eval_scalar(at({5})).to_rational(), mpq_class(1, 5));
  EXPECT_FALSE(f.to_polynomial().has_value());
}

TEST(Expr, DimensionMismatchesAreReported) {
  auto f = FunctionExpr::identity(2);
  EXPECT_THROW(f.eval(at({1})), DimensionMismatch);
  EXPECT_THROW(FunctionExpr::compose(f, FunctionExpr::identity(3)), DimensionMismatch);
  EXPECT_THROW(FunctionExpr::sum({f, FunctionExpr::identity(1)}), DimensionMismatch);
}

TEST(Expr, ComponentExtraction) {
  auto u = Curve::polynomial({{1, 2}, {0, 1}}).expr();
  EXPECT_EQ(component(u, 1).eval_scalar(at({3})).to_rational(), 5);
  EXPECT_EQ(component(u, 0).eval_scalar(at({3})).to_rational(), 1);
}

TEST(ExprProperty, CompositionIsAssociative) {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = FunctionExpr::poly(random_univariate(rng, 3));
    auto g = FunctionExpr::poly(random_univariate(rng, 3));
    auto h = FunctionExpr::poly(random_univariate(rng, 3));
    auto left = FunctionExpr::compose(FunctionExpr::compose(f, g), h);
    auto right = FunctionExpr::compose(f, FunctionExpr::compose(g, h));
    for (int i = 0; i < 5; ++i) {
      auto x = at_q({random_bounded_rational(rng, 5, 2, true, 8)});
      EXPECT_TRUE(left.eval(x).identical(right.eval(x)));
    }
    EXPECT_EQ(*left.to_polynomial(), *right.to_polynomial());
  }
}

TEST(ExprProperty, HornerMatchesTermEvaluation) {
  Rng rng(7);
  for (const Field& field : {Field::exact(5), Field::truncated(5, 32), Field::truncated(3, 20)}) {
    for (int trial = 0; trial < 100; ++trial) {
      auto p = random_univariate(rng, 6);
      mpq_class x = random_bounded_rational(rng, field.prime.value(), 1, true, 6);
      auto xv = PadicVector::lift(field, {x});
      auto a = p.evaluate(xv);
      auto b = p.evaluate_horner(xv);
      EXPECT_TRUE(a.agrees_with(b));
      if (field.backend == Backend::ExactRational) {
        oracle::QVec c;
        for (const auto& cv : p.univariate_coefficients()) c.push_back(cv[0]);
        EXPECT_EQ(a[0].to_rational(), oracle::poly_eval(c, x));
      }
    }
  }
}

TEST(ExprProperty, IndicatorIsLocallyConstantBelowRadius) {
  Rng rng(9);
  for (Valuation k = -1; k <= 3; ++k) {
    mpq_class c = random_bounded_rational(rng, 5, 5, true, 6);
    auto ind = FunctionExpr::ball_indicator(Ball({c}, k));
    for (int i = 0; i < 50; ++i) {
      mpq_class x = any_rational(rng);
      mpq_class h = random_rational_with_valuation(rng, 5, k + static_cast<Valuation>(rng.range(0, 3)));
      EXPECT_TRUE(ind.eval(at_q({x})).identical(ind.eval(at_q({x + h}))));
    }
  }
}

TEST(ExprProperty, JsonRoundTrip) {
  MultiPolynomial q2(2, 1);
  q2.add_term({2, 1}, {mpq_class(3, 7)});
  q2.add_term({0, 0}, {mpq_class(-1)});
  auto inner = Curve::polynomial({{1, 0}, {mpq_class(1, 5), 1}}).expr();
  auto f = FunctionExpr::sum(
      {FunctionExpr::compose(FunctionExpr::poly(q2), inner),
       FunctionExpr::product(FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1)),
                             FunctionExpr::scale(mpq_class(2), FunctionExpr::identity(1))),
       FunctionExpr::affine_precompose({mpq_class(1)}, mpq_class(25),
                                       FunctionExpr::shift({mpq_class(-3)}, FunctionExpr::identity(1))),
       FunctionExpr::reciprocal(FunctionExpr::constant(1, {mpq_class(4)}))});
  auto g = FunctionExpr::from_json(f.to_json());
  EXPECT_EQ(f.to_json(), g.to_json());
  EXPECT_EQ(f.describe(), g.describe());
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    auto x = at_q({any_rational(rng)});
    EXPECT_TRUE(f.eval(x).identical(g.eval(x)));
  }
}

TEST(Expr, JsonRejectsUnknownKeysAndKinds) {
  EXPECT_THROW(FunctionExpr::from_json(json{{"kind", "poly"}, {"univariate", {1}}, {"extra", 1}}),
               InvalidArgument);
  EXPECT_THROW(FunctionExpr::from_json(json{{"kind", "spline"}}), InvalidArgument);
  EXPECT_THROW(FunctionExpr::from_json(json{{"kind", "gallery"}, {"name", "x"}}), InvalidArgument);
  auto f = FunctionExpr::from_json(json{{"kind", "poly"}, {"univariate", {"1/2", 0, 1}}});
  EXPECT_EQ(f.eval_scalar(at({2})).to_rational(), mpq_class(9, 2));
}

TEST(Curve, TagValidation) {
  auto poly = Curve::polynomial({{0}, {1}}).expr();
  auto ind = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1));
  EXPECT_NO_THROW(Curve::tagged(poly, CurveTag::Polynomial));
  EXPECT_NO_THROW(Curve::tagged(poly, CurveTag::LocallyAnalytic));
  EXPECT_THROW(Curve::tagged(poly, CurveTag::LocallyConstant), InvalidArgument);
  EXPECT_THROW(Curve::tagged(poly, CurveTag::Patchwork), InvalidArgument);
  EXPECT_NO_THROW(Curve::tagged(ind, CurveTag::LocallyConstant));
  EXPECT_THROW(Curve::tagged(ind, CurveTag::Polynomial), InvalidArgument);
  EXPECT_THROW(Curve::tagged(ind, CurveTag::LocallyAnalytic), InvalidArgument);
  EXPECT_NO_THROW(Curve::tagged(FunctionExpr::reciprocal(poly), CurveTag::LocallyAnalytic));
  EXPECT_THROW(Curve::tagged(FunctionExpr::identity(2), CurveTag::Polynomial), DimensionMismatch);
}
