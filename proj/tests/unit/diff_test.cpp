#include <gtest/gtest.h>

#include "oracle.hpp"
#include "random_poly.hpp"
#include "ultradiff/diff/checks.hpp"

using namespace ultradiff;
using testpoly::any_rational;
using testpoly::nonzero_rational;

namespace {

const Field kExact = Field::exact(5);

FunctionExpr univariate(std::initializer_list<mpq_class> c) {
  return FunctionExpr::poly(MultiPolynomial::univariate(c));
}

PhiPoint scalar_point(const Field& field, const mpq_class& x, const std::vector<mpq_class>& v,
                      const std::vector<mpq_class>& t) {
  std::vector<std::vector<mpq_class>> dirs;
  for (const auto& d : v) dirs.push_back({d});
  return PhiPoint::from_rationals(field, {x}, dirs, t);
}

struct RandomPhi {
  oracle::QVec x;
  std::vector<oracle::QVec> v;
  oracle::QVec t;
  PhiPoint lift(const Field& f) const { return PhiPoint::from_rationals(f, x, v, t); }
};

RandomPhi random_phi(Rng& rng, std::size_t m, std::size_t n) {
  RandomPhi r;
  for (std::size_t i = 0; i < m; ++i) r.x.push_back(any_rational(rng));
  for (std::size_t k = 0; k < n; ++k) {
    oracle::QVec d;
    for (std::size_t i = 0; i < m; ++i) d.push_back(any_rational(rng));
    r.v.push_back(d);
    r.t.push_back(nonzero_rational(rng));
  }
  return r;
}

oracle::QVec random_upsilon_flat(Rng& rng, std::size_t m, unsigned order) {
  while (true) {
    oracle::QVec flat(oracle::upsilon_size(m, order));
    for (auto& q : flat) q = nonzero_rational(rng);
    if (upsilon_point_valid(m, order, flat)) return flat;
  }
}

}  // namespace

TEST(Phi, SquareExample) {
  auto f = univariate({0, 0, 1});
  EXPECT_EQ(phi(f, scalar_point(kExact, 1, {1}, {5}))[0].to_rational(), 7);
}

TEST(Phi, CubeSecondOrderExample) {
  auto f = univariate({0, 0, 0, 1});
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    mpq_class x = any_rational(rng), t1 = nonzero_rational(rng), t2 = nonzero_rational(rng);
    EXPECT_EQ(phi(f, scalar_point(kExact, x, {1, 1}, {t1, t2}))[0].to_rational(), 6 * x + 3 * t2 + 3 * t1);
  }
}

TEST(Phi, IdentityAndConstant) {
  Rng rng(4);
  auto id = FunctionExpr::identity(2);
  auto c = FunctionExpr::constant(2, {mpq_class(3)});
  for (int i = 0; i < 10; ++i) {
    auto r = random_phi(rng, 2, 1);
    auto pt = r.lift(kExact);
    EXPECT_TRUE(phi(id, pt).identical(pt.directions[0]));
    for (std::size_t n = 1; n <= 3; ++n)
      EXPECT_TRUE(phi(c, random_phi(rng, 2, n).lift(kExact)).is_zero());
  }
}

TEST(Phi, ZeroIncrementIsRejected) {
  auto f = univariate({0, 0, 1});
  EXPECT_THROW(phi(f, scalar_point(kExact, 1, {1}, {0})), ZeroIncrement);
  EXPECT_THROW(phi(f, scalar_point(Field::truncated(5, 8), 1, {1}, {0})), ZeroIncrement);
}

TEST(PhiProperty, MatchesOracleOnRandomPolynomials) {
  Rng rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 3));
    std::size_t n = static_cast<std::size_t>(rng.range(0, 3));
    auto poly = testpoly::random_poly(rng, m, 5);
    auto r = random_phi(rng, m, n);
    oracle::Q expected = oracle::phi_vec([&](const oracle::QVec& x) { return poly.eval(x); }, r.x, r.v, r.t);
    EXPECT_EQ(phi(FunctionExpr::poly(poly.to_poly()), r.lift(kExact))[0].to_rational(), expected);
  }
}

TEST(PhiProperty, TruncatedIsCongruentToExact) {
  Rng rng(12);
  Field trunc = Field::truncated(5, 32);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = static_cast<std::size_t>(rng.range(1, 3));
    auto poly = testpoly::random_poly(rng, 1, 4);
    auto r = random_phi(rng, 1, n);
    auto f = FunctionExpr::poly(poly.to_poly());
    PadicScalar approx = phi(f, r.lift(trunc))[0];
    EXPECT_TRUE(approx.congruent_to(phi(f, r.lift(kExact))[0].to_rational()));
    EXPECT_GT(approx.precision(), 20);
  }
}

TEST(PhiProperty, Linearity) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = FunctionExpr::poly(testpoly::random_poly(rng, 2, 4).to_poly());
    auto g = FunctionExpr::poly(testpoly::random_poly(rng, 2, 4).to_poly());
    mpq_class a = any_rational(rng), b = any_rational(rng);
    auto combo = FunctionExpr::sum({FunctionExpr::scale(a, f), FunctionExpr::scale(b, g)});
    auto pt = random_phi(rng, 2, static_cast<std::size_t>(rng.range(1, 3))).lift(kExact);
    EXPECT_TRUE(phi(combo, pt).identical(kExact.lift(a) * phi(f, pt) + kExact.lift(b) * phi(g, pt)));
  }
}

TEST(Upsilon, IdentitySecondOrderIsMiddleDisplacement) {
  Rng rng(20);
  auto id = FunctionExpr::identity(1);
  for (int i = 0; i < 10; ++i) {
    auto flat = random_upsilon_flat(rng, 1, 2);
    auto pt = UpsilonPoint::from_flat(1, 2, PadicVector::lift(kExact, flat));
    EXPECT_EQ(upsilon(id, pt)[0].to_rational(), flat[4]);
    EXPECT_EQ(upsilon(id, pt.base())[0].to_rational(), flat[1]);
  }
}

TEST(Upsilon, ShapeAndFlattening) {
  EXPECT_EQ(upsilon_flat_size(1, 0), 1u);
  EXPECT_EQ(upsilon_flat_size(1, 1), 3u);
  EXPECT_EQ(upsilon_flat_size(1, 2), 7u);
  EXPECT_EQ(upsilon_flat_size(2, 3), 23u);
  Rng rng(21);
  auto flat = PadicVector::lift(kExact, random_upsilon_flat(rng, 2, 3));
  auto pt = UpsilonPoint::from_flat(2, 3, flat);
  EXPECT_EQ(pt.order(), 3u);
  EXPECT_EQ(pt.direction().order(), 2u);
  EXPECT_TRUE(pt.flatten().identical(flat));
  EXPECT_THROW(UpsilonPoint(pt.base(), pt.base().base(), kExact.one()), DimensionMismatch);
}

TEST(UpsilonProperty, MatchesOracle) {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    unsigned order = static_cast<unsigned>(rng.range(0, 3));
    auto poly = testpoly::random_poly(rng, m, 4);
    auto flat = random_upsilon_flat(rng, m, order);
    auto value = upsilon_flat(FunctionExpr::poly(poly.to_poly()), order, PadicVector::lift(kExact, flat));
    EXPECT_EQ(value[0].to_rational(), oracle::upsilon_flat(poly.as_vec_fn(), flat, m, order)[0]);
  }
}

TEST(UpsilonProperty, OrderOneCoincidesWithPhi) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = FunctionExpr::poly(testpoly::random_poly(rng, 2, 4).to_poly());
    auto pt = random_phi(rng, 2, 1).lift(kExact);
    UpsilonPoint up(UpsilonPoint(pt.x), UpsilonPoint(pt.directions[0]), pt.increments[0]);
    EXPECT_TRUE(upsilon(f, up).identical(phi(f, pt)));
  }
}

TEST(Embedding, OrderZeroAndOneAreTrivial) {
  auto pt0 = PhiPoint::from_rationals(kExact, {3, 4}, {}, {});
  EXPECT_TRUE(embed_phi_point(pt0).flatten().identical(pt0.x));
  auto pt1 = PhiPoint::from_rationals(kExact, {3}, {{2}}, {5});
  EXPECT_EQ(embed_phi_point(pt1).flatten().to_rationals(), (std::vector<mpq_class>{3, 2, 5}));
}

TEST(EmbeddingProperty, RestrictionAgreesWithPhi) {
  Rng rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    std::size_t n = static_cast<std::size_t>(rng.range(0, 3));
    auto f = FunctionExpr::poly(testpoly::random_poly(rng, m, 5).to_poly());
    auto pt = random_phi(rng, m, n).lift(kExact);
    EXPECT_TRUE(upsilon(f, embed_phi_point(pt)).identical(phi(f, pt)));
  }
}

TEST(ClosedForm, PhiExamples) {
  auto cube = MultiPolynomial::univariate({0, 0, 0, 1});
  Rng rng(30);
  for (int i = 0; i < 10; ++i) {
    mpq_class x = any_rational(rng), v1 = any_rational(rng), v2 = any_rational(rng);
    mpq_class t1 = any_rational(rng), t2 = any_rational(rng);
    auto value = phi_poly_closed(cube, scalar_point(kExact, x, {v1, v2}, {t1, t2}));
    EXPECT_EQ(value[0].to_rational(), 6 * x * v1 * v2 + 3 * v1 * v2 * v2 * t2 + 3 * v1 * v1 * v2 * t1);
  }
  EXPECT_TRUE(phi_poly_closed(cube, scalar_point(kExact, 2, {1, 1, 1, 1}, {1, 1, 1, 1})).is_zero());
  auto square = MultiPolynomial::univariate({0, 0, 1});
  EXPECT_EQ(phi_poly_closed(square, scalar_point(kExact, 3, {2}, {0}))[0].to_rational(), 12);
}

TEST(ClosedForm, ZeroIncrementIsTheLimit) {
  // Along t = 5^k the quotient of x^2 approaches 2xv 5-adically.
  auto square = FunctionExpr::poly(MultiPolynomial::univariate({0, 0, 1}));
  PadicScalar limit = phi_poly_closed(square.polynomial(), scalar_point(kExact, 3, {2}, {0}))[0];
  for (unsigned k = 1; k <= 6; ++k) {
    mpq_class t = mpq_class(oracle::power(5, k));
    PadicScalar gap = phi(square, scalar_point(kExact, 3, {2}, {t}))[0] - limit;
    EXPECT_EQ(gap.valuation(), static_cast<Valuation>(k));
  }
}

TEST(ClosedFormProperty, PhiClosedMatchesOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto poly = testpoly::random_poly(rng, 1, 6);
    auto r = random_phi(rng, 1, static_cast<std::size_t>(rng.range(0, 3)));
    oracle::Q expected = oracle::phi_vec([&](const oracle::QVec& x) { return poly.eval(x); }, r.x, r.v, r.t);
    EXPECT_EQ(phi_poly_closed(poly.to_poly(), r.lift(kExact))[0].to_rational(), expected);
  }
}

TEST(ClosedFormProperty, UpsilonLowMatchesOracle) {
  Rng rng(32);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned order = static_cast<unsigned>(rng.range(0, 2));
    auto poly = testpoly::random_poly(rng, 1, 6);
    auto flat = random_upsilon_flat(rng, 1, order);
    auto pt = UpsilonPoint::from_flat(1, order, PadicVector::lift(kExact, flat));
    EXPECT_EQ(upsilon_poly_closed_low(poly.to_poly(), pt)[0].to_rational(),
              oracle::upsilon_flat(poly.as_vec_fn(), flat, 1, order)[0]);
  }
}

TEST(ClosedForm, UpsilonLowExamplesAndLimits) {
  auto square = MultiPolynomial::univariate({0, 0, 1});
  auto pt = UpsilonPoint::from_flat(1, 1, PadicVector::lift(kExact, {3, 2, 0}));
  EXPECT_EQ(upsilon_poly_closed_low(square, pt)[0].to_rational(), 12);
  auto flat = PadicVector::lift(kExact, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15});
  EXPECT_THROW(upsilon_poly_closed_low(square, UpsilonPoint::from_flat(1, 3, flat)), UnsupportedOrder);
  auto c = MultiPolynomial::univariate({7});
  EXPECT_TRUE(upsilon_poly_closed_low(c, UpsilonPoint::from_flat(1, 2, flat.slice(0, 7))).is_zero());
}

TEST(Leibniz, FirstOrderIdentityTimesIdentity) {
  auto id = FunctionExpr::identity(1);
  Rng rng(40);
  for (int i = 0; i < 10; ++i) {
    mpq_class x = any_rational(rng), v = any_rational(rng), t = nonzero_rational(rng);
    EXPECT_EQ(leibniz_phi(id, id, scalar_point(kExact, x, {v}, {t}))[0].to_rational(), 2 * x * v + v * v * t);
  }
}

TEST(LeibnizProperty, MatchesProductQuotient) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 2));
    auto f = FunctionExpr::poly(testpoly::random_poly(rng, m, 4).to_poly());
    auto g = FunctionExpr::poly(testpoly::random_poly(rng, m, 4).to_poly());
    auto pt = random_phi(rng, m, static_cast<std::size_t>(rng.range(1, 3))).lift(kExact);
    EXPECT_TRUE(leibniz_phi(f, g, pt).identical(phi(FunctionExpr::product(f, g), pt)));
  }
}

TEST(Leibniz, NonPolynomialFactors) {
  auto ind = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1));
  auto inv = FunctionExpr::reciprocal(univariate({1, 1}));
  auto pt = scalar_point(kExact, 5, {1, 3}, {mpq_class(1, 5), 25});
  EXPECT_TRUE(leibniz_phi(ind, inv, pt).identical(phi(FunctionExpr::product(ind, inv), pt)));
}

TEST(Chain, AxisQuotientPolynomial) {
  MultiPolynomial p(2, 1);
  p.add_term({2, 1}, {mpq_class(1)});  // x0^2 x1
  auto q = axis_quotient_polynomial(p, 0);
  // ((x0 + s)^2 - x0^2) x1 / s = (2 x0 + s) x1
  EXPECT_EQ(q.evaluate(PadicVector::lift(kExact, {3, 4, 0}))[0].to_rational(), 24);
  EXPECT_EQ(q.evaluate(PadicVector::lift(kExact, {3, 4, 2}))[0].to_rational(), 32);
}

TEST(Chain, FirstOrderScalarCurve) {
  auto f = univariate({0, 0, 1});
  Curve u = Curve::affine({3}, {2});
  auto pt = scalar_point(kExact, 1, {1}, {5});
  auto composed = compose(f, u);
  EXPECT_TRUE(chain_phi_low(f, u, 1, pt).identical(phi(composed, pt)));
  auto c = FunctionExpr::constant(1, {mpq_class(4)});
  EXPECT_TRUE(chain_phi_low(c, u, 1, pt).is_zero());
}

TEST(ChainProperty, MatchesCompositionAtOrdersOneAndTwo) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = static_cast<std::size_t>(rng.range(1, 3));
    auto f = FunctionExpr::poly(testpoly::random_poly(rng, m, 3).to_poly());
    std::vector<RationalVector> coeffs;
    unsigned degree = static_cast<unsigned>(rng.range(1, 3));
    for (unsigned d = 0; d <= degree; ++d) {
      RationalVector c;
      for (std::size_t i = 0; i < m; ++i) c.push_back(rng.coin() ? testpoly::unit_bounded(rng) : mpq_class(0));
      coeffs.push_back(c);
    }
    Curve u = Curve::polynomial(coeffs);
    for (std::size_t n = 1; n <= 2; ++n) {
      auto pt = random_phi(rng, 1, n).lift(kExact);
      EXPECT_TRUE(chain_phi_low(f, u, n, pt).identical(phi(compose(f, u), pt))) << trial;
    }
    auto flat = random_upsilon_flat(rng, 1, 2);
    auto up = UpsilonPoint::from_flat(1, 2, PadicVector::lift(kExact, flat));
    EXPECT_TRUE(chain_upsilon_low(f, u, up).identical(upsilon(compose(f, u), up))) << trial;
  }
}

TEST(Chain, NonPolynomialOuterFunction) {
  auto f = FunctionExpr::reciprocal(univariate({1, 1}));
  Curve u = Curve::polynomial({{2}, {1}, {3}});
  Rng rng(43);
  for (int i = 0; i < 10; ++i) {
    auto pt = random_phi(rng, 1, 1).lift(kExact);
    EXPECT_TRUE(chain_phi_low(f, u, 1, pt).identical(phi(compose(f, u), pt)));
  }
  EXPECT_THROW(chain_phi_low(f, u, 3, random_phi(rng, 1, 3).lift(kExact)), UnsupportedOrder);
}

TEST(Scaling, SquareAndIndicator) {
  Rng rng(50);
  auto square = univariate({0, 0, 1});
  auto ind = FunctionExpr::ball_indicator(Ball({mpq_class(1)}, 1));
  for (int i = 0; i < 20; ++i) {
    auto pt = random_phi(rng, 1, 1).lift(kExact);
    auto a = kExact.lift(i % 2 ? mpq_class(5) : testpoly::nonzero_rational(rng));
    auto T = kExact.lift(mpq_class(1, 5));
    EXPECT_TRUE(scaling_identity_check(square, pt, a, T).passed());
    EXPECT_TRUE(scaling_identity_check(ind, pt, a, T).passed());
  }
  auto pt = scalar_point(kExact, 2, {1}, {3});
  auto lhs = phi(square, PhiPoint(pt.x, {kExact.lift(5) * pt.directions[0]}, {pt.increments[0] / kExact.lift(5)}));
  EXPECT_TRUE(lhs.identical(kExact.lift(5) * phi(square, pt)));
}

TEST(Symmetry, TranspositionsOfProducts) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = FunctionExpr::product(FunctionExpr::poly(testpoly::random_poly(rng, 1, 3).to_poly()),
                                   FunctionExpr::poly(testpoly::random_poly(rng, 1, 3).to_poly()));
    auto report = transposition_symmetry_check(f, random_phi(rng, 1, 3).lift(kExact));
    EXPECT_EQ(report.samples.size(), 5u);
    EXPECT_TRUE(report.passed());
  }
  auto vacuous = transposition_symmetry_check(univariate({0, 1}), scalar_point(kExact, 1, {1}, {1}));
  EXPECT_TRUE(vacuous.samples.empty());
}

TEST(Multilinearity, CubeAtZero) {
  auto cube = MultiPolynomial::univariate({0, 0, 0, 1});
  auto report = multilinearity_at_zero_check(cube, kExact.lift(3), {kExact.lift(2), kExact.lift(7)},
                                             kExact.lift(mpq_class(1, 5)), kExact.lift(2));
  EXPECT_TRUE(report.passed());
  auto doubled = phi_poly_closed(cube, scalar_point(kExact, 3, {4, 7}, {0, 0}));
  auto single = phi_poly_closed(cube, scalar_point(kExact, 3, {2, 7}, {0, 0}));
  EXPECT_TRUE(doubled.identical(kExact.lift(2) * single));
  EXPECT_TRUE(phi_poly_closed(cube, scalar_point(kExact, 3, {0, 7}, {0, 0})).is_zero());
}

TEST(Differential, CubeNormalizations) {
  auto cube = MultiPolynomial::univariate({0, 0, 0, 1});
  auto forms = differential_forms(cube, kExact.lift(2), {kExact.lift(3), kExact.lift(5)});
  EXPECT_EQ(forms.raw[0].to_rational(), 6 * 2 * 3 * 5);
  EXPECT_EQ(forms.classical[0].to_rational(), 6 * 2 * 3 * 5);
  EXPECT_EQ(forms.factorial[0].to_rational(), 12 * 2 * 3 * 5);
  EXPECT_TRUE(forms.raw_matches_classical);
}

TEST(SupBound, Examples) {
  Rng rng(60);
  auto square = MultiPolynomial::univariate({0, 0, 1});
  auto r = upsilon_sup_bound_check(square, 2, 100, kExact, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.bound, 1);
  EXPECT_LE(r.max_attained, 1);
  auto five = MultiPolynomial::univariate({0, 5});
  auto r5 = upsilon_sup_bound_check(five, 1, 100, kExact, rng);
  EXPECT_EQ(r5.bound, mpq_class(1, 5));
  EXPECT_TRUE(r5.passed());
  EXPECT_EQ(r5.max_attained, mpq_class(1, 5));
  auto zero = upsilon_sup_bound_check(MultiPolynomial(1, 1), 3, 20, kExact, rng);
  EXPECT_EQ(zero.max_attained, 0);
}

TEST(Rank, Examples) {
  Rng rng(70);
  std::vector<RankSample> grid1, grid2;
  for (int i = 0; i < 6; ++i) {
    grid1.push_back({{any_rational(rng)}, {nonzero_rational(rng)}});
    grid2.push_back({{any_rational(rng), any_rational(rng)}, {nonzero_rational(rng)}});
  }
  EXPECT_EQ(directional_span_rank(univariate({0, 0, 1}), 1, grid1, kExact), 1u);
  MultiPolynomial linear(2, 1);
  linear.add_term({1, 0}, {mpq_class(2)});
  linear.add_term({0, 1}, {mpq_class(3)});
  // Every column of a linear function is constant across samples.
  EXPECT_EQ(directional_span_rank(FunctionExpr::poly(linear), 1, grid2, kExact), 1u);
  MultiPolynomial cross(2, 1);
  cross.add_term({1, 1}, {mpq_class(1)});
  // Columns x1, x0 and x0 + x1 + t are independent functions of the sample.
  EXPECT_EQ(directional_span_rank(FunctionExpr::poly(cross), 1, grid2, kExact), 3u);
  EXPECT_EQ(directional_span_rank(FunctionExpr::constant(2, {mpq_class(0)}), 1, grid2, kExact), 0u);
  EXPECT_EQ(directional_span_bound(2, 2), 9u);
}

TEST(Rank, PivotedEliminationMatchesKnownRanks) {
  auto row = [](std::initializer_list<long> xs) {
    std::vector<PadicScalar> r;
    for (long x : xs) r.push_back(kExact.lift(x));
    return r;
  };
  EXPECT_EQ(valuation_pivoted_rank({row({1, 2, 3}), row({2, 4, 6}), row({5, 0, 25})}), 2u);
  EXPECT_EQ(valuation_pivoted_rank({row({25, 0}), row({0, 125})}), 2u);
  EXPECT_EQ(valuation_pivoted_rank({row({0, 0})}), 0u);
}

TEST(Directions, PairwiseIndependence) {
  auto e1 = PadicVector::lift(kExact, {1, 0});
  auto e2 = PadicVector::lift(kExact, {0, 1});
  auto d = PadicVector::lift(kExact, {5, 10});
  auto d2 = PadicVector::lift(kExact, {1, 2});
  EXPECT_NO_THROW(DirectionSet({e1, e2, d}, true));
  EXPECT_THROW(DirectionSet({e1, d, d2}, true), InvalidArgument);
  EXPECT_FALSE(DirectionSet({d, d2}, false).pairwise_independent());
}
