#include <gtest/gtest.h>

#include "oracle.hpp"
#include "ultradiff/diff/engine.hpp"
#include "ultradiff/gallery/registry.hpp"

using namespace ultradiff;

namespace {

const Field kExact = Field::exact(5);

mpq_class pw(long e, unsigned p = 5) {
  mpq_class r = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= p;
  return e < 0 ? 1 / r : r;
}

// Reindexes the base-p digits of y = N p^e (N a nonnegative integer).
mpq_class h_oracle(unsigned m, unsigned j, const mpz_class& N, long e, unsigned p = 5) {
  const long c = static_cast<long>(m) - static_cast<long>(j) + 1;
  mpz_class rest = N;
  mpq_class out = 0;
  for (long n = e; rest != 0; ++n) {
    mpz_class digit = rest % p;
    rest /= p;
    out += mpq_class(digit) * pw(n * n * c + n, p);
  }
  return out;
}

CounterexampleF family(unsigned m) {
  CounterexampleF cf;
  cf.family.m = m;
  return cf;
}

}  // namespace

TEST(HFamily, SmallExamples) {
  HFamily fam;
  PadicScalar pi = kExact.uniformizer_power(1);
  EXPECT_EQ(h_eval(fam, 1, pi).to_rational(), pw(2));
  EXPECT_EQ(h_eval(fam, 0, pi).to_rational(), pw(3));
  for (unsigned j = 0; j <= 1; ++j) EXPECT_TRUE(h_eval(fam, j, kExact.zero()).is_exact_zero());
  EXPECT_GT(h_eval(fam, 0, pi).valuation(), h_eval(fam, 1, pi).valuation());
}

TEST(HFamily, MatchesDigitOracle) {
  Rng rng(11);
  for (unsigned m = 1; m <= 3; ++m) {
    HFamily fam;
    fam.m = m;
    for (int trial = 0; trial < 30; ++trial) {
      mpz_class N = random_digits(rng, 5, 8);
      long e = rng.range(-2, 3);
      mpq_class y = mpq_class(N) * pw(e);
      for (unsigned j = 0; j <= m; ++j)
        EXPECT_EQ(h_eval(fam, j, kExact.lift(y)).to_rational(), h_oracle(m, j, N, e))
            << "m=" << m << " j=" << j << " y=" << y;
    }
  }
}

TEST(HFamily, TruncatedAgreesWithExactWithinPrecision) {
  Rng rng(12);
  const Field trunc = Field::truncated(5, 32);
  HFamily fam;
  for (int trial = 0; trial < 40; ++trial) {
    mpq_class y = random_bounded_rational(rng, 5, 3, false, 1000);
    for (unsigned j = 0; j <= 1; ++j) {
      PadicScalar ht = h_eval(fam, j, trunc.lift(y));
      PadicScalar he = h_eval(fam, j, kExact.lift(y));
      EXPECT_TRUE(ht.congruent_to(he.to_rational())) << "y=" << y << " j=" << j;
    }
  }
}

TEST(HFamily, GrowthReportIsHonest) {
  HFamily fam;
  GrowthReport r = h_growth_report(fam, 5, 4, 8);
  EXPECT_TRUE(r.vanish_at_zero);
  for (const auto& row : r.rows) {
    ASSERT_EQ(row.gaps.size(), 8u);
    for (unsigned k = 1; k <= 8; ++k) {
      long kk = k, n = row.n;
      long expected = row.condition == "ratio" ? (2 * kk * kk + kk) - n * (kk * kk + kk)
                                               : (kk * kk + kk) - n * kk;
      EXPECT_EQ(row.gaps[k - 1], expected) << row.condition << " n=" << n << " k=" << k;
    }
    if (row.condition == "tail") EXPECT_TRUE(row.diverges);
    if (row.condition == "ratio") EXPECT_EQ(row.diverges, row.n == 1);
  }
  EXPECT_FALSE(r.all_diverge());
}

TEST(Thm41, VanishesOnTheAxis) {
  Rng rng(21);
  CounterexampleF cf = family(1);
  for (int i = 0; i < 100; ++i) {
    PadicVector x = PadicVector::lift(kExact, {random_bounded_rational(rng, 5, 4, true, 1000)});
    EXPECT_TRUE(thm41_eval(cf, x, kExact.zero()).is_exact_zero());
  }
}

TEST(Thm41, BumpCenterAndOutside) {
  CounterexampleF cf = family(2);
  Rng rng(22);
  for (int i = 0; i < 20; ++i) {
    PadicScalar y = kExact.lift(random_rational_with_valuation(rng, 5, rng.range(1, 3), 50));
    PadicVector center = h_vector(cf.family, y);
    EXPECT_EQ(thm41_eval(cf, center, y).to_rational(), 1);
    PadicScalar h0 = h_eval(cf.family, 0, y);
    PadicVector inside = center + PadicVector::lift(kExact, {0, 1}) * h0;
    EXPECT_EQ(thm41_eval(cf, inside, y).to_rational(), 1);
    PadicVector outside = center + PadicVector::lift(kExact, {mpq_class(1, 5), 0}) * h0;
    EXPECT_EQ(thm41_eval(cf, outside, y).to_rational(), 0);
  }
}

TEST(Thm41, ExpressionAgreesWithDirectEvaluation) {
  CounterexampleF cf = family(1);
  FunctionExpr f = cf.expr();
  EXPECT_EQ(f.input_dim(), 2u);
  Rng rng(23);
  for (int i = 0; i < 30; ++i) {
    mpq_class y = random_rational_with_valuation(rng, 5, rng.range(1, 3), 50);
    mpq_class x = h_vector(cf.family, kExact.lift(y))[0].to_rational() +
                  (rng.coin() ? mpq_class(0) : random_bounded_rational(rng, 5, 12, true, 50));
    PadicVector xy = PadicVector::lift(kExact, {x, y});
    EXPECT_TRUE(f.eval(xy).agrees_with(
        PadicVector::scalar(thm41_eval(cf, xy.slice(0, 1), xy[1]))));
  }
  auto hints = f.approach_hints({0, 0}, 3, 5);
  ASSERT_EQ(hints.size(), 3u);
  EXPECT_EQ(hints[0], (RationalVector{pw(2), pw(1)}));
  EXPECT_TRUE(f.approach_hints({1, 0}, 3, 5).empty());
}

TEST(Thm41, WitnessSequenceExact) {
  CounterexampleF cf = family(1);
  WitnessReport w = discontinuity_witness(cf, kExact, 10);
  ASSERT_EQ(w.points.size(), 10u);
  EXPECT_EQ(w.indeterminate, 0u);
  for (const auto& pt : w.points) {
    long k = pt.k;
    ASSERT_TRUE(pt.value);
    EXPECT_EQ(pt.value->norm(), 1);
    ASSERT_TRUE(pt.shifted_value);
    EXPECT_TRUE(pt.shifted_value->is_zero());
    EXPECT_EQ(pt.x_norm, pw(-(k * k + k)));
    EXPECT_EQ(pt.y_norm, pw(-k));
  }
  EXPECT_TRUE(w.certifies_discontinuity());
  std::string csv = w.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_EQ(csv.rfind("k,|x|,|y|,|f|\n", 0), 0u);
}

TEST(Thm41, WitnessSequenceTruncatedNeverContradictsExact) {
  CounterexampleF cf = family(1);
  WitnessReport w = discontinuity_witness(cf, Field::truncated(5, 32), 10);
  ASSERT_EQ(w.points.size(), 10u);
  for (const auto& pt : w.points)
    if (pt.value) EXPECT_EQ(pt.value->norm(), 1) << "k=" << pt.k;
  EXPECT_TRUE(w.points.front().value);
}

TEST(Thm41, DefaultCurvesAreFlat) {
  for (unsigned m = 1; m <= 2; ++m) {
    CounterexampleF cf = family(m);
    auto curves = default_flatness_curves(m);
    EXPECT_GE(curves.size(), 5u);
    Rng rng(31);
    for (const auto& c : curves) {
      FlatnessReport r = curve_flatness_check(cf, c.curve, 0, 2, 40, kExact, rng);
      EXPECT_TRUE(r.passed()) << c.name << " m=" << m << " " << r.to_json().dump();
    }
  }
}

TEST(Thm41, FlatnessNeedsACurveThroughTheOrigin) {
  CounterexampleF cf = family(1);
  Rng rng(32);
  Curve off = Curve::polynomial({{1, 0}, {0, 1}});
  EXPECT_THROW(curve_flatness_check(cf, off, 0, 2, 5, kExact, rng), InvalidArgument);
  // Shifting the base parameter is fine when the curve vanishes there.
  Curve shifted = Curve::polynomial({{-1, -1}, {1, 1}});
  EXPECT_TRUE(curve_flatness_check(cf, shifted, 1, 2, 20, kExact, rng).passed());
}

TEST(Patchwork, SinglePiece) {
  PatchworkParams params;
  params.pieces = 1;
  PatchworkCurve u(params, 5);
  EXPECT_EQ(u.center(1), 5);
  EXPECT_EQ(u.scale(1), 5);
  EXPECT_EQ(u.coefficient(1), 5);
  EXPECT_TRUE(u.supports_disjoint());
  // At the center: xi(0) = z + c a_00 = 5 in every coordinate.
  PadicVector at_center = u.expr().eval(PadicVector::lift(kExact, {5}));
  EXPECT_EQ(at_center.to_rationals(), (RationalVector{5, 5}));
  EXPECT_TRUE(u.expr().eval(PadicVector::lift(kExact, {6})).is_zero());
}

TEST(Patchwork, PiecesMatchOracle) {
  PatchworkParams params;
  PatchworkCurve u(params, 5);
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    unsigned j = static_cast<unsigned>(rng.range(1, 3));
    long s = static_cast<long>(j) * j;
    mpq_class h = u.center(j) + random_rational_with_valuation(rng, 5, s + rng.range(-1, 3), 30);
    // Independent evaluation from the construction's definition.
    mpq_class expected = 0;
    for (unsigned k = 1; k <= 3; ++k) {
      long sk = static_cast<long>(k) * k;
      mpq_class xk = 0;
      for (unsigned i2 = 1; i2 < k; ++i2) xk += pw(static_cast<long>(i2) * i2);
      xk = xk / 5 + pw(sk);
      mpq_class arg = (h - xk) / pw(sk);
      if (oracle::valuation(arg, 5) < 1) continue;
      mpq_class sum = 0;
      for (unsigned k1 = 0; k1 <= 2; ++k1)
        for (unsigned k2 = 0; k2 <= 2; ++k2) sum += oracle::power(arg, k1 + k2);
      expected += pw(sk * k) * sum;
    }
    PadicVector got = u.expr().eval(PadicVector::lift(kExact, {h}));
    EXPECT_EQ(got.to_rationals(), (RationalVector{expected, expected})) << "h=" << h;
  }
  EXPECT_TRUE(u.expr().eval(PadicVector::lift(kExact, {u.limit_point()})).is_zero());
}

TEST(Patchwork, DisjointSupports) {
  Rng rng(42);
  for (unsigned J = 1; J <= 5; ++J) {
    PatchworkParams params;
    params.pieces = J;
    PatchworkCurve u(params, 5);
    EXPECT_TRUE(u.supports_disjoint());
    EXPECT_LE(u.max_overlap(500, rng), 1u);
    for (unsigned j = 1; j < J; ++j)
      EXPECT_LT(oracle::norm(u.scale(j + 1), 5), oracle::norm(u.scale(j), 5));
  }
}

TEST(Patchwork, RejectsBadParameters) {
  PatchworkParams bad_sigma;
  bad_sigma.sigma = {2, 2, 3};
  EXPECT_THROW(PatchworkCurve(bad_sigma, 5), InvalidArgument);
  PatchworkParams deep;
  deep.pieces = PatchworkParams::kMaxPieces + 1;
  EXPECT_THROW(PatchworkCurve(deep, 5), InvalidArgument);
  PatchworkParams big_anchor;
  big_anchor.pieces = 1;
  big_anchor.anchors = {{1, 0}};
  EXPECT_THROW(PatchworkCurve(big_anchor, 5), InvalidArgument);
  PatchworkParams big_coeff;
  big_coeff.coefficients.assign(9, RationalVector{mpq_class(1, 5), 0});
  EXPECT_THROW(PatchworkCurve(big_coeff, 5), InvalidArgument);
}

TEST(Patchwork, LocalQuotientBound) {
  PatchworkParams params;
  PatchworkCurve u(params, 5);
  Rng rng(43);
  for (std::size_t q = 1; q <= 2; ++q) {
    PatchworkBoundReport r = patchwork_bound_check(u, q, 30, kExact, rng);
    EXPECT_EQ(r.violations, 0u) << r.to_json().dump();
    EXPECT_EQ(r.indeterminate, 0u);
    EXPECT_GT(r.worst_ratio, 0);
  }
}

TEST(Patchwork, ThroughWitnessesBreaksComposition) {
  CounterexampleF cf = family(1);
  PatchworkCurve u(witness_patchwork_params(cf, 3, 5), 5);
  EXPECT_TRUE(u.supports_disjoint());
  Curve curve = u.curve();
  EXPECT_EQ(curve.tag(), CurveTag::Patchwork);
  FunctionExpr fu = compose(cf.expr(), curve);
  for (unsigned j = 1; j <= 3; ++j) {
    PadicVector at = u.expr().eval(PadicVector::lift(kExact, {u.center(j)}));
    long k = static_cast<long>(j) * j;
    EXPECT_EQ(at[1].to_rational(), pw(k));
    EXPECT_EQ(fu.eval_scalar(PadicVector::lift(kExact, {u.center(j)})).to_rational(), 1);
  }
  EXPECT_EQ(fu.eval_scalar(PadicVector::lift(kExact, {u.limit_point()})).to_rational(), 0);
  auto hints = fu.approach_hints({u.limit_point()}, 5, 5);
  EXPECT_EQ(hints.size(), 3u);
}

TEST(Registry, ResolvesByName) {
  FunctionExpr f = resolve_gallery("thm41", json{{"m", 2}}, 5);
  EXPECT_EQ(f.input_dim(), 3u);
  FunctionExpr u = resolve_gallery("patchwork", json{{"pieces", 2}}, 5);
  EXPECT_EQ(u.output_dim(), 2u);
  EXPECT_THROW(resolve_gallery("nope", json::object(), 5), InvalidArgument);
  EXPECT_THROW(resolve_gallery("thm41", json{{"mm", 1}}, 5), InvalidArgument);
  EXPECT_THROW(resolve_gallery("patchwork", json{{"pieces", 2}, {"p", 7}}, 5), InvalidArgument);

  json j = compose(f, Curve::polynomial({{0, 0, 0}, {1, 1, 1}})).to_json();
  FunctionExpr back = FunctionExpr::from_json(j, gallery_resolver(5));
  PadicVector t = PadicVector::lift(kExact, {mpq_class(25)});
  EXPECT_TRUE(back.eval(t).agrees_with(compose(f, Curve::polynomial({{0, 0, 0}, {1, 1, 1}})).eval(t)));
  EXPECT_EQ(FunctionExpr::from_json(u.to_json(), gallery_resolver(5)).to_json(), u.to_json());
}
