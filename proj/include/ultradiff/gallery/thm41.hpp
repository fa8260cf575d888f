#pragma once

#include "ultradiff/field/sampling.hpp"
#include "ultradiff/function/expr.hpp"
#include "ultradiff/gallery/hfamily.hpp"

namespace ultradiff {

// f(x, y) = g((x - h(y)) / h_0(y)) for y != 0 and f(x, 0) = 0, where x is in
// K^m, h = (h_1, .., h_m) and g is the indicator of the closed unit ball.
// Discontinuous at the origin, yet flat along analytic curves through it.
struct CounterexampleF {
  HFamily family;

  std::size_t input_dim() const { return family.m + 1; }
  FunctionExpr expr() const;
  json to_json() const { return family.to_json(); }
};

PadicScalar thm41_eval(const CounterexampleF& cf, const PadicVector& x, const PadicScalar& y);

class Thm41Function : public GalleryFunction {
 public:
  explicit Thm41Function(CounterexampleF cf) : cf_(std::move(cf)) {}

  std::string name() const override { return "thm41"; }
  std::size_t input_dim() const override { return cf_.input_dim(); }
  std::size_t output_dim() const override { return 1; }
  PadicVector eval(const PadicVector& xy) const override;
  json params() const override { return cf_.to_json(); }
  // At the origin: the witness points (h(p^k), p^k).
  std::vector<RationalVector> approach_hints(const RationalVector& center, unsigned count,
                                             std::uint32_t p) const override;
  const CounterexampleF& construction() const { return cf_; }

 private:
  CounterexampleF cf_;
};

struct WitnessPoint {
  unsigned k = 0;
  PadicVector x;
  PadicScalar y;
  std::optional<PadicScalar> value;          // f(x_k, y_k); empty when undecidable
  std::optional<PadicScalar> shifted_value;  // f at x_k moved just outside the h_0-ball
  mpq_class x_norm, y_norm;
};

struct WitnessReport {
  std::vector<WitnessPoint> points;
  std::optional<PadicScalar> value_at_origin;
  std::size_t indeterminate = 0;

  // Every decided value has norm 1, the shifted values vanish, f(0,0) = 0 and
  // max(|x_k|, |y_k|) strictly decreases.
  bool certifies_discontinuity() const;
  std::string to_csv() const;
  json to_json() const;
};

WitnessReport discontinuity_witness(const CounterexampleF& cf, const Field& field, unsigned k_max);

struct FlatnessSample {
  PadicScalar t;
  std::optional<PadicScalar> value;
  bool gated = true;  // |x - h(y)| > |h_0(y)| held (or y = 0)
  bool indeterminate = false;
};

struct FlatnessReport {
  std::string curve;
  std::vector<FlatnessSample> samples;
  std::size_t violations = 0;  // nonzero value or broken gating
  std::size_t indeterminate = 0;

  bool passed() const { return violations == 0 && indeterminate == 0; }
  json to_json() const;
};

// Samples t = t0 + s with val(s) >= min_valuation and checks that f(u(t)) = 0
// and the gating inequality hold. u must be polynomial with u(t0) = 0.
FlatnessReport curve_flatness_check(const CounterexampleF& cf, const Curve& u,
                                    const mpq_class& t0, Valuation min_valuation,
                                    std::size_t samples, const Field& field, Rng& rng);

struct NamedCurve {
  std::string name;
  Curve curve;
};

// Polynomial curves through the origin of K^(m+1).
std::vector<NamedCurve> default_flatness_curves(unsigned m);

}  // namespace ultradiff
