#include "ultradiff/gallery/thm41.hpp"

#include <sstream>

namespace ultradiff {

namespace {

const Ball& unit_ball(std::size_t m) {
  thread_local std::vector<Ball> cache;
  if (cache.size() <= m) cache.resize(m + 1);
  if (cache[m].dim() != m) cache[m] = Ball(RationalVector(m, mpq_class(0)), 0);
  return cache[m];
}

// val(x - h(y)) against val(h_0(y)); true when |x - h(y)| > |h_0(y)|.
bool outside_gate(const CounterexampleF& cf, const PadicVector& x, const PadicScalar& y) {
  PadicVector d = x - h_vector(cf.family, y);
  PadicScalar h0 = h_eval(cf.family, 0, y);
  if (h0.is_zero()) throw PrecisionExhausted("h_0(y) vanishes at working precision");
  if (d.is_zero()) {
    bool exact = true;
    for (const auto& e : d.entries()) exact = exact && e.is_exact();
    if (exact) return false;
    throw PrecisionExhausted("x - h(y) vanishes at working precision");
  }
  return d.valuation() < h0.valuation();
}

}  // namespace

FunctionExpr CounterexampleF::expr() const {
  return FunctionExpr::gallery(std::make_shared<Thm41Function>(*this));
}

PadicScalar thm41_eval(const CounterexampleF& cf, const PadicVector& x, const PadicScalar& y) {
  if (x.dim() != cf.family.m) throw DimensionMismatch("x must lie in K^m");
  const Field& field = y.field();
  if (y.is_exact_zero()) return field.zero();
  if (y.is_zero()) throw PrecisionExhausted("cannot tell whether y vanishes");
  PadicScalar h0 = h_eval(cf.family, 0, y);
  if (h0.is_zero()) throw PrecisionExhausted("h_0(y) vanishes at working precision");
  PadicVector z = (x - h_vector(cf.family, y)) / h0;
  return unit_ball(cf.family.m).contains(z) ? field.one() : field.zero();
}

PadicVector Thm41Function::eval(const PadicVector& xy) const {
  if (xy.dim() != input_dim()) throw DimensionMismatch("thm41 takes m + 1 coordinates");
  const std::size_t m = cf_.family.m;
  return PadicVector::scalar(thm41_eval(cf_, xy.slice(0, m), xy[m]));
}

std::vector<RationalVector> Thm41Function::approach_hints(const RationalVector& center,
                                                          unsigned count, std::uint32_t p) const {
  if (center.size() != input_dim()) return {};
  for (const auto& c : center)
    if (c != 0) return {};
  const Field field = Field::exact(p);
  std::vector<RationalVector> out;
  for (unsigned k = 1; k <= count; ++k) {
    PadicScalar y = field.uniformizer_power(static_cast<long>(k));
    RationalVector pt = h_vector(cf_.family, y).to_rationals();
    pt.push_back(y.to_rational());
    out.push_back(std::move(pt));
  }
  return out;
}

bool WitnessReport::certifies_discontinuity() const {
  if (!value_at_origin || !value_at_origin->is_zero()) return false;
  mpq_class previous = -1;
  bool any = false;
  for (const auto& w : points) {
    if (w.value) {
      any = true;
      if (w.value->norm() != 1) return false;
    }
    if (w.shifted_value && !w.shifted_value->is_zero()) return false;
    mpq_class size = std::max(w.x_norm, w.y_norm);
    if (previous >= 0 && size >= previous) return false;
    previous = size;
  }
  return any;
}

std::string WitnessReport::to_csv() const {
  std::ostringstream os;
  os << "k,|x|,|y|,|f|\n";
  for (const auto& w : points) {
    os << w.k << ',' << w.x_norm.get_str() << ',' << w.y_norm.get_str() << ',';
    if (w.value)
      os << w.value->norm().get_str();
    else
      os << "indeterminate";
    os << '\n';
  }
  return os.str();
}

json WitnessReport::to_json() const {
  json pts = json::array();
  for (const auto& w : points) {
    pts.push_back(json{
        {"k", w.k},
        {"x", vector_to_json(w.x)},
        {"y", scalar_to_json(w.y)},
        {"x_norm", w.x_norm.get_str()},
        {"y_norm", w.y_norm.get_str()},
        {"f", w.value ? scalar_to_json(*w.value) : json("indeterminate")},
        {"f_shifted", w.shifted_value ? scalar_to_json(*w.shifted_value) : json("indeterminate")}});
  }
  return json{{"points", pts},
              {"value_at_origin",
               value_at_origin ? scalar_to_json(*value_at_origin) : json("indeterminate")},
              {"indeterminate", indeterminate},
              {"certifies_discontinuity", certifies_discontinuity()}};
}

WitnessReport discontinuity_witness(const CounterexampleF& cf, const Field& field, unsigned k_max) {
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  const std::size_t m = cf.family.m;
  WitnessReport r;
  r.value_at_origin = thm41_eval(cf, PadicVector::zeros(field, m), field.zero());
  for (unsigned k = 1; k <= k_max; ++k) {
    WitnessPoint w;
    w.k = k;
    w.y = field.uniformizer_power(static_cast<long>(k));
    w.y_norm = w.y.norm();
    try {
      w.x = h_vector(cf.family, w.y);
      w.x_norm = w.x.norm();
    } catch (const PrecisionExhausted&) {
      w.x = PadicVector::zeros(field, m);
      ++r.indeterminate;
      r.points.push_back(std::move(w));
      continue;
    }
    try {
      w.value = thm41_eval(cf, w.x, w.y);
    } catch (const PrecisionExhausted&) {
      ++r.indeterminate;
    }
    try {
      PadicVector moved = w.x;
      moved[0] = moved[0] + h_eval(cf.family, 0, w.y) / field.uniformizer_power(1);
      w.shifted_value = thm41_eval(cf, moved, w.y);
    } catch (const PrecisionExhausted&) {
    }
    r.points.push_back(std::move(w));
  }
  return r;
}

json FlatnessReport::to_json() const {
  json rows = json::array();
  for (const auto& s : samples)
    rows.push_back(json{{"t", scalar_to_json(s.t)},
                        {"f", s.value ? scalar_to_json(*s.value) : json("indeterminate")},
                        {"gated", s.gated}});
  return json{{"curve", curve},
              {"samples", samples.size()},
              {"violations", violations},
              {"indeterminate", indeterminate},
              {"passed", passed()},
              {"rows", rows}};
}

FlatnessReport curve_flatness_check(const CounterexampleF& cf, const Curve& u, const mpq_class& t0,
                                    Valuation min_valuation, std::size_t samples,
                                    const Field& field, Rng& rng) {
  const std::size_t m = cf.family.m;
  if (u.dim() != m + 1) throw DimensionMismatch("curve must map into K^(m+1)");
  if (u.tag() != CurveTag::Polynomial || !u.expr().to_polynomial())
    throw InvalidArgument("flatness is checked on polynomial curves");
  if (!u.eval(Field::exact(field.p()).lift(t0)).is_zero())
    throw InvalidArgument("curve must vanish at the base parameter");
  FlatnessReport r;
  r.curve = u.expr().describe();
  const std::uint32_t p = field.p();
  for (std::size_t i = 0; i < samples; ++i) {
    mpq_class s = i == 0 ? mpq_class(0)
                         : random_rational_with_valuation(
                               rng, p, static_cast<long>(min_valuation) + rng.range(0, 4), 12);
    FlatnessSample fs;
    fs.t = field.lift(t0 + s);
    try {
      PadicVector xy = u.eval(fs.t);
      PadicVector x = xy.slice(0, m);
      const PadicScalar& y = xy[m];
      if (!y.is_exact_zero()) fs.gated = outside_gate(cf, x, y);
      fs.value = thm41_eval(cf, x, y);
      if (!fs.gated || !fs.value->is_zero()) ++r.violations;
    } catch (const PrecisionExhausted&) {
      fs.indeterminate = true;
      ++r.indeterminate;
    }
    r.samples.push_back(std::move(fs));
  }
  return r;
}

std::vector<NamedCurve> default_flatness_curves(unsigned m) {
  // Each x-coordinate follows the same polynomial; y is the last coordinate.
  auto make = [m](const std::string& name, const RationalVector& x, const RationalVector& y) {
    std::size_t degree = std::max(x.size(), y.size());
    std::vector<RationalVector> coeffs(degree, RationalVector(m + 1, mpq_class(0)));
    for (std::size_t n = 0; n < x.size(); ++n)
      for (std::size_t i = 0; i < m; ++i) coeffs[n][i] = x[n];
    for (std::size_t n = 0; n < y.size(); ++n) coeffs[n][m] = y[n];
    return NamedCurve{name, Curve::polynomial(coeffs)};
  };
  return {
      make("(t, t)", {0, 1}, {0, 1}),
      make("(t^2, t)", {0, 0, 1}, {0, 1}),
      make("(t, t^2)", {0, 1}, {0, 0, 1}),
      make("(0, t)", {0}, {0, 1}),
      make("(t^3 + t, 2t)", {0, 1, 0, 1}, {0, 2}),
      make("(t^2 (1 + t), t^3)", {0, 0, 1, 1}, {0, 0, 0, 1}),
      make("(0, 0)", {0}, {0}),
  };
}

}  // namespace ultradiff
