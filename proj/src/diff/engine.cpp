#include "ultradiff/diff/engine.hpp"

#include <functional>
#include <optional>

namespace ultradiff {

namespace {

using VecFn = std::function<PadicVector(const PadicVector&)>;

void require_nonzero_increment(const PadicScalar& t) {
  if (t.is_exact_zero())
    throw ZeroIncrement("recursive quotient needs nonzero increments; use a closed form or a limit probe");
}

PadicVector phi_rec(const FunctionExpr& f, const PadicVector& x, const PhiPoint& pt, std::size_t k) {
  if (k == 0) return f.eval(x);
  const PadicScalar& t = pt.increments[k - 1];
  require_nonzero_increment(t);
  PadicVector moved = x + pt.directions[k - 1] * t;
  return (phi_rec(f, moved, pt, k - 1) - phi_rec(f, x, pt, k - 1)) / t;
}

PadicVector upsilon_rec(const FunctionExpr& f, std::size_t m, std::size_t order,
                        const PadicVector& flat) {
  if (order == 0) return f.eval(flat);
  std::size_t s = upsilon_flat_size(m, order - 1);
  PadicVector base = flat.slice(0, s);
  PadicVector dir = flat.slice(s, s);
  const PadicScalar& t = flat[2 * s];
  require_nonzero_increment(t);
  return (upsilon_rec(f, m, order - 1, base + dir * t) - upsilon_rec(f, m, order - 1, base)) / t;
}

PadicScalar binom(const Field& field, unsigned long n, unsigned long k) {
  return field.lift(mpq_class(binomial(n, k)));
}

std::vector<PadicVector> lifted_coefficients(const MultiPolynomial& u, const Field& field) {
  if (u.inputs() != 1) throw DimensionMismatch("closed forms need a univariate polynomial");
  std::vector<PadicVector> out;
  for (const auto& c : u.univariate_coefficients()) out.push_back(PadicVector::lift(field, c));
  return out;
}

// Sum over k_level..k_1 >= 1 of the nested binomial products; level 0 is x^r.
PadicScalar closed_levels(const PadicScalar& x, const PhiPoint& pt, std::size_t level,
                          unsigned long r) {
  const Field& field = x.field();
  if (level == 0) return x.pow(r);
  PadicScalar acc = field.zero();
  const PadicScalar& v = pt.directions[level - 1][0];
  const PadicScalar& t = pt.increments[level - 1];
  for (unsigned long k = 1; k <= r; ++k)
    acc += binom(field, r, k) * v.pow(k) * t.pow(k - 1) * closed_levels(x, pt, level - 1, r - k);
  return acc;
}

// A scalar- or vector-valued map together with its polynomial form when
// one is known.
struct Map {
  std::size_t inputs = 0;
  VecFn eval;
  std::optional<MultiPolynomial> poly;
};

Map map_of(const FunctionExpr& f) {
  Map m;
  m.inputs = f.input_dim();
  m.poly = f.to_polynomial();
  if (m.poly) {
    MultiPolynomial p = *m.poly;
    m.eval = [p](const PadicVector& x) { return p.evaluate(x); };
  } else {
    m.eval = [f](const PadicVector& x) { return f.eval(x); };
  }
  return m;
}

// (z, tau) -> [F(z + tau e_j) - F(z)] / tau.
Map axis_quotient(const Map& F, std::size_t j) {
  Map q;
  q.inputs = F.inputs + 1;
  if (F.poly) {
    q.poly = axis_quotient_polynomial(*F.poly, j);
    MultiPolynomial p = *q.poly;
    q.eval = [p](const PadicVector& x) { return p.evaluate(x); };
    return q;
  }
  std::size_t m = F.inputs;
  VecFn inner = F.eval;
  q.eval = [inner, m, j](const PadicVector& zt) {
    PadicVector z = zt.slice(0, m);
    const PadicScalar& tau = zt[m];
    if (tau.is_exact_zero())
      throw ZeroIncrement("axis quotient of a non-polynomial function at zero increment");
    PadicVector moved = z;
    moved[j] = moved[j] + tau;
    return (inner(moved) - inner(z)) / tau;
  };
  return q;
}

// Order-1 chain rule: quotient of F o w at (base, dir, t), telescoped one
// coordinate of w at a time.
PadicVector chain_first_order(const Map& F, const VecFn& w, const PadicVector& base,
                              const PadicVector& dir, const PadicScalar& t,
                              std::size_t outputs) {
  require_nonzero_increment(t);
  const Field& field = base.field();
  PadicVector before = w(base);
  PadicVector after = w(base + dir * t);
  if (before.dim() != F.inputs) throw DimensionMismatch("inner map does not feed the outer map");
  PadicVector acc = PadicVector::zeros(field, outputs);
  for (std::size_t j = 0; j < F.inputs; ++j) {
    PadicScalar tau = after[j] - before[j];
    if (tau.is_exact_zero()) continue;
    std::vector<PadicScalar> z;
    for (std::size_t i = 0; i < F.inputs; ++i) z.push_back(i <= j ? before[i] : after[i]);
    z.push_back(tau);
    PadicVector q = axis_quotient(F, j).eval(PadicVector(field, std::move(z)));
    acc = acc + q * (tau / t);
  }
  return acc;
}

}  // namespace

PadicVector phi(const FunctionExpr& f, const PhiPoint& pt) {
  if (pt.dim() != f.input_dim())
    throw DimensionMismatch("point dimension " + std::to_string(pt.dim()) +
                            " differs from function input dimension " +
                            std::to_string(f.input_dim()));
  return phi_rec(f, pt.x, pt, pt.order());
}

PadicVector upsilon_flat(const FunctionExpr& f, std::size_t order, const PadicVector& flat) {
  std::size_t m = f.input_dim();
  if (flat.dim() != upsilon_flat_size(m, order))
    throw DimensionMismatch("flat point size does not match the function and order");
  return upsilon_rec(f, m, order, flat);
}

PadicVector upsilon(const FunctionExpr& f, const UpsilonPoint& pt) {
  if (pt.dim() != f.input_dim()) throw DimensionMismatch("point dimension differs from function");
  return upsilon_rec(f, pt.dim(), pt.order(), pt.flatten());
}

PadicVector phi_poly_closed(const MultiPolynomial& u, const PhiPoint& pt) {
  if (pt.dim() != 1) throw DimensionMismatch("closed form needs a one-dimensional point");
  const Field& field = pt.x.field();
  auto a = lifted_coefficients(u, field);
  PadicVector acc = PadicVector::zeros(field, u.outputs());
  for (std::size_t n = pt.order(); n < a.size(); ++n)
    acc = acc + closed_levels(pt.x[0], pt, pt.order(), n) * a[n];
  return acc;
}

PadicVector upsilon_poly_closed_low(const MultiPolynomial& u, const UpsilonPoint& pt) {
  if (pt.dim() != 1) throw DimensionMismatch("closed form needs a one-dimensional point");
  if (pt.order() > 2) throw UnsupportedOrder("closed form covers orders up to 2; use upsilon");
  const Field& field = pt.field();
  if (pt.order() == 0) return u.evaluate(pt.root());
  auto a = lifted_coefficients(u, field);
  PadicVector flat = pt.flatten();
  PadicVector acc = PadicVector::zeros(field, u.outputs());
  if (pt.order() == 1) {
    const PadicScalar &x = flat[0], &v = flat[1], &t = flat[2];
    for (unsigned long n = 1; n < a.size(); ++n) {
      PadicScalar s = field.zero();
      for (unsigned long k = 1; k <= n; ++k)
        s += binom(field, n, k) * x.pow(n - k) * v.pow(k) * t.pow(k - 1);
      acc = acc + s * a[n];
    }
    return acc;
  }
  // Flat layout: x, v, t1 | w1, w2, w3 | t2, where (w1, w2, w3) displaces
  // (x, v, t1).
  const PadicScalar &x = flat[0], &v = flat[1], &t1 = flat[2];
  const PadicScalar &w1 = flat[3], &w2 = flat[4], &w3 = flat[5], &t2 = flat[6];
  PadicScalar v_moved = v + w2 * t2;
  PadicScalar t_moved = t1 + w3 * t2;
  for (unsigned long n = 1; n < a.size(); ++n) {
    PadicScalar s = field.zero();
    for (unsigned long k1 = 1; k1 <= n; ++k1) {
      // Quotient of x^(n-k1), then of v^k1, then of t1^(k1-1), each with the
      // factors to its right already moved and those to its left not yet.
      PadicScalar first = field.zero();
      for (unsigned long k2 = 1; k2 <= n - k1; ++k2)
        first += binom(field, n - k1, k2) * x.pow(n - k1 - k2) * w1.pow(k2) * t2.pow(k2 - 1);
      first *= v_moved.pow(k1) * t_moved.pow(k1 - 1);
      PadicScalar second = field.zero();
      for (unsigned long k2 = 1; k2 <= k1; ++k2)
        second += binom(field, k1, k2) * v.pow(k1 - k2) * w2.pow(k2) * t2.pow(k2 - 1);
      second *= x.pow(n - k1) * t_moved.pow(k1 - 1);
      PadicScalar third = field.zero();
      for (unsigned long k2 = 1; k2 + 1 <= k1; ++k2)
        third += binom(field, k1 - 1, k2) * t1.pow(k1 - 1 - k2) * w3.pow(k2) * t2.pow(k2 - 1);
      third *= x.pow(n - k1) * v.pow(k1);
      s += binom(field, n, k1) * (first + second + third);
    }
    acc = acc + s * a[n];
  }
  return acc;
}

PadicVector leibniz_phi(const FunctionExpr& f, const FunctionExpr& g, const PhiPoint& pt) {
  if (f.input_dim() != g.input_dim()) throw DimensionMismatch("factors with different domains");
  std::size_t n = pt.order();
  if (n > 20) throw InvalidArgument("order too large for subset expansion");
  std::optional<PadicVector> acc;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    std::vector<PadicVector> vin, vout;
    std::vector<PadicScalar> tin, tout;
    PadicVector moved = pt.x;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1UL << i)) {
        vin.push_back(pt.directions[i]);
        tin.push_back(pt.increments[i]);
        moved = moved + pt.directions[i] * pt.increments[i];
      } else {
        vout.push_back(pt.directions[i]);
        tout.push_back(pt.increments[i]);
      }
    }
    PadicVector term = phi(f, PhiPoint(pt.x, vin, tin)) * phi(g, PhiPoint(moved, vout, tout));
    acc = acc ? *acc + term : term;
  }
  return *acc;
}

MultiPolynomial axis_quotient_polynomial(const MultiPolynomial& p, std::size_t j) {
  std::size_t m = p.inputs();
  if (j >= m) throw DimensionMismatch("axis index out of range");
  MultiPolynomial q(m + 1, p.outputs());
  for (const auto& [e, c] : p.terms()) {
    unsigned k = e[j];
    for (unsigned i = 1; i <= k; ++i) {
      Exponent f(e.begin(), e.end());
      f[j] = k - i;
      f.push_back(i - 1);
      RationalVector coef = c;
      mpq_class b(binomial(k, i));
      for (auto& x : coef) x *= b;
      q.add_term(f, coef);
    }
  }
  return q;
}

PadicVector chain_upsilon_low(const FunctionExpr& f, const Curve& u, const UpsilonPoint& pt) {
  if (pt.dim() != 1) throw DimensionMismatch("chain rule points live over the curve parameter");
  if (u.dim() != f.input_dim()) throw DimensionMismatch("curve dimension differs from function input");
  const std::size_t m = u.dim();
  const std::size_t outputs = f.output_dim();
  Map F = map_of(f);
  FunctionExpr curve = u.expr();
  VecFn w = [curve](const PadicVector& y) { return curve.eval(y); };

  if (pt.order() == 0) return f.eval(curve.eval(pt.root()));
  if (pt.order() == 1)
    return chain_first_order(F, w, pt.root(), pt.direction().root(), pt.increment(), outputs);
  if (pt.order() > 2) throw UnsupportedOrder("chain rule expansion covers orders 1 and 2");

  const Field& field = pt.field();
  PadicVector inner = pt.base().flatten();  // (y, v, t1)
  PadicVector disp = pt.direction().flatten();
  const PadicScalar& t2 = pt.increment();
  require_nonzero_increment(t2);
  PadicVector inner_moved = inner + disp * t2;

  auto first_quotient = [&](std::size_t j, const PadicVector& y1) {
    const PadicScalar& t1 = y1[2];
    require_nonzero_increment(t1);
    PadicVector a = curve.eval(y1.slice(0, 1) + y1.slice(1, 1) * t1);
    PadicVector b = curve.eval(y1.slice(0, 1));
    return PadicVector::scalar((a[j] - b[j]) / t1);
  };

  PadicVector acc = PadicVector::zeros(field, outputs);
  for (std::size_t j = 0; j < m; ++j) {
    Map Fj = axis_quotient(F, j);
    // (y, v, t1) -> (u_0(y), .., u_j(y), u_{j+1}(y + v t1), .., u_j(y + v t1) - u_j(y))
    VecFn wj = [curve, j, m](const PadicVector& y1) {
      PadicVector at = curve.eval(y1.slice(0, 1));
      PadicVector moved = curve.eval(y1.slice(0, 1) + y1.slice(1, 1) * y1[2]);
      std::vector<PadicScalar> z;
      for (std::size_t i = 0; i < m; ++i) z.push_back(i <= j ? at[i] : moved[i]);
      z.push_back(moved[j] - at[j]);
      return PadicVector(at.field(), std::move(z));
    };
    PadicVector outer_step = chain_first_order(Fj, wj, inner, disp, t2, outputs);
    PadicVector second = upsilon(component(curve, j), pt);
    acc = acc + outer_step * first_quotient(j, inner_moved) + Fj.eval(wj(inner)) * second;
  }
  return acc;
}

PadicVector chain_phi_low(const FunctionExpr& f, const Curve& u, std::size_t n, const PhiPoint& pt) {
  if (n != pt.order()) throw InvalidArgument("order does not match the point");
  if (n < 1 || n > 2) throw UnsupportedOrder("chain rule expansion covers orders 1 and 2");
  return chain_upsilon_low(f, u, embed_phi_point(pt));
}

json DifferentialForms::to_json() const {
  return json{{"raw", vector_to_json(raw)},
              {"factorial_scaled", vector_to_json(factorial)},
              {"classical", vector_to_json(classical)},
              {"raw_matches_classical", raw_matches_classical}};
}

DifferentialForms differential_forms(const MultiPolynomial& u, const PadicScalar& x,
                                     const std::vector<PadicScalar>& directions) {
  const Field& field = x.field();
  std::vector<PadicVector> dirs;
  std::vector<PadicScalar> zeros;
  for (const auto& v : directions) {
    dirs.push_back(PadicVector::scalar(v));
    zeros.push_back(field.zero());
  }
  PhiPoint pt(PadicVector::scalar(x), dirs, zeros);
  const unsigned long n = directions.size();
  DifferentialForms out;
  out.raw = phi_poly_closed(u, pt);
  mpz_class fact = 1;
  for (unsigned long k = 2; k <= n; ++k) fact *= k;
  out.factorial = field.lift(mpq_class(fact)) * out.raw;

  PadicScalar product = field.one();
  for (const auto& v : directions) product *= v;
  auto a = lifted_coefficients(u, field);
  out.classical = PadicVector::zeros(field, u.outputs());
  for (unsigned long k = n; k < a.size(); ++k) {
    mpz_class falling = 1;
    for (unsigned long i = 0; i < n; ++i) falling *= k - i;
    out.classical = out.classical + (field.lift(mpq_class(falling)) * x.pow(k - n) * product) * a[k];
  }
  out.raw_matches_classical = out.raw.agrees_with(out.classical);
  return out;
}

}  // namespace ultradiff
