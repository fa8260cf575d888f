#pragma once

#include "ultradiff/diff/points.hpp"
#include "ultradiff/function/expr.hpp"

namespace ultradiff {

// Nested partial difference quotient, recursing in the base slot only.
PadicVector phi(const FunctionExpr& f, const PhiPoint& pt);
// Full difference quotient: each level treats the previous quotient as a
// function of its whole flattened argument.
PadicVector upsilon(const FunctionExpr& f, const UpsilonPoint& pt);
PadicVector upsilon_flat(const FunctionExpr& f, std::size_t order, const PadicVector& flat);

// Closed forms for univariate polynomials with vector coefficients. Both
// stay defined when increments vanish (the continuous extension).
PadicVector phi_poly_closed(const MultiPolynomial& u, const PhiPoint& pt);
PadicVector upsilon_poly_closed_low(const MultiPolynomial& u, const UpsilonPoint& pt);

// Product rule expansion: sum over subsets J of {1..n} of
// phi(f; directions in J) * phi(g at x shifted along J; directions outside J).
PadicVector leibniz_phi(const FunctionExpr& f, const FunctionExpr& g, const PhiPoint& pt);

// (z, tau) -> [p(z + tau e_j) - p(z)] / tau as a polynomial in m + 1
// variables, so it stays defined at tau = 0.
MultiPolynomial axis_quotient_polynomial(const MultiPolynomial& p, std::size_t j);

// Chain rule expansion through coordinate-by-coordinate quotients, for a
// curve u: K -> K^m and orders 1 and 2. The point lives over the curve
// parameter.
PadicVector chain_upsilon_low(const FunctionExpr& f, const Curve& u, const UpsilonPoint& pt);
PadicVector chain_phi_low(const FunctionExpr& f, const Curve& u, std::size_t n, const PhiPoint& pt);

// Derivative-type forms of a univariate polynomial at x with all increments
// set to zero.
struct DifferentialForms {
  PadicVector raw;        // closed-form quotient at zero increments
  PadicVector factorial;  // n! times raw
  PadicVector classical;  // u^(n)(x) * v_1 * ... * v_n
  bool raw_matches_classical = false;
  json to_json() const;
};
DifferentialForms differential_forms(const MultiPolynomial& u, const PadicScalar& x,
                                     const std::vector<PadicScalar>& directions);

}  // namespace ultradiff
