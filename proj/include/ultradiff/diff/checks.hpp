#pragma once

#include <string>
#include <vector>

#include "ultradiff/diff/engine.hpp"
#include "ultradiff/field/sampling.hpp"

namespace ultradiff {

// Outcome of an identity check: one entry per sample, comparing the two
// sides of the identity.
struct CheckSample {
  json point;
  PadicVector lhs;
  PadicVector rhs;
  bool ok = false;
  // Evaluation ran out of precision, so neither side is trustworthy.
  bool indeterminate = false;
};

struct CheckReport {
  std::string identity;
  std::vector<CheckSample> samples;

  // Compares both sides and records the outcome. Evaluation errors other
  // than PrecisionExhausted propagate.
  void add(json point, const std::function<PadicVector()>& lhs,
           const std::function<PadicVector()>& rhs);
  void merge(const CheckReport& other);

  std::size_t failures() const;
  std::size_t indeterminate() const;
  bool passed() const { return failures() == 0 && indeterminate() == 0; }
  // Largest shortfall between the precision both sides are known to and
  // the valuation of their difference; 0 when everything agrees.
  Valuation max_valuation_gap() const;
  json to_json() const;
};

// Identities (1) and (2) for rescaling a direction against its increment,
// and the rescaled-argument identity in the form g(x) = f(x / T):
// quotient of g at (x, v, t) equals T^-1 times that of f at (x/T, v, t/T).
CheckReport scaling_identity_check(const FunctionExpr& f, const PhiPoint& pt, const PadicScalar& a,
                                   const PadicScalar& T);

// Value is unchanged under every permutation of the (direction, increment)
// pairs.
CheckReport transposition_symmetry_check(const FunctionExpr& f, const PhiPoint& pt);

// Linearity in each slot and symmetry of the zero-increment quotient of a
// univariate polynomial: slot i replaced by alpha v_i + w.
CheckReport multilinearity_at_zero_check(const MultiPolynomial& u, const PadicScalar& x,
                                         const std::vector<PadicScalar>& directions,
                                         const PadicScalar& w, const PadicScalar& alpha);

struct SupBoundReport {
  std::size_t order = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t indeterminate = 0;
  mpq_class bound;        // max coefficient norm
  mpq_class max_attained;
  bool passed() const { return violations == 0 && indeterminate == 0; }
  json to_json() const;
};

// Samples order-q points with every flat coordinate of norm at most 1 and
// nonzero increments, and checks |quotient| <= max coefficient norm. The
// computed quotients are appended to `values` when given, with an empty
// vector standing in for an undecided sample.
SupBoundReport upsilon_sup_bound_check(const MultiPolynomial& u, std::size_t order,
                                       std::size_t samples, const Field& field, Rng& rng,
                                       std::vector<PadicVector>* values = nullptr);

// Rank of the matrix whose rows are sample points (x, t_1..t_n) and whose
// columns are the nonzero 0/1 direction choices per slot. Elimination picks
// the entry of smallest valuation as pivot.
struct RankSample {
  std::vector<mpq_class> x;
  std::vector<mpq_class> increments;
};
std::size_t directional_span_rank(const FunctionExpr& f, std::size_t n,
                                  const std::vector<RankSample>& grid, const Field& field);
std::size_t directional_span_bound(std::size_t b, std::size_t n);
// Rank of a matrix of scalars by valuation-pivoted elimination.
std::size_t valuation_pivoted_rank(std::vector<std::vector<PadicScalar>> rows);

}  // namespace ultradiff
