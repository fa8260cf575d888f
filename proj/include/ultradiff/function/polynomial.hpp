#pragma once

#include <map>
#include <string>
#include <vector>

#include "ultradiff/field/vector.hpp"

namespace ultradiff {

using Exponent = std::vector<unsigned>;
using RationalVector = std::vector<mpq_class>;

// Polynomial map K^inputs -> K^outputs with rational coefficient vectors.
class MultiPolynomial {
 public:
  MultiPolynomial() = default;
  MultiPolynomial(std::size_t inputs, std::size_t outputs);

  // Scalar-valued x -> sum coeffs[n] x^n.
  static MultiPolynomial univariate(const RationalVector& coeffs);
  // Vector-valued x -> sum coeffs[n] x^n with coeffs[n] in Q^outputs.
  static MultiPolynomial univariate_vector(const std::vector<RationalVector>& coeffs);
  static MultiPolynomial constant(std::size_t inputs, const RationalVector& value);
  static MultiPolynomial variable(std::size_t inputs, std::size_t j);
  static MultiPolynomial identity(std::size_t dim);

  void add_term(const Exponent& e, const RationalVector& coef);

  std::size_t inputs() const { return inputs_; }
  std::size_t outputs() const { return outputs_; }
  unsigned degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponent, RationalVector>& terms() const { return terms_; }

  // a_0..a_degree for a univariate polynomial (missing degrees are zero).
  std::vector<RationalVector> univariate_coefficients() const;
  // max over coefficients of their sup-norm.
  mpq_class max_coefficient_norm(std::uint32_t p) const;

  // Term-by-term evaluation with cached powers.
  PadicVector evaluate(const PadicVector& x) const;
  // Nested evaluation, univariate only. A second evaluation order used to
  // cross-check the first.
  PadicVector evaluate_horner(const PadicVector& x) const;

  MultiPolynomial component(std::size_t i) const;
  MultiPolynomial scaled(const mpq_class& c) const;
  // x -> p(x + c)
  MultiPolynomial shifted(const RationalVector& c) const;
  // x -> p((x - c) / T)
  MultiPolynomial affine_precomposed(const RationalVector& c, const mpq_class& T) const;
  // x -> p(inner(x)); inner.outputs() must equal inputs().
  MultiPolynomial composed(const MultiPolynomial& inner) const;
  MultiPolynomial power(unsigned e) const;

  friend MultiPolynomial operator+(const MultiPolynomial& a, const MultiPolynomial& b);
  friend MultiPolynomial operator-(const MultiPolynomial& a, const MultiPolynomial& b);
  // Product: componentwise when output dims agree, scaling when one side is
  // scalar-valued.
  friend MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b);
  bool operator==(const MultiPolynomial& o) const {
    return inputs_ == o.inputs_ && outputs_ == o.outputs_ && terms_ == o.terms_;
  }

  std::string to_string() const;

 private:
  std::size_t inputs_ = 1;
  std::size_t outputs_ = 1;
  std::map<Exponent, RationalVector> terms_;
};

}  // namespace ultradiff
