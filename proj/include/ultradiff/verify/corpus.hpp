#pragma once

#include "ultradiff/field/sampling.hpp"
#include "ultradiff/function/polynomial.hpp"

namespace ultradiff {

// Random rationals and polynomials used by the verification suites. All
// draws happen over Q, so exact and truncated runs see the same data.
struct Generators {
  std::uint32_t p = 5;

  // Norm at most 1, zero allowed.
  mpq_class unit_bounded(Rng& rng) const;
  // Valuation in [-1, 2], zero now and then.
  mpq_class any(Rng& rng) const;
  // Valuation in [-1, 2], never zero.
  mpq_class nonzero(Rng& rng) const;
  // A nonzero element of Z[1/p], hence exact in every backend.
  mpq_class exact_nonzero(Rng& rng) const;
  RationalVector vector(Rng& rng, std::size_t dim) const;

  MultiPolynomial univariate(Rng& rng, unsigned max_degree) const;
  MultiPolynomial poly(Rng& rng, std::size_t inputs, unsigned max_degree,
                       std::size_t max_terms = 5) const;
  // u(t) = sum c_n t^n into K^m with unit-bounded coefficients.
  std::vector<RationalVector> curve_coefficients(Rng& rng, std::size_t m,
                                                 unsigned max_degree) const;
};

// The fixed polynomial corpus: ten univariate polynomials of degree <= 4
// and ten bivariate ones of total degree <= 3, unit-bounded coefficients,
// none of them constant.
struct Corpus {
  std::vector<MultiPolynomial> polys;
  static Corpus standard(std::uint32_t p = 5);
};

}  // namespace ultradiff
