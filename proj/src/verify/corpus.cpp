#include "ultradiff/verify/corpus.hpp"

namespace ultradiff {

mpq_class Generators::unit_bounded(Rng& rng) const { return random_bounded_rational(rng, p, 2, true, 8); }

mpq_class Generators::any(Rng& rng) const {
  if (rng.range(0, 7) == 0) return 0;
  return nonzero(rng);
}

mpq_class Generators::nonzero(Rng& rng) const {
  return random_rational_with_valuation(rng, p, rng.range(-1, 2), 8);
}

mpq_class Generators::exact_nonzero(Rng& rng) const {
  long unit = rng.range(1, static_cast<long>(p) - 1);
  if (rng.coin()) unit = -unit;
  Prime prime(p);
  long k = rng.range(-1, 2);
  mpq_class scale = k >= 0 ? mpq_class(prime.power(static_cast<unsigned long>(k)))
                           : mpq_class(mpz_class(1), prime.power(static_cast<unsigned long>(-k)));
  return unit * scale;
}

RationalVector Generators::vector(Rng& rng, std::size_t dim) const {
  RationalVector v;
  for (std::size_t i = 0; i < dim; ++i) v.push_back(any(rng));
  return v;
}

MultiPolynomial Generators::univariate(Rng& rng, unsigned max_degree) const {
  RationalVector c;
  unsigned degree = static_cast<unsigned>(rng.range(0, max_degree));
  for (unsigned d = 0; d <= degree; ++d) c.push_back(unit_bounded(rng));
  return MultiPolynomial::univariate(c);
}

MultiPolynomial Generators::poly(Rng& rng, std::size_t inputs, unsigned max_degree,
                                 std::size_t max_terms) const {
  MultiPolynomial out(inputs, 1);
  std::size_t count = static_cast<std::size_t>(rng.range(1, static_cast<long>(max_terms)));
  for (std::size_t k = 0; k < count; ++k) {
    Exponent e(inputs, 0);
    unsigned budget = static_cast<unsigned>(rng.range(0, max_degree));
    for (unsigned d = 0; d < budget; ++d)
      e[static_cast<std::size_t>(rng.range(0, static_cast<long>(inputs) - 1))]++;
    out.add_term(e, {unit_bounded(rng)});
  }
  return out;
}

std::vector<RationalVector> Generators::curve_coefficients(Rng& rng, std::size_t m,
                                                           unsigned max_degree) const {
  std::vector<RationalVector> coeffs;
  unsigned degree = static_cast<unsigned>(rng.range(1, max_degree));
  for (unsigned d = 0; d <= degree; ++d) {
    RationalVector c;
    for (std::size_t i = 0; i < m; ++i) c.push_back(rng.coin() ? unit_bounded(rng) : mpq_class(0));
    coeffs.push_back(c);
  }
  return coeffs;
}

Corpus Corpus::standard(std::uint32_t p) {
  Generators gen{p};
  Rng rng(0x5eedC0de);
  Corpus c;
  auto non_constant = [](const MultiPolynomial& q) {
    for (const auto& [e, coef] : q.terms()) {
      bool constant = true;
      for (unsigned x : e) constant = constant && x == 0;
      if (!constant) return true;
    }
    return false;
  };
  while (c.polys.size() < 10) {
    MultiPolynomial q = gen.poly(rng, 1, 4);
    if (non_constant(q)) c.polys.push_back(q);
  }
  while (c.polys.size() < 20) {
    MultiPolynomial q = gen.poly(rng, 2, 3);
    if (non_constant(q)) c.polys.push_back(q);
  }
  return c;
}

}  // namespace ultradiff
