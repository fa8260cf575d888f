#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ultradiff/field/vector.hpp"

namespace ultradiff {

// Deterministic RNG. Only raw engine output is used so that streams are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint32_t digit(std::uint32_t p) { return static_cast<std::uint32_t>(engine_() % p); }
  // Uniform integer in [lo, hi].
  long range(long lo, long hi);
  bool coin() { return (engine_() & 1ULL) != 0; }
  Rng fork(std::uint64_t salt);

 private:
  std::mt19937_64 engine_;
};

// Nonnegative integer with `count` uniformly random base-p digits.
mpz_class random_digits(Rng& rng, std::uint32_t p, unsigned count);

// Rational of norm exactly 1: numerator and denominator prime to p.
mpq_class random_unit_rational(Rng& rng, std::uint32_t p, long height = 30);
// Rational of norm at most 1 (valuation drawn from [0, max_valuation]),
// zero allowed only when allow_zero is set.
mpq_class random_bounded_rational(Rng& rng, std::uint32_t p, long max_valuation = 2,
                                  bool allow_zero = true, long height = 30);
// Nonzero rational of valuation exactly v.
mpq_class random_rational_with_valuation(Rng& rng, std::uint32_t p, long v, long height = 30);

PadicVector sample(const Ball& ball, const Field& field, std::uint64_t seed,
                   unsigned digits = 12);
PadicVector sample(const Ball& ball, const Field& field, Rng& rng, unsigned digits = 12);
std::vector<mpq_class> sample_rationals(const Ball& ball, std::uint32_t p, Rng& rng,
                                        unsigned digits = 12);

// Vector of norm exactly 1: some coordinate gets a nonzero leading digit.
std::vector<mpq_class> sample_unit_sphere(Rng& rng, std::uint32_t p, std::size_t dim,
                                          unsigned digits = 8);

}  // namespace ultradiff
