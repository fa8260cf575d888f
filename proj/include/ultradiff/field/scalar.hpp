#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ultradiff/errors.hpp"

namespace ultradiff {

using Valuation = std::int64_t;
inline constexpr Valuation kInfinite = std::numeric_limits<Valuation>::max();

inline bool is_infinite(Valuation v) { return v == kInfinite; }
// Saturating arithmetic so that "infinite" survives precision bookkeeping.
inline Valuation vadd(Valuation a, Valuation b) {
  if (is_infinite(a) || is_infinite(b)) return kInfinite;
  return a + b;
}
inline Valuation vsub(Valuation a, Valuation b) {
  if (is_infinite(a)) return kInfinite;
  return a - b;
}
std::string valuation_to_string(Valuation v);

class Prime {
 public:
  explicit Prime(std::uint32_t p);

  std::uint32_t value() const { return p_; }
  mpz_class power(unsigned long k) const;
  bool operator==(const Prime& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

// p-adic valuation of nonzero integers and rationals.
Valuation valuation_of(const mpz_class& z, std::uint32_t p);
Valuation valuation_of(const mpq_class& q, std::uint32_t p);

enum class Backend { ExactRational, TruncatedDigits };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);

class PadicScalar;

struct Field {
  Prime prime{5};
  Backend backend = Backend::ExactRational;
  // Absolute precision in digits; only consulted by TruncatedDigits.
  std::int64_t precision = 32;

  static Field exact(std::uint32_t p = 5);
  static Field truncated(std::uint32_t p = 5, std::int64_t digits = 32);

  std::uint32_t p() const { return prime.value(); }

  PadicScalar lift(const mpq_class& q) const;
  PadicScalar lift(long n) const;
  PadicScalar zero() const;
  PadicScalar one() const;
  // pi^k with pi = p.
  PadicScalar uniformizer_power(long k) const;

  bool operator==(const Field& o) const {
    return prime == o.prime && backend == o.backend &&
           (backend == Backend::ExactRational || precision == o.precision);
  }
  bool operator!=(const Field& o) const { return !(*this == o); }
};

struct DigitExpansion {
  // Index of digits[0]; digits[i] is the coefficient of p^(start + i).
  long start = 0;
  std::vector<std::uint32_t> digits;
};

class PadicScalar {
 public:
  PadicScalar() = default;
  PadicScalar(const Field& field, const mpq_class& value);

  // A value only known modulo p^precision. In the exact backend the
  // rational is taken as is.
  static PadicScalar approximate(const Field& field, const mpq_class& value,
                                 Valuation precision);

  const Field& field() const { return field_; }
  Backend backend() const { return field_.backend; }

  // True for exact zero and, in the truncated backend, for values that are
  // congruent to zero at the precision still vouched for.
  bool is_zero() const;
  bool is_exact_zero() const;
  bool is_exact() const { return exact_; }

  Valuation valuation() const;
  mpq_class norm() const;
  // Absolute precision: the value is known modulo p^precision().
  Valuation precision() const;
  std::int64_t loss() const { return loss_; }

  // Exact value in the exact backend; the canonical representative
  // p^v * unit otherwise.
  mpq_class to_rational() const;
  bool congruent_to(const mpq_class& exact_value) const;
  bool agrees_with(const PadicScalar& o) const;
  // Structural equality, used for determinism checks.
  bool identical(const PadicScalar& o) const;

  DigitExpansion digits(long upto) const;
  std::string to_string() const;

  PadicScalar operator-() const;
  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b);
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
  PadicScalar& operator/=(const PadicScalar& o) { return *this = *this / o; }

  PadicScalar pow(unsigned long e) const;

 private:
  static PadicScalar truncated_zero(const Field& f, Valuation precision,
                                    std::int64_t loss);
  static PadicScalar exact_zero(const Field& f, std::int64_t loss);
  static PadicScalar add_sub(const PadicScalar& a, const PadicScalar& b,
                             bool subtract);
  static PadicScalar mul_truncated(const PadicScalar& a, const PadicScalar& b);
  static PadicScalar div_truncated(const PadicScalar& a, const PadicScalar& b);
  // Applies the budget, reduces the unit, and folds tiny values into zero.
  void normalize();
  Valuation low_valuation() const;

  Field field_;
  // Exact backend payload.
  mpq_class rational_;
  // Truncated backend payload: value = p^valuation_ * unit_. For exact
  // values the unit is held as an integer of either sign; otherwise it is a
  // residue modulo p^(precision_ - valuation_).
  bool exact_ = true;
  Valuation valuation_ = kInfinite;
  mpz_class unit_;
  Valuation precision_ = kInfinite;
  std::int64_t loss_ = 0;
};

void require_same_field(const PadicScalar& a, const PadicScalar& b);

mpz_class binomial(unsigned long n, unsigned long k);

}  // namespace ultradiff
