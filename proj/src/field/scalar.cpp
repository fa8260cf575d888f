#include "ultradiff/field/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace ultradiff {

namespace {

bool is_probable_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Strips factors of p from z in place and returns how many were removed.
Valuation strip(mpz_class& z, std::uint32_t p) {
  if (z == 0) return kInfinite;
  mpz_class pz(p);
  return static_cast<Valuation>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t()));
}

mpz_class mod_pow(const mpz_class& z, const Prime& prime, Valuation k) {
  mpz_class r;
  mpz_class m = prime.power(static_cast<unsigned long>(k));
  mpz_mod(r.get_mpz_t(), z.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& z, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), z.get_mpz_t(), m.get_mpz_t()) == 0)
    throw InvalidArgument("unit is not invertible modulo p^k");
  return r;
}

mpq_class p_power_rational(const Prime& prime, Valuation k) {
  if (k >= 0) return mpq_class(prime.power(static_cast<unsigned long>(k)));
  return mpq_class(mpz_class(1), prime.power(static_cast<unsigned long>(-k)));
}

}  // namespace

std::string valuation_to_string(Valuation v) {
  return is_infinite(v) ? std::string("inf") : std::to_string(v);
}

Prime::Prime(std::uint32_t p) : p_(p) {
  if (!is_probable_prime(p))
    throw InvalidArgument("not a prime: " + std::to_string(p));
}

mpz_class Prime::power(unsigned long k) const {
  // Powers are requested constantly by the truncated backend.
  thread_local std::uint32_t cached_prime = 0;
  thread_local std::vector<mpz_class> cache;
  if (cached_prime != p_) {
    cached_prime = p_;
    cache.assign(1, mpz_class(1));
  }
  if (k < 4096) {
    while (cache.size() <= k) cache.push_back(cache.back() * p_);
    return cache[k];
  }
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, k);
  return r;
}

Valuation valuation_of(const mpz_class& z, std::uint32_t p) {
  mpz_class t = z;
  return strip(t, p);
}

Valuation valuation_of(const mpq_class& q, std::uint32_t p) {
  if (q == 0) return kInfinite;
  return valuation_of(q.get_num(), p) - valuation_of(q.get_den(), p);
}

std::string backend_name(Backend b) {
  return b == Backend::ExactRational ? "exact" : "truncated";
}

Backend parse_backend(const std::string& name) {
  if (name == "exact") return Backend::ExactRational;
  if (name == "truncated") return Backend::TruncatedDigits;
  throw InvalidArgument("unknown backend: " + name);
}

Field Field::exact(std::uint32_t p) {
  Field f;
  f.prime = Prime(p);
  f.backend = Backend::ExactRational;
  return f;
}

Field Field::truncated(std::uint32_t p, std::int64_t digits) {
  if (digits < 1) throw InvalidArgument("precision must be at least one digit");
  Field f;
  f.prime = Prime(p);
  f.backend = Backend::TruncatedDigits;
  f.precision = digits;
  return f;
}

PadicScalar Field::lift(const mpq_class& q) const { return PadicScalar(*this, q); }
PadicScalar Field::lift(long n) const { return PadicScalar(*this, mpq_class(n)); }
PadicScalar Field::zero() const { return lift(0); }
PadicScalar Field::one() const { return lift(1); }
PadicScalar Field::uniformizer_power(long k) const {
  return lift(p_power_rational(prime, k));
}

PadicScalar::PadicScalar(const Field& field, const mpq_class& value) : field_(field) {
  if (field.backend == Backend::ExactRational) {
    rational_ = value;
    rational_.canonicalize();
    return;
  }
  if (value == 0) {
    *this = exact_zero(field, 0);
    return;
  }
  mpz_class num = value.get_num();
  mpz_class den = value.get_den();
  Valuation vn = strip(num, field.p());
  Valuation vd = strip(den, field.p());
  valuation_ = vn - vd;
  if (den == 1) {
    // Elements of Z[1/p] are held without error.
    exact_ = true;
    unit_ = num;
    precision_ = kInfinite;
  } else {
    exact_ = false;
    precision_ = field.precision;
    if (valuation_ >= precision_) {
      valuation_ = kInfinite;
      unit_ = 0;
    } else {
      mpz_class m = field.prime.power(static_cast<unsigned long>(precision_ - valuation_));
      unit_ = num * inverse_mod(den, m);
      mpz_mod(unit_.get_mpz_t(), unit_.get_mpz_t(), m.get_mpz_t());
    }
  }
  normalize();
}

PadicScalar PadicScalar::approximate(const Field& field, const mpq_class& value,
                                     Valuation precision) {
  if (field.backend == Backend::ExactRational || is_infinite(precision))
    return PadicScalar(field, value);
  Valuation prec = std::min<Valuation>(precision, field.precision);
  if (value == 0) return truncated_zero(field, prec, 0);
  PadicScalar r(field, value);
  if (!r.exact_ && r.precision_ <= prec) return r;
  r.exact_ = false;
  r.precision_ = prec;
  if (r.valuation_ >= prec) {
    r.valuation_ = kInfinite;
    r.unit_ = 0;
  } else {
    r.unit_ = mod_pow(r.unit_, field.prime, prec - r.valuation_);
  }
  r.normalize();
  return r;
}

PadicScalar PadicScalar::truncated_zero(const Field& f, Valuation precision,
                                        std::int64_t loss) {
  PadicScalar r;
  r.field_ = f;
  r.exact_ = false;
  r.valuation_ = kInfinite;
  r.unit_ = 0;
  r.precision_ = std::min<Valuation>(precision, f.precision);
  r.loss_ = loss;
  r.normalize();
  return r;
}

PadicScalar PadicScalar::exact_zero(const Field& f, std::int64_t loss) {
  PadicScalar r;
  r.field_ = f;
  r.exact_ = true;
  r.valuation_ = kInfinite;
  r.unit_ = 0;
  r.precision_ = kInfinite;
  r.loss_ = loss;
  r.normalize();
  return r;
}

void PadicScalar::normalize() {
  if (field_.backend == Backend::ExactRational) return;
  std::int64_t remaining = field_.precision - loss_;
  if (remaining <= 0)
    throw PrecisionExhausted("precision budget of " + std::to_string(field_.precision) +
                             " digits exhausted");
  if (exact_) return;
  Valuation prec = std::min<Valuation>(precision_, remaining);
  if (prec <= 0) throw PrecisionExhausted("no digits of precision left");
  precision_ = prec;
  if (is_infinite(valuation_) || valuation_ >= prec) {
    valuation_ = kInfinite;
    unit_ = 0;
    return;
  }
  unit_ = mod_pow(unit_, field_.prime, prec - valuation_);
}

bool PadicScalar::is_exact_zero() const {
  if (field_.backend == Backend::ExactRational) return rational_ == 0;
  return exact_ && is_infinite(valuation_);
}

bool PadicScalar::is_zero() const {
  if (field_.backend == Backend::ExactRational) return rational_ == 0;
  if (is_infinite(valuation_)) return true;
  return valuation_ >= precision();
}

Valuation PadicScalar::valuation() const {
  if (field_.backend == Backend::ExactRational) return valuation_of(rational_, field_.p());
  return is_zero() ? kInfinite : valuation_;
}

mpq_class PadicScalar::norm() const {
  Valuation v = valuation();
  if (is_infinite(v)) return 0;
  return p_power_rational(field_.prime, -v);
}

Valuation PadicScalar::precision() const {
  if (field_.backend == Backend::ExactRational) return kInfinite;
  if (exact_) {
    if (is_infinite(valuation_)) return kInfinite;
    return field_.precision - loss_;
  }
  return precision_;
}

Valuation PadicScalar::low_valuation() const {
  if (!is_infinite(valuation_)) return valuation_;
  return exact_ ? kInfinite : precision_;
}

mpq_class PadicScalar::to_rational() const {
  if (field_.backend == Backend::ExactRational) return rational_;
  if (is_infinite(valuation_)) return 0;
  mpq_class r = p_power_rational(field_.prime, valuation_) * mpq_class(unit_);
  r.canonicalize();
  return r;
}

bool PadicScalar::congruent_to(const mpq_class& exact_value) const {
  if (field_.backend == Backend::ExactRational) return rational_ == exact_value;
  if (is_exact_zero()) return exact_value == 0;
  mpq_class diff = exact_value - to_rational();
  if (diff == 0) return true;
  return valuation_of(diff, field_.p()) >= precision();
}

bool PadicScalar::agrees_with(const PadicScalar& o) const { return (*this - o).is_zero(); }

bool PadicScalar::identical(const PadicScalar& o) const {
  if (field_ != o.field_) return false;
  if (field_.backend == Backend::ExactRational) return rational_ == o.rational_;
  return exact_ == o.exact_ && valuation_ == o.valuation_ && unit_ == o.unit_ &&
         precision_ == o.precision_ && loss_ == o.loss_;
}

DigitExpansion PadicScalar::digits(long upto) const {
  Valuation prec = precision();
  if (!is_infinite(prec) && upto > prec)
    throw PrecisionExhausted("digits requested beyond index " + std::to_string(prec));
  DigitExpansion out;
  Valuation v = valuation();
  out.start = is_infinite(v) ? 0 : std::min<long>(0, static_cast<long>(v));
  long count = upto - out.start;
  if (count <= 0) return out;
  out.digits.assign(static_cast<std::size_t>(count), 0);
  if (is_infinite(v)) return out;
  mpq_class y = to_rational() * p_power_rational(field_.prime, -out.start);
  mpz_class m = field_.prime.power(static_cast<unsigned long>(count));
  mpz_class r = y.get_num() * inverse_mod(y.get_den(), m);
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  for (long i = 0; i < count; ++i) {
    out.digits[static_cast<std::size_t>(i)] =
        static_cast<std::uint32_t>(mpz_fdiv_q_ui(r.get_mpz_t(), r.get_mpz_t(), field_.p()));
  }
  return out;
}

std::string PadicScalar::to_string() const {
  if (field_.backend == Backend::ExactRational) return rational_.get_str();
  std::ostringstream os;
  os << to_rational().get_str();
  Valuation prec = precision();
  if (!is_infinite(prec)) os << " + O(" << field_.p() << "^" << prec << ")";
  return os.str();
}

void require_same_field(const PadicScalar& a, const PadicScalar& b) {
  if (!(a.field().prime == b.field().prime))
    throw BackendMismatch("scalars over different primes");
  if (a.backend() != b.backend()) throw BackendMismatch("scalars from different backends");
  if (a.field().precision != b.field().precision && a.backend() == Backend::TruncatedDigits)
    throw BackendMismatch("scalars with different precision budgets");
}

PadicScalar PadicScalar::operator-() const {
  PadicScalar r = *this;
  if (field_.backend == Backend::ExactRational) {
    r.rational_ = -rational_;
    return r;
  }
  if (is_infinite(valuation_)) return r;
  if (exact_) {
    r.unit_ = -unit_;
  } else {
    r.unit_ = mod_pow(-unit_, field_.prime, precision_ - valuation_);
  }
  return r;
}

PadicScalar PadicScalar::add_sub(const PadicScalar& a, const PadicScalar& b, bool subtract) {
  require_same_field(a, b);
  const Field& f = a.field_;
  if (f.backend == Backend::ExactRational) {
    PadicScalar r;
    r.field_ = f;
    if (subtract)
      r.rational_ = a.rational_ - b.rational_;
    else
      r.rational_ = a.rational_ + b.rational_;
    return r;
  }
  std::int64_t loss = std::max(a.loss_, b.loss_);
  if (a.is_exact_zero()) {
    PadicScalar r = subtract ? -b : b;
    r.loss_ = loss;
    r.normalize();
    return r;
  }
  if (b.is_exact_zero()) {
    PadicScalar r = a;
    r.loss_ = loss;
    r.normalize();
    return r;
  }
  const std::uint32_t p = f.p();
  Valuation err_a = a.exact_ ? kInfinite : a.precision_;
  Valuation err_b = b.exact_ ? kInfinite : b.precision_;
  Valuation err = std::min(err_a, err_b);
  PadicScalar r;
  r.field_ = f;
  r.loss_ = loss;
  if (is_infinite(err)) {
    Valuation e = std::min(a.valuation_, b.valuation_);
    mpz_class s = a.unit_ * f.prime.power(static_cast<unsigned long>(a.valuation_ - e));
    mpz_class t = b.unit_ * f.prime.power(static_cast<unsigned long>(b.valuation_ - e));
    mpz_class sum = s;
    if (subtract)
      sum -= t;
    else
      sum += t;
    if (sum == 0) return exact_zero(f, loss);
    Valuation k = strip(sum, p);
    r.exact_ = true;
    r.valuation_ = e + k;
    r.unit_ = sum;
    r.precision_ = kInfinite;
    r.normalize();
    return r;
  }
  Valuation e = std::min(a.low_valuation(), b.low_valuation());
  if (e >= err) return truncated_zero(f, err, loss);
  mpz_class sum = 0;
  if (!is_infinite(a.valuation_))
    sum += a.unit_ * f.prime.power(static_cast<unsigned long>(a.valuation_ - e));
  if (!is_infinite(b.valuation_)) {
    mpz_class t = b.unit_ * f.prime.power(static_cast<unsigned long>(b.valuation_ - e));
    if (subtract)
      sum -= t;
    else
      sum += t;
  }
  sum = mod_pow(sum, f.prime, err - e);
  if (sum == 0) return truncated_zero(f, err, loss);
  Valuation k = strip(sum, p);
  r.exact_ = false;
  r.valuation_ = e + k;
  r.unit_ = sum;
  r.precision_ = err;
  r.normalize();
  return r;
}

PadicScalar PadicScalar::mul_truncated(const PadicScalar& a, const PadicScalar& b) {
  const Field& f = a.field_;
  std::int64_t loss = std::max(a.loss_, b.loss_);
  if (a.is_exact_zero() || b.is_exact_zero()) return exact_zero(f, loss);
  PadicScalar r;
  r.field_ = f;
  r.loss_ = loss;
  if (a.exact_ && b.exact_) {
    r.exact_ = true;
    r.valuation_ = a.valuation_ + b.valuation_;
    r.unit_ = a.unit_ * b.unit_;
    r.normalize();
    return r;
  }
  Valuation err_a = a.exact_ ? kInfinite : a.precision_;
  Valuation err_b = b.exact_ ? kInfinite : b.precision_;
  Valuation err = std::min(vadd(err_a, b.low_valuation()), vadd(err_b, a.low_valuation()));
  err = std::min<Valuation>(err, f.precision);
  if (is_infinite(a.valuation_) || is_infinite(b.valuation_)) return truncated_zero(f, err, loss);
  Valuation v = a.valuation_ + b.valuation_;
  if (v >= err) return truncated_zero(f, err, loss);
  r.exact_ = false;
  r.valuation_ = v;
  r.precision_ = err;
  r.unit_ = mod_pow(a.unit_ * b.unit_, f.prime, err - v);
  r.normalize();
  return r;
}

PadicScalar PadicScalar::div_truncated(const PadicScalar& a, const PadicScalar& b) {
  const Field& f = a.field_;
  if (b.is_exact_zero()) throw DivisionByZero();
  if (b.is_zero()) throw PrecisionExhausted("divisor is indistinguishable from zero");
  Valuation vb = b.valuation_;
  std::int64_t loss = std::max(a.loss_, b.loss_) + std::max<Valuation>(vb, 0);
  if (a.is_exact_zero()) return exact_zero(f, loss);
  PadicScalar r;
  r.field_ = f;
  r.loss_ = loss;
  if (a.exact_ && b.exact_ && (b.unit_ == 1 || b.unit_ == -1)) {
    r.exact_ = true;
    r.valuation_ = a.valuation_ - vb;
    r.unit_ = a.unit_ * b.unit_;
    r.normalize();
    return r;
  }
  Valuation err_a = a.exact_ ? kInfinite : a.precision_;
  Valuation err_b = b.exact_ ? kInfinite : b.precision_;
  Valuation term_a = is_infinite(err_a) ? kInfinite : err_a - vb;
  Valuation low_a = a.low_valuation();
  Valuation term_b =
      (is_infinite(err_b) || is_infinite(low_a)) ? kInfinite : err_b + low_a - 2 * vb;
  Valuation err = std::min<Valuation>(std::min(term_a, term_b), f.precision);
  if (is_infinite(a.valuation_)) return truncated_zero(f, err, loss);
  Valuation v = a.valuation_ - vb;
  if (v >= err) return truncated_zero(f, err, loss);
  mpz_class m = f.prime.power(static_cast<unsigned long>(err - v));
  r.exact_ = false;
  r.valuation_ = v;
  r.precision_ = err;
  r.unit_ = a.unit_ * inverse_mod(b.unit_, m);
  mpz_mod(r.unit_.get_mpz_t(), r.unit_.get_mpz_t(), m.get_mpz_t());
  r.normalize();
  return r;
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
  return PadicScalar::add_sub(a, b, false);
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
  return PadicScalar::add_sub(a, b, true);
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
  require_same_field(a, b);
  if (a.backend() == Backend::ExactRational) {
    PadicScalar r;
    r.field_ = a.field_;
    r.rational_ = a.rational_ * b.rational_;
    return r;
  }
  return PadicScalar::mul_truncated(a, b);
}

PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
  require_same_field(a, b);
  if (a.backend() == Backend::ExactRational) {
    if (b.rational_ == 0) throw DivisionByZero();
    PadicScalar r;
    r.field_ = a.field_;
    r.rational_ = a.rational_ / b.rational_;
    return r;
  }
  return PadicScalar::div_truncated(a, b);
}

PadicScalar PadicScalar::pow(unsigned long e) const {
  PadicScalar result = field_.one();
  PadicScalar base = *this;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace ultradiff
