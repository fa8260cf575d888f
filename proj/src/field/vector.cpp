#include "ultradiff/field/vector.hpp"

#include <algorithm>
#include <string>

namespace ultradiff {

namespace {

void require_same_dim(const PadicVector& a, const PadicVector& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("vector dimensions " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
}

}  // namespace

PadicVector::PadicVector(const Field& field, std::vector<PadicScalar> entries)
    : field_(field), entries_(std::move(entries)) {}

PadicVector PadicVector::zeros(const Field& field, std::size_t dim) {
  return PadicVector(field, std::vector<PadicScalar>(dim, field.zero()));
}

PadicVector PadicVector::basis(const Field& field, std::size_t dim, std::size_t j) {
  PadicVector v = zeros(field, dim);
  v.entries_.at(j) = field.one();
  return v;
}

PadicVector PadicVector::lift(const Field& field, const std::vector<mpq_class>& values) {
  std::vector<PadicScalar> e;
  e.reserve(values.size());
  for (const auto& q : values) e.push_back(field.lift(q));
  return PadicVector(field, std::move(e));
}

PadicVector PadicVector::scalar(const PadicScalar& s) { return PadicVector(s.field(), {s}); }

Valuation PadicVector::valuation() const {
  Valuation v = kInfinite;
  for (const auto& e : entries_) v = std::min(v, e.valuation());
  return v;
}

mpq_class PadicVector::norm() const {
  mpq_class n = 0;
  for (const auto& e : entries_) {
    mpq_class en = e.norm();
    if (en > n) n = en;
  }
  return n;
}

bool PadicVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const PadicScalar& s) { return s.is_zero(); });
}

bool PadicVector::agrees_with(const PadicVector& o) const {
  require_same_dim(*this, o);
  for (std::size_t i = 0; i < dim(); ++i)
    if (!entries_[i].agrees_with(o.entries_[i])) return false;
  return true;
}

bool PadicVector::identical(const PadicVector& o) const {
  if (dim() != o.dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!entries_[i].identical(o.entries_[i])) return false;
  return true;
}

std::vector<mpq_class> PadicVector::to_rationals() const {
  std::vector<mpq_class> out;
  out.reserve(dim());
  for (const auto& e : entries_) out.push_back(e.to_rational());
  return out;
}

PadicVector PadicVector::concat(const PadicVector& o) const {
  std::vector<PadicScalar> e = entries_;
  e.insert(e.end(), o.entries_.begin(), o.entries_.end());
  return PadicVector(field_, std::move(e));
}

PadicVector PadicVector::slice(std::size_t from, std::size_t count) const {
  if (from + count > dim()) throw DimensionMismatch("slice out of range");
  return PadicVector(field_, std::vector<PadicScalar>(entries_.begin() + from,
                                                      entries_.begin() + from + count));
}

PadicVector PadicVector::operator-() const {
  std::vector<PadicScalar> e;
  e.reserve(dim());
  for (const auto& s : entries_) e.push_back(-s);
  return PadicVector(field_, std::move(e));
}

PadicVector operator+(const PadicVector& a, const PadicVector& b) {
  require_same_dim(a, b);
  std::vector<PadicScalar> e;
  e.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) e.push_back(a[i] + b[i]);
  return PadicVector(a.field(), std::move(e));
}

PadicVector operator-(const PadicVector& a, const PadicVector& b) {
  require_same_dim(a, b);
  std::vector<PadicScalar> e;
  e.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) e.push_back(a[i] - b[i]);
  return PadicVector(a.field(), std::move(e));
}

PadicVector operator*(const PadicScalar& s, const PadicVector& v) {
  std::vector<PadicScalar> e;
  e.reserve(v.dim());
  for (const auto& x : v.entries()) e.push_back(s * x);
  return PadicVector(v.field(), std::move(e));
}

PadicVector operator/(const PadicVector& v, const PadicScalar& s) {
  std::vector<PadicScalar> e;
  e.reserve(v.dim());
  for (const auto& x : v.entries()) e.push_back(x / s);
  return PadicVector(v.field(), std::move(e));
}

PadicVector operator*(const PadicVector& a, const PadicVector& b) {
  if (a.dim() == 1) return a[0] * b;
  if (b.dim() == 1) return b[0] * a;
  require_same_dim(a, b);
  std::vector<PadicScalar> e;
  e.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) e.push_back(a[i] * b[i]);
  return PadicVector(a.field(), std::move(e));
}

Ball::Ball(std::vector<mpq_class> center, Valuation min_valuation)
    : center_(std::move(center)), min_valuation_(min_valuation) {}

mpq_class Ball::radius(std::uint32_t p) const {
  Prime prime(p);
  if (min_valuation_ >= 0)
    return mpq_class(mpz_class(1), prime.power(static_cast<unsigned long>(min_valuation_)));
  return mpq_class(prime.power(static_cast<unsigned long>(-min_valuation_)));
}

bool Ball::contains(const PadicVector& x) const {
  if (x.dim() != dim()) throw DimensionMismatch("ball and point dimensions differ");
  for (std::size_t i = 0; i < dim(); ++i) {
    PadicScalar d = x[i] - x.field().lift(center_[i]);
    if (d.is_zero()) {
      // Congruent to the center at the held precision; decide only if that
      // precision reaches the ball radius.
      if (d.precision() < min_valuation_)
        throw PrecisionExhausted("ball membership undecidable at current precision");
      continue;
    }
    if (d.valuation() < min_valuation_) return false;
  }
  return true;
}

bool Ball::contains(const std::vector<mpq_class>& x, std::uint32_t p) const {
  if (x.size() != dim()) throw DimensionMismatch("ball and point dimensions differ");
  for (std::size_t i = 0; i < dim(); ++i)
    if (valuation_of(mpq_class(x[i] - center_[i]), p) < min_valuation_) return false;
  return true;
}

Ball::Relation Ball::relation(const Ball& a, const Ball& b, std::uint32_t p) {
  if (a.dim() != b.dim()) throw DimensionMismatch("balls of different dimension");
  // Ultrametric balls meet iff the larger one contains the other's center.
  const Ball& big = a.min_valuation_ <= b.min_valuation_ ? a : b;
  const Ball& small = a.min_valuation_ <= b.min_valuation_ ? b : a;
  if (!big.contains(small.center_, p)) return Relation::Disjoint;
  if (a.min_valuation_ == b.min_valuation_) return Relation::Equal;
  return &small == &a ? Relation::FirstInsideSecond : Relation::SecondInsideFirst;
}

}  // namespace ultradiff
