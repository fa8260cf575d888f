#pragma once

#include <cstddef>
#include <vector>

#include "ultradiff/field/scalar.hpp"

namespace ultradiff {

class PadicVector {
 public:
  PadicVector() = default;
  PadicVector(const Field& field, std::vector<PadicScalar> entries);

  static PadicVector zeros(const Field& field, std::size_t dim);
  static PadicVector basis(const Field& field, std::size_t dim, std::size_t j);
  static PadicVector lift(const Field& field, const std::vector<mpq_class>& values);
  static PadicVector scalar(const PadicScalar& s);

  const Field& field() const { return field_; }
  std::size_t dim() const { return entries_.size(); }
  const PadicScalar& operator[](std::size_t i) const { return entries_[i]; }
  PadicScalar& operator[](std::size_t i) { return entries_[i]; }
  const std::vector<PadicScalar>& entries() const { return entries_; }

  // Sup-norm and the matching minimum valuation.
  Valuation valuation() const;
  mpq_class norm() const;
  bool is_zero() const;
  bool agrees_with(const PadicVector& o) const;
  bool identical(const PadicVector& o) const;
  std::vector<mpq_class> to_rationals() const;

  PadicVector concat(const PadicVector& o) const;
  PadicVector slice(std::size_t from, std::size_t count) const;

  PadicVector operator-() const;
  friend PadicVector operator+(const PadicVector& a, const PadicVector& b);
  friend PadicVector operator-(const PadicVector& a, const PadicVector& b);
  friend PadicVector operator*(const PadicScalar& s, const PadicVector& v);
  friend PadicVector operator*(const PadicVector& v, const PadicScalar& s) { return s * v; }
  friend PadicVector operator/(const PadicVector& v, const PadicScalar& s);
  // Componentwise product; either side may be one-dimensional.
  friend PadicVector operator*(const PadicVector& a, const PadicVector& b);

 private:
  Field field_;
  std::vector<PadicScalar> entries_;
};

// Closed ball { y : val(y_i - c_i) >= min_valuation for all i }, radius
// p^(-min_valuation).
class Ball {
 public:
  enum class Relation { Disjoint, Equal, FirstInsideSecond, SecondInsideFirst };

  Ball() = default;
  Ball(std::vector<mpq_class> center, Valuation min_valuation);

  const std::vector<mpq_class>& center() const { return center_; }
  std::size_t dim() const { return center_.size(); }
  Valuation min_valuation() const { return min_valuation_; }
  mpq_class radius(std::uint32_t p) const;

  bool contains(const PadicVector& x) const;
  bool contains(const std::vector<mpq_class>& x, std::uint32_t p) const;
  static Relation relation(const Ball& a, const Ball& b, std::uint32_t p);

 private:
  std::vector<mpq_class> center_;
  Valuation min_valuation_ = 0;
};

}  // namespace ultradiff
