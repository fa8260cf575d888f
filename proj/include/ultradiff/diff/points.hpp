#pragma once

#include <memory>
#include <vector>

#include "ultradiff/field/json.hpp"
#include "ultradiff/field/vector.hpp"

namespace ultradiff {

// Base point x in K^m with n directions and n increments. Increment k pairs
// with direction k; the last pair is the outermost quotient.
struct PhiPoint {
  PadicVector x;
  std::vector<PadicVector> directions;
  std::vector<PadicScalar> increments;

  PhiPoint() = default;
  PhiPoint(PadicVector x, std::vector<PadicVector> directions,
           std::vector<PadicScalar> increments);

  static PhiPoint from_rationals(const Field& field, const std::vector<mpq_class>& x,
                                 const std::vector<std::vector<mpq_class>>& directions,
                                 const std::vector<mpq_class>& increments);

  std::size_t order() const { return increments.size(); }
  std::size_t dim() const { return x.dim(); }
  // All increments nonzero, so the recursive quotient is defined.
  bool numeric_evaluable() const;
  // First k direction/increment pairs.
  PhiPoint prefix(std::size_t k) const;
  json to_json() const;
};

// Number of flat coordinates of an order-k point over K^m.
std::size_t upsilon_flat_size(std::size_t m, std::size_t order);

// Whether every increment the recursive quotient divides by is nonzero,
// for a flat point given over Q.
bool upsilon_point_valid(std::size_t m, std::size_t order, const std::vector<mpq_class>& flat);

// Marks the flat coordinates of an order-k point that are increments.
std::vector<bool> upsilon_increment_mask(std::size_t m, std::size_t order);

// Order 0 is a vector x. Order k is (base, direction, increment) where base
// and direction are order k-1 points of identical shape. Flattening lists
// base, then direction, then increment, depth first.
class UpsilonPoint {
 public:
  UpsilonPoint() = default;
  explicit UpsilonPoint(PadicVector x);
  UpsilonPoint(UpsilonPoint base, UpsilonPoint direction, PadicScalar increment);

  static UpsilonPoint from_flat(std::size_t m, std::size_t order, const PadicVector& flat);
  // Order-k shape whose root x-slot holds v and every other slot is zero.
  static UpsilonPoint lift_vector(const PadicVector& v, std::size_t order);

  std::size_t order() const { return order_; }
  std::size_t dim() const { return m_; }
  const PadicVector& root() const;
  const UpsilonPoint& base() const;
  const UpsilonPoint& direction() const;
  const PadicScalar& increment() const;
  const Field& field() const;

  PadicVector flatten() const;
  // Increments along the base chain are nonzero. Shifted increments can
  // still vanish; upsilon_point_valid decides that over Q.
  bool numeric_evaluable() const;
  json to_json() const;

 private:
  std::size_t order_ = 0;
  std::size_t m_ = 0;
  PadicVector x_;
  std::shared_ptr<const UpsilonPoint> base_;
  std::shared_ptr<const UpsilonPoint> direction_;
  PadicScalar t_;
};

UpsilonPoint embed_phi_point(const PhiPoint& pt);

// Directions with an optional pairwise-independence guarantee, checked via
// the 2x2 minors.
class DirectionSet {
 public:
  DirectionSet() = default;
  DirectionSet(std::vector<PadicVector> directions, bool require_pairwise_independent);

  const std::vector<PadicVector>& directions() const { return directions_; }
  bool pairwise_independent() const { return independent_; }
  std::size_t size() const { return directions_.size(); }

  static bool independent(const PadicVector& a, const PadicVector& b);

 private:
  std::vector<PadicVector> directions_;
  bool independent_ = false;
};

}  // namespace ultradiff
