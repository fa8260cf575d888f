#include "ultradiff/diff/points.hpp"

namespace ultradiff {

PhiPoint::PhiPoint(PadicVector x_, std::vector<PadicVector> directions_,
                   std::vector<PadicScalar> increments_)
    : x(std::move(x_)), directions(std::move(directions_)), increments(std::move(increments_)) {
  if (directions.size() != increments.size())
    throw DimensionMismatch("number of directions differs from number of increments");
  for (const auto& v : directions)
    if (v.dim() != x.dim()) throw DimensionMismatch("direction dimension differs from base point");
}

PhiPoint PhiPoint::from_rationals(const Field& field, const std::vector<mpq_class>& x,
                                  const std::vector<std::vector<mpq_class>>& directions,
                                  const std::vector<mpq_class>& increments) {
  std::vector<PadicVector> dirs;
  for (const auto& d : directions) dirs.push_back(PadicVector::lift(field, d));
  std::vector<PadicScalar> ts;
  for (const auto& t : increments) ts.push_back(field.lift(t));
  return PhiPoint(PadicVector::lift(field, x), std::move(dirs), std::move(ts));
}

bool PhiPoint::numeric_evaluable() const {
  for (const auto& t : increments)
    if (t.is_zero()) return false;
  return true;
}

PhiPoint PhiPoint::prefix(std::size_t k) const {
  if (k > order()) throw InvalidArgument("prefix longer than the point's order");
  return PhiPoint(x, {directions.begin(), directions.begin() + static_cast<long>(k)},
                  {increments.begin(), increments.begin() + static_cast<long>(k)});
}

json PhiPoint::to_json() const {
  json dirs = json::array();
  for (const auto& v : directions) dirs.push_back(vector_to_json(v));
  json ts = json::array();
  for (const auto& t : increments) ts.push_back(scalar_to_json(t));
  return json{{"x", vector_to_json(x)}, {"directions", dirs}, {"increments", ts}};
}

std::size_t upsilon_flat_size(std::size_t m, std::size_t order) {
  std::size_t s = m;
  for (std::size_t k = 0; k < order; ++k) s = 2 * s + 1;
  return s;
}

bool upsilon_point_valid(std::size_t m, std::size_t order, const std::vector<mpq_class>& flat) {
  if (flat.size() != upsilon_flat_size(m, order)) throw DimensionMismatch("flat point size");
  if (order == 0) return true;
  std::size_t s = upsilon_flat_size(m, order - 1);
  const mpq_class& t = flat[2 * s];
  if (t == 0) return false;
  std::vector<mpq_class> base(flat.begin(), flat.begin() + static_cast<long>(s));
  std::vector<mpq_class> moved = base;
  for (std::size_t i = 0; i < s; ++i) moved[i] += flat[s + i] * t;
  return upsilon_point_valid(m, order - 1, base) && upsilon_point_valid(m, order - 1, moved);
}

UpsilonPoint::UpsilonPoint(PadicVector x) : order_(0), m_(x.dim()), x_(std::move(x)) {}

UpsilonPoint::UpsilonPoint(UpsilonPoint base, UpsilonPoint direction, PadicScalar increment)
    : order_(base.order() + 1), m_(base.dim()), t_(std::move(increment)) {
  if (direction.order() != base.order() || direction.dim() != base.dim())
    throw DimensionMismatch("direction shape must mirror the base shape");
  base_ = std::make_shared<const UpsilonPoint>(std::move(base));
  direction_ = std::make_shared<const UpsilonPoint>(std::move(direction));
}

UpsilonPoint UpsilonPoint::from_flat(std::size_t m, std::size_t order, const PadicVector& flat) {
  if (flat.dim() != upsilon_flat_size(m, order))
    throw DimensionMismatch("flat point has " + std::to_string(flat.dim()) +
                            " coordinates, expected " +
                            std::to_string(upsilon_flat_size(m, order)));
  if (order == 0) return UpsilonPoint(flat);
  std::size_t s = upsilon_flat_size(m, order - 1);
  return UpsilonPoint(from_flat(m, order - 1, flat.slice(0, s)),
                      from_flat(m, order - 1, flat.slice(s, s)), flat[2 * s]);
}

UpsilonPoint UpsilonPoint::lift_vector(const PadicVector& v, std::size_t order) {
  if (order == 0) return UpsilonPoint(v);
  const Field& f = v.field();
  return UpsilonPoint(lift_vector(v, order - 1),
                      lift_vector(PadicVector::zeros(f, v.dim()), order - 1), f.zero());
}

const PadicVector& UpsilonPoint::root() const {
  return order_ == 0 ? x_ : base_->root();
}

const UpsilonPoint& UpsilonPoint::base() const {
  if (order_ == 0) throw InvalidArgument("order-0 point has no base");
  return *base_;
}

const UpsilonPoint& UpsilonPoint::direction() const {
  if (order_ == 0) throw InvalidArgument("order-0 point has no direction");
  return *direction_;
}

const PadicScalar& UpsilonPoint::increment() const {
  if (order_ == 0) throw InvalidArgument("order-0 point has no increment");
  return t_;
}

const Field& UpsilonPoint::field() const { return root().field(); }

PadicVector UpsilonPoint::flatten() const {
  if (order_ == 0) return x_;
  return base_->flatten().concat(direction_->flatten()).concat(PadicVector::scalar(t_));
}

bool UpsilonPoint::numeric_evaluable() const {
  if (order_ == 0) return true;
  return !t_.is_zero() && base_->numeric_evaluable();
}

json UpsilonPoint::to_json() const {
  if (order_ == 0) return vector_to_json(x_);
  return json{{"base", base_->to_json()},
              {"direction", direction_->to_json()},
              {"increment", scalar_to_json(t_)}};
}

UpsilonPoint embed_phi_point(const PhiPoint& pt) {
  UpsilonPoint out(pt.x);
  for (std::size_t k = 0; k < pt.order(); ++k)
    out = UpsilonPoint(out, UpsilonPoint::lift_vector(pt.directions[k], k), pt.increments[k]);
  return out;
}

bool DirectionSet::independent(const PadicVector& a, const PadicVector& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("directions of different dimension");
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return true;
  return false;
}

DirectionSet::DirectionSet(std::vector<PadicVector> directions, bool require_pairwise_independent)
    : directions_(std::move(directions)), independent_(require_pairwise_independent) {
  for (const auto& d : directions_)
    if (!directions_.empty() && d.dim() != directions_[0].dim())
      throw DimensionMismatch("directions of different dimension");
  if (!require_pairwise_independent) return;
  for (std::size_t i = 0; i < directions_.size(); ++i)
    for (std::size_t j = i + 1; j < directions_.size(); ++j)
      if (!independent(directions_[i], directions_[j]))
        throw InvalidArgument("directions " + std::to_string(i) + " and " + std::to_string(j) +
                              " are linearly dependent");
}

namespace {

void mark_increments(std::size_t m, std::size_t order, std::size_t offset, std::vector<bool>& out) {
  if (order == 0) return;
  std::size_t s = upsilon_flat_size(m, order - 1);
  mark_increments(m, order - 1, offset, out);
  mark_increments(m, order - 1, offset + s, out);
  out[offset + 2 * s] = true;
}

}  // namespace

std::vector<bool> upsilon_increment_mask(std::size_t m, std::size_t order) {
  std::vector<bool> out(upsilon_flat_size(m, order), false);
  mark_increments(m, order, 0, out);
  return out;
}

}  // namespace ultradiff
