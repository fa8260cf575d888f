#include "ultradiff/gallery/patchwork.hpp"

#include <algorithm>

#include "ultradiff/diff/engine.hpp"
#include "ultradiff/diff/points.hpp"

namespace ultradiff {

namespace {

mpq_class p_power(std::uint32_t p, std::int64_t e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, z) : mpq_class(z);
}

json rational_rows(const std::vector<RationalVector>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row = json::array();
    for (const auto& q : r) row.push_back(rational_to_json(q));
    out.push_back(row);
  }
  return out;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument("patchwork parameters must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) throw InvalidArgument("unknown patchwork parameter: " + it.key());
  }
}

}  // namespace

std::int64_t PatchworkParams::sigma_at(unsigned j) const {
  if (sigma.empty()) return static_cast<std::int64_t>(j) * j;
  return sigma.at(j - 1);
}

json PatchworkParams::to_json() const {
  json s = json::array();
  for (unsigned j = 1; j <= pieces; ++j) s.push_back(sigma_at(j));
  json j{{"pieces", pieces}, {"dim", dim}, {"sigma", s}};
  if (!anchors.empty()) j["anchors"] = rational_rows(anchors);
  if (!coefficients.empty()) j["coefficients"] = rational_rows(coefficients);
  return j;
}

PatchworkParams PatchworkParams::from_json(const json& j) {
  check_keys(j, {"pieces", "dim", "sigma", "anchors", "coefficients"});
  PatchworkParams out;
  try {
    if (j.contains("pieces")) out.pieces = j.at("pieces").get<unsigned>();
    if (j.contains("dim")) out.dim = j.at("dim").get<std::size_t>();
    if (j.contains("sigma")) out.sigma = j.at("sigma").get<std::vector<std::int64_t>>();
    if (j.contains("anchors"))
      for (const auto& row : j.at("anchors")) out.anchors.push_back(rationals_from_json(row));
    if (j.contains("coefficients"))
      for (const auto& row : j.at("coefficients"))
        out.coefficients.push_back(rationals_from_json(row));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed patchwork parameters: ") + e.what());
  }
  return out;
}

PatchworkCurve::PatchworkCurve(PatchworkParams params, std::uint32_t p)
    : params_(std::move(params)), p_(p) {
  const unsigned J = params_.pieces;
  const std::size_t dim = params_.dim;
  if (J < 1) throw InvalidArgument("patchwork needs at least one piece");
  if (J > PatchworkParams::kMaxPieces)
    throw InvalidArgument("patchwork depth is capped at " +
                          std::to_string(PatchworkParams::kMaxPieces) + " pieces");
  if (dim < 1) throw InvalidArgument("patchwork output dimension must be positive");
  if (!params_.sigma.empty() && params_.sigma.size() != J)
    throw InvalidArgument("sigma must list one exponent per piece");
  for (unsigned j = 2; j <= J; ++j)
    if (params_.sigma_at(j) <= params_.sigma_at(j - 1))
      throw InvalidArgument("scale exponents must be strictly increasing");
  if (!params_.anchors.empty() && params_.anchors.size() != J)
    throw InvalidArgument("anchors must list one point per piece");
  for (const auto& z : params_.anchors)
    if (z.size() != dim) throw InvalidArgument("anchor dimension differs from dim");
  if (!params_.coefficients.empty() && params_.coefficients.size() != 9)
    throw InvalidArgument("coefficients must list a_{k1,k2} for k1, k2 in 0..2");
  for (const auto& a : params_.coefficients) {
    if (a.size() != dim) throw InvalidArgument("coefficient dimension differs from dim");
    for (const auto& q : a)
      if (q != 0 && valuation_of(q, p) < 0)
        throw InvalidArgument("coefficients must have norm at most 1");
  }

  mpq_class running = 0;  // T_1 + .. + T_{j-1}
  std::vector<FunctionExpr> terms;
  const FunctionExpr bump = FunctionExpr::ball_indicator(Ball({mpq_class(0)}, 1));
  for (unsigned j = 1; j <= J; ++j) {
    mpq_class T = p_power(p, params_.sigma_at(j));
    mpq_class c = p_power(p, params_.sigma_at(j) * static_cast<std::int64_t>(j));
    mpq_class x = running / p + T;
    running += T;
    scales_.push_back(T);
    coeffs_.push_back(c);
    centers_.push_back(x);

    RationalVector z = params_.anchors.empty() ? RationalVector(dim, mpq_class(0))
                                               : params_.anchors[j - 1];
    for (const auto& q : z)
      if (q != 0 && valuation_of(q, p) < valuation_of(c, p))
        throw InvalidArgument("anchor " + std::to_string(j) + " exceeds |c_j|");
    std::vector<RationalVector> xi(5, RationalVector(dim, mpq_class(0)));
    xi[0] = z;
    for (unsigned k1 = 0; k1 <= 2; ++k1)
      for (unsigned k2 = 0; k2 <= 2; ++k2)
        for (std::size_t i = 0; i < dim; ++i) {
          mpq_class a = params_.coefficients.empty() ? mpq_class(1)
                                                     : params_.coefficients[3 * k1 + k2][i];
          xi[k1 + k2][i] += c * a;
        }
    FunctionExpr piece = FunctionExpr::product(
        bump, FunctionExpr::poly(MultiPolynomial::univariate_vector(xi)));
    terms.push_back(FunctionExpr::affine_precompose({x}, T, piece));
  }
  limit_ = running / p;
  FunctionExpr tree = terms.size() == 1 ? terms[0] : FunctionExpr::sum(terms);
  expr_ = FunctionExpr::gallery(std::make_shared<PatchworkFunction>(params_, p, tree));
}

Ball PatchworkCurve::support(unsigned j) const {
  return Ball({center(j)}, params_.sigma_at(j) + 1);
}

bool PatchworkCurve::supports_disjoint() const {
  for (unsigned j = 1; j <= pieces(); ++j)
    for (unsigned k = j + 1; k <= pieces(); ++k) {
      mpq_class gap = center(j) - center(k);
      Valuation vg = valuation_of(gap, p_);
      if (vg >= std::min(params_.sigma_at(j), params_.sigma_at(k))) return false;
      if (Ball::relation(support(j), support(k), p_) != Ball::Relation::Disjoint) return false;
    }
  return true;
}

std::size_t PatchworkCurve::max_overlap(std::size_t samples, Rng& rng) const {
  std::size_t worst = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    unsigned j = static_cast<unsigned>(rng.range(1, pieces()));
    // Radius between |p T_j| and |T_j / p| so that points fall on both sides
    // of the support boundary.
    long v = static_cast<long>(params_.sigma_at(j)) + rng.range(-1, 3);
    mpq_class h = center(j) + random_rational_with_valuation(rng, p_, v, 12);
    std::size_t count = 0;
    for (unsigned k = 1; k <= pieces(); ++k)
      if (support(k).contains({h}, p_)) ++count;
    worst = std::max(worst, count);
  }
  return worst;
}

json PatchworkFunction::params() const {
  json j = params_.to_json();
  j["p"] = p_;
  return j;
}

std::vector<RationalVector> PatchworkFunction::approach_hints(const RationalVector& center,
                                                              unsigned count,
                                                              std::uint32_t p) const {
  if (p != p_ || center.size() != 1) return {};
  PatchworkCurve shape(params_, p_);
  if (center[0] != shape.limit_point()) return {};
  std::vector<RationalVector> out;
  for (unsigned j = 1; j <= std::min(count, shape.pieces()); ++j) out.push_back({shape.center(j)});
  return out;
}

json PatchworkBoundReport::to_json() const {
  return json{{"order", order},
              {"samples", samples},
              {"violations", violations},
              {"indeterminate", indeterminate},
              {"worst_ratio", worst_ratio.get_str()}};
}

PatchworkBoundReport patchwork_bound_check(const PatchworkCurve& u, std::size_t order,
                                           std::size_t samples_per_piece, const Field& field,
                                           Rng& rng) {
  if (order < 1) throw InvalidArgument("bound check needs order >= 1");
  const std::uint32_t p = field.p();
  if (p != u.prime()) throw InvalidArgument("field prime differs from the curve's prime");
  const std::size_t size = upsilon_flat_size(1, order);
  const std::vector<bool> is_increment = upsilon_increment_mask(1, order);

  mpq_class v_min = 1;
  for (unsigned i = 1; i <= std::min<std::size_t>(order, u.pieces()); ++i)
    v_min = std::min(v_min, p_power(p, -u.params().sigma_at(i)));
  const auto q = static_cast<std::int64_t>(order);

  PatchworkBoundReport r;
  r.order = order;
  for (unsigned j = 1; j <= u.pieces(); ++j) {
    const std::int64_t s = u.params().sigma_at(j);
    mpq_class bound = p_power(p, -s * static_cast<std::int64_t>(j)) * p_power(p, q * s) *
                      mpq_class(q + 1) * p_power(p, q);
    for (std::int64_t i = 0; i < q; ++i) bound /= v_min;
    std::size_t taken = 0;
    while (taken < samples_per_piece) {
      std::vector<mpq_class> flat(size);
      for (std::size_t i = 0; i < size; ++i) {
        if (i == 0)
          flat[i] = u.center(j) + u.scale(j) * p * random_bounded_rational(rng, p, 3, true, 12);
        else if (is_increment[i])
          flat[i] = u.scale(j) * random_bounded_rational(rng, p, 3, false, 12);
        else
          flat[i] = random_bounded_rational(rng, p, 3, true, 12);
      }
      if (!upsilon_point_valid(1, order, flat)) continue;
      ++taken;
      ++r.samples;
      try {
        mpq_class n = upsilon_flat(u.expr(), order, PadicVector::lift(field, flat)).norm();
        mpq_class ratio = n / bound;
        r.worst_ratio = std::max(r.worst_ratio, ratio);
        if (ratio > 1) ++r.violations;
      } catch (const PrecisionExhausted&) {
        ++r.indeterminate;
      }
    }
  }
  return r;
}

PatchworkParams witness_patchwork_params(const CounterexampleF& cf, unsigned pieces,
                                         std::uint32_t p) {
  PatchworkParams out;
  out.pieces = pieces;
  out.dim = cf.input_dim();
  const Field field = Field::exact(p);
  for (unsigned j = 1; j <= pieces; ++j) {
    out.sigma.push_back(j);
    PadicScalar y = field.uniformizer_power(static_cast<long>(j) * j);
    RationalVector z = h_vector(cf.family, y).to_rationals();
    z.push_back(y.to_rational());
    out.anchors.push_back(std::move(z));
  }
  out.coefficients.assign(9, RationalVector(out.dim, mpq_class(1)));
  out.coefficients[0] = RationalVector(out.dim, mpq_class(0));
  return out;
}

}  // namespace ultradiff
