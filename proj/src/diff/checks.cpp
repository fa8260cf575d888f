#include "ultradiff/diff/checks.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace ultradiff {

void CheckReport::add(json point, const std::function<PadicVector()>& lhs,
                      const std::function<PadicVector()>& rhs) {
  CheckSample s;
  s.point = std::move(point);
  try {
    s.lhs = lhs();
    s.rhs = rhs();
    s.ok = s.lhs.dim() == s.rhs.dim() && s.lhs.agrees_with(s.rhs);
  } catch (const PrecisionExhausted&) {
    s.indeterminate = true;
  }
  samples.push_back(std::move(s));
}

void CheckReport::merge(const CheckReport& other) {
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
}

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const CheckSample& s) {
    return !s.ok && !s.indeterminate;
  }));
}

std::size_t CheckReport::indeterminate() const {
  return static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const CheckSample& s) { return s.indeterminate; }));
}

Valuation CheckReport::max_valuation_gap() const {
  Valuation gap = 0;
  for (const auto& s : samples) {
    if (s.ok || s.indeterminate || s.lhs.dim() != s.rhs.dim()) continue;
    Valuation known = kInfinite;
    for (std::size_t i = 0; i < s.lhs.dim(); ++i)
      known = std::min({known, s.lhs[i].precision(), s.rhs[i].precision()});
    Valuation diff = (s.lhs - s.rhs).valuation();
    if (is_infinite(known)) return kInfinite;
    gap = std::max(gap, known - diff);
  }
  return gap;
}

json CheckReport::to_json() const {
  json fails = json::array();
  for (const auto& s : samples) {
    if (s.ok || s.indeterminate) continue;
    fails.push_back(json{{"point", s.point}, {"lhs", vector_to_json(s.lhs)}, {"rhs", vector_to_json(s.rhs)}});
  }
  return json{{"identity", identity},
              {"samples", samples.size()},
              {"failures", fails},
              {"indeterminate", indeterminate()},
              {"max_valuation_gap", valuation_to_json(max_valuation_gap())}};
}

CheckReport scaling_identity_check(const FunctionExpr& f, const PhiPoint& pt, const PadicScalar& a,
                                   const PadicScalar& T) {
  if (pt.order() != 1) throw InvalidArgument("scaling identities are stated at order 1");
  if (a.is_zero() || T.is_zero()) throw InvalidArgument("scaling factors must be nonzero");
  if (!T.is_exact()) throw InvalidArgument("argument scale must be exactly representable");
  const PadicVector& x = pt.x;
  const PadicVector& v = pt.directions[0];
  const PadicScalar& t = pt.increments[0];
  CheckReport r;
  r.identity = "scaling";
  json base = pt.to_json();
  base["a"] = scalar_to_json(a);
  base["T"] = scalar_to_json(T);

  json p1 = base;
  p1["form"] = "direction_rescale";
  r.add(p1, [&] { return phi(f, PhiPoint(x, {a * v}, {t / a})); },
        [&] { return a * phi(f, pt); });

  json p2 = base;
  p2["form"] = "increment_rescale";
  r.add(p2, [&] { return phi(f, PhiPoint(x, {v}, {a * t})); },
        [&] { return phi(f, PhiPoint(x, {a * v}, {t})) / a; });

  json p3 = base;
  p3["form"] = "argument_rescale";
  FunctionExpr g = FunctionExpr::affine_precompose(RationalVector(x.dim(), mpq_class(0)),
                                                   T.to_rational(), f);
  r.add(p3, [&] { return phi(g, pt); },
        [&] { return phi(f, PhiPoint(x / T, {v}, {t / T})) / T; });
  return r;
}

CheckReport transposition_symmetry_check(const FunctionExpr& f, const PhiPoint& pt) {
  CheckReport r;
  r.identity = "transposition_symmetry";
  std::vector<std::size_t> perm(pt.order());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<PadicVector> reference;
  auto ref = [&] {
    if (!reference) reference = phi(f, pt);
    return *reference;
  };
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<PadicVector> dirs;
    std::vector<PadicScalar> ts;
    for (std::size_t i : perm) {
      dirs.push_back(pt.directions[i]);
      ts.push_back(pt.increments[i]);
    }
    PhiPoint moved(pt.x, dirs, ts);
    json point = pt.to_json();
    point["permutation"] = perm;
    r.add(point, [&] { return phi(f, moved); }, ref);
  }
  return r;
}

CheckReport multilinearity_at_zero_check(const MultiPolynomial& u, const PadicScalar& x,
                                         const std::vector<PadicScalar>& directions,
                                         const PadicScalar& w, const PadicScalar& alpha) {
  const Field& field = x.field();
  auto closed = [&](const std::vector<PadicScalar>& dirs) {
    std::vector<PadicVector> vs;
    for (const auto& d : dirs) vs.push_back(PadicVector::scalar(d));
    return phi_poly_closed(u, PhiPoint(PadicVector::scalar(x), vs,
                                       std::vector<PadicScalar>(dirs.size(), field.zero())));
  };
  auto describe = [&](const std::string& form, std::size_t slot) {
    json dirs = json::array();
    for (const auto& d : directions) dirs.push_back(scalar_to_json(d));
    return json{{"form", form}, {"slot", slot}, {"x", scalar_to_json(x)}, {"directions", dirs},
                {"w", scalar_to_json(w)}, {"alpha", scalar_to_json(alpha)}};
  };
  CheckReport r;
  r.identity = "multilinearity_at_zero";
  for (std::size_t i = 0; i < directions.size(); ++i) {
    r.add(describe("linear", i),
          [&] {
            auto d = directions;
            d[i] = alpha * d[i] + w;
            return closed(d);
          },
          [&] {
            auto d = directions;
            d[i] = w;
            return alpha * closed(directions) + closed(d);
          });
  }
  std::vector<std::size_t> perm(directions.size());
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<PadicScalar> d;
    for (std::size_t i : perm) d.push_back(directions[i]);
    r.add(describe("symmetric", 0), [&] { return closed(d); }, [&] { return closed(directions); });
  }
  return r;
}

json SupBoundReport::to_json() const {
  return json{{"order", order},
              {"samples", samples},
              {"violations", violations},
              {"indeterminate", indeterminate},
              {"bound", bound.get_str()},
              {"max_attained", max_attained.get_str()}};
}

SupBoundReport upsilon_sup_bound_check(const MultiPolynomial& u, std::size_t order,
                                       std::size_t samples, const Field& field, Rng& rng,
                                       std::vector<PadicVector>* values) {
  const std::uint32_t p = field.p();
  const std::size_t m = u.inputs();
  const std::size_t size = upsilon_flat_size(m, order);
  const std::vector<bool> is_increment = upsilon_increment_mask(m, order);
  FunctionExpr f = FunctionExpr::poly(u);
  SupBoundReport r;
  r.order = order;
  r.bound = u.max_coefficient_norm(p);
  r.max_attained = 0;
  while (r.samples < samples) {
    std::vector<mpq_class> flat(size);
    for (std::size_t i = 0; i < size; ++i)
      flat[i] = random_bounded_rational(rng, p, 3, !is_increment[i], 12);
    if (!upsilon_point_valid(m, order, flat)) continue;
    ++r.samples;
    try {
      PadicVector value = upsilon_flat(f, order, PadicVector::lift(field, flat));
      mpq_class n = value.norm();
      if (values) values->push_back(std::move(value));
      r.max_attained = std::max(r.max_attained, n);
      if (n > r.bound) ++r.violations;
    } catch (const PrecisionExhausted&) {
      ++r.indeterminate;
      if (values) values->emplace_back();
    }
  }
  return r;
}

std::size_t directional_span_bound(std::size_t b, std::size_t n) {
  std::size_t per_slot = (std::size_t{1} << b) - 1;
  std::size_t r = 1;
  for (std::size_t i = 0; i < n; ++i) r *= per_slot;
  return r;
}

std::size_t valuation_pivoted_rank(std::vector<std::vector<PadicScalar>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::vector<bool> row_used(rows.size(), false), col_used(cols, false);
  std::size_t rank = 0;
  while (true) {
    std::size_t pi = 0, pj = 0;
    Valuation best = kInfinite;
    bool found = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j] || rows[i][j].is_zero()) continue;
        Valuation v = rows[i][j].valuation();
        if (!found || v < best) {
          best = v;
          pi = i;
          pj = j;
          found = true;
        }
      }
    }
    if (!found) break;
    ++rank;
    row_used[pi] = true;
    col_used[pj] = true;
    const PadicScalar pivot = rows[pi][pj];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (row_used[i] || rows[i][pj].is_zero()) continue;
      PadicScalar factor = rows[i][pj] / pivot;
      for (std::size_t j = 0; j < cols; ++j)
        if (!col_used[j] || j == pj) rows[i][j] = rows[i][j] - factor * rows[pi][j];
    }
  }
  return rank;
}

std::size_t directional_span_rank(const FunctionExpr& f, std::size_t n,
                                  const std::vector<RankSample>& grid, const Field& field) {
  if (f.output_dim() != 1) throw DimensionMismatch("rank bound is for scalar functions");
  const std::size_t b = f.input_dim();
  const std::size_t per_slot = (std::size_t{1} << b) - 1;
  const std::size_t cols = directional_span_bound(b, n);
  try {
    std::vector<std::vector<PadicScalar>> rows;
    for (const auto& sample : grid) {
      if (sample.x.size() != b || sample.increments.size() != n)
        throw DimensionMismatch("rank sample does not match the function and order");
      std::vector<PadicScalar> row;
      for (std::size_t c = 0; c < cols; ++c) {
        std::vector<PadicVector> dirs;
        std::size_t code = c;
        for (std::size_t slot = 0; slot < n; ++slot) {
          std::size_t mask = code % per_slot + 1;
          code /= per_slot;
          std::vector<mpq_class> d(b);
          for (std::size_t i = 0; i < b; ++i) d[i] = (mask >> i) & 1U;
          dirs.push_back(PadicVector::lift(field, d));
        }
        std::vector<PadicScalar> ts;
        for (const auto& t : sample.increments) ts.push_back(field.lift(t));
        row.push_back(phi(f, PhiPoint(PadicVector::lift(field, sample.x), dirs, ts))[0]);
      }
      rows.push_back(std::move(row));
    }
    return valuation_pivoted_rank(std::move(rows));
  } catch (const PrecisionExhausted& e) {
    throw IndeterminateRank(std::string("rank undecidable at working precision: ") + e.what());
  }
}

}  // namespace ultradiff
