#include "ultradiff/gallery/hfamily.hpp"

#include <algorithm>
#include <cmath>

namespace ultradiff {

namespace {

mpq_class p_power(std::uint32_t p, std::int64_t e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, z) : mpq_class(z);
}

std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::int64_t HFamily::exponent(unsigned j, std::int64_t n) const {
  if (j > m) throw InvalidArgument("h index exceeds m");
  const std::int64_t c = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(j) + 1;
  return n * n * c + n;
}

json HFamily::to_json() const { return json{{"m", m}, {"depth", exact_depth}}; }

PadicScalar h_eval(const HFamily& fam, unsigned j, const PadicScalar& y) {
  const Field& field = y.field();
  const std::uint32_t p = field.p();
  if (fam.m < 1) throw InvalidArgument("h family needs m >= 1");
  if (y.is_exact_zero()) return field.zero();

  const std::int64_t c = static_cast<std::int64_t>(fam.m) - static_cast<std::int64_t>(j) + 1;
  const bool exact_backend = field.backend == Backend::ExactRational;
  long last;  // highest digit index read
  if (exact_backend) {
    Valuation v = y.valuation();
    last = static_cast<long>(std::max<Valuation>(0, v)) + static_cast<long>(fam.exact_depth) - 1;
  } else {
    last = static_cast<long>(isqrt(field.precision / c));
    Valuation prec = y.precision();
    if (!is_infinite(prec)) last = std::min<long>(last, static_cast<long>(prec) - 1);
  }
  DigitExpansion d = y.digits(last + 1);
  mpq_class image = 0, read = 0;
  for (std::size_t i = 0; i < d.digits.size(); ++i) {
    if (d.digits[i] == 0) continue;
    const long n = d.start + static_cast<long>(i);
    image += d.digits[i] * p_power(p, fam.exponent(j, n));
    read += d.digits[i] * p_power(p, n);
  }
  if (exact_backend) return PadicScalar(field, image);
  if (y.is_exact() && read == y.to_rational()) return PadicScalar(field, image);
  return PadicScalar::approximate(field, image,
                                  std::min<Valuation>(field.precision, fam.exponent(j, last + 1)));
}

PadicVector h_vector(const HFamily& fam, const PadicScalar& y) {
  std::vector<PadicScalar> out;
  for (unsigned j = 1; j <= fam.m; ++j) out.push_back(h_eval(fam, j, y));
  return PadicVector(y.field(), std::move(out));
}

bool GrowthReport::all_diverge() const {
  return std::all_of(rows.begin(), rows.end(), [](const GrowthRow& r) { return r.diverges; });
}

json GrowthReport::to_json() const {
  json rs = json::array();
  for (const auto& r : rows)
    rs.push_back(json{{"condition", r.condition}, {"j", r.j}, {"n", r.n}, {"gaps", r.gaps},
                      {"diverges", r.diverges}});
  return json{{"m", m}, {"k_max", k_max}, {"vanish_at_zero", vanish_at_zero}, {"rows", rs},
              {"all_diverge", all_diverge()}};
}

GrowthReport h_growth_report(const HFamily& fam, std::uint32_t p, unsigned n_max,
                             unsigned k_max) {
  const Field field = Field::exact(p);
  GrowthReport r;
  r.m = fam.m;
  r.k_max = k_max;
  r.vanish_at_zero = true;
  for (unsigned j = 0; j <= fam.m; ++j)
    if (!h_eval(fam, j, field.zero()).is_exact_zero()) r.vanish_at_zero = false;

  // vals[k-1][j] = val h_j(p^k)
  std::vector<std::vector<Valuation>> vals;
  for (unsigned k = 1; k <= k_max; ++k) {
    PadicScalar y = field.uniformizer_power(static_cast<long>(k));
    std::vector<Valuation> row;
    for (unsigned j = 0; j <= fam.m; ++j) row.push_back(h_eval(fam, j, y).valuation());
    vals.push_back(std::move(row));
  }
  auto finish = [](GrowthRow& row) {
    bool increasing = true;
    for (std::size_t i = row.gaps.size() / 2 + 1; i < row.gaps.size(); ++i)
      if (row.gaps[i] <= row.gaps[i - 1]) increasing = false;
    row.diverges = increasing && !row.gaps.empty() && row.gaps.back() > 0;
  };
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned j = 1; j <= fam.m; ++j) {
      GrowthRow row{"ratio", j, n, {}, false};
      for (unsigned k = 1; k <= k_max; ++k)
        row.gaps.push_back(vals[k - 1][j - 1] - static_cast<Valuation>(n) * vals[k - 1][j]);
      finish(row);
      r.rows.push_back(std::move(row));
    }
    GrowthRow tail{"tail", fam.m, n, {}, false};
    for (unsigned k = 1; k <= k_max; ++k)
      tail.gaps.push_back(vals[k - 1][fam.m] - static_cast<Valuation>(n) * static_cast<Valuation>(k));
    finish(tail);
    r.rows.push_back(std::move(tail));
  }
  return r;
}

}  // namespace ultradiff
