#pragma once

#include "ultradiff/field/json.hpp"
#include "ultradiff/field/vector.hpp"

namespace ultradiff {

// Digit-reindexing maps h_0..h_m: y = sum a_n p^n goes to
// sum a_n p^(n^2 (m - j + 1) + n). The exponent grows quadratically, so
// h_{j-1} is much smaller than h_j near 0.
struct HFamily {
  unsigned m = 1;
  // Exact backend: number of digits of y read past its leading one.
  unsigned exact_depth = 40;

  // p-adic exponent that digit n of y is sent to by h_j.
  std::int64_t exponent(unsigned j, std::int64_t n) const;
  json to_json() const;
};

// h_j(y). In the truncated backend digits up to floor(sqrt(N / (m - j + 1)))
// are read (and no further than y's own precision); the result carries
// the precision at which the first unread digit would land.
PadicScalar h_eval(const HFamily& fam, unsigned j, const PadicScalar& y);
// (h_1(y), .., h_m(y))
PadicVector h_vector(const HFamily& fam, const PadicScalar& y);

// Growth of val(h_{j-1}(y)) - n val(h_j(y)) and val(h_m(y)) - n val(y)
// along y = p^k. Values are computed exactly.
struct GrowthRow {
  std::string condition;  // "ratio" (consecutive maps) or "tail" (h_m against y)
  unsigned j = 0;
  unsigned n = 0;
  std::vector<std::int64_t> gaps;  // one per k = 1..k_max
  bool diverges = false;           // strictly increasing over the last half, final gap positive
};

struct GrowthReport {
  unsigned m = 1;
  unsigned k_max = 0;
  bool vanish_at_zero = false;
  std::vector<GrowthRow> rows;
  bool all_diverge() const;
  json to_json() const;
};

GrowthReport h_growth_report(const HFamily& fam, std::uint32_t p, unsigned n_max = 4,
                             unsigned k_max = 8);

}  // namespace ultradiff
