#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultradiff/field/sampling.hpp"
#include "ultradiff/function/expr.hpp"

namespace ultradiff {

enum class Verdict { ContinuousExtension, LocallyBounded, Unbounded, Indeterminate };
std::string verdict_name(Verdict v);
// ContinuousExtension < Indeterminate < LocallyBounded < Unbounded.
Verdict worse(Verdict a, Verdict b);

struct ProbeConfig {
  std::size_t order = 1;
  Ball region{{mpq_class(0)}, 0};
  // Increment grid t_j = p^j for j = j0..j1.
  long j0 = 1;
  long j1 = 8;
  std::size_t samples = 6;
  // Required valuation growth per grid step.
  long delta = 1;
  std::uint64_t seed = 1;
  // Norms beyond p^ceiling along a refining sequence count as unbounded.
  long ceiling = 6;
  // Number of construction-supplied approach points to try.
  unsigned hints = 8;

  void validate(std::size_t input_dim) const;
  json to_json() const;
  // Strict: unknown keys throw InvalidArgument. Missing keys keep defaults.
  static ProbeConfig from_json(const json& j);
};

struct Witness {
  std::string kind;
  std::size_t order = 0;
  std::vector<json> points;
  std::vector<mpq_class> norms;
  std::string detail;
  json to_json() const;
};

struct ProbeRow {
  std::string stage;
  std::size_t order = 0;
  std::size_t sample = 0;
  long step = 0;
  std::string norm;        // norm of the probed value, or "indeterminate"
  std::string difference;  // valuation of the step-to-step difference
};

struct LipschitzFit {
  mpq_class r = 1;
  mpq_class C = 0;
  bool degenerate = false;
  std::size_t samples = 0;
  // Smallest slack val(diff) - (r val(y) - log_p C) over all samples; never
  // negative by construction.
  Valuation min_slack = kInfinite;
  std::vector<Witness> binding;  // samples with zero slack
  json to_json() const;
};

struct CnNorm {
  std::optional<mpq_class> value;  // empty when growth was detected
  std::vector<mpq_class> sup_per_order;
  mpq_class lipschitz_constant = 0;
  json to_json() const;
};

struct SmoothnessReport {
  std::string function;
  std::size_t order = 0;
  std::vector<Verdict> verdicts;  // index k = 0..order, monotone in k
  std::vector<Verdict> raw_verdicts;
  std::vector<Witness> witnesses;
  std::optional<LipschitzFit> lipschitz;
  std::optional<CnNorm> norm;
  json config;
  std::vector<ProbeRow> rows;
  std::size_t indeterminate_samples = 0;

  json to_json() const;
  std::string to_csv() const;
};

// Cauchy test of difference quotients along the geometric increment grid,
// over equal increments, randomized increments and (order 0) construction
// hints. Verdicts are made monotone in the order.
SmoothnessReport continuity_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                  const Field& field);

struct BoundednessResult {
  Verdict verdict = Verdict::LocallyBounded;
  mpq_class bound = 0;
  std::optional<Witness> witness;
  std::size_t indeterminate = 0;
  json to_json() const;
};

// Max norm of the order-n quotient over the probe grid, plus refining
// sequences x_j = c + p^j u toward the region center and the construction
// hints. Unbounded when a sequence's norms grow strictly past p^ceiling.
BoundednessResult local_boundedness_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                          const Field& field);

// Pairs (x, x + y) with x in the region and val(y) spanning j0..j1; y is a
// unit-sphere vector scaled by p^k, or a multiple of `direction` when given.
LipschitzFit lipschitz_fit(const FunctionExpr& f, const ProbeConfig& cfg, const Field& field,
                           const std::optional<RationalVector>& direction = std::nullopt);

struct DirectionalResult {
  bool converges = false;
  bool indeterminate = false;
  std::vector<Valuation> sup_valuations;  // per grid step, min over bases
  std::optional<Witness> witness;
  json to_json() const;
};

// sup_x |f(x + p^j v) - f(x)| -> 0 along the grid. Bases are region samples
// plus q - p^j v for each construction hint q, unless `bases` is given.
DirectionalResult directional_continuity_probe(const FunctionExpr& f, const RationalVector& v,
                                               const ProbeConfig& cfg, const Field& field,
                                               const std::vector<RationalVector>& bases = {});

// max(C, sup over k <= n of |quotient of order k|) with unit-sphere
// directions and increments of norm <= 1 from the grid.
CnNorm cn_norm_estimate(const FunctionExpr& f, std::size_t n, const ProbeConfig& cfg,
                        const Field& field);

// Continuity, boundedness, Lipschitz fit and norm in one report.
SmoothnessReport smoothness_probe(const FunctionExpr& f, const ProbeConfig& cfg,
                                  const Field& field);

struct BomanCurve {
  std::string name;
  Curve curve;
  mpq_class center = 0;
  Valuation min_valuation = 2;
};

struct BomanEntry {
  std::string curve;
  std::string tag;
  SmoothnessReport report;
  bool smooth = false;
};

struct BomanReport {
  SmoothnessReport direct;
  bool direct_smooth = false;
  std::vector<BomanEntry> compositions;
  bool all_compositions_smooth = false;
  // Every sampled composition looks smooth but f itself does not.
  bool hypothesis_gap = false;
  bool consistent = false;
  std::string note;
  json to_json() const;
};

BomanReport boman_experiment(const FunctionExpr& f, const std::vector<BomanCurve>& curves,
                             const ProbeConfig& cfg, const Field& field);

}  // namespace ultradiff
