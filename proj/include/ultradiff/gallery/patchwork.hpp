#pragma once

#include "ultradiff/field/sampling.hpp"
#include "ultradiff/function/expr.hpp"
#include "ultradiff/gallery/thm41.hpp"

namespace ultradiff {

// Truncated sum of disjointly supported pieces
//   u_j(h) = xi_j((h - x_j) / T_j) * [ |h - x_j| <= |p T_j| ]
// with T_j = p^sigma(j), c_j = T_j^j, x_j = p^-1 (T_1 + .. + T_{j-1}) + T_j and
// xi_j(s) = z_j + c_j sum_{k1,k2 <= 2} a_{k1,k2} s^(k1+k2).
struct PatchworkParams {
  unsigned pieces = 3;
  std::size_t dim = 2;
  std::vector<std::int64_t> sigma;             // empty: sigma(j) = j^2
  std::vector<RationalVector> anchors;         // z_j; empty: all zero
  std::vector<RationalVector> coefficients;    // a_{k1,k2} at index 3 k1 + k2; empty: all ones

  static constexpr unsigned kMaxPieces = 6;

  std::int64_t sigma_at(unsigned j) const;
  json to_json() const;
  static PatchworkParams from_json(const json& j);
};

class PatchworkCurve {
 public:
  // Validates the parameters; throws InvalidArgument on a bad scale sequence,
  // out-of-range anchors or coefficients, or too many pieces.
  PatchworkCurve(PatchworkParams params, std::uint32_t p);

  const PatchworkParams& params() const { return params_; }
  std::uint32_t prime() const { return p_; }
  unsigned pieces() const { return params_.pieces; }
  // 1-based piece index throughout.
  const mpq_class& center(unsigned j) const { return centers_.at(j - 1); }
  const mpq_class& scale(unsigned j) const { return scales_.at(j - 1); }
  const mpq_class& coefficient(unsigned j) const { return coeffs_.at(j - 1); }
  Ball support(unsigned j) const;
  // The point the centers accumulate toward: p^-1 (T_1 + .. + T_J).
  const mpq_class& limit_point() const { return limit_; }

  const FunctionExpr& expr() const { return expr_; }
  Curve curve() const { return Curve::tagged(expr_, CurveTag::Patchwork); }

  // |x_j - x_k| > max(|T_j|, |T_k|) for all j != k, and the support balls are
  // pairwise disjoint.
  bool supports_disjoint() const;
  // Largest number of supports containing any of `samples` random points
  // drawn around the centers.
  std::size_t max_overlap(std::size_t samples, Rng& rng) const;

 private:
  PatchworkParams params_;
  std::uint32_t p_;
  std::vector<mpq_class> centers_, scales_, coeffs_;
  mpq_class limit_;
  FunctionExpr expr_;
};

class PatchworkFunction : public GalleryFunction {
 public:
  PatchworkFunction(PatchworkParams params, std::uint32_t p, FunctionExpr tree)
      : params_(std::move(params)), p_(p), tree_(std::move(tree)) {}

  std::string name() const override { return "patchwork"; }
  std::size_t input_dim() const override { return 1; }
  std::size_t output_dim() const override { return params_.dim; }
  PadicVector eval(const PadicVector& h) const override { return tree_.eval(h); }
  json params() const override;
  // The piece centers, which accumulate at the limit point.
  std::vector<RationalVector> approach_hints(const RationalVector& center, unsigned count,
                                             std::uint32_t p) const override;

 private:
  PatchworkParams params_;
  std::uint32_t p_;
  FunctionExpr tree_;
};

struct PatchworkBoundReport {
  std::size_t order = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t indeterminate = 0;
  // Largest measured |quotient| divided by the bound.
  mpq_class worst_ratio = 0;
  json to_json() const;
};

// Compares |Upsilon^q u| against |c_j| |T_j|^-q (q+1) p^q V_q^-q with
// V_q = min_{i<=q} |T_i|, at points whose base lies in piece j's support,
// whose other coordinates have norm <= 1, and whose increments are nonzero
// with norm <= |T_j|.
PatchworkBoundReport patchwork_bound_check(const PatchworkCurve& u, std::size_t order,
                                           std::size_t samples_per_piece, const Field& field,
                                           Rng& rng);

// Patchwork curve into K^(m+1) whose piece centers are sent to the witness
// points (h(p^k), p^k) at k = j^2, using sigma(j) = j and a_{0,0} = 0.
PatchworkParams witness_patchwork_params(const CounterexampleF& cf, unsigned pieces,
                                         std::uint32_t p);

}  // namespace ultradiff
