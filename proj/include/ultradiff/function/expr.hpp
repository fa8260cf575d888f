#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ultradiff/field/json.hpp"
#include "ultradiff/function/polynomial.hpp"

namespace ultradiff {

// Named constructions (the counterexample gallery) plug into expressions
// through this interface.
class GalleryFunction {
 public:
  virtual ~GalleryFunction() = default;
  virtual std::string name() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual PadicVector eval(const PadicVector& x) const = 0;
  virtual json params() const = 0;
  // Points approaching `center` along which the construction behaves
  // interestingly, such as a discontinuity witness. Empty by default.
  virtual std::vector<RationalVector> approach_hints(const RationalVector& center,
                                                     unsigned count, std::uint32_t p) const;
};

class FunctionExpr {
 public:
  enum class Kind {
    Poly,
    BallIndicator,
    Sum,
    Product,
    Scale,
    Shift,
    AffinePrecompose,
    Compose,
    Reciprocal,
    Gallery
  };

  FunctionExpr() = default;

  static FunctionExpr poly(MultiPolynomial p);
  static FunctionExpr ball_indicator(Ball b);
  static FunctionExpr sum(std::vector<FunctionExpr> terms);
  static FunctionExpr product(FunctionExpr a, FunctionExpr b);
  // x -> c * f(x)
  static FunctionExpr scale(const mpq_class& c, FunctionExpr f);
  // x -> f(x + c)
  static FunctionExpr shift(RationalVector c, FunctionExpr f);
  // x -> f((x - c) / T)
  static FunctionExpr affine_precompose(RationalVector c, const mpq_class& T, FunctionExpr f);
  // x -> outer(inner(x))
  static FunctionExpr compose(FunctionExpr outer, FunctionExpr inner);
  // x -> 1 / f(x), componentwise; undefined where f vanishes.
  static FunctionExpr reciprocal(FunctionExpr f);
  static FunctionExpr gallery(std::shared_ptr<const GalleryFunction> g);

  static FunctionExpr constant(std::size_t inputs, const RationalVector& value);
  static FunctionExpr identity(std::size_t dim);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  const std::vector<FunctionExpr>& children() const;
  const MultiPolynomial& polynomial() const;
  const Ball& ball() const;
  const mpq_class& factor() const;
  const RationalVector& offset() const;
  std::shared_ptr<const GalleryFunction> gallery_function() const;

  PadicVector eval(const PadicVector& x) const;
  PadicScalar eval_scalar(const PadicVector& x) const;

  // Polynomial form when the tree is built only from polynomial pieces.
  std::optional<MultiPolynomial> to_polynomial() const;
  bool contains_kind(Kind k) const;
  std::vector<RationalVector> approach_hints(const RationalVector& center, unsigned count,
                                            std::uint32_t p) const;

  std::string describe() const;
  json to_json() const;

  using GalleryResolver = std::function<FunctionExpr(const std::string&, const json&)>;
  static FunctionExpr from_json(const json& j, const GalleryResolver& resolver = nullptr);

 private:
  struct Node;
  explicit FunctionExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

// Component i of a vector-valued expression, as a scalar expression.
FunctionExpr component(const FunctionExpr& f, std::size_t i);

enum class CurveTag { Polynomial, LocallyAnalytic, Patchwork, LocallyConstant };
std::string curve_tag_name(CurveTag t);

// A map K -> K^m with a declared smoothness tag.
class Curve {
 public:
  Curve() = default;

  // u(t) = sum coeffs[n] t^n with coeffs[n] in Q^m.
  static Curve polynomial(const std::vector<RationalVector>& coeffs);
  // u(t) = a t + b.
  static Curve affine(const RationalVector& a, const RationalVector& b);
  // Checks that the tag is consistent with the expression's node kinds.
  static Curve tagged(FunctionExpr expr, CurveTag tag);

  const FunctionExpr& expr() const { return expr_; }
  CurveTag tag() const { return tag_; }
  std::size_t dim() const { return expr_.output_dim(); }
  PadicVector eval(const PadicScalar& t) const;

 private:
  Curve(FunctionExpr e, CurveTag t) : expr_(std::move(e)), tag_(t) {}
  FunctionExpr expr_;
  CurveTag tag_ = CurveTag::Polynomial;
};

FunctionExpr compose(const FunctionExpr& f, const Curve& u);

}  // namespace ultradiff
