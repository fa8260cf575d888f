#include "ultradiff/function/expr.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ultradiff {

std::vector<RationalVector> GalleryFunction::approach_hints(const RationalVector&, unsigned,
                                                            std::uint32_t) const {
  return {};
}

struct FunctionExpr::Node {
  Kind kind = Kind::Poly;
  std::size_t in = 0;
  std::size_t out = 0;
  MultiPolynomial poly;
  Ball ball;
  std::vector<FunctionExpr> children;
  mpq_class factor;
  RationalVector offset;
  std::shared_ptr<const GalleryFunction> gallery;
};

namespace {

std::string rationals_to_string(const RationalVector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
  os << "]";
  return os.str();
}

json rationals_to_json(const RationalVector& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(q.get_str());
  return a;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument("expected an object, got " + j.dump());
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw InvalidArgument("unknown key \"" + key + "\" in function spec");
}

const json& required(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::size_t size_value(const json& j, const char* key) {
  const json& v = required(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
    throw InvalidArgument(std::string("\"") + key + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

const FunctionExpr::Node& FunctionExpr::node() const {
  if (!node_) throw InvalidArgument("empty function expression");
  return *node_;
}

FunctionExpr FunctionExpr::poly(MultiPolynomial p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Poly;
  n->in = p.inputs();
  n->out = p.outputs();
  n->poly = std::move(p);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::ball_indicator(Ball b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::BallIndicator;
  n->in = b.dim();
  n->out = 1;
  n->ball = std::move(b);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::sum(std::vector<FunctionExpr> terms) {
  if (terms.empty()) throw InvalidArgument("empty sum");
  for (const auto& t : terms)
    if (t.input_dim() != terms[0].input_dim() || t.output_dim() != terms[0].output_dim())
      throw DimensionMismatch("sum of functions with different shapes");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->in = terms[0].input_dim();
  n->out = terms[0].output_dim();
  n->children = std::move(terms);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::product(FunctionExpr a, FunctionExpr b) {
  if (a.input_dim() != b.input_dim()) throw DimensionMismatch("product input dimensions");
  std::size_t out;
  if (a.output_dim() == b.output_dim() || b.output_dim() == 1)
    out = a.output_dim();
  else if (a.output_dim() == 1)
    out = b.output_dim();
  else
    throw DimensionMismatch("product output dimensions");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->in = a.input_dim();
  n->out = out;
  n->children = {std::move(a), std::move(b)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::scale(const mpq_class& c, FunctionExpr f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scale;
  n->in = f.input_dim();
  n->out = f.output_dim();
  n->factor = c;
  n->children = {std::move(f)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::shift(RationalVector c, FunctionExpr f) {
  if (c.size() != f.input_dim()) throw DimensionMismatch("shift dimension");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Shift;
  n->in = f.input_dim();
  n->out = f.output_dim();
  n->offset = std::move(c);
  n->children = {std::move(f)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::affine_precompose(RationalVector c, const mpq_class& T, FunctionExpr f) {
  if (c.size() != f.input_dim()) throw DimensionMismatch("affine center dimension");
  if (T == 0) throw InvalidArgument("affine scale must be nonzero");
  auto n = std::make_shared<Node>();
  n->kind = Kind::AffinePrecompose;
  n->in = f.input_dim();
  n->out = f.output_dim();
  n->offset = std::move(c);
  n->factor = T;
  n->children = {std::move(f)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::compose(FunctionExpr outer, FunctionExpr inner) {
  if (inner.output_dim() != outer.input_dim())
    throw DimensionMismatch("composition: inner output dimension " +
                            std::to_string(inner.output_dim()) + " vs outer input dimension " +
                            std::to_string(outer.input_dim()));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compose;
  n->in = inner.input_dim();
  n->out = outer.output_dim();
  n->children = {std::move(outer), std::move(inner)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::reciprocal(FunctionExpr f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Reciprocal;
  n->in = f.input_dim();
  n->out = f.output_dim();
  n->children = {std::move(f)};
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::gallery(std::shared_ptr<const GalleryFunction> g) {
  if (!g) throw InvalidArgument("null gallery function");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Gallery;
  n->in = g->input_dim();
  n->out = g->output_dim();
  n->gallery = std::move(g);
  return FunctionExpr(n);
}

FunctionExpr FunctionExpr::constant(std::size_t inputs, const RationalVector& value) {
  return poly(MultiPolynomial::constant(inputs, value));
}

FunctionExpr FunctionExpr::identity(std::size_t dim) {
  return poly(MultiPolynomial::identity(dim));
}

FunctionExpr::Kind FunctionExpr::kind() const { return node().kind; }
std::size_t FunctionExpr::input_dim() const { return node().in; }
std::size_t FunctionExpr::output_dim() const { return node().out; }
const std::vector<FunctionExpr>& FunctionExpr::children() const { return node().children; }
const MultiPolynomial& FunctionExpr::polynomial() const { return node().poly; }
const Ball& FunctionExpr::ball() const { return node().ball; }
const mpq_class& FunctionExpr::factor() const { return node().factor; }
const RationalVector& FunctionExpr::offset() const { return node().offset; }
std::shared_ptr<const GalleryFunction> FunctionExpr::gallery_function() const {
  return node().gallery;
}

PadicVector FunctionExpr::eval(const PadicVector& x) const {
  const Node& n = node();
  if (x.dim() != n.in)
    throw DimensionMismatch("function expects " + std::to_string(n.in) + " inputs, got " +
                            std::to_string(x.dim()));
  const Field& field = x.field();
  switch (n.kind) {
    case Kind::Poly:
      return n.poly.evaluate(x);
    case Kind::BallIndicator:
      return PadicVector::scalar(n.ball.contains(x) ? field.one() : field.zero());
    case Kind::Sum: {
      PadicVector acc = n.children[0].eval(x);
      for (std::size_t i = 1; i < n.children.size(); ++i) acc = acc + n.children[i].eval(x);
      return acc;
    }
    case Kind::Product:
      return n.children[0].eval(x) * n.children[1].eval(x);
    case Kind::Scale:
      return field.lift(n.factor) * n.children[0].eval(x);
    case Kind::Shift:
      return n.children[0].eval(x + PadicVector::lift(field, n.offset));
    case Kind::AffinePrecompose:
      return n.children[0].eval((x - PadicVector::lift(field, n.offset)) / field.lift(n.factor));
    case Kind::Compose:
      return n.children[0].eval(n.children[1].eval(x));
    case Kind::Reciprocal: {
      PadicVector v = n.children[0].eval(x);
      std::vector<PadicScalar> out;
      for (const auto& e : v.entries()) {
        if (e.is_exact_zero()) throw DomainError("reciprocal of zero");
        if (e.is_zero()) throw PrecisionExhausted("reciprocal of a value indistinguishable from zero");
        out.push_back(field.one() / e);
      }
      return PadicVector(field, std::move(out));
    }
    case Kind::Gallery:
      return n.gallery->eval(x);
  }
  throw InvalidArgument("unknown expression kind");
}

PadicScalar FunctionExpr::eval_scalar(const PadicVector& x) const {
  if (output_dim() != 1) throw DimensionMismatch("expected a scalar-valued function");
  return eval(x)[0];
}

std::optional<MultiPolynomial> FunctionExpr::to_polynomial() const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Poly:
      return n.poly;
    case Kind::Sum: {
      auto acc = n.children[0].to_polynomial();
      for (std::size_t i = 1; acc && i < n.children.size(); ++i) {
        auto t = n.children[i].to_polynomial();
        if (!t) return std::nullopt;
        acc = *acc + *t;
      }
      return acc;
    }
    case Kind::Product: {
      auto a = n.children[0].to_polynomial();
      auto b = n.children[1].to_polynomial();
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case Kind::Scale: {
      auto a = n.children[0].to_polynomial();
      if (!a) return std::nullopt;
      return a->scaled(n.factor);
    }
    case Kind::Shift: {
      auto a = n.children[0].to_polynomial();
      if (!a) return std::nullopt;
      return a->shifted(n.offset);
    }
    case Kind::AffinePrecompose: {
      auto a = n.children[0].to_polynomial();
      if (!a) return std::nullopt;
      return a->affine_precomposed(n.offset, n.factor);
    }
    case Kind::Compose: {
      auto outer = n.children[0].to_polynomial();
      auto inner = n.children[1].to_polynomial();
      if (!outer || !inner) return std::nullopt;
      return outer->composed(*inner);
    }
    default:
      return std::nullopt;
  }
}

bool FunctionExpr::contains_kind(Kind k) const {
  const Node& n = node();
  if (n.kind == k) return true;
  return std::any_of(n.children.begin(), n.children.end(),
                     [k](const FunctionExpr& c) { return c.contains_kind(k); });
}

std::vector<RationalVector> FunctionExpr::approach_hints(const RationalVector& center,
                                                         unsigned count, std::uint32_t p) const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Gallery:
      return n.gallery->approach_hints(center, count, p);
    case Kind::Compose:
      // Interesting points of the composite come from the inner map.
      return n.children[1].approach_hints(center, count, p);
    case Kind::Sum:
    case Kind::Product:
    case Kind::Scale: {
      std::vector<RationalVector> out;
      for (const auto& c : n.children) {
        auto h = c.approach_hints(center, count, p);
        out.insert(out.end(), h.begin(), h.end());
      }
      return out;
    }
    default:
      return {};
  }
}

std::string FunctionExpr::describe() const {
  const Node& n = node();
  switch (n.kind) {
    case Kind::Poly:
      return "poly(" + n.poly.to_string() + ")";
    case Kind::BallIndicator:
      return "ball(" + rationals_to_string(n.ball.center()) + ", val>=" +
             std::to_string(n.ball.min_valuation()) + ")";
    case Kind::Sum: {
      std::string s = "sum(";
      for (std::size_t i = 0; i < n.children.size(); ++i)
        s += (i ? ", " : "") + n.children[i].describe();
      return s + ")";
    }
    case Kind::Product:
      return "product(" + n.children[0].describe() + ", " + n.children[1].describe() + ")";
    case Kind::Scale:
      return "scale(" + n.factor.get_str() + ", " + n.children[0].describe() + ")";
    case Kind::Shift:
      return "shift(" + rationals_to_string(n.offset) + ", " + n.children[0].describe() + ")";
    case Kind::AffinePrecompose:
      return "affine(" + rationals_to_string(n.offset) + ", " + n.factor.get_str() + ", " +
             n.children[0].describe() + ")";
    case Kind::Compose:
      return "compose(" + n.children[0].describe() + ", " + n.children[1].describe() + ")";
    case Kind::Reciprocal:
      return "reciprocal(" + n.children[0].describe() + ")";
    case Kind::Gallery:
      return n.gallery->name() + n.gallery->params().dump();
  }
  return "?";
}

json FunctionExpr::to_json() const {
  const Node& n = node();
  json j;
  switch (n.kind) {
    case Kind::Poly: {
      j["kind"] = "poly";
      j["inputs"] = n.poly.inputs();
      j["outputs"] = n.poly.outputs();
      json terms = json::array();
      for (const auto& [e, c] : n.poly.terms())
        terms.push_back(json{{"exp", e}, {"coef", rationals_to_json(c)}});
      j["terms"] = terms;
      break;
    }
    case Kind::BallIndicator:
      j["kind"] = "ball_indicator";
      j["center"] = rationals_to_json(n.ball.center());
      j["min_valuation"] = n.ball.min_valuation();
      break;
    case Kind::Sum: {
      j["kind"] = "sum";
      json c = json::array();
      for (const auto& ch : n.children) c.push_back(ch.to_json());
      j["children"] = c;
      break;
    }
    case Kind::Product:
      j["kind"] = "product";
      j["children"] = json::array({n.children[0].to_json(), n.children[1].to_json()});
      break;
    case Kind::Scale:
      j["kind"] = "scale";
      j["factor"] = n.factor.get_str();
      j["child"] = n.children[0].to_json();
      break;
    case Kind::Shift:
      j["kind"] = "shift";
      j["offset"] = rationals_to_json(n.offset);
      j["child"] = n.children[0].to_json();
      break;
    case Kind::AffinePrecompose:
      j["kind"] = "affine_precompose";
      j["center"] = rationals_to_json(n.offset);
      j["scale"] = n.factor.get_str();
      j["child"] = n.children[0].to_json();
      break;
    case Kind::Compose:
      j["kind"] = "compose";
      j["outer"] = n.children[0].to_json();
      j["inner"] = n.children[1].to_json();
      break;
    case Kind::Reciprocal:
      j["kind"] = "reciprocal";
      j["child"] = n.children[0].to_json();
      break;
    case Kind::Gallery:
      j["kind"] = "gallery";
      j["name"] = n.gallery->name();
      j["params"] = n.gallery->params();
      break;
  }
  return j;
}

FunctionExpr FunctionExpr::from_json(const json& j, const GalleryResolver& resolver) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw InvalidArgument("function spec needs a string \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto child = [&](const char* key) { return from_json(required(j, key), resolver); };
  if (kind == "poly") {
    if (j.contains("univariate")) {
      check_keys(j, {"kind", "univariate"});
      const json& u = j.at("univariate");
      if (!u.is_array() || u.empty()) throw InvalidArgument("\"univariate\" must be a nonempty array");
      if (u[0].is_array()) {
        std::vector<RationalVector> coeffs;
        for (const auto& c : u) coeffs.push_back(rationals_from_json(c));
        return poly(MultiPolynomial::univariate_vector(coeffs));
      }
      return poly(MultiPolynomial::univariate(rationals_from_json(u)));
    }
    check_keys(j, {"kind", "inputs", "outputs", "terms"});
    MultiPolynomial p(size_value(j, "inputs"), size_value(j, "outputs"));
    const json& terms = required(j, "terms");
    if (!terms.is_array()) throw InvalidArgument("\"terms\" must be an array");
    for (const auto& t : terms) {
      check_keys(t, {"exp", "coef"});
      p.add_term(required(t, "exp").get<Exponent>(), rationals_from_json(required(t, "coef")));
    }
    return poly(std::move(p));
  }
  if (kind == "ball_indicator") {
    check_keys(j, {"kind", "center", "min_valuation"});
    return ball_indicator(Ball(rationals_from_json(required(j, "center")),
                               required(j, "min_valuation").get<Valuation>()));
  }
  if (kind == "sum") {
    check_keys(j, {"kind", "children"});
    std::vector<FunctionExpr> terms;
    for (const auto& c : required(j, "children")) terms.push_back(from_json(c, resolver));
    return sum(std::move(terms));
  }
  if (kind == "product") {
    check_keys(j, {"kind", "children"});
    const json& c = required(j, "children");
    if (!c.is_array() || c.size() != 2) throw InvalidArgument("product takes two children");
    return product(from_json(c[0], resolver), from_json(c[1], resolver));
  }
  if (kind == "scale") {
    check_keys(j, {"kind", "factor", "child"});
    return scale(rational_from_json(required(j, "factor")), child("child"));
  }
  if (kind == "shift") {
    check_keys(j, {"kind", "offset", "child"});
    return shift(rationals_from_json(required(j, "offset")), child("child"));
  }
  if (kind == "affine_precompose") {
    check_keys(j, {"kind", "center", "scale", "child"});
    return affine_precompose(rationals_from_json(required(j, "center")),
                             rational_from_json(required(j, "scale")), child("child"));
  }
  if (kind == "compose") {
    check_keys(j, {"kind", "outer", "inner"});
    return compose(child("outer"), child("inner"));
  }
  if (kind == "reciprocal") {
    check_keys(j, {"kind", "child"});
    return reciprocal(child("child"));
  }
  if (kind == "gallery") {
    check_keys(j, {"kind", "name", "params"});
    if (!resolver) throw InvalidArgument("gallery items need a resolver");
    return resolver(required(j, "name").get<std::string>(),
                    j.contains("params") ? j.at("params") : json::object());
  }
  throw InvalidArgument("unknown function kind \"" + kind + "\"");
}

FunctionExpr component(const FunctionExpr& f, std::size_t i) {
  if (f.output_dim() == 1 && i == 0) return f;
  return FunctionExpr::compose(FunctionExpr::poly(MultiPolynomial::variable(f.output_dim(), i)), f);
}

std::string curve_tag_name(CurveTag t) {
  switch (t) {
    case CurveTag::Polynomial: return "polynomial";
    case CurveTag::LocallyAnalytic: return "locally-analytic";
    case CurveTag::Patchwork: return "patchwork";
    case CurveTag::LocallyConstant: return "locally-constant";
  }
  return "?";
}

Curve Curve::polynomial(const std::vector<RationalVector>& coeffs) {
  return Curve(FunctionExpr::poly(MultiPolynomial::univariate_vector(coeffs)),
               CurveTag::Polynomial);
}

Curve Curve::affine(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("affine curve coefficient dimensions");
  return polynomial({b, a});
}

namespace {

bool leaves_are_constant(const FunctionExpr& f) {
  using K = FunctionExpr::Kind;
  switch (f.kind()) {
    case K::Poly:
      return f.polynomial().degree() == 0;
    case K::Gallery:
      return false;
    case K::Compose:
      // A locally constant inner map makes the composite locally constant.
      return leaves_are_constant(f.children()[1]);
    default:
      return std::all_of(f.children().begin(), f.children().end(), leaves_are_constant);
  }
}

}  // namespace

Curve Curve::tagged(FunctionExpr expr, CurveTag tag) {
  using K = FunctionExpr::Kind;
  if (expr.input_dim() != 1) throw DimensionMismatch("a curve has one input");
  bool ok = false;
  switch (tag) {
    case CurveTag::Polynomial:
      ok = expr.to_polynomial().has_value();
      break;
    case CurveTag::LocallyAnalytic:
      ok = !expr.contains_kind(K::BallIndicator) && !expr.contains_kind(K::Gallery);
      break;
    case CurveTag::LocallyConstant:
      ok = leaves_are_constant(expr);
      break;
    case CurveTag::Patchwork:
      ok = expr.kind() == K::Gallery && expr.gallery_function()->name() == "patchwork";
      break;
  }
  if (!ok)
    throw InvalidArgument("curve tag \"" + curve_tag_name(tag) + "\" inconsistent with " +
                          expr.describe());
  return Curve(std::move(expr), tag);
}

PadicVector Curve::eval(const PadicScalar& t) const { return expr_.eval(PadicVector::scalar(t)); }

FunctionExpr compose(const FunctionExpr& f, const Curve& u) {
  return FunctionExpr::compose(f, u.expr());
}

}  // namespace ultradiff
