#include "ultradiff/function/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ultradiff {

namespace {

bool all_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const mpq_class& q) { return q == 0; });
}

}  // namespace

MultiPolynomial::MultiPolynomial(std::size_t inputs, std::size_t outputs)
    : inputs_(inputs), outputs_(outputs) {
  if (outputs == 0) throw InvalidArgument("polynomial with no outputs");
}

MultiPolynomial MultiPolynomial::univariate(const RationalVector& coeffs) {
  MultiPolynomial p(1, 1);
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    p.add_term({static_cast<unsigned>(n)}, {coeffs[n]});
  return p;
}

MultiPolynomial MultiPolynomial::univariate_vector(const std::vector<RationalVector>& coeffs) {
  if (coeffs.empty()) throw InvalidArgument("no coefficients");
  MultiPolynomial p(1, coeffs.front().size());
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    p.add_term({static_cast<unsigned>(n)}, coeffs[n]);
  return p;
}

MultiPolynomial MultiPolynomial::constant(std::size_t inputs, const RationalVector& value) {
  MultiPolynomial p(inputs, value.size());
  p.add_term(Exponent(inputs, 0), value);
  return p;
}

MultiPolynomial MultiPolynomial::variable(std::size_t inputs, std::size_t j) {
  if (j >= inputs) throw DimensionMismatch("variable index out of range");
  MultiPolynomial p(inputs, 1);
  Exponent e(inputs, 0);
  e[j] = 1;
  p.add_term(e, {mpq_class(1)});
  return p;
}

MultiPolynomial MultiPolynomial::identity(std::size_t dim) {
  MultiPolynomial p(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    Exponent e(dim, 0);
    e[j] = 1;
    RationalVector c(dim, mpq_class(0));
    c[j] = 1;
    p.add_term(e, c);
  }
  return p;
}

void MultiPolynomial::add_term(const Exponent& e, const RationalVector& coef) {
  if (e.size() != inputs_) throw DimensionMismatch("exponent length differs from input dimension");
  if (coef.size() != outputs_)
    throw DimensionMismatch("coefficient length differs from output dimension");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!all_zero(coef)) terms_.emplace(e, coef);
    return;
  }
  for (std::size_t i = 0; i < outputs_; ++i) it->second[i] += coef[i];
  if (all_zero(it->second)) terms_.erase(it);
}

unsigned MultiPolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0U));
  return d;
}

std::vector<RationalVector> MultiPolynomial::univariate_coefficients() const {
  if (inputs_ != 1) throw DimensionMismatch("polynomial is not univariate");
  std::vector<RationalVector> out(degree() + 1, RationalVector(outputs_, mpq_class(0)));
  for (const auto& [e, c] : terms_) out[e[0]] = c;
  return out;
}

mpq_class MultiPolynomial::max_coefficient_norm(std::uint32_t p) const {
  Field f = Field::exact(p);
  mpq_class best = 0;
  for (const auto& [e, c] : terms_) {
    mpq_class n = PadicVector::lift(f, c).norm();
    if (n > best) best = n;
  }
  return best;
}

PadicVector MultiPolynomial::evaluate(const PadicVector& x) const {
  if (x.dim() != inputs_)
    throw DimensionMismatch("polynomial expects " + std::to_string(inputs_) + " inputs, got " +
                            std::to_string(x.dim()));
  const Field& field = x.field();
  std::vector<unsigned> max_exp(inputs_, 0);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < inputs_; ++i) max_exp[i] = std::max(max_exp[i], e[i]);
  std::vector<std::vector<PadicScalar>> powers(inputs_);
  for (std::size_t i = 0; i < inputs_; ++i) {
    powers[i].push_back(field.one());
    for (unsigned k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * x[i]);
  }
  std::vector<PadicScalar> out(outputs_, field.zero());
  for (const auto& [e, c] : terms_) {
    PadicScalar mono = field.one();
    for (std::size_t i = 0; i < inputs_; ++i)
      if (e[i] > 0) mono = mono * powers[i][e[i]];
    for (std::size_t j = 0; j < outputs_; ++j)
      if (c[j] != 0) out[j] = out[j] + field.lift(c[j]) * mono;
  }
  return PadicVector(field, std::move(out));
}

PadicVector MultiPolynomial::evaluate_horner(const PadicVector& x) const {
  if (inputs_ != 1 || x.dim() != 1) throw DimensionMismatch("Horner evaluation is univariate");
  const Field& field = x.field();
  auto coeffs = univariate_coefficients();
  PadicVector acc = PadicVector::lift(field, coeffs.back());
  for (std::size_t n = coeffs.size() - 1; n-- > 0;)
    acc = x[0] * acc + PadicVector::lift(field, coeffs[n]);
  return acc;
}

MultiPolynomial MultiPolynomial::component(std::size_t i) const {
  if (i >= outputs_) throw DimensionMismatch("component index out of range");
  MultiPolynomial p(inputs_, 1);
  for (const auto& [e, c] : terms_) p.add_term(e, {c[i]});
  return p;
}

MultiPolynomial MultiPolynomial::scaled(const mpq_class& s) const {
  MultiPolynomial p(inputs_, outputs_);
  for (const auto& [e, c] : terms_) {
    RationalVector d = c;
    for (auto& q : d) q *= s;
    p.add_term(e, d);
  }
  return p;
}

MultiPolynomial MultiPolynomial::power(unsigned e) const {
  MultiPolynomial r = constant(inputs_, RationalVector(outputs_, mpq_class(1)));
  for (unsigned k = 0; k < e; ++k) r = r * *this;
  return r;
}

MultiPolynomial MultiPolynomial::composed(const MultiPolynomial& inner) const {
  if (inner.outputs() != inputs_)
    throw DimensionMismatch("inner map dimension differs from polynomial input dimension");
  std::vector<MultiPolynomial> parts;
  for (std::size_t i = 0; i < inputs_; ++i) parts.push_back(inner.component(i));
  std::vector<std::vector<MultiPolynomial>> powers(inputs_);
  MultiPolynomial result(inner.inputs(), outputs_);
  for (const auto& [e, c] : terms_) {
    MultiPolynomial mono = constant(inner.inputs(), {mpq_class(1)});
    for (std::size_t i = 0; i < inputs_; ++i) {
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(inner.inputs(), {mpq_class(1)}));
      while (pw.size() <= e[i]) pw.push_back(pw.back() * parts[i]);
      mono = mono * pw[e[i]];
    }
    result = result + mono * constant(inner.inputs(), c);
  }
  return result;
}

MultiPolynomial MultiPolynomial::shifted(const RationalVector& c) const {
  if (c.size() != inputs_) throw DimensionMismatch("shift dimension");
  MultiPolynomial inner(inputs_, inputs_);
  for (std::size_t j = 0; j < inputs_; ++j) {
    RationalVector unit(inputs_, mpq_class(0));
    unit[j] = 1;
    Exponent e(inputs_, 0);
    e[j] = 1;
    inner.add_term(e, unit);
  }
  inner.add_term(Exponent(inputs_, 0), c);
  return composed(inner);
}

MultiPolynomial MultiPolynomial::affine_precomposed(const RationalVector& c,
                                                     const mpq_class& T) const {
  if (c.size() != inputs_) throw DimensionMismatch("affine center dimension");
  if (T == 0) throw InvalidArgument("affine scale must be nonzero");
  MultiPolynomial inner(inputs_, inputs_);
  RationalVector offset(inputs_);
  for (std::size_t j = 0; j < inputs_; ++j) {
    RationalVector coef(inputs_, mpq_class(0));
    coef[j] = 1 / T;
    Exponent e(inputs_, 0);
    e[j] = 1;
    inner.add_term(e, coef);
    offset[j] = -c[j] / T;
  }
  inner.add_term(Exponent(inputs_, 0), offset);
  return composed(inner);
}

MultiPolynomial operator+(const MultiPolynomial& a, const MultiPolynomial& b) {
  if (a.inputs_ != b.inputs_ || a.outputs_ != b.outputs_)
    throw DimensionMismatch("polynomial sum of mismatched shapes");
  MultiPolynomial r = a;
  for (const auto& [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

MultiPolynomial operator-(const MultiPolynomial& a, const MultiPolynomial& b) {
  return a + b.scaled(-1);
}

MultiPolynomial operator*(const MultiPolynomial& a, const MultiPolynomial& b) {
  if (a.inputs_ != b.inputs_) throw DimensionMismatch("polynomial product input dimensions");
  std::size_t outputs;
  if (a.outputs_ == b.outputs_)
    outputs = a.outputs_;
  else if (a.outputs_ == 1)
    outputs = b.outputs_;
  else if (b.outputs_ == 1)
    outputs = a.outputs_;
  else
    throw DimensionMismatch("polynomial product output dimensions");
  MultiPolynomial r(a.inputs_, outputs);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(a.inputs_);
      for (std::size_t i = 0; i < a.inputs_; ++i) e[i] = ea[i] + eb[i];
      RationalVector c(outputs);
      for (std::size_t j = 0; j < outputs; ++j)
        c[j] = ca[a.outputs_ == 1 ? 0 : j] * cb[b.outputs_ == 1 ? 0 : j];
      r.add_term(e, c);
    }
  }
  return r;
}

std::string MultiPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    if (outputs_ == 1) {
      os << c[0].get_str();
    } else {
      os << "[";
      for (std::size_t j = 0; j < c.size(); ++j) os << (j ? ", " : "") << c[j].get_str();
      os << "]";
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace ultradiff
