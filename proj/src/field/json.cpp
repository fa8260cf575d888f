#include "ultradiff/field/json.hpp"

namespace ultradiff {

json valuation_to_json(Valuation v) {
  if (is_infinite(v)) return "inf";
  return v;
}

json rational_to_json(const mpq_class& q) {
  return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

json scalar_to_json(const PadicScalar& s) {
  if (s.backend() == Backend::ExactRational) return rational_to_json(s.to_rational());
  json out;
  out["p"] = s.field().p();
  Valuation v = s.valuation();
  out["val"] = valuation_to_json(v);
  json digits = json::array();
  if (!is_infinite(v)) {
    Valuation prec = s.precision();
    long upto = is_infinite(prec) ? static_cast<long>(v + s.field().precision)
                                  : static_cast<long>(prec);
    DigitExpansion d = s.digits(upto);
    for (std::size_t i = 0; i < d.digits.size(); ++i)
      if (d.start + static_cast<long>(i) >= v) digits.push_back(d.digits[i]);
  }
  out["digits"] = digits;
  return out;
}

json vector_to_json(const PadicVector& v) {
  json out = json::array();
  for (const auto& e : v.entries()) out.push_back(scalar_to_json(e));
  return out;
}

mpq_class rational_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) {
      mpq_class q(j.get<std::string>(), 10);
      q.canonicalize();
      if (q.get_den() == 0) throw InvalidArgument("zero denominator");
      return q;
    }
    if (j.is_object() && j.size() == 2 && j.contains("num") && j.contains("den")) {
      mpq_class q(mpz_class(j.at("num").get<std::string>()),
                  mpz_class(j.at("den").get<std::string>()));
      if (q.get_den() == 0) throw InvalidArgument("zero denominator");
      q.canonicalize();
      return q;
    }
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("malformed rational: " + j.dump());
  } catch (const json::exception&) {
    throw InvalidArgument("malformed rational: " + j.dump());
  }
  throw InvalidArgument("malformed rational: " + j.dump());
}

std::vector<mpq_class> rationals_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of rationals");
  std::vector<mpq_class> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

}  // namespace ultradiff
