#pragma once

#include <json.hpp>

#include "ultradiff/field/vector.hpp"

namespace ultradiff {

using json = nlohmann::json;

// Exact scalars serialize as {"num", "den"}; truncated ones as
// {"p", "val", "digits"} with digits of the unit part up to the precision.
json scalar_to_json(const PadicScalar& s);
json vector_to_json(const PadicVector& v);
json rational_to_json(const mpq_class& q);
json valuation_to_json(Valuation v);

// Accepts "3/5", an integer, or {"num": "3", "den": "5"}.
mpq_class rational_from_json(const json& j);
std::vector<mpq_class> rationals_from_json(const json& j);

}  // namespace ultradiff
