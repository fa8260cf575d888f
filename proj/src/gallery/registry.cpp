#include "ultradiff/gallery/registry.hpp"

namespace ultradiff {

std::vector<std::string> gallery_names() { return {"patchwork", "thm41"}; }

CounterexampleF counterexample_from_json(const json& params) {
  CounterexampleF cf;
  if (params.is_null()) return cf;
  if (!params.is_object()) throw InvalidArgument("thm41 parameters must be an object");
  for (auto it = params.begin(); it != params.end(); ++it)
    if (it.key() != "m" && it.key() != "depth")
      throw InvalidArgument("unknown thm41 parameter: " + it.key());
  try {
    if (params.contains("m")) cf.family.m = params.at("m").get<unsigned>();
    if (params.contains("depth")) cf.family.exact_depth = params.at("depth").get<unsigned>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed thm41 parameters: ") + e.what());
  }
  if (cf.family.m < 1) throw InvalidArgument("thm41 needs m >= 1");
  if (cf.family.exact_depth < 1) throw InvalidArgument("thm41 depth must be positive");
  return cf;
}

FunctionExpr resolve_gallery(const std::string& name, const json& params, std::uint32_t p) {
  if (name == "thm41") return counterexample_from_json(params).expr();
  if (name == "patchwork") {
    json rest = params.is_null() ? json::object() : params;
    if (rest.is_object() && rest.contains("p")) {
      if (rest.at("p") != p) throw InvalidArgument("patchwork prime differs from the run's prime");
      rest.erase("p");
    }
    return PatchworkCurve(PatchworkParams::from_json(rest), p).expr();
  }
  throw InvalidArgument("unknown gallery item: " + name);
}

FunctionExpr::GalleryResolver gallery_resolver(std::uint32_t p) {
  return [p](const std::string& name, const json& params) {
    return resolve_gallery(name, params, p);
  };
}

}  // namespace ultradiff
