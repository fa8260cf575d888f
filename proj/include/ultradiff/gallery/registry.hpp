#pragma once

#include "ultradiff/gallery/patchwork.hpp"
#include "ultradiff/gallery/thm41.hpp"

namespace ultradiff {

// Gallery items addressable by name: "thm41" {m, depth} and "patchwork"
// {pieces, dim, sigma, anchors, coefficients}. Unknown names or keys throw
// InvalidArgument.
std::vector<std::string> gallery_names();
CounterexampleF counterexample_from_json(const json& params);
FunctionExpr resolve_gallery(const std::string& name, const json& params, std::uint32_t p);
FunctionExpr::GalleryResolver gallery_resolver(std::uint32_t p);

}  // namespace ultradiff
