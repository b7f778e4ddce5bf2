#pragma once

#include <string>
#include <vector>

#include "gossipmesh/errors.hpp"

namespace gossipmesh::cli {

/// One row of the built-in model catalog.
struct ModelSpec {
    std::string code;
    std::string name;
    double params_millions = 0.0;
    double capacity_mb = 0.0;
    std::string category;  // small | medium | large
};

/// Size category by capacity: small up to 15 MB, medium up to 30 MB,
/// large above.
std::string capacity_category(double capacity_mb);

/// Catalog rows in sweep column order: v3s, v2, b0, v3l, b1, b2, b3.
const std::vector<ModelSpec>& model_catalog();

/// Row for `code`; throws UnknownModelError for anything unlisted.
const ModelSpec& catalog_lookup(const std::string& code);

}  // namespace gossipmesh::cli
