#include "gossipmesh/catalog.hpp"

namespace gossipmesh::cli {

std::string capacity_category(double capacity_mb) {
    if (capacity_mb <= 15.0) return "small";
    if (capacity_mb <= 30.0) return "medium";
    return "large";
}

const std::vector<ModelSpec>& model_catalog() {
    static const std::vector<ModelSpec> rows = [] {
        std::vector<ModelSpec> r = {
            {"v3s", "MobileNetV3 Small (1.0)", 2.9, 11.6, ""},
            {"v2", "MobileNetV2", 3.5, 14.0, ""},
            {"b0", "EfficientNet-B0", 5.3, 21.2, ""},
            {"v3l", "MobileNetV3 Large (1.0)", 5.4, 21.6, ""},
            {"b1", "EfficientNet-B1", 7.8, 31.2, ""},
            {"b2", "EfficientNet-B2", 9.2, 36.8, ""},
            {"b3", "EfficientNet-B3", 12.0, 48.0, ""},
        };
        for (ModelSpec& m : r) m.category = capacity_category(m.capacity_mb);
        return r;
    }();
    return rows;
}

const ModelSpec& catalog_lookup(const std::string& code) {
    for (const ModelSpec& m : model_catalog())
        if (m.code == code) return m;
    throw UnknownModelError("unknown model code: " + code);
}

}  // namespace gossipmesh::cli
