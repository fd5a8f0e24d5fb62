#include "dcit/catalog.hpp"

#include "dcit/error.hpp"

namespace dcit {

std::size_t dimension_index(const std::string& id) {
    for (std::size_t i = 0; i < kNumDimensions; ++i) {
        if (kDimensionIds[i] == id) return i;
    }
    return kNumDimensions;
}

const IndicatorInfo* IndicatorCatalog::find(const std::string& id) const {
    for (const auto& e : entries) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

std::vector<std::string> IndicatorCatalog::targets() const {
    std::vector<std::string> out;
    for (const auto& e : entries) {
        if (e.auxiliary_target) out.push_back(e.id);
    }
    return out;
}

void IndicatorCatalog::validate() const {
    std::size_t dims = 0;
    for (const auto& e : entries) {
        if (e.dcit_dimension) {
            if (dimension_index(e.id) == kNumDimensions) {
                throw Error("catalog: '" + e.id +
                            "' is not a recognized composite dimension");
            }
            ++dims;
        }
    }
    if (dims != kNumDimensions) {
        throw Error("catalog: expected exactly 5 composite dimensions, found " +
                    std::to_string(dims));
    }
    for (const auto& id : kDimensionIds) {
        if (!find(id)) throw Error("catalog: missing dimension '" + id + "'");
    }
}

IndicatorCatalog IndicatorCatalog::standard() {
    IndicatorCatalog c;
    auto add = [&c](IndicatorInfo info) { c.entries.push_back(std::move(info)); };
    add({.id = "broadband_adoption", .unit = "subscriptions per 100",
         .dcit_dimension = true, .auxiliary_target = true});
    add({.id = "ict_index", .unit = "index 0-1", .dcit_dimension = true,
         .auxiliary_target = true});
    add({.id = "gdp_per_capita", .unit = "USD", .dcit_dimension = true});
    add({.id = "fdi_net_inflows", .unit = "USD", .dcit_dimension = true,
         .auxiliary_target = true, .allow_negative = true});
    add({.id = "total_trade_usd", .unit = "USD", .dcit_dimension = true});
    add({.id = "exports_usd", .unit = "USD", .raw_component = true});
    add({.id = "imports_usd", .unit = "USD", .raw_component = true});
    add({.id = "trade_growth_pct", .unit = "percent", .auxiliary_target = true,
         .allow_negative = true});
    add({.id = "gdp_growth_pct", .unit = "percent", .auxiliary_target = true,
         .allow_negative = true});
    c.validate();
    return c;
}

}  // namespace dcit
