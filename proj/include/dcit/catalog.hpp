#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace dcit {

// Historical observation window.
inline constexpr int kHistoryStart = 2011;
inline constexpr int kHistoryEnd = 2023;

// The five composite dimensions, in canonical order. Weight vectors,
// normalized rows and centroids are all indexed by this order.
inline constexpr std::size_t kNumDimensions = 5;
inline const std::array<std::string, kNumDimensions> kDimensionIds = {
    "broadband_adoption", "ict_index", "gdp_per_capita", "fdi_net_inflows",
    "total_trade_usd"};

// Returns the canonical dimension index, or kNumDimensions if `id` is not a
// composite dimension.
std::size_t dimension_index(const std::string& id);

struct IndicatorInfo {
    std::string id;
    std::string unit;
    bool higher_is_better = true;
    bool dcit_dimension = false;
    bool auxiliary_target = false;
    bool raw_component = false;
    bool allow_negative = false;
};

struct IndicatorCatalog {
    std::vector<IndicatorInfo> entries;

    const IndicatorInfo* find(const std::string& id) const;

    // Ids with role auxiliary_target, in entry order.
    std::vector<std::string> targets() const;

    // Throws unless the catalog carries exactly the five canonical composite
    // dimensions (other entries are free-form).
    void validate() const;

    // The bundled catalog: five dimensions, exports/imports raw components,
    // and the regression target set.
    static IndicatorCatalog standard();
};

}  // namespace dcit
