#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dcit/catalog.hpp"

namespace dcit {

struct ObsKey {
    std::string country;  // ISO3
    int year = 0;
    std::string indicator;

    friend bool operator<(const ObsKey& a, const ObsKey& b) {
        return std::tie(a.country, a.year, a.indicator) <
               std::tie(b.country, b.year, b.indicator);
    }
    friend bool operator==(const ObsKey& a, const ObsKey& b) {
        return a.country == b.country && a.year == b.year &&
               a.indicator == b.indicator;
    }
};

struct CellRef {
    std::string country;
    int year = 0;
    std::string indicator;
};

struct ValidationReport {
    std::vector<CellRef> missing_cells;  // still missing after imputation
    std::vector<CellRef> imputed_cells;
    // (country, reason)
    std::vector<std::pair<std::string, std::string>> excluded_countries;

    std::string to_json() const;
};

// Long-format country x year x indicator panel. Immutable by convention once
// built: every operation returns a new dataset.
struct PanelDataset {
    std::map<ObsKey, double> observations;
    std::vector<std::string> countries;  // sorted unique ISO3
    int year_min = kHistoryStart;
    int year_max = kHistoryEnd;
    IndicatorCatalog catalog;

    std::optional<double> get(const std::string& country, int year,
                              const std::string& indicator) const;
    bool has(const std::string& country, int year,
             const std::string& indicator) const;
    void set(const std::string& country, int year, const std::string& indicator,
             double value);

    // Recompute `countries`, `year_min`, `year_max` from the observations.
    void reindex();
};

// Country display metadata (sidecar file, schema: country,name,cluster_hint).
struct CountryMeta {
    std::string name;
    std::optional<int> cluster_hint;
};
std::map<std::string, CountryMeta> load_country_meta(const std::string& path);

// Parse a long-format CSV (`country,year,indicator,value`). Rows whose
// indicator id is not in the catalog are skipped and, when `rejected` is
// given, reported there one line each. Malformed rows, duplicate keys,
// non-finite values, out-of-range years and sign violations all throw with
// the offending line number in the message.
PanelDataset load_panel(const std::string& path, const IndicatorCatalog& catalog,
                        std::vector<std::string>* rejected = nullptr);

// Serialize back to the canonical long CSV (sorted by key).
std::string panel_to_csv(const PanelDataset& panel);
void write_panel_csv(const PanelDataset& panel, const std::string& path);

// Derive total_trade_usd = exports_usd + imports_usd per (country, year).
// Existing observations are never modified, so the operation is idempotent.
// Pairs where exactly one component exists are reported as missing cells.
PanelDataset compute_total_trade(const PanelDataset& panel,
                                 ValidationReport* report = nullptr);

enum class ImputePolicy { interpolate, strict };

// Fill interior gaps of each (country, indicator) series by linear
// interpolation on year. Leading/trailing gaps are left missing and listed in
// the report. Countries with zero observations of some composite dimension
// land in excluded_countries. policy=strict instead throws if any composite
// dimension or target cell is missing, listing every gap.
std::pair<PanelDataset, ValidationReport> impute_gaps(const PanelDataset& panel,
                                                      ImputePolicy policy);

}  // namespace dcit
