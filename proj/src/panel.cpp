#include "dcit/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace dcit {

namespace {

nlohmann::json cell_to_json(const CellRef& c) {
    return {{"country", c.country}, {"year", c.year}, {"indicator", c.indicator}};
}

}  // namespace

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["missing_cells"] = nlohmann::json::array();
    for (const auto& c : missing_cells) j["missing_cells"].push_back(cell_to_json(c));
    j["imputed_cells"] = nlohmann::json::array();
    for (const auto& c : imputed_cells) j["imputed_cells"].push_back(cell_to_json(c));
    j["excluded_countries"] = nlohmann::json::array();
    for (const auto& [country, reason] : excluded_countries) {
        j["excluded_countries"].push_back({{"country", country}, {"reason", reason}});
    }
    return j.dump(2) + "\n";
}

std::optional<double> PanelDataset::get(const std::string& country, int year,
                                        const std::string& indicator) const {
    auto it = observations.find(ObsKey{country, year, indicator});
    if (it == observations.end()) return std::nullopt;
    return it->second;
}

bool PanelDataset::has(const std::string& country, int year,
                       const std::string& indicator) const {
    return observations.count(ObsKey{country, year, indicator}) > 0;
}

void PanelDataset::set(const std::string& country, int year,
                       const std::string& indicator, double value) {
    observations[ObsKey{country, year, indicator}] = value;
}

void PanelDataset::reindex() {
    std::set<std::string> cs;
    int lo = kHistoryEnd, hi = kHistoryStart;
    for (const auto& [key, _] : observations) {
        cs.insert(key.country);
        lo = std::min(lo, key.year);
        hi = std::max(hi, key.year);
    }
    countries.assign(cs.begin(), cs.end());
    if (!observations.empty()) {
        year_min = lo;
        year_max = hi;
    }
}

std::map<std::string, CountryMeta> load_country_meta(const std::string& path) {
    auto lines = csv::read_lines(path);
    if (lines.empty()) throw Error("empty metadata file: " + path);
    std::map<std::string, CountryMeta> meta;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto fields = csv::split_line(lines[i]);
        if (fields.size() < 2) {
            throw Error("metadata line " + std::to_string(i + 1) +
                        ": expected country,name[,cluster_hint]");
        }
        CountryMeta m;
        m.name = fields[1];
        if (fields.size() > 2 && !fields[2].empty()) {
            bool ok = false;
            int hint = csv::parse_int(fields[2], &ok);
            if (!ok) {
                throw Error("metadata line " + std::to_string(i + 1) +
                            ": cluster_hint is not an integer");
            }
            m.cluster_hint = hint;
        }
        meta[fields[0]] = std::move(m);
    }
    return meta;
}

PanelDataset load_panel(const std::string& path, const IndicatorCatalog& catalog,
                        std::vector<std::string>* rejected) {
    catalog.validate();
    auto lines = csv::read_lines(path);
    if (lines.empty()) throw Error("empty panel file: " + path);
    {
        auto header = csv::split_line(lines[0]);
        if (header.size() != 4 || header[0] != "country" || header[1] != "year" ||
            header[2] != "indicator" || header[3] != "value") {
            throw Error(path + ": expected header country,year,indicator,value");
        }
    }

    PanelDataset panel;
    panel.catalog = catalog;
    std::map<ObsKey, std::size_t> first_line;  // for duplicate diagnostics

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto fields = csv::split_line(lines[i]);
        if (fields.size() != 4) {
            throw Error(path + " line " + std::to_string(line_no) +
                        ": expected 4 fields, got " + std::to_string(fields.size()));
        }
        const std::string& country = fields[0];
        if (country.size() != 3) {
            throw Error(path + " line " + std::to_string(line_no) +
                        ": country must be an ISO3 code, got '" + country + "'");
        }
        bool ok = false;
        int year = csv::parse_int(fields[1], &ok);
        if (!ok) {
            throw Error(path + " line " + std::to_string(line_no) +
                        ": year is not an integer");
        }
        if (year < kHistoryStart || year > kHistoryEnd) {
            throw Error(path + " line " + std::to_string(line_no) + ": year " +
                        std::to_string(year) + " outside [" +
                        std::to_string(kHistoryStart) + ", " +
                        std::to_string(kHistoryEnd) + "]");
        }
        const std::string& indicator = fields[2];
        const IndicatorInfo* info = catalog.find(indicator);
        if (!info) {
            if (rejected) {
                rejected->push_back("line " + std::to_string(line_no) +
                                    ": unknown indicator '" + indicator + "'");
            }
            continue;
        }
        double value = csv::parse_double(fields[3], &ok);
        if (!ok) {
            throw Error(path + " line " + std::to_string(line_no) +
                        ": value is not numeric: '" + fields[3] + "'");
        }
        if (!std::isfinite(value)) {
            throw Error(path + " line " + std::to_string(line_no) +
                        ": value is not finite");
        }
        if (value < 0.0 && !info->allow_negative) {
            throw Error(path + " line " + std::to_string(line_no) + ": indicator '" +
                        indicator + "' must be >= 0, got " + csv::fmt(value));
        }
        ObsKey key{country, year, indicator};
        auto [it, inserted] = first_line.emplace(key, line_no);
        if (!inserted) {
            throw Error(path + ": duplicate key (" + country + ", " +
                        std::to_string(year) + ", " + indicator + ") on lines " +
                        std::to_string(it->second) + " and " +
                        std::to_string(line_no));
        }
        panel.observations[key] = value;
    }
    panel.reindex();
    return panel;
}

std::string panel_to_csv(const PanelDataset& panel) {
    std::string out = "country,year,indicator,value\n";
    for (const auto& [key, value] : panel.observations) {
        out += key.country;
        out += ',';
        out += std::to_string(key.year);
        out += ',';
        out += key.indicator;
        out += ',';
        out += csv::fmt(value);
        out += '\n';
    }
    return out;
}

void write_panel_csv(const PanelDataset& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << panel_to_csv(panel);
}

PanelDataset compute_total_trade(const PanelDataset& panel,
                                 ValidationReport* report) {
    PanelDataset out = panel;
    // (country, year) pairs where at least one trade component exists
    std::set<std::pair<std::string, int>> pairs;
    for (const auto& [key, _] : panel.observations) {
        if (key.indicator == "exports_usd" || key.indicator == "imports_usd") {
            pairs.insert({key.country, key.year});
        }
    }
    for (const auto& [country, year] : pairs) {
        if (out.has(country, year, "total_trade_usd")) continue;
        auto exports = panel.get(country, year, "exports_usd");
        auto imports = panel.get(country, year, "imports_usd");
        if (exports && imports) {
            out.set(country, year, "total_trade_usd", *exports + *imports);
        } else if (report) {
            report->missing_cells.push_back(
                {country, year, exports ? "imports_usd" : "exports_usd"});
        }
    }
    return out;
}

std::pair<PanelDataset, ValidationReport> impute_gaps(const PanelDataset& panel,
                                                      ImputePolicy policy) {
    PanelDataset out = panel;
    ValidationReport report;

    // indicators the pipeline consumes downstream
    std::vector<std::string> tracked;
    for (const auto& e : panel.catalog.entries) {
        if (e.dcit_dimension || e.auxiliary_target) tracked.push_back(e.id);
    }

    std::vector<CellRef> gaps;  // for strict mode
    for (const auto& country : panel.countries) {
        for (const auto& indicator : tracked) {
            std::vector<int> observed;
            for (int y = panel.year_min; y <= panel.year_max; ++y) {
                if (panel.has(country, y, indicator)) observed.push_back(y);
            }
            const IndicatorInfo* info = panel.catalog.find(indicator);
            if (observed.empty()) {
                if (info && info->dcit_dimension) {
                    report.excluded_countries.emplace_back(
                        country, "no observations of dimension '" + indicator + "'");
                }
                for (int y = panel.year_min; y <= panel.year_max; ++y) {
                    gaps.push_back({country, y, indicator});
                }
                continue;
            }
            for (int y = panel.year_min; y <= panel.year_max; ++y) {
                if (panel.has(country, y, indicator)) continue;
                gaps.push_back({country, y, indicator});
                if (y < observed.front() || y > observed.back()) {
                    // leading/trailing gap: never extrapolated
                    report.missing_cells.push_back({country, y, indicator});
                    continue;
                }
                auto next = std::upper_bound(observed.begin(), observed.end(), y);
                int y1 = *next;
                int y0 = *std::prev(next);
                double v0 = *panel.get(country, y0, indicator);
                double v1 = *panel.get(country, y1, indicator);
                double t = double(y - y0) / double(y1 - y0);
                out.set(country, y, indicator, v0 + t * (v1 - v0));
                report.imputed_cells.push_back({country, y, indicator});
            }
        }
    }

    if (policy == ImputePolicy::strict && !gaps.empty()) {
        std::string msg = "strict imputation: " + std::to_string(gaps.size()) +
                          " gap(s):";
        for (const auto& g : gaps) {
            msg += "\n  (" + g.country + ", " + std::to_string(g.year) + ", " +
                   g.indicator + ")";
        }
        throw Error(msg);
    }

    return {std::move(out), std::move(report)};
}

}  // namespace dcit
