#include "dcit/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace dcit {

Scope scope_from_string(const std::string& s) {
    if (s == "pooled") return Scope::pooled;
    if (s == "per-year" || s == "per_year") return Scope::per_year;
    throw Error("unknown normalization scope '" + s + "'");
}

std::string to_string(Scope s) {
    return s == Scope::pooled ? "pooled" : "per_year";
}

bool NormalizedMatrix::has_year(int year) const {
    return std::find(years.begin(), years.end(), year) != years.end();
}

WeightVector WeightVector::equal() {
    WeightVector v;
    v.w.fill(1.0 / kNumDimensions);
    return v;
}

void WeightVector::validate() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < kNumDimensions; ++i) {
        if (!(w[i] >= 0.0)) {
            throw Error("weight for '" + kDimensionIds[i] + "' must be >= 0");
        }
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error("weights must sum to 1, got " + csv::fmt(sum));
    }
}

double WeightVector::at(const std::string& dimension_id) const {
    std::size_t i = dimension_index(dimension_id);
    if (i == kNumDimensions) throw Error("unknown dimension '" + dimension_id + "'");
    return w[i];
}

std::vector<int> IndexScores::years() const {
    std::vector<int> ys;
    for (const auto& [y, _] : ranking) ys.push_back(y);
    return ys;
}

std::vector<double> minmax_normalize(const std::vector<double>& series) {
    if (series.empty()) throw Error("minmax: empty series");
    double lo = series[0], hi = series[0];
    for (double v : series) {
        if (!std::isfinite(v)) throw Error("minmax: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) throw Error("minmax: degenerate series (constant input)");
    std::vector<double> out(series.size());
    double span = hi - lo;
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i] = (series[i] - lo) / span;
    }
    return out;
}

NormalizedMatrix normalize_panel(const PanelDataset& panel, Scope scope) {
    panel.catalog.validate();

    // rows = (country, year) with every composite dimension present
    std::vector<std::pair<std::string, int>> rows;
    std::set<std::string> countries;
    std::set<int> years;
    for (const auto& country : panel.countries) {
        for (int y = panel.year_min; y <= panel.year_max; ++y) {
            bool complete = true;
            for (const auto& dim : kDimensionIds) {
                if (!panel.has(country, y, dim)) {
                    complete = false;
                    break;
                }
            }
            if (complete) {
                rows.emplace_back(country, y);
                countries.insert(country);
                years.insert(y);
            }
        }
    }
    if (rows.empty()) {
        throw Error("normalize: no (country, year) row has all 5 dimensions");
    }

    NormalizedMatrix z;
    z.scope = scope;
    z.countries.assign(countries.begin(), countries.end());
    z.years.assign(years.begin(), years.end());

    auto bounds_of = [](const std::vector<double>& vals, const std::string& what) {
        Bounds b{vals[0], vals[0]};
        for (double v : vals) {
            b.lo = std::min(b.lo, v);
            b.hi = std::max(b.hi, v);
        }
        if (b.lo == b.hi) {
            throw Error("normalize: degenerate dimension " + what +
                        " (constant values)");
        }
        return b;
    };

    for (std::size_t d = 0; d < kNumDimensions; ++d) {
        const std::string& dim = kDimensionIds[d];
        if (scope == Scope::pooled) {
            std::vector<double> vals;
            vals.reserve(rows.size());
            for (const auto& [c, y] : rows) vals.push_back(*panel.get(c, y, dim));
            Bounds b = bounds_of(vals, "'" + dim + "'");
            z.pooled_bounds[dim] = b;
            for (const auto& row : rows) {
                double v = *panel.get(row.first, row.second, dim);
                z.values[row][d] = (v - b.lo) / (b.hi - b.lo);
            }
        } else {
            for (int y : z.years) {
                std::vector<double> vals;
                std::vector<std::pair<std::string, int>> year_rows;
                for (const auto& row : rows) {
                    if (row.second != y) continue;
                    year_rows.push_back(row);
                    vals.push_back(*panel.get(row.first, y, dim));
                }
                Bounds b = bounds_of(vals, "'" + dim + "' in year " +
                                               std::to_string(y));
                z.year_bounds[{dim, y}] = b;
                for (const auto& row : year_rows) {
                    double v = *panel.get(row.first, row.second, dim);
                    z.values[row][d] = (v - b.lo) / (b.hi - b.lo);
                }
            }
        }
    }
    return z;
}

namespace {

std::vector<RankedCountry> rank_rows(
    std::vector<std::pair<std::string, double>> scored) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<RankedCountry> out;
    out.reserve(scored.size());
    int rank = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [country, score] : scored) {
        if (out.empty() || score != prev) {
            ++rank;  // dense ranks: ties share, next distinct value increments
            prev = score;
        }
        out.push_back({country, score, rank});
    }
    return out;
}

}  // namespace

IndexScores composite_index(const NormalizedMatrix& z, const WeightVector& w) {
    w.validate();
    IndexScores scores;
    scores.weights_used = w;
    for (const auto& [row, zvals] : z.values) {
        double dcit = 0.0;
        for (std::size_t d = 0; d < kNumDimensions; ++d) dcit += w.w[d] * zvals[d];
        scores.scores[row] = dcit;
    }
    for (int y : z.years) {
        std::vector<std::pair<std::string, double>> scored;
        for (const auto& [row, s] : scores.scores) {
            if (row.second == y) scored.emplace_back(row.first, s);
        }
        scores.ranking[y] = rank_rows(std::move(scored));
    }
    return scores;
}

std::vector<RankedCountry> rank_countries(const IndexScores& scores, int year) {
    auto it = scores.ranking.find(year);
    if (it == scores.ranking.end()) {
        throw Error("no scores for year " + std::to_string(year));
    }
    return it->second;
}

std::string scores_to_csv(const IndexScores& scores) {
    // rank looked up from the per-year ranking
    std::map<std::pair<std::string, int>, int> ranks;
    for (const auto& [year, ranking] : scores.ranking) {
        for (const auto& r : ranking) ranks[{r.country, year}] = r.rank;
    }
    std::string out = "country,year,dcit,rank\n";
    for (const auto& [row, score] : scores.scores) {
        out += row.first + "," + std::to_string(row.second) + "," +
               csv::fmt(score) + "," + std::to_string(ranks[row]) + "\n";
    }
    return out;
}

std::string scores_to_json(const IndexScores& scores, const NormalizedMatrix& z) {
    nlohmann::json j;
    nlohmann::json weights;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
        weights[kDimensionIds[d]] = scores.weights_used.w[d];
    }
    j["weights_used"] = weights;
    j["scope"] = to_string(z.scope);
    nlohmann::json bounds;
    if (z.scope == Scope::pooled) {
        for (const auto& [dim, b] : z.pooled_bounds) {
            bounds[dim] = {{"min", b.lo}, {"max", b.hi}};
        }
    } else {
        for (const auto& [key, b] : z.year_bounds) {
            bounds[key.first][std::to_string(key.second)] = {{"min", b.lo},
                                                             {"max", b.hi}};
        }
    }
    j["bounds"] = bounds;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [row, score] : scores.scores) {
        rows.push_back({{"country", row.first}, {"year", row.second},
                        {"dcit", score}});
    }
    j["scores"] = rows;
    return j.dump(2) + "\n";
}

}  // namespace dcit
