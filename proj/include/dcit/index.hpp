#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcit/catalog.hpp"
#include "dcit/panel.hpp"

namespace dcit {

enum class Scope { pooled, per_year };

Scope scope_from_string(const std::string& s);
std::string to_string(Scope s);

struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
};

// Min-max normalized panel rows. Only (country, year) pairs with all five
// dimensions present are included; bounds are taken over the included cells
// of the chosen scope partition.
struct NormalizedMatrix {
    Scope scope = Scope::pooled;
    std::vector<std::string> countries;  // sorted
    std::vector<int> years;              // sorted
    std::map<std::pair<std::string, int>, std::array<double, kNumDimensions>>
        values;
    // pooled: keyed by dimension id; per_year: keyed by (dimension id, year).
    std::map<std::string, Bounds> pooled_bounds;
    std::map<std::pair<std::string, int>, Bounds> year_bounds;

    bool has_year(int year) const;
};

struct WeightVector {
    std::array<double, kNumDimensions> w{};

    static WeightVector equal();
    // Throws unless every weight is >= 0 and they sum to 1 within 1e-9.
    void validate() const;
    double at(const std::string& dimension_id) const;
};

struct RankedCountry {
    std::string country;
    double score = 0.0;
    int rank = 0;  // dense, 1-based
};

struct IndexScores {
    std::map<std::pair<std::string, int>, double> scores;
    WeightVector weights_used;
    std::map<int, std::vector<RankedCountry>> ranking;  // per year, descending

    std::vector<int> years() const;
};

// (x - min) / (max - min). Throws on empty, non-finite or constant input.
std::vector<double> minmax_normalize(const std::vector<double>& series);

// Normalize every composite dimension of the panel over the chosen scope.
// Constant dimension within a scope partition throws, naming the dimension
// (and year for per_year scope).
NormalizedMatrix normalize_panel(const PanelDataset& panel, Scope scope);

// DCIT(country, year) = sum_j w_j * Z_ij, plus per-year dense rankings.
IndexScores composite_index(const NormalizedMatrix& z, const WeightVector& w);

// Descending by score; ties share a dense rank and are ordered by ISO3.
std::vector<RankedCountry> rank_countries(const IndexScores& scores, int year);

std::string scores_to_csv(const IndexScores& scores);
std::string scores_to_json(const IndexScores& scores, const NormalizedMatrix& z);

}  // namespace dcit
