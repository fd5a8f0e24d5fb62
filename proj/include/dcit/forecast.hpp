#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcit/clustering.hpp"
#include "dcit/index.hpp"

namespace dcit {

struct SmoothingFit {
    double alpha = 0.0;
    double level = 0.0;  // smoothed state at the last observation
    double sse = 0.0;    // one-step-ahead squared error sum
};

// One-step-ahead SSE of simple exponential smoothing with l_0 = y_0.
double ses_sse(const std::vector<double>& series, double alpha);

// Optimize alpha on [0.001, 1.0] by a fine scan plus golden-section
// refinement (tolerance 1e-4). Requires >= 4 observations.
SmoothingFit ses_fit(const std::vector<double>& series);

struct Projection {
    double value = 0.0;
    bool clamped = false;
};

// base * (1 + growth_rate)^t * ict_factor, clamped to [0, 1] with a flag.
Projection scenario_project(double base, double growth_rate, double ict_factor,
                            int t);

// Growth rate g with scenario_project(base, g, ict_factor, horizon) == target
// pre-clamp: g = (target / (base * ict_factor))^(1/horizon) - 1.
double calibrate_growth(double base, double target, int horizon,
                        double ict_factor);

enum class Lever { none, ict_only, fdi_only, synergy };
Lever lever_from_string(const std::string& s);
std::string to_string(Lever lever);

struct ClusterScenarioParams {
    double growth_rate = 0.0;  // per year, > -1
    double ict_factor = 1.0;   // > 0
};

struct ScenarioSpec {
    std::string name;
    std::map<int, ClusterScenarioParams> clusters;
    Lever lever = Lever::none;
    // dimension id -> additive boost in normalized units per year
    std::map<std::string, double> lever_boosts;
    int horizon_start = 2024;
    int horizon_end = 2028;

    void validate() const;
    // Dimensions the lever acts on (ict_only covers ict_index and
    // broadband_adoption; fdi_only covers fdi_net_inflows; synergy both).
    std::vector<std::string> lever_dimensions() const;
};

ScenarioSpec load_scenario(const std::string& path);

struct ForecastPoint {
    double value = 0.0;
    bool clamped = false;
};

struct ForecastSeries {
    std::string entity;
    std::string scenario;
    std::map<int, ForecastPoint> values;  // year -> projection
};

// Scenario trajectory for one entity over the horizon. Each year t from the
// horizon start, lever boosts are added to the entity's latest normalized
// dimensions (clamped to [0,1]), the composite is recomputed from the boosted
// values, and the compound-growth formula is applied to that base. With no
// lever this reduces exactly to scenario_project(base, g, f, t).
std::vector<ForecastPoint> apply_levers(const ScenarioSpec& spec, int cluster_id,
                                        double base,
                                        const std::vector<double>& z_latest,
                                        const WeightVector& w);

// One series per (cluster profile, scenario). The profile's mean DCIT is the
// base value; its centroid feeds the lever mechanism (a profile without a
// centroid uses a flat proxy at the base value).
std::vector<ForecastSeries> forecast_clusters(
    const std::vector<ClusterProfile>& profiles,
    const std::vector<ScenarioSpec>& scenarios, const WeightVector& w);

// Per-cluster SES-smoothed level of the mean-DCIT history, used as forecast
// base when enough history exists (falls back to the last year's mean).
std::map<int, double> ses_cluster_bases(const IndexScores& scores,
                                        const ClusteringResult& clustering);

std::string forecast_to_csv(const std::vector<ForecastSeries>& series);

}  // namespace dcit
