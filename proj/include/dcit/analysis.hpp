#pragma once

#include <string>
#include <vector>

#include "dcit/index.hpp"

namespace dcit {

// Average fractional ranks, 1-based; ties share the mean of their positions.
std::vector<double> fractional_ranks(const std::vector<double>& v);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Pearson correlation of average-fractional ranks. Throws on length mismatch,
// n < 3, or a constant argument.
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

enum class WeightPreset { baseline, ict_heavy, fdi_heavy };
WeightPreset weight_preset_from_string(const std::string& s);

// baseline: all 0.2; ict_heavy/fdi_heavy: 0.7 on the headline dimension and
// the remaining 0.3 split equally over the other four.
WeightVector reweight_scenario(WeightPreset preset);

struct RankShift {
    std::string country;
    int baseline_rank = 0;
    int scenario_rank = 0;
    int shift = 0;  // baseline_rank - scenario_rank (positive: moved up)
};

struct StabilityReport {
    std::string scenario_name;
    double rho = 0.0;
    std::vector<RankShift> shifts;  // ordered by country
    std::string max_abs_shift_country;

    std::string to_json() const;
    std::string scatter_csv() const;  // country,baseline_rank,scenario_rank
};

StabilityReport rank_stability(const NormalizedMatrix& z,
                               const WeightVector& w_base,
                               const WeightVector& w_alt, int year,
                               const std::string& scenario_name);

struct SweepReport {
    WeightVector w_start, w_end;
    std::vector<double> lambdas;
    std::vector<std::string> countries;
    // dcit[i][j]: country i at lambda j
    std::vector<std::vector<double>> dcit;
    double linearity_r2 = 0.0;        // mean per-country R^2 of dcit vs lambda
    double max_relative_change = 0.0; // max_i |end - start| / start
    std::string max_change_country;
    std::vector<std::string> excluded;  // countries with start DCIT == 0

    std::string to_json() const;
    std::string to_csv() const;  // country,lambda,dcit
};

// Sample DCIT along w(lambda) = (1-lambda) w_start + lambda w_end at `steps`
// evenly spaced lambdas in [0, 1].
SweepReport weight_sweep(const NormalizedMatrix& z, const WeightVector& w_start,
                         const WeightVector& w_end, int steps, int year);

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_obs = 0;
    bool degenerate_target = false;  // variance(y) == 0, R^2 reported as 0
};

// Simple least squares with intercept. Throws on length mismatch, n < 3 or
// variance(x) == 0. Constant y yields R^2 = 0 with degenerate_target set.
RegressionFit ols_r2(const std::vector<double>& x, const std::vector<double>& y);

struct TargetFit {
    std::string target;
    RegressionFit fit;
};

// One simple regression per target with DCIT at `year` as the regressor,
// ordered descending by R^2. Targets with insufficient data are skipped with
// a note.
std::vector<TargetFit> predictive_power(const IndexScores& scores,
                                        const PanelDataset& panel,
                                        const std::vector<std::string>& targets,
                                        int year,
                                        std::vector<std::string>* notes = nullptr);

std::string predictive_power_csv(const std::vector<TargetFit>& table);
std::string predictive_power_json(const std::vector<TargetFit>& table,
                                  const std::vector<std::string>& notes);

}  // namespace dcit
