#include "dcit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace dcit {

std::vector<double> fractional_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        // positions i..j (0-based) share the average 1-based rank
        double avg = (double(i + 1) + double(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("pearson: length mismatch");
    const std::size_t n = a.size();
    if (n < 2) throw Error("pearson: need at least 2 observations");
    double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
    double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) {
        throw Error("pearson: constant vector, correlation undefined");
    }
    return cov / std::sqrt(var_a * var_b);
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error("spearman: length mismatch");
    if (a.size() < 3) throw Error("spearman: need at least 3 observations");
    auto all_equal = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(),
                           [&](double x) { return x == v.front(); });
    };
    if (all_equal(a) || all_equal(b)) {
        throw Error("spearman: constant vector, rank correlation undefined");
    }
    return pearson(fractional_ranks(a), fractional_ranks(b));
}

WeightPreset weight_preset_from_string(const std::string& s) {
    if (s == "baseline" || s == "equal") return WeightPreset::baseline;
    if (s == "ict_heavy" || s == "ict-heavy") return WeightPreset::ict_heavy;
    if (s == "fdi_heavy" || s == "fdi-heavy") return WeightPreset::fdi_heavy;
    throw Error("unknown weight preset '" + s + "'");
}

WeightVector reweight_scenario(WeightPreset preset) {
    if (preset == WeightPreset::baseline) return WeightVector::equal();
    const std::string heavy =
        preset == WeightPreset::ict_heavy ? "ict_index" : "fdi_net_inflows";
    WeightVector v;
    std::size_t h = dimension_index(heavy);
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
        v.w[d] = (d == h) ? 0.7 : 0.3 / double(kNumDimensions - 1);
    }
    return v;
}

StabilityReport rank_stability(const NormalizedMatrix& z,
                               const WeightVector& w_base,
                               const WeightVector& w_alt, int year,
                               const std::string& scenario_name) {
    IndexScores base = composite_index(z, w_base);
    IndexScores alt = composite_index(z, w_alt);
    auto base_rank = rank_countries(base, year);
    auto alt_rank = rank_countries(alt, year);

    std::map<std::string, int> base_by_country, alt_by_country;
    std::map<std::string, double> base_score, alt_score;
    for (const auto& r : base_rank) {
        base_by_country[r.country] = r.rank;
        base_score[r.country] = r.score;
    }
    for (const auto& r : alt_rank) {
        alt_by_country[r.country] = r.rank;
        alt_score[r.country] = r.score;
    }

    StabilityReport report;
    report.scenario_name = scenario_name;
    std::vector<double> a, b;
    int max_abs = -1;
    for (const auto& [country, brank] : base_by_country) {
        int arank = alt_by_country.at(country);
        RankShift shift{country, brank, arank, brank - arank};
        if (std::abs(shift.shift) > max_abs) {
            max_abs = std::abs(shift.shift);
            report.max_abs_shift_country = country;
        }
        report.shifts.push_back(shift);
        a.push_back(base_score[country]);
        b.push_back(alt_score[country]);
    }
    report.rho = (w_base.w == w_alt.w) ? 1.0 : spearman_rho(a, b);
    return report;
}

std::string StabilityReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario_name;
    j["rho"] = rho;
    j["max_abs_shift_country"] = max_abs_shift_country;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : shifts) {
        rows.push_back({{"country", s.country},
                        {"baseline_rank", s.baseline_rank},
                        {"scenario_rank", s.scenario_rank},
                        {"shift", s.shift}});
    }
    j["shifts"] = rows;
    return j.dump(2) + "\n";
}

std::string StabilityReport::scatter_csv() const {
    std::string out = "country,baseline_rank,scenario_rank\n";
    for (const auto& s : shifts) {
        out += s.country + "," + std::to_string(s.baseline_rank) + "," +
               std::to_string(s.scenario_rank) + "\n";
    }
    return out;
}

namespace {

// R^2 of the least-squares line. A series the line reproduces to within
// floating-point rounding (zero residuals, a constant series, or variation
// at machine-noise scale) counts as a perfect fit; this is the convention
// the sweep linearity statistic needs, where DCIT is affine in lambda by
// construction but a country sitting at the normalization maximum yields a
// path whose only "variation" is representation error.
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
        syy += (y[i] - mean_y) * (y[i] - mean_y);
    }
    double slope = sxy / sxx;
    double ss_res = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = mean_y + slope * (x[i] - mean_x);
        ss_res += (y[i] - pred) * (y[i] - pred);
        scale = std::max(scale, std::abs(y[i]));
    }
    double noise = 16.0 * std::numeric_limits<double>::epsilon() * scale;
    if (ss_res <= double(n) * noise * noise) return 1.0;
    if (syy == 0.0) return 1.0;
    return 1.0 - ss_res / syy;
}

}  // namespace

SweepReport weight_sweep(const NormalizedMatrix& z, const WeightVector& w_start,
                         const WeightVector& w_end, int steps, int year) {
    w_start.validate();
    w_end.validate();
    if (steps < 3) throw Error("weight_sweep: steps must be >= 3");

    SweepReport report;
    report.w_start = w_start;
    report.w_end = w_end;

    std::vector<IndexScores> samples;
    for (int s = 0; s < steps; ++s) {
        double lambda = double(s) / double(steps - 1);
        report.lambdas.push_back(lambda);
        WeightVector w;
        for (std::size_t d = 0; d < kNumDimensions; ++d) {
            w.w[d] = (1.0 - lambda) * w_start.w[d] + lambda * w_end.w[d];
        }
        samples.push_back(composite_index(z, w));
    }

    auto ranked = rank_countries(samples.front(), year);
    for (const auto& r : ranked) report.countries.push_back(r.country);
    std::sort(report.countries.begin(), report.countries.end());

    double r2_sum = 0.0;
    int r2_count = 0;
    report.max_relative_change = 0.0;
    for (const auto& country : report.countries) {
        std::vector<double> path;
        for (const auto& scores : samples) {
            path.push_back(scores.scores.at({country, year}));
        }
        report.dcit.push_back(path);
        r2_sum += linear_fit_r2(report.lambdas, path);
        ++r2_count;

        double start = path.front(), end = path.back();
        if (start == 0.0) {
            report.excluded.push_back(country);
            continue;
        }
        double rel = std::abs(end - start) / start;
        if (rel > report.max_relative_change) {
            report.max_relative_change = rel;
            report.max_change_country = country;
        }
    }
    report.linearity_r2 = r2_sum / double(r2_count);
    return report;
}

std::string SweepReport::to_json() const {
    nlohmann::json j;
    nlohmann::json ws, we;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
        ws[kDimensionIds[d]] = w_start.w[d];
        we[kDimensionIds[d]] = w_end.w[d];
    }
    j["w_start"] = ws;
    j["w_end"] = we;
    j["linearity_r2"] = linearity_r2;
    j["max_relative_change"] = max_relative_change;
    j["max_change_country"] = max_change_country;
    j["excluded"] = excluded;
    j["lambdas"] = lambdas;
    return j.dump(2) + "\n";
}

std::string SweepReport::to_csv() const {
    std::string out = "country,lambda,dcit\n";
    for (std::size_t i = 0; i < countries.size(); ++i) {
        for (std::size_t s = 0; s < lambdas.size(); ++s) {
            out += countries[i] + "," + csv::fmt(lambdas[s]) + "," +
                   csv::fmt(dcit[i][s]) + "\n";
        }
    }
    return out;
}

RegressionFit ols_r2(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("ols: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw Error("ols: need at least 3 observations");

    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
        syy += (y[i] - mean_y) * (y[i] - mean_y);
    }
    if (sxx == 0.0) throw Error("ols: regressor has zero variance");

    RegressionFit fit;
    fit.n_obs = int(n);
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        fit.r_squared = 0.0;
        fit.degenerate_target = true;
        return fit;
    }
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
    }
    fit.r_squared = 1.0 - ss_res / syy;
    return fit;
}

std::vector<TargetFit> predictive_power(const IndexScores& scores,
                                        const PanelDataset& panel,
                                        const std::vector<std::string>& targets,
                                        int year,
                                        std::vector<std::string>* notes) {
    if (!scores.ranking.count(year)) {
        throw Error("predictive_power: no scores for year " + std::to_string(year));
    }

    std::vector<TargetFit> table;
    for (const auto& target : targets) {
        std::vector<double> x, y;
        for (const auto& rc : scores.ranking.at(year)) {
            auto v = panel.get(rc.country, year, target);
            if (!v) continue;
            x.push_back(rc.score);
            y.push_back(*v);
        }
        if (x.size() < 3) {
            if (notes) {
                notes->push_back("target '" + target + "' skipped: only " +
                                 std::to_string(x.size()) +
                                 " paired observations in " + std::to_string(year));
            }
            continue;
        }
        table.push_back({target, ols_r2(x, y)});
    }
    std::stable_sort(table.begin(), table.end(),
                     [](const TargetFit& a, const TargetFit& b) {
                         return a.fit.r_squared > b.fit.r_squared;
                     });
    return table;
}

std::string predictive_power_csv(const std::vector<TargetFit>& table) {
    std::string out = "target,slope,intercept,r_squared,n_obs\n";
    for (const auto& t : table) {
        out += t.target + "," + csv::fmt(t.fit.slope) + "," +
               csv::fmt(t.fit.intercept) + "," + csv::fmt(t.fit.r_squared) + "," +
               std::to_string(t.fit.n_obs) + "\n";
    }
    return out;
}

std::string predictive_power_json(const std::vector<TargetFit>& table,
                                  const std::vector<std::string>& notes) {
    nlohmann::json j;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& t : table) {
        rows.push_back({{"target", t.target},
                        {"slope", t.fit.slope},
                        {"intercept", t.fit.intercept},
                        {"r_squared", t.fit.r_squared},
                        {"n_obs", t.fit.n_obs},
                        {"degenerate_target", t.fit.degenerate_target}});
    }
    j["fits"] = rows;
    j["notes"] = notes;
    return j.dump(2) + "\n";
}

}  // namespace dcit
