#include "dcit/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace dcit {

double ses_sse(const std::vector<double>& series, double alpha) {
    double level = series.front();
    double sse = 0.0;
    for (std::size_t t = 1; t < series.size(); ++t) {
        double err = series[t] - level;
        sse += err * err;
        level = alpha * series[t] + (1.0 - alpha) * level;
    }
    return sse;
}

namespace {

double ses_level(const std::vector<double>& series, double alpha) {
    double level = series.front();
    for (std::size_t t = 1; t < series.size(); ++t) {
        level = alpha * series[t] + (1.0 - alpha) * level;
    }
    return level;
}

}  // namespace

SmoothingFit ses_fit(const std::vector<double>& series) {
    if (series.size() < 4) {
        throw Error("ses_fit: need at least 4 observations, got " +
                    std::to_string(series.size()));
    }
    for (double v : series) {
        if (!std::isfinite(v)) throw Error("ses_fit: non-finite observation");
    }

    constexpr double kLo = 0.001;
    constexpr double kHi = 1.0;
    constexpr double kTol = 1e-4;

    // scan at 0.001 resolution to bracket the best region (SSE(alpha) can
    // have several local minima), golden section refines it
    double best_alpha = kHi;
    double best_sse = ses_sse(series, kHi);
    constexpr int kScan = 999;
    for (int i = 0; i <= kScan; ++i) {
        double a = kLo + (kHi - kLo) * double(i) / double(kScan);
        double s = ses_sse(series, a);
        if (s < best_sse) {
            best_sse = s;
            best_alpha = a;
        }
    }
    double step = (kHi - kLo) / double(kScan);
    double lo = std::max(kLo, best_alpha - step);
    double hi = std::min(kHi, best_alpha + step);

    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = ses_sse(series, c);
    double fd = ses_sse(series, d);
    while (hi - lo > kTol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = ses_sse(series, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = ses_sse(series, d);
        }
    }
    double alpha = (lo + hi) / 2.0;
    double sse = ses_sse(series, alpha);
    if (best_sse < sse) {  // keep the scan point if refinement didn't help
        alpha = best_alpha;
        sse = best_sse;
    }
    return {alpha, ses_level(series, alpha), sse};
}

Projection scenario_project(double base, double growth_rate, double ict_factor,
                            int t) {
    if (base < 0.0 || base > 1.0) {
        throw Error("scenario_project: base must be in [0, 1]");
    }
    if (t < 0) throw Error("scenario_project: t must be >= 0");
    if (growth_rate <= -1.0) {
        throw Error("scenario_project: growth_rate must be > -1");
    }
    if (ict_factor <= 0.0) throw Error("scenario_project: ict_factor must be > 0");

    double raw = base * std::pow(1.0 + growth_rate, double(t)) * ict_factor;
    Projection p;
    p.clamped = raw > 1.0 || raw < 0.0;
    p.value = std::clamp(raw, 0.0, 1.0);
    return p;
}

double calibrate_growth(double base, double target, int horizon,
                        double ict_factor) {
    if (base <= 0.0) throw Error("calibrate_growth: base must be > 0");
    if (target <= 0.0) throw Error("calibrate_growth: target must be > 0");
    if (horizon < 1) throw Error("calibrate_growth: horizon must be >= 1");
    if (ict_factor <= 0.0) throw Error("calibrate_growth: ict_factor must be > 0");
    return std::pow(target / (base * ict_factor), 1.0 / double(horizon)) - 1.0;
}

Lever lever_from_string(const std::string& s) {
    if (s == "none") return Lever::none;
    if (s == "ict_only") return Lever::ict_only;
    if (s == "fdi_only") return Lever::fdi_only;
    if (s == "synergy") return Lever::synergy;
    throw Error("unknown lever '" + s + "'");
}

std::string to_string(Lever lever) {
    switch (lever) {
        case Lever::none: return "none";
        case Lever::ict_only: return "ict_only";
        case Lever::fdi_only: return "fdi_only";
        case Lever::synergy: return "synergy";
    }
    return "none";
}

std::vector<std::string> ScenarioSpec::lever_dimensions() const {
    switch (lever) {
        case Lever::none: return {};
        case Lever::ict_only: return {"ict_index", "broadband_adoption"};
        case Lever::fdi_only: return {"fdi_net_inflows"};
        case Lever::synergy:
            return {"ict_index", "broadband_adoption", "fdi_net_inflows"};
    }
    return {};
}

void ScenarioSpec::validate() const {
    if (horizon_start < 2024) {
        throw Error("scenario '" + name + "': horizon must start at 2024 or later");
    }
    if (horizon_end < horizon_start) {
        throw Error("scenario '" + name + "': horizon end before start");
    }
    for (const auto& [cluster, params] : clusters) {
        if (params.growth_rate <= -1.0) {
            throw Error("scenario '" + name + "': growth_rate for cluster " +
                        std::to_string(cluster) + " must be > -1");
        }
        if (params.ict_factor <= 0.0) {
            throw Error("scenario '" + name + "': ict_factor for cluster " +
                        std::to_string(cluster) + " must be > 0");
        }
    }
    for (const auto& dim : lever_dimensions()) {
        if (!lever_boosts.count(dim)) {
            throw Error("scenario '" + name + "': lever '" + to_string(lever) +
                        "' needs a boost for dimension '" + dim + "'");
        }
    }
    for (const auto& [dim, _] : lever_boosts) {
        if (dimension_index(dim) == kNumDimensions) {
            throw Error("scenario '" + name + "': unknown boost dimension '" +
                        dim + "'");
        }
    }
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("scenario file " + path + ": " + e.what());
    }

    ScenarioSpec spec;
    spec.name = j.at("name").get<std::string>();
    for (const auto& [key, params] : j.at("clusters").items()) {
        bool ok = false;
        int cluster = csv::parse_int(key, &ok);
        if (!ok) {
            throw Error("scenario file " + path + ": cluster key '" + key +
                        "' is not an integer");
        }
        ClusterScenarioParams p;
        p.growth_rate = params.at("growth_rate").get<double>();
        p.ict_factor = params.value("ict_factor", 1.0);
        spec.clusters[cluster] = p;
    }
    spec.lever = lever_from_string(j.value("lever", "none"));
    if (j.contains("lever_boosts")) {
        for (const auto& [dim, boost] : j.at("lever_boosts").items()) {
            spec.lever_boosts[dim] = boost.get<double>();
        }
    }
    if (j.contains("horizon")) {
        auto horizon = j.at("horizon");
        spec.horizon_start = horizon.at(0).get<int>();
        spec.horizon_end = horizon.at(1).get<int>();
    }
    spec.validate();
    return spec;
}

std::vector<ForecastPoint> apply_levers(const ScenarioSpec& spec, int cluster_id,
                                        double base,
                                        const std::vector<double>& z_latest,
                                        const WeightVector& w) {
    auto it = spec.clusters.find(cluster_id);
    if (it == spec.clusters.end()) {
        throw Error("scenario '" + spec.name +
                    "': no parameters for cluster " + std::to_string(cluster_id));
    }
    const auto& params = it->second;
    if (z_latest.size() != kNumDimensions) {
        throw Error("apply_levers: expected " + std::to_string(kNumDimensions) +
                    " normalized dimensions");
    }

    std::array<double, kNumDimensions> boost{};
    for (const auto& dim : spec.lever_dimensions()) {
        auto b = spec.lever_boosts.find(dim);
        if (b == spec.lever_boosts.end()) {
            throw Error("scenario '" + spec.name + "': lever boost missing for '" +
                        dim + "'");
        }
        boost[dimension_index(dim)] = b->second;
    }

    std::vector<ForecastPoint> out;
    for (int year = spec.horizon_start; year <= spec.horizon_end; ++year) {
        int t = year - spec.horizon_start;
        if (spec.lever == Lever::none) {
            Projection p = scenario_project(base, params.growth_rate,
                                            params.ict_factor, t);
            out.push_back({p.value, p.clamped});
            continue;
        }
        // composite recomputed from the boosted normalized values, then the
        // compound-growth formula uses that as its base
        double levered_base = 0.0;
        for (std::size_t d = 0; d < kNumDimensions; ++d) {
            double z = std::clamp(z_latest[d] + boost[d] * double(t), 0.0, 1.0);
            levered_base += w.w[d] * z;
        }
        double raw = levered_base *
                     std::pow(1.0 + params.growth_rate, double(t)) *
                     params.ict_factor;
        ForecastPoint p;
        p.clamped = raw > 1.0 || raw < 0.0;
        p.value = std::clamp(raw, 0.0, 1.0);
        out.push_back(p);
    }
    return out;
}

std::vector<ForecastSeries> forecast_clusters(
    const std::vector<ClusterProfile>& profiles,
    const std::vector<ScenarioSpec>& scenarios, const WeightVector& w) {
    std::vector<ForecastSeries> out;
    for (const auto& profile : profiles) {
        for (const auto& spec : scenarios) {
            if (!spec.clusters.count(profile.cluster)) {
                throw Error("scenario '" + spec.name +
                            "': no parameters for cluster " +
                            std::to_string(profile.cluster));
            }
            std::vector<double> z = profile.centroid;
            if (z.empty()) {
                // flat proxy: every dimension at the base value keeps the
                // weighted composite equal to the base
                z.assign(kNumDimensions, profile.mean_dcit);
            }
            auto points = apply_levers(spec, profile.cluster, profile.mean_dcit,
                                       z, w);
            ForecastSeries series;
            series.entity = "cluster_" + std::to_string(profile.cluster);
            series.scenario = spec.name;
            for (std::size_t i = 0; i < points.size(); ++i) {
                series.values[spec.horizon_start + int(i)] = points[i];
            }
            out.push_back(std::move(series));
        }
    }
    return out;
}

std::map<int, double> ses_cluster_bases(const IndexScores& scores,
                                        const ClusteringResult& clustering) {
    // per-cluster mean DCIT by year
    std::map<int, std::map<int, std::pair<double, int>>> acc;  // cluster -> year
    for (const auto& [row, score] : scores.scores) {
        auto it = clustering.assignment.find(row.first);
        if (it == clustering.assignment.end()) continue;
        auto& cell = acc[it->second][row.second];
        cell.first += score;
        cell.second += 1;
    }

    std::map<int, double> bases;
    for (const auto& [cluster, by_year] : acc) {
        std::vector<double> series;
        for (const auto& [year, sum_count] : by_year) {
            series.push_back(sum_count.first / double(sum_count.second));
        }
        if (series.size() >= 4) {
            bases[cluster] = ses_fit(series).level;
        } else {
            bases[cluster] = series.back();
        }
    }
    return bases;
}

std::string forecast_to_csv(const std::vector<ForecastSeries>& series) {
    std::string out = "entity,scenario,year,dcit,clamped\n";
    for (const auto& s : series) {
        for (const auto& [year, point] : s.values) {
            out += s.entity + "," + s.scenario + "," + std::to_string(year) +
                   "," + csv::fmt(point.value) + "," +
                   (point.clamped ? "true" : "false") + "\n";
        }
    }
    return out;
}

}  // namespace dcit
