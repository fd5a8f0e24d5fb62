#include "dcit/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <utility>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dcit {

TdiBenchmark TdiBenchmark::load(const std::string& path) {
    auto lines = csv::read_lines(path);
    if (lines.empty() ||
        csv::split_line(lines[0]) != std::vector<std::string>{"cluster", "tdi"}) {
        throw Error("TDI benchmark " + path + ": expected header `cluster,tdi`");
    }
    TdiBenchmark out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string where = path + ":" + std::to_string(i + 1);
        auto fields = csv::split_line(lines[i]);
        if (fields.size() != 2) {
            throw Error(where + ": expected 2 fields, got " +
                        std::to_string(fields.size()));
        }
        bool ok = false;
        int cluster = csv::parse_int(fields[0], &ok);
        if (!ok || cluster < 0) {
            throw Error(where + ": bad cluster id '" + fields[0] + "'");
        }
        if (out.tdi.count(cluster)) {
            throw Error(where + ": duplicate cluster " + std::to_string(cluster));
        }
        if (fields[1].empty()) {
            out.tdi[cluster] = std::nullopt;  // benchmark not available
            continue;
        }
        double v = csv::parse_double(fields[1], &ok);
        if (!ok || !std::isfinite(v)) {
            throw Error(where + ": bad TDI value '" + fields[1] + "'");
        }
        out.tdi[cluster] = v;
    }
    return out;
}

std::string to_string(GapQuadrant q) {
    switch (q) {
        case GapQuadrant::readiness_led: return "readiness_led";
        case GapQuadrant::execution_led: return "execution_led";
        case GapQuadrant::balanced: return "balanced";
        case GapQuadrant::lagging: return "lagging";
    }
    throw Error("unknown gap quadrant");
}

std::vector<GapRow> gap_report(const std::vector<ClusterProfile>& profiles,
                               const TdiBenchmark& tdi,
                               const GapThresholds& thresholds) {
    std::vector<GapRow> rows;
    rows.reserve(profiles.size());
    for (const auto& p : profiles) {
        GapRow r;
        r.cluster = p.cluster;
        r.dcit_mean = p.mean_dcit;
        auto it = tdi.tdi.find(p.cluster);
        if (it != tdi.tdi.end() && it->second.has_value()) {
            double t = *it->second;
            double gap = t - p.mean_dcit;
            r.tdi = t;
            r.gap = gap;
            if (p.mean_dcit < thresholds.low_level && t < thresholds.low_level) {
                r.quadrant = GapQuadrant::lagging;
            } else if (std::fabs(gap) <= thresholds.balanced_band) {
                r.quadrant = GapQuadrant::balanced;
            } else if (gap > 0.0) {
                // trade outcomes run ahead of digital readiness
                r.quadrant = GapQuadrant::execution_led;
            } else {
                r.quadrant = GapQuadrant::readiness_led;
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string gap_to_csv(const std::vector<GapRow>& rows) {
    std::string out = "cluster,dcit_mean,tdi,gap,quadrant\n";
    for (const auto& r : rows) {
        out += csv::fmt(r.cluster) + "," + csv::fmt(r.dcit_mean) + ",";
        out += r.tdi ? csv::fmt(*r.tdi) : std::string("n/a");
        out += ",";
        out += r.gap ? csv::fmt(*r.gap) : std::string("n/a");
        out += ",";
        out += r.quadrant ? to_string(*r.quadrant) : std::string("n/a");
        out += "\n";
    }
    return out;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

std::string normalize_option(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

ClusterMethod method_from_string(const std::string& s) {
    if (s == "kmeans" || s == "k-means") return ClusterMethod::kmeans;
    if (s == "ward" || s == "agglomerative_ward" || s == "agglomerative") {
        return ClusterMethod::agglomerative_ward;
    }
    throw Error("unknown clustering method '" + s + "'");
}

FeatureMode feature_mode_from_string(const std::string& s) {
    if (s == "reference_year") return FeatureMode::reference_year;
    if (s == "time_average") return FeatureMode::time_average;
    throw Error("unknown feature mode '" + s +
                "' (reference_year|time_average)");
}

// Weight presets shared by stability scenarios and sweep endpoints.
WeightVector named_weights(const std::string& name) {
    std::string n = normalize_option(name);
    if (n == "equal" || n == "baseline") return WeightVector::equal();
    return reweight_scenario(weight_preset_from_string(n));
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::string raw = read_file(path);
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::exception& e) {
        throw Error("config " + path + ": " + e.what());
    }
    RunConfig cfg;
    try {
        auto str = [&](const char* key, std::string& dst) {
            if (j.contains(key)) dst = j.at(key).get<std::string>();
        };
        str("input", cfg.input_path);
        str("meta", cfg.meta_path);
        str("out", cfg.out_dir);
        str("tdi", cfg.tdi_path);
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("reference_year")) {
            cfg.reference_year = j.at("reference_year").get<int>();
        }
        if (j.contains("scope")) {
            cfg.scope = scope_from_string(j.at("scope").get<std::string>());
        }
        if (j.contains("impute")) {
            std::string p = j.at("impute").get<std::string>();
            if (p == "interpolate") {
                cfg.impute = ImputePolicy::interpolate;
            } else if (p == "strict") {
                cfg.impute = ImputePolicy::strict;
            } else {
                throw Error("impute policy '" + p + "' (interpolate|strict)");
            }
        }
        if (j.contains("weights")) {
            const json& w = j.at("weights");
            if (w.is_string()) {
                cfg.apply_weights_option(w.get<std::string>());
            } else if (w.is_object()) {
                WeightVector wv{};
                for (std::size_t d = 0; d < kNumDimensions; ++d) {
                    wv.w[d] = w.at(kDimensionIds[d]).get<double>();
                }
                wv.validate();
                cfg.weights = wv;
                cfg.weights_label = "custom";
            } else {
                throw Error("weights must be a preset name or an object");
            }
        }
        if (j.contains("clustering")) {
            const json& c = j.at("clustering");
            if (c.contains("k_min")) cfg.clustering.k_min = c.at("k_min").get<int>();
            if (c.contains("k_max")) cfg.clustering.k_max = c.at("k_max").get<int>();
            if (c.contains("restarts")) {
                cfg.clustering.restarts = c.at("restarts").get<int>();
            }
            if (c.contains("methods")) {
                cfg.clustering.methods.clear();
                for (const auto& m : c.at("methods")) {
                    cfg.clustering.methods.push_back(
                        method_from_string(m.get<std::string>()));
                }
            }
            if (c.contains("features")) {
                cfg.clustering.features =
                    feature_mode_from_string(c.at("features").get<std::string>());
            }
        }
        if (j.contains("stability_scenarios")) {
            cfg.stability_scenarios =
                j.at("stability_scenarios").get<std::vector<std::string>>();
        }
        if (j.contains("sweep")) {
            const json& sw = j.at("sweep");
            if (sw.contains("from")) cfg.sweep_from = sw.at("from").get<std::string>();
            if (sw.contains("to")) cfg.sweep_to = sw.at("to").get<std::string>();
            if (sw.contains("steps")) cfg.sweep_steps = sw.at("steps").get<int>();
        }
        if (j.contains("predict_targets")) {
            cfg.predict_targets =
                j.at("predict_targets").get<std::vector<std::string>>();
        }
        if (j.contains("scenarios")) {
            cfg.scenario_paths = j.at("scenarios").get<std::vector<std::string>>();
        }
        if (j.contains("forecast_use_ses")) {
            cfg.forecast_use_ses = j.at("forecast_use_ses").get<bool>();
        }
    } catch (const json::exception& e) {
        throw Error("config " + path + ": " + e.what());
    }
    // Input-side paths resolve relative to the config file, so a bundled
    // config works from any working directory. The output directory stays
    // CWD-relative: it is a destination, usually overridden per run.
    fs::path base = fs::path(path).parent_path();
    auto anchor = [&base](std::string& p) {
        if (!p.empty() && fs::path(p).is_relative()) {
            p = (base / p).lexically_normal().string();
        }
    };
    anchor(cfg.input_path);
    anchor(cfg.meta_path);
    anchor(cfg.tdi_path);
    for (auto& s : cfg.scenario_paths) anchor(s);
    cfg.config_hash = csv::fnv1a_hex(raw);
    return cfg;
}

void RunConfig::apply_weights_option(const std::string& option) {
    std::string n = normalize_option(option);
    if (n == "equal" || n == "baseline") {
        weights = WeightVector::equal();
        weights_label = "equal";
        return;
    }
    if (n == "ict_heavy" || n == "fdi_heavy") {
        weights = reweight_scenario(weight_preset_from_string(n));
        weights_label = n;
        return;
    }
    // Anything else is a JSON file mapping the five dimension ids to weights.
    if (!fs::exists(option)) {
        throw Error("weights option '" + option +
                    "' is neither a preset (equal|ict-heavy|fdi-heavy) nor a "
                    "readable file");
    }
    json j;
    try {
        j = json::parse(read_file(option));
        WeightVector wv{};
        for (std::size_t d = 0; d < kNumDimensions; ++d) {
            wv.w[d] = j.at(kDimensionIds[d]).get<double>();
        }
        wv.validate();
        weights = wv;
    } catch (const json::exception& e) {
        throw Error("weights file " + option + ": " + e.what());
    }
    weights_label = fs::path(option).filename().string();
}

void RunConfig::validate() const {
    if (input_path.empty()) throw Error("no input panel given (--input)");
    if (!fs::exists(input_path)) {
        throw Error("input panel not found: " + input_path);
    }
    if (!meta_path.empty() && !fs::exists(meta_path)) {
        throw Error("country meta not found: " + meta_path);
    }
    if (reference_year < kHistoryStart || reference_year > kHistoryEnd) {
        throw Error("reference year " + std::to_string(reference_year) +
                    " outside " + std::to_string(kHistoryStart) + ".." +
                    std::to_string(kHistoryEnd));
    }
    weights.validate();
    if (clustering.k_min < 2 || clustering.k_max < clustering.k_min) {
        throw Error("cluster range must satisfy 2 <= k_min <= k_max");
    }
    if (clustering.restarts < 1) throw Error("clustering restarts must be >= 1");
    if (clustering.methods.empty()) throw Error("no clustering methods enabled");
    if (sweep_steps < 3) throw Error("sweep needs at least 3 steps");
}

void ingest_stage(const RunConfig& config, PipelineState& state) {
    if (!config.meta_path.empty()) {
        state.meta = load_country_meta(config.meta_path);
    }
    PanelDataset raw =
        load_panel(config.input_path, IndicatorCatalog::standard(),
                   &state.rejected_rows);
    ValidationReport trade_report;
    PanelDataset with_trade = compute_total_trade(raw, &trade_report);
    auto [clean, impute_report] = impute_gaps(with_trade, config.impute);
    state.validation = std::move(impute_report);
    state.validation.missing_cells.insert(state.validation.missing_cells.begin(),
                                          trade_report.missing_cells.begin(),
                                          trade_report.missing_cells.end());
    state.panel = std::move(clean);
}

void index_stage(const RunConfig& config, PipelineState& state) {
    state.z = normalize_panel(state.panel, config.scope);
    state.scores = composite_index(state.z, config.weights);
    if (!state.z.has_year(config.reference_year)) {
        throw Error("no scored countries in reference year " +
                    std::to_string(config.reference_year));
    }
}

void cluster_stage(const RunConfig& config, PipelineState& state) {
    FeatureMatrix x = build_feature_matrix(state.z, config.clustering.features,
                                           config.reference_year);
    state.clustering = select_clustering(
        x, config.clustering.k_min, config.clustering.k_max,
        config.clustering.methods, config.seed, config.clustering.restarts);
    state.profiles =
        cluster_profile(state.scores, state.clustering, config.reference_year);
}

std::vector<StabilityReport> stability_stage(const RunConfig& config,
                                             const PipelineState& state) {
    std::vector<StabilityReport> out;
    out.reserve(config.stability_scenarios.size());
    for (const auto& name : config.stability_scenarios) {
        out.push_back(rank_stability(state.z, config.weights,
                                     named_weights(name),
                                     config.reference_year, name));
    }
    return out;
}

SweepReport sweep_stage(const RunConfig& config, const PipelineState& state) {
    return weight_sweep(state.z, named_weights(config.sweep_from),
                        named_weights(config.sweep_to), config.sweep_steps,
                        config.reference_year);
}

std::vector<TargetFit> predict_stage(const RunConfig& config,
                                     const PipelineState& state,
                                     std::vector<std::string>& notes) {
    std::vector<std::string> targets = config.predict_targets.empty()
                                           ? state.panel.catalog.targets()
                                           : config.predict_targets;
    return predictive_power(state.scores, state.panel, targets,
                            config.reference_year, &notes);
}

std::vector<ForecastSeries> forecast_stage(const RunConfig& config,
                                           const PipelineState& state) {
    if (config.scenario_paths.empty()) {
        throw Error("no scenario configs given");
    }
    std::vector<ScenarioSpec> scenarios;
    scenarios.reserve(config.scenario_paths.size());
    for (const auto& p : config.scenario_paths) {
        scenarios.push_back(load_scenario(p));
    }
    std::vector<ClusterProfile> profiles = state.profiles;
    if (config.forecast_use_ses) {
        // smoothed level of the cluster's own DCIT history makes a steadier
        // launch point than the single reference-year mean
        auto bases = ses_cluster_bases(state.scores, state.clustering);
        for (auto& p : profiles) {
            auto it = bases.find(p.cluster);
            if (it != bases.end()) p.mean_dcit = it->second;
        }
    }
    return forecast_clusters(profiles, scenarios, config.weights);
}

std::vector<GapRow> gap_stage(const RunConfig& config,
                              const PipelineState& state) {
    TdiBenchmark tdi;
    if (!config.tdi_path.empty()) tdi = TdiBenchmark::load(config.tdi_path);
    return gap_report(state.profiles, tdi, GapThresholds{});
}

std::string profiles_to_json(const std::vector<ClusterProfile>& profiles) {
    json rows = json::array();
    for (const auto& p : profiles) {
        json r;
        r["cluster"] = p.cluster;
        r["mean_dcit"] = p.mean_dcit;
        r["count"] = p.count;
        r["share"] = p.share;
        r["share_pct"] = p.share_pct();
        r["centroid"] = p.centroid;
        rows.push_back(std::move(r));
    }
    return rows.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + path);
}

namespace {

std::string ranking_csv(const IndexScores& scores, int year) {
    std::string out = "rank,country,dcit\n";
    for (const auto& r : rank_countries(scores, year)) {
        out += csv::fmt(r.rank) + "," + r.country + "," + csv::fmt(r.score) +
               "\n";
    }
    return out;
}

// Settings-only view of the config: identifies the run without baking in
// filesystem paths, so e.g. two output directories of the same run still
// compare byte-identical.
json config_summary(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["reference_year"] = cfg.reference_year;
    j["scope"] = to_string(cfg.scope);
    json w;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
        w[kDimensionIds[d]] = cfg.weights.w[d];
    }
    j["weights"] = w;
    j["weights_label"] = cfg.weights_label;
    j["impute"] =
        cfg.impute == ImputePolicy::interpolate ? "interpolate" : "strict";
    json cl;
    cl["k_min"] = cfg.clustering.k_min;
    cl["k_max"] = cfg.clustering.k_max;
    cl["restarts"] = cfg.clustering.restarts;
    json methods = json::array();
    for (auto m : cfg.clustering.methods) methods.push_back(to_string(m));
    cl["methods"] = methods;
    cl["features"] = cfg.clustering.features == FeatureMode::reference_year
                         ? "reference_year"
                         : "time_average";
    j["clustering"] = cl;
    j["stability_scenarios"] = cfg.stability_scenarios;
    j["sweep"] = {{"from", cfg.sweep_from},
                  {"to", cfg.sweep_to},
                  {"steps", cfg.sweep_steps}};
    j["predict_targets"] = cfg.predict_targets;
    j["forecast_use_ses"] = cfg.forecast_use_ses;
    json scen = json::array();
    for (const auto& p : cfg.scenario_paths) {
        scen.push_back(fs::path(p).filename().string());
    }
    j["scenarios"] = scen;
    j["tdi"] = cfg.tdi_path.empty()
                   ? std::string()
                   : fs::path(cfg.tdi_path).filename().string();
    return j;
}

}  // namespace

int run_pipeline(const RunConfig& config, std::ostream& log) {
    config.validate();
    fs::create_directories(config.out_dir);

    PipelineState state;
    struct StageEntry {
        std::string name, status, error;
    };
    std::vector<StageEntry> stages;
    std::vector<std::string> outputs;
    bool failed = false;

    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file(config.out_dir + "/" + name, content);
        outputs.push_back(name);
    };
    auto run_stage = [&](const std::string& name, auto&& body) {
        if (failed) {
            stages.push_back({name, "skipped", ""});
            return;
        }
        try {
            body();
            stages.push_back({name, "ok", ""});
        } catch (const std::exception& e) {
            stages.push_back({name, "failed", e.what()});
            log << "[dcit] " << name << " FAILED: " << e.what() << "\n";
            failed = true;
        }
    };

    run_stage("ingest", [&] {
        ingest_stage(config, state);
        emit("panel_clean.csv", panel_to_csv(state.panel));
        emit("validation.json", state.validation.to_json());
        log << "[dcit] ingest: " << state.panel.countries.size()
            << " countries, " << state.panel.observations.size()
            << " observations, " << state.validation.imputed_cells.size()
            << " imputed, " << state.validation.excluded_countries.size()
            << " excluded\n";
    });

    run_stage("index", [&] {
        index_stage(config, state);
        emit("dcit_scores.csv", scores_to_csv(state.scores));
        emit("dcit_scores.json", scores_to_json(state.scores, state.z));
        emit("ranking.csv", ranking_csv(state.scores, config.reference_year));
        log << "[dcit] index: " << state.scores.scores.size()
            << " country-years scored (" << config.weights_label
            << " weights, " << to_string(config.scope) << " scope)\n";
    });

    run_stage("cluster", [&] {
        cluster_stage(config, state);
        json cj = json::parse(state.clustering.to_json());
        cj["profiles"] = json::parse(profiles_to_json(state.profiles));
        emit("clusters.json", cj.dump(2) + "\n");
        emit("clusters.csv", state.clustering.to_csv());
        log << "[dcit] cluster: " << to_string(state.clustering.method)
            << ", k=" << state.clustering.k
            << ", silhouette=" << state.clustering.silhouette << "\n";
    });

    run_stage("stability", [&] {
        auto reports = stability_stage(config, state);
        json arr = json::array();
        for (const auto& r : reports) {
            arr.push_back(json::parse(r.to_json()));
            emit("stability_scatter_" + r.scenario_name + ".csv",
                 r.scatter_csv());
            log << "[dcit] stability: " << r.scenario_name
                << " rho=" << r.rho << "\n";
        }
        emit("stability.json", arr.dump(2) + "\n");
    });

    run_stage("sweep", [&] {
        SweepReport sweep = sweep_stage(config, state);
        emit("sweep.csv", sweep.to_csv());
        emit("sweep.json", sweep.to_json());
        log << "[dcit] sweep: linearity_r2=" << sweep.linearity_r2
            << ", max_relative_change=" << sweep.max_relative_change << " ("
            << sweep.max_change_country << ")\n";
    });

    run_stage("predict", [&] {
        std::vector<std::string> notes;
        auto table = predict_stage(config, state, notes);
        emit("predictive_power.csv", predictive_power_csv(table));
        emit("predictive_power.json", predictive_power_json(table, notes));
        if (!table.empty()) {
            log << "[dcit] predict: best target " << table.front().target
                << " (R2=" << table.front().fit.r_squared << ")\n";
        }
    });

    run_stage("forecast", [&] {
        auto series = forecast_stage(config, state);
        emit("forecast.csv", forecast_to_csv(series));
        log << "[dcit] forecast: " << series.size() << " series over "
            << config.scenario_paths.size() << " scenarios\n";
    });

    run_stage("gap", [&] {
        auto rows = gap_stage(config, state);
        emit("gap.csv", gap_to_csv(rows));
        log << "[dcit] gap: " << rows.size() << " clusters\n";
    });

    // Manifest last, also after a failure, so a partial run documents itself.
    // Deliberately no timestamps: reruns must be byte-identical.
    json manifest;
    manifest["tool"] = "dcit";
    manifest["version"] = "0.1.0";
    json cfg_json = config_summary(config);
    manifest["config"] = cfg_json;
    manifest["config_hash"] = config.config_hash.empty()
                                  ? csv::fnv1a_hex(cfg_json.dump())
                                  : config.config_hash;
    manifest["input_hash"] = csv::fnv1a_hex(read_file(config.input_path));
    json stage_arr = json::array();
    for (const auto& s : stages) {
        json e;
        e["name"] = s.name;
        e["status"] = s.status;
        if (!s.error.empty()) e["error"] = s.error;
        stage_arr.push_back(std::move(e));
    }
    manifest["stages"] = stage_arr;
    std::sort(outputs.begin(), outputs.end());
    manifest["outputs"] = outputs;
    write_text_file(config.out_dir + "/manifest.json",
                    manifest.dump(2) + "\n");

    log << (failed ? "[dcit] pipeline FAILED\n" : "[dcit] pipeline ok\n");
    return failed ? 1 : 0;
}

}  // namespace dcit
