// dcit — build the Digital Competitiveness Index for Trade from a country
// panel, cluster the countries, probe robustness and project scenarios.
//
// `dcit run` executes the whole pipeline into --out; the other subcommands
// run just the stages they need and write only their own outputs, which is
// handy when iterating on one report.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"
#include "dcit/report.hpp"

namespace {

using dcit::RunConfig;

struct CommonFlags {
    std::string config, input, meta, out, weights, scope, impute, tdi;
    std::vector<std::string> scenarios;
    std::uint64_t seed = 42;
    int year = dcit::kHistoryEnd;
    int steps = 21;
    int k_min = 2, k_max = 6, restarts = 50;
    bool no_ses = false;

    CLI::Option *o_config = nullptr, *o_input = nullptr, *o_meta = nullptr,
                *o_out = nullptr, *o_weights = nullptr, *o_scope = nullptr,
                *o_impute = nullptr, *o_tdi = nullptr, *o_scenarios = nullptr,
                *o_seed = nullptr, *o_year = nullptr, *o_steps = nullptr,
                *o_kmin = nullptr, *o_kmax = nullptr, *o_restarts = nullptr,
                *o_no_ses = nullptr;

    void attach(CLI::App* sub) {
        o_config = sub->add_option("--config", config,
                                   "JSON run configuration; explicit flags "
                                   "override its fields");
        o_input = sub->add_option("--input", input,
                                  "long-format panel CSV "
                                  "(country,year,indicator,value)");
        o_meta = sub->add_option("--meta", meta,
                                 "country metadata CSV "
                                 "(country,name,cluster_hint)");
        o_out = sub->add_option("--out", out, "output directory");
        o_weights = sub->add_option(
            "--weights", weights,
            "equal | ict-heavy | fdi-heavy | path to a JSON weight file");
        o_scope = sub->add_option("--scope", scope,
                                  "normalization scope: pooled | per-year");
        o_impute = sub->add_option("--impute", impute,
                                   "gap policy: interpolate | strict");
        o_seed = sub->add_option("--seed", seed, "clustering RNG seed");
        o_year = sub->add_option("--year", year,
                                 "reference year for ranking, clustering and "
                                 "regressions");
        o_steps = sub->add_option("--steps", steps, "weight sweep step count");
        o_kmin = sub->add_option("--k-min", k_min, "smallest cluster count");
        o_kmax = sub->add_option("--k-max", k_max, "largest cluster count");
        o_restarts =
            sub->add_option("--restarts", restarts, "k-means restarts");
        o_scenarios = sub->add_option(
            "--scenario", scenarios,
            "forecast scenario JSON (repeat for several)");
        o_tdi = sub->add_option("--tdi", tdi,
                                "trade digitalization benchmark CSV "
                                "(cluster,tdi)");
        o_no_ses = sub->add_flag(
            "--no-ses", no_ses,
            "use the reference-year cluster mean as forecast base instead of "
            "the smoothed history level");
    }

    RunConfig build() const {
        RunConfig cfg;
        if (o_config->count()) cfg = RunConfig::from_json_file(config);
        if (o_input->count()) cfg.input_path = input;
        if (o_meta->count()) cfg.meta_path = meta;
        if (o_out->count()) cfg.out_dir = out;
        if (o_weights->count()) cfg.apply_weights_option(weights);
        if (o_scope->count()) cfg.scope = dcit::scope_from_string(scope);
        if (o_impute->count()) {
            if (impute == "interpolate") {
                cfg.impute = dcit::ImputePolicy::interpolate;
            } else if (impute == "strict") {
                cfg.impute = dcit::ImputePolicy::strict;
            } else {
                throw dcit::Error("unknown impute policy '" + impute + "'");
            }
        }
        if (o_seed->count()) cfg.seed = seed;
        if (o_year->count()) cfg.reference_year = year;
        if (o_steps->count()) cfg.sweep_steps = steps;
        if (o_kmin->count()) cfg.clustering.k_min = k_min;
        if (o_kmax->count()) cfg.clustering.k_max = k_max;
        if (o_restarts->count()) cfg.clustering.restarts = restarts;
        if (o_scenarios->count()) cfg.scenario_paths = scenarios;
        if (o_tdi->count()) cfg.tdi_path = tdi;
        if (o_no_ses->count()) cfg.forecast_use_ses = false;
        return cfg;
    }
};

void emit(const RunConfig& cfg, const std::string& name,
          const std::string& content) {
    std::filesystem::create_directories(cfg.out_dir);
    dcit::write_text_file(cfg.out_dir + "/" + name, content);
    std::cout << "wrote " << cfg.out_dir << "/" << name << "\n";
}

// Stage ladder: every subcommand climbs as far as it needs.
void up_to_ingest(const RunConfig& cfg, dcit::PipelineState& s) {
    cfg.validate();
    dcit::ingest_stage(cfg, s);
}
void up_to_index(const RunConfig& cfg, dcit::PipelineState& s) {
    up_to_ingest(cfg, s);
    dcit::index_stage(cfg, s);
}
void up_to_cluster(const RunConfig& cfg, dcit::PipelineState& s) {
    up_to_index(cfg, s);
    dcit::cluster_stage(cfg, s);
}

int cmd_ingest(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_ingest(cfg, s);
    emit(cfg, "panel_clean.csv", dcit::panel_to_csv(s.panel));
    emit(cfg, "validation.json", s.validation.to_json());
    for (const auto& note : s.rejected_rows) std::cout << note << "\n";
    std::cout << s.panel.countries.size() << " countries, "
              << s.panel.observations.size() << " observations, "
              << s.validation.imputed_cells.size() << " cells imputed, "
              << s.validation.missing_cells.size() << " still missing\n";
    return 0;
}

int cmd_index(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_index(cfg, s);
    emit(cfg, "dcit_scores.csv", dcit::scores_to_csv(s.scores));
    emit(cfg, "dcit_scores.json", dcit::scores_to_json(s.scores, s.z));
    std::string ranking = "rank,country,dcit\n";
    for (const auto& r : dcit::rank_countries(s.scores, cfg.reference_year)) {
        ranking += dcit::csv::fmt(r.rank) + "," + r.country + "," +
                   dcit::csv::fmt(r.score) + "\n";
    }
    emit(cfg, "ranking.csv", ranking);
    return 0;
}

int cmd_cluster(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_cluster(cfg, s);
    emit(cfg, "clusters.json", s.clustering.to_json());
    emit(cfg, "clusters.csv", s.clustering.to_csv());
    emit(cfg, "cluster_profiles.json", dcit::profiles_to_json(s.profiles));
    std::cout << dcit::to_string(s.clustering.method) << " k="
              << s.clustering.k << " silhouette=" << s.clustering.silhouette
              << "\n";
    return 0;
}

int cmd_stability(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_index(cfg, s);
    auto reports = dcit::stability_stage(cfg, s);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        emit(cfg, "stability_scatter_" + r.scenario_name + ".csv",
             r.scatter_csv());
        std::cout << r.scenario_name << ": rho=" << r.rho << "\n";
        arr.push_back(nlohmann::json::parse(r.to_json()));
    }
    emit(cfg, "stability.json", arr.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_index(cfg, s);
    auto sweep = dcit::sweep_stage(cfg, s);
    emit(cfg, "sweep.csv", sweep.to_csv());
    emit(cfg, "sweep.json", sweep.to_json());
    std::cout << "linearity_r2=" << sweep.linearity_r2
              << " max_relative_change=" << sweep.max_relative_change << " ("
              << sweep.max_change_country << ")\n";
    return 0;
}

int cmd_predict(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_index(cfg, s);
    std::vector<std::string> notes;
    auto table = dcit::predict_stage(cfg, s, notes);
    emit(cfg, "predictive_power.csv", dcit::predictive_power_csv(table));
    emit(cfg, "predictive_power.json",
         dcit::predictive_power_json(table, notes));
    for (const auto& n : notes) std::cout << n << "\n";
    return 0;
}

int cmd_forecast(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_cluster(cfg, s);
    auto series = dcit::forecast_stage(cfg, s);
    emit(cfg, "forecast.csv", dcit::forecast_to_csv(series));
    return 0;
}

int cmd_gap(const RunConfig& cfg) {
    dcit::PipelineState s;
    up_to_cluster(cfg, s);
    auto rows = dcit::gap_stage(cfg, s);
    emit(cfg, "gap.csv", dcit::gap_to_csv(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "dcit: digital competitiveness index construction, clustering, "
        "robustness checks and scenario forecasts"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* sub_ingest =
        app.add_subcommand("ingest", "validate, derive and impute the panel");
    auto* sub_index =
        app.add_subcommand("index", "normalize and score the composite index");
    auto* sub_cluster =
        app.add_subcommand("cluster", "group countries by digital maturity");
    auto* sub_stability =
        app.add_subcommand("stability", "rank stability under reweighting");
    auto* sub_sweep =
        app.add_subcommand("sweep", "DCIT along a weight interpolation path");
    auto* sub_predict =
        app.add_subcommand("predict", "regressions of outcomes on the index");
    auto* sub_forecast =
        app.add_subcommand("forecast", "scenario projections per cluster");
    auto* sub_gap =
        app.add_subcommand("gap", "readiness vs trade-outcome gap per cluster");
    auto* sub_run = app.add_subcommand("run", "full pipeline with manifest");
    for (auto* sub : {sub_ingest, sub_index, sub_cluster, sub_stability,
                      sub_sweep, sub_predict, sub_forecast, sub_gap, sub_run}) {
        flags.attach(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = flags.build();
        if (sub_run->parsed()) return dcit::run_pipeline(cfg, std::cout);
        if (sub_ingest->parsed()) return cmd_ingest(cfg);
        if (sub_index->parsed()) return cmd_index(cfg);
        if (sub_cluster->parsed()) return cmd_cluster(cfg);
        if (sub_stability->parsed()) return cmd_stability(cfg);
        if (sub_sweep->parsed()) return cmd_sweep(cfg);
        if (sub_predict->parsed()) return cmd_predict(cfg);
        if (sub_forecast->parsed()) return cmd_forecast(cfg);
        if (sub_gap->parsed()) return cmd_gap(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
