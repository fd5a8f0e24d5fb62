#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dcit/analysis.hpp"
#include "dcit/clustering.hpp"
#include "dcit/forecast.hpp"

namespace dcit {

struct TdiBenchmark {
    std::map<int, std::optional<double>> tdi;  // cluster -> TDI, blank allowed

    // CSV `cluster,tdi`, blank value permitted.
    static TdiBenchmark load(const std::string& path);
};

enum class GapQuadrant { readiness_led, execution_led, balanced, lagging };
std::string to_string(GapQuadrant q);

struct GapThresholds {
    double balanced_band = 0.05;  // |gap| <= band counts as balanced
    double low_level = 0.40;      // both sides below -> lagging
};

struct GapRow {
    int cluster = 0;
    double dcit_mean = 0.0;
    std::optional<double> tdi;
    std::optional<double> gap;  // tdi - dcit_mean
    std::optional<GapQuadrant> quadrant;
};

// Readiness-vs-execution gap per cluster. Missing TDI yields gap and quadrant
// marked not-available.
std::vector<GapRow> gap_report(const std::vector<ClusterProfile>& profiles,
                               const TdiBenchmark& tdi,
                               const GapThresholds& thresholds = {});

std::string gap_to_csv(const std::vector<GapRow>& rows);

struct ClusteringConfig {
    int k_min = 2;
    int k_max = 6;
    int restarts = 50;
    std::vector<ClusterMethod> methods = {ClusterMethod::kmeans,
                                          ClusterMethod::agglomerative_ward};
    FeatureMode features = FeatureMode::reference_year;
};

struct RunConfig {
    std::string input_path;
    std::string meta_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int reference_year = kHistoryEnd;
    Scope scope = Scope::pooled;
    WeightVector weights = WeightVector::equal();
    std::string weights_label = "equal";
    ImputePolicy impute = ImputePolicy::interpolate;
    ClusteringConfig clustering;
    std::vector<std::string> stability_scenarios = {"ict_heavy", "fdi_heavy"};
    std::string sweep_from = "ict_heavy";
    std::string sweep_to = "fdi_heavy";
    int sweep_steps = 21;
    std::vector<std::string> predict_targets;  // empty -> catalog targets
    std::vector<std::string> scenario_paths;
    bool forecast_use_ses = true;
    std::string tdi_path;
    std::string config_hash;  // filled when loaded from a file

    static RunConfig from_json_file(const std::string& path);
    void apply_weights_option(const std::string& option);  // preset or file
    // Startup check: input/meta must exist. Stage-specific resources
    // (scenario configs, TDI file) are opened at their stage so a failure
    // there keeps earlier outputs.
    void validate() const;
};

// Accumulated state shared by the pipeline stages. Each stage fills its
// slice; later stages read earlier ones.
struct PipelineState {
    PanelDataset panel;
    std::map<std::string, CountryMeta> meta;
    ValidationReport validation;
    std::vector<std::string> rejected_rows;
    NormalizedMatrix z;
    IndexScores scores;
    ClusteringResult clustering;
    std::vector<ClusterProfile> profiles;
};

// Stage bodies, also used by the standalone CLI subcommands. Each throws
// Error on failure.
void ingest_stage(const RunConfig& config, PipelineState& state);
void index_stage(const RunConfig& config, PipelineState& state);
void cluster_stage(const RunConfig& config, PipelineState& state);
std::vector<StabilityReport> stability_stage(const RunConfig& config,
                                             const PipelineState& state);
SweepReport sweep_stage(const RunConfig& config, const PipelineState& state);
std::vector<TargetFit> predict_stage(const RunConfig& config,
                                     const PipelineState& state,
                                     std::vector<std::string>& notes);
std::vector<ForecastSeries> forecast_stage(const RunConfig& config,
                                           const PipelineState& state);
std::vector<GapRow> gap_stage(const RunConfig& config,
                              const PipelineState& state);

std::string profiles_to_json(const std::vector<ClusterProfile>& profiles);
void write_text_file(const std::string& path, const std::string& content);

// Full pipeline: ingest -> normalize -> index -> cluster -> stability ->
// sweep -> predict -> forecast -> gap. Writes every report plus
// manifest.json; returns 0 on success. On a stage error the manifest marks
// the failed stage, earlier outputs are kept, and the exit status is 1.
int run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace dcit
