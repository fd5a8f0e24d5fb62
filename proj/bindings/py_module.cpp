// Python bindings for the DCIT core. Thin wrappers: plain lists/dicts in,
// plain dicts out, exceptions surfaced as RuntimeError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <optional>
#include <sstream>

#include "dcit/analysis.hpp"
#include "dcit/clustering.hpp"
#include "dcit/error.hpp"
#include "dcit/forecast.hpp"
#include "dcit/index.hpp"
#include "dcit/panel.hpp"
#include "dcit/report.hpp"

namespace py = pybind11;
using namespace dcit;

namespace {

FeatureMatrix make_features(const std::vector<std::vector<double>>& rows,
                            std::optional<std::vector<std::string>> labels) {
    FeatureMatrix x;
    x.rows = rows;
    if (labels) {
        x.labels = *labels;
    } else {
        // zero-padded row indices keep the canonical (lexicographic)
        // cluster labeling aligned with row order
        int width = 1;
        for (std::size_t n = rows.size(); n >= 10; n /= 10) ++width;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "r%0*zu", width, i);
            x.labels.emplace_back(buf);
        }
    }
    x.validate();
    return x;
}

py::dict clustering_to_dict(const ClusteringResult& r) {
    py::dict out;
    out["method"] = to_string(r.method);
    out["k"] = r.k;
    out["assignment"] = r.assignment;
    out["centroids"] = r.centroids;
    out["silhouette"] = r.silhouette;
    if (r.inertia) out["inertia"] = *r.inertia;
    return out;
}

WeightVector weights_from_any(const py::object& spec) {
    if (spec.is_none()) return WeightVector::equal();
    if (py::isinstance<py::str>(spec)) {
        std::string name = spec.cast<std::string>();
        RunConfig cfg;
        cfg.apply_weights_option(name);
        return cfg.weights;
    }
    auto values = spec.cast<std::vector<double>>();
    if (values.size() != kNumDimensions) {
        throw Error("weight vector needs exactly " +
                    std::to_string(kNumDimensions) + " entries");
    }
    WeightVector w;
    for (std::size_t d = 0; d < kNumDimensions; ++d) w.w[d] = values[d];
    w.validate();
    return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Digital Competitiveness Index for Trade: index construction, "
        "clustering, robustness statistics and scenario forecasts";
#ifdef DCIT_VERSION
    m.attr("__version__") = DCIT_VERSION;
#endif
    {
        py::list dims;
        for (const auto& d : kDimensionIds) dims.append(d);
        m.attr("DIMENSIONS") = dims;
    }

    m.def("minmax_normalize", &minmax_normalize, py::arg("series"),
          "Rescale a series to [0,1] via (x - min) / (max - min).");

    m.def("spearman_rho", &spearman_rho, py::arg("a"), py::arg("b"),
          "Spearman rank correlation (average fractional ranks).");

    m.def(
        "ols_fit",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            RegressionFit f = ols_r2(x, y);
            py::dict out;
            out["slope"] = f.slope;
            out["intercept"] = f.intercept;
            out["r_squared"] = f.r_squared;
            out["n_obs"] = f.n_obs;
            out["degenerate_target"] = f.degenerate_target;
            return out;
        },
        py::arg("x"), py::arg("y"),
        "Simple least-squares line of y on x with R^2.");

    m.def(
        "ses_fit",
        [](const std::vector<double>& series) {
            SmoothingFit f = ses_fit(series);
            py::dict out;
            out["alpha"] = f.alpha;
            out["level"] = f.level;
            out["sse"] = f.sse;
            return out;
        },
        py::arg("series"),
        "Simple exponential smoothing with SSE-optimal alpha.");

    m.def(
        "scenario_project",
        [](double base, double growth_rate, double ict_factor, int t) {
            Projection p = scenario_project(base, growth_rate, ict_factor, t);
            return py::make_tuple(p.value, p.clamped);
        },
        py::arg("base"), py::arg("growth_rate"), py::arg("ict_factor"),
        py::arg("t"),
        "base * (1+g)^t * factor clamped to [0,1]; returns (value, clamped).");

    m.def("calibrate_growth", &calibrate_growth, py::arg("base"),
          py::arg("target"), py::arg("horizon"), py::arg("ict_factor"),
          "Growth rate whose projection reaches target at the horizon.");

    m.def(
        "kmeans",
        [](const std::vector<std::vector<double>>& rows, int k,
           std::uint64_t seed, int restarts,
           std::optional<std::vector<std::string>> labels) {
            return clustering_to_dict(
                kmeans(make_features(rows, std::move(labels)), k, seed,
                       restarts));
        },
        py::arg("rows"), py::arg("k"), py::arg("seed") = 42,
        py::arg("restarts") = 50, py::arg("labels") = py::none(),
        "k-means++ / Lloyd with restarts; deterministic for a given seed.");

    m.def(
        "ward",
        [](const std::vector<std::vector<double>>& rows, int k,
           std::optional<std::vector<std::string>> labels) {
            return clustering_to_dict(
                agglomerative_ward(make_features(rows, std::move(labels)), k));
        },
        py::arg("rows"), py::arg("k"), py::arg("labels") = py::none(),
        "Agglomerative clustering with Ward linkage cut at k clusters.");

    m.def(
        "silhouette",
        [](const std::vector<std::vector<double>>& rows,
           const std::vector<int>& assignment) {
            return silhouette(make_features(rows, std::nullopt), assignment);
        },
        py::arg("rows"), py::arg("assignment"),
        "Mean silhouette score of an assignment.");

    m.def(
        "index_scores",
        [](const std::string& input, const std::string& scope,
           const py::object& weights) {
            RunConfig cfg;
            cfg.input_path = input;
            cfg.scope = scope_from_string(scope);
            cfg.weights = weights_from_any(weights);
            PipelineState state;
            ingest_stage(cfg, state);
            index_stage(cfg, state);
            py::list rows;
            for (const auto& [key, score] : state.scores.scores) {
                py::dict r;
                r["country"] = key.first;
                r["year"] = key.second;
                r["dcit"] = score;
                rows.append(r);
            }
            return rows;
        },
        py::arg("input"), py::arg("scope") = "pooled",
        py::arg("weights") = py::none(),
        "Ingest a long-format panel CSV and score every complete "
        "country-year; weights may be a preset name or a 5-vector.");

    m.def(
        "run",
        [](const py::object& config, const py::object& out,
           const py::object& input) {
            RunConfig cfg;
            if (!config.is_none()) {
                cfg = RunConfig::from_json_file(config.cast<std::string>());
            }
            if (!input.is_none()) cfg.input_path = input.cast<std::string>();
            if (!out.is_none()) cfg.out_dir = out.cast<std::string>();
            std::ostringstream log;
            int status = run_pipeline(cfg, log);
            py::dict result;
            result["status"] = status;
            result["log"] = log.str();
            result["out_dir"] = cfg.out_dir;
            return result;
        },
        py::arg("config") = py::none(), py::arg("out") = py::none(),
        py::arg("input") = py::none(),
        "Run the full pipeline; returns {'status', 'log', 'out_dir'}.");
}
