// End-to-end acceptance checks against independent oracles and pinned
// reference values. Prints one [PASS]/[FAIL] line per criterion; exits with
// the number of failed criteria.
//
// usage: dcit_acceptance <source-root> <path-to-dcit-cli>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dcit/analysis.hpp"
#include "dcit/clustering.hpp"
#include "dcit/csv.hpp"
#include "dcit/error.hpp"
#include "dcit/forecast.hpp"
#include "dcit/index.hpp"
#include "dcit/report.hpp"

namespace fs = std::filesystem;
using namespace dcit;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what,
            const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion
              << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << ms << " ms";
    return os.str();
}

// ---------------------------------------------------------------- oracles

// definitional averaged ranks: rank_i = #smaller + (#equal + 1) / 2
std::vector<long double> oracle_ranks(const std::vector<double>& v) {
    std::vector<long double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t smaller = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++smaller;
            if (v[j] == v[i]) ++equal;
        }
        r[i] = (long double)(smaller) + ((long double)(equal) + 1.0L) / 2.0L;
    }
    return r;
}

long double oracle_pearson(const std::vector<long double>& a,
                           const std::vector<long double>& b) {
    const std::size_t n = a.size();
    long double ma = 0.0L, mb = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= (long double)n;
    mb /= (long double)n;
    long double cov = 0.0L, va = 0.0L, vb = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

// independent simple-regression R^2 via the normal equations; a constant
// series is a perfect (flat) linear fit
long double oracle_linear_r2(const std::vector<double>& x,
                             const std::vector<double>& y) {
    const std::size_t n = x.size();
    long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += (long double)x[i] * x[i];
        sxy += (long double)x[i] * y[i];
        syy += (long double)y[i] * y[i];
    }
    long double nn = (long double)n;
    long double sstot = syy - sy * sy / nn;
    if (sstot < 1e-18L) return 1.0L;
    long double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    long double intercept = (sy - slope * sx) / nn;
    long double ssres = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        long double e = y[i] - (intercept + slope * x[i]);
        ssres += e * e;
    }
    return 1.0L - ssres / sstot;
}

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        s += (a[d] - b[d]) * (a[d] - b[d]);
    }
    return s;
}

// O(n^2) silhouette straight from the definition
double oracle_silhouette(const std::vector<std::vector<double>>& pts,
                         const std::vector<int>& assign, int k) {
    const std::size_t n = pts.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sum(k, 0.0);
        std::vector<int> count(k, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[assign[j]] += std::sqrt(sqdist(pts[i], pts[j]));
            count[assign[j]] += 1;
        }
        if (count[assign[i]] == 0) continue;  // singleton: contributes 0
        double a = sum[assign[i]] / count[assign[i]];
        double b = 1e300;
        for (int c = 0; c < k; ++c) {
            if (c == assign[i] || count[c] == 0) continue;
            b = std::min(b, sum[c] / count[c]);
        }
        double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / double(n);
}

// global optimum over every assignment of n points to k labels
double exhaustive_inertia(const std::vector<std::vector<double>>& pts, int k) {
    const std::size_t n = pts.size();
    const std::size_t dims = pts.front().size();
    std::vector<int> assign(n, 0);
    double best = 1e300;
    while (true) {
        std::vector<std::vector<double>> centroid(k,
                                                  std::vector<double>(dims, 0.0));
        std::vector<int> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            count[assign[i]] += 1;
            for (std::size_t d = 0; d < dims; ++d) {
                centroid[assign[i]][d] += pts[i][d];
            }
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] == 0) continue;
            for (std::size_t d = 0; d < dims; ++d) {
                centroid[c][d] /= double(count[c]);
            }
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            inertia += sqdist(pts[i], centroid[assign[i]]);
        }
        best = std::min(best, inertia);

        std::size_t pos = 0;  // increment the base-k counter
        while (pos < n) {
            if (++assign[pos] < k) break;
            assign[pos] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return best;
}

FeatureMatrix to_matrix(const std::vector<std::vector<double>>& pts) {
    FeatureMatrix x;
    x.rows = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "R%03zu", i);
        x.labels.push_back(buf);
    }
    return x;
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// ------------------------------------------------------------- criteria

void criterion_1_table3(const std::string& src) {
    auto t0 = Clock::now();
    auto spec = load_scenario(src + "/data/scenarios/high_growth.json");
    const std::map<int, double> bases{{0, 0.327}, {1, 0.116}, {2, 0.274},
                                      {3, 0.810}};
    const std::map<int, double> targets{{0, 0.95}, {1, 0.88}, {2, 0.991},
                                        {3, 0.923}};
    std::vector<ClusterProfile> profiles;
    for (const auto& [cluster, base] : bases) {
        ClusterProfile p;
        p.cluster = cluster;
        p.mean_dcit = base;
        profiles.push_back(p);
    }
    auto series = forecast_clusters(profiles, {spec}, WeightVector::equal());
    double max_err = 0.0;
    for (const auto& s : series) {
        int cluster = std::stoi(s.entity.substr(s.entity.rfind('_') + 1));
        double got = s.values.at(2028).value;
        max_err = std::max(max_err, std::fabs(got - targets.at(cluster)));
    }
    double ms = ms_since(t0);
    bool ok = series.size() == 4 && max_err <= 0.005 && ms < 1000.0;
    std::ostringstream detail;
    detail.precision(6);
    detail << "max err " << max_err << ", " << fmt_ms(ms);
    report(1, ok, "2028 projections from the calibrated high-growth scenario "
                  "match the reference table within 0.005",
           detail.str());
}

void criterion_2_calibration() {
    std::mt19937_64 rng(20240202);
    std::uniform_real_distribution<double> base_d(0.05, 0.95);
    std::uniform_real_distribution<double> target_d(0.05, 1.45);
    std::uniform_int_distribution<int> horizon_d(1, 10);
    std::uniform_real_distribution<double> factor_d(0.8, 1.25);

    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double base = base_d(rng);
        double target = target_d(rng);
        int horizon = horizon_d(rng);
        double factor = factor_d(rng);
        double g = calibrate_growth(base, target, horizon, factor);
        double raw = base * std::pow(1.0 + g, double(horizon)) * factor;
        max_err = std::max(max_err, std::fabs(raw - target));
        if (target <= 1.0) {  // inside the index range the projection agrees
            auto p = scenario_project(base, g, factor, horizon);
            max_err = std::max(max_err, std::fabs(p.value - target));
        }
    }
    std::ostringstream detail;
    detail << "1000 tuples, max err " << max_err;
    report(2, max_err <= 1e-9,
           "calibrated growth rates round-trip through the projection within "
           "1e-9",
           detail.str());
}

void criterion_3_normalization() {
    std::mt19937_64 rng(20240303);
    std::uniform_int_distribution<int> len_d(2, 50);
    std::uniform_int_distribution<int> grid_d(-500, 500);
    std::uniform_real_distribution<double> scale_d(0.1, 100.0);
    std::uniform_real_distribution<double> offset_d(-500.0, 500.0);

    bool ok = true;
    std::string why;
    double max_affine_diff = 0.0;
    for (int i = 0; i < 1000 && ok; ++i) {
        int n = len_d(rng);
        std::vector<double> x(n);
        for (auto& v : x) v = grid_d(rng) * 0.125;  // negatives and ties
        if (*std::min_element(x.begin(), x.end()) ==
            *std::max_element(x.begin(), x.end())) {
            x.back() += 1.0;
        }
        auto z = minmax_normalize(x);

        auto lo = std::min_element(x.begin(), x.end()) - x.begin();
        auto hi = std::max_element(x.begin(), x.end()) - x.begin();
        if (z[lo] != 0.0 || z[hi] != 1.0) {
            ok = false;
            why = "endpoints not 0/1";
        }
        for (int j = 0; j < n && ok; ++j) {
            if (z[j] < 0.0 || z[j] > 1.0) {
                ok = false;
                why = "value outside [0,1]";
            }
        }
        for (int a = 0; a < n && ok; ++a) {
            for (int b = 0; b < n; ++b) {
                if ((x[a] < x[b] && z[a] >= z[b]) ||
                    (x[a] == x[b] && z[a] != z[b])) {
                    ok = false;
                    why = "order not preserved";
                    break;
                }
            }
        }
        // affine invariance: rescaled input normalizes to the same Z
        std::vector<double> y(n);
        double s = scale_d(rng), t = offset_d(rng);
        for (int j = 0; j < n; ++j) y[j] = x[j] * s + t;
        auto zy = minmax_normalize(y);
        for (int j = 0; j < n; ++j) {
            max_affine_diff = std::max(max_affine_diff, std::fabs(z[j] - zy[j]));
        }
        if (max_affine_diff >= 1e-12) {
            ok = false;
            why = "affine invariance violated";
        }
    }
    std::ostringstream detail;
    detail << "1000 series, max affine diff " << max_affine_diff;
    if (!ok) detail << ", " << why;
    report(3, ok,
           "min-max normalization stays in [0,1], hits the endpoints, "
           "preserves order and is affine-invariant",
           detail.str());
}

void criterion_4_sweep_linearity(const std::string& src) {
    auto cfg = RunConfig::from_json_file(src + "/data/run_config.json");
    PipelineState state;
    ingest_stage(cfg, state);
    index_stage(cfg, state);

    auto sweep = weight_sweep(state.z, reweight_scenario(WeightPreset::ict_heavy),
                              reweight_scenario(WeightPreset::fdi_heavy),
                              cfg.sweep_steps, cfg.reference_year);
    long double min_r2 = 1.0L;
    for (std::size_t i = 0; i < sweep.countries.size(); ++i) {
        min_r2 = std::min(min_r2, oracle_linear_r2(sweep.lambdas, sweep.dcit[i]));
    }
    bool emits_stat = std::isfinite(sweep.max_relative_change) &&
                      sweep.max_relative_change >= 0.0 &&
                      !sweep.max_change_country.empty();
    bool ok = sweep.countries.size() >= 20 && min_r2 >= 1.0L - 1e-9L &&
              sweep.linearity_r2 >= 1.0 - 1e-9 && emits_stat;
    std::ostringstream detail;
    detail.precision(12);
    detail << sweep.countries.size() << " countries, min per-country R^2 "
           << double(min_r2) << ", max_relative_change "
           << sweep.max_relative_change << " (" << sweep.max_change_country
           << ")";
    report(4, ok,
           "demo-panel DCIT paths along the ict-heavy to fdi-heavy sweep are "
           "linear in lambda (R^2 >= 1 - 1e-9)",
           detail.str());
}

void criterion_5_spearman() {
    std::mt19937_64 rng(20240505);
    std::uniform_int_distribution<int> tie_d(0, 9);  // heavy ties at n = 20

    double max_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> a(20), b(20);
        do {
            for (auto& v : a) v = double(tie_d(rng));
        } while (std::all_of(a.begin(), a.end(),
                             [&](double v) { return v == a[0]; }));
        do {
            for (auto& v : b) v = double(tie_d(rng));
        } while (std::all_of(b.begin(), b.end(),
                             [&](double v) { return v == b[0]; }));
        double got = spearman_rho(a, b);
        long double want = oracle_pearson(oracle_ranks(a), oracle_ranks(b));
        max_err = std::max(max_err, std::fabs(got - double(want)));
    }

    // exactness on tie-free vectors: identity and a rank-reversing transform
    bool exact = true;
    std::vector<double> base(20);
    for (int i = 0; i < 20; ++i) base[i] = double(i + 1);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(base.begin(), base.end(), rng);
        std::vector<double> neg(20);
        for (int j = 0; j < 20; ++j) neg[j] = -base[j];
        if (spearman_rho(base, base) != 1.0) exact = false;
        if (spearman_rho(base, neg) != -1.0) exact = false;
    }
    if (spearman_rho({1.0, 2.0, 3.0}, {30.0, 20.0, 10.0}) != -1.0) exact = false;

    std::ostringstream detail;
    detail << "100 tied pairs, max err vs oracle " << max_err
           << (exact ? ", +-1 exact" : ", +-1 NOT exact");
    report(5, max_err <= 1e-10 && exact,
           "spearman_rho matches the averaged-rank oracle within 1e-10 and is "
           "exactly +-1 on monotone tie-free inputs",
           detail.str());
}

void criterion_6_clustering() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(20240606);

    // silhouette vs the O(n^2) definitional oracle
    double max_sil_err = 0.0;
    {
        std::uniform_int_distribution<int> n_d(4, 30), dim_d(1, 4);
        std::uniform_real_distribution<double> coord(0.0, 10.0);
        for (int i = 0; i < 50; ++i) {
            int n = n_d(rng), dims = dim_d(rng);
            std::uniform_int_distribution<int> k_d(2, std::min(4, n - 1));
            int k = k_d(rng);
            std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
            for (auto& p : pts) {
                for (auto& v : p) v = coord(rng);
            }
            std::vector<int> assign(n);
            for (int j = 0; j < n; ++j) {
                assign[j] = j < k ? j : int(rng() % std::uint64_t(k));
            }
            double got = silhouette(to_matrix(pts), assign);
            double want = oracle_silhouette(pts, assign, k);
            max_sil_err = std::max(max_sil_err, std::fabs(got - want));
        }
    }

    // kmeans vs exhaustive-partition optimum
    int optimal_hits = 0;
    {
        std::uniform_int_distribution<int> dim_d(1, 3), k_d(2, 3);
        std::uniform_real_distribution<double> coord(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            int k = k_d(rng);
            std::uniform_int_distribution<int> n_d(k + 1, 8);
            int n = n_d(rng), dims = dim_d(rng);
            std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
            for (auto& p : pts) {
                for (auto& v : p) v = coord(rng);
            }
            auto r = kmeans(to_matrix(pts), k, rng(), 50);
            double best = exhaustive_inertia(pts, k);
            if (r.inertia && *r.inertia <= best + 1e-9) ++optimal_hits;
        }
    }

    // ward merge order against hand-computed variance increments
    bool ward_ok = true;
    {
        auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-10; };
        auto s1 = ward_merge_steps(to_matrix({{0.0}, {1.0}, {10.0}}));
        ward_ok = ward_ok && s1.size() == 2 && s1[0].a == 0 && s1[0].b == 1 &&
                  near(s1[0].cost, 0.5) && near(s1[1].cost, 180.5 / 3.0);
        auto s2 = ward_merge_steps(
            to_matrix({{0.0, 0.0}, {0.0, 1.0}, {4.0, 0.0}, {6.0, 0.0}}));
        ward_ok = ward_ok && s2.size() == 3 && s2[0].a == 0 && s2[0].b == 1 &&
                  near(s2[0].cost, 0.5) && s2[1].a == 2 && s2[1].b == 3 &&
                  near(s2[1].cost, 2.0) && near(s2[2].cost, 25.25);
        auto s3 =
            ward_merge_steps(to_matrix({{1.0, 1.0}, {1.0, 1.0}, {3.0, 3.0}}));
        ward_ok = ward_ok && s3.size() == 2 && s3[0].a == 0 && s3[0].b == 1 &&
                  near(s3[0].cost, 0.0) && near(s3[1].cost, 16.0 / 3.0);
    }

    double ms = ms_since(t0);
    bool ok = max_sil_err <= 1e-10 && optimal_hits >= 95 && ward_ok &&
              ms < 10000.0;
    std::ostringstream detail;
    detail << "silhouette max err " << max_sil_err << ", kmeans optimal "
           << optimal_hits << "/100, ward fixtures "
           << (ward_ok ? "ok" : "MISMATCH") << ", " << fmt_ms(ms);
    report(6, ok,
           "clustering matches definitional oracles (silhouette 1e-10, "
           "kmeans >= 95/100 exhaustive optima, ward hand fixtures)",
           detail.str());
}

void criterion_7_ols() {
    std::mt19937_64 rng(20240707);
    std::uniform_int_distribution<int> n_d(3, 40);
    std::uniform_real_distribution<double> x_d(-10.0, 10.0);
    std::uniform_real_distribution<double> coef_d(-5.0, 5.0);
    std::uniform_real_distribution<double> noise_d(-2.0, 2.0);

    double max_err = 0.0, max_pearson_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        int n = n_d(rng);
        std::vector<double> x(n), y(n);
        double a = coef_d(rng), b = coef_d(rng);
        for (int j = 0; j < n; ++j) {
            x[j] = x_d(rng);
            y[j] = a + b * x[j] + noise_d(rng);
        }
        // degenerate draws (constant x or y) are not this criterion's topic
        if (std::all_of(x.begin(), x.end(),
                        [&](double v) { return v == x[0]; }) ||
            std::all_of(y.begin(), y.end(),
                        [&](double v) { return v == y[0]; })) {
            --i;
            continue;
        }
        auto fit = ols_r2(x, y);

        // closed-form normal equations in long double
        long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
        for (int j = 0; j < n; ++j) {
            sx += x[j];
            sy += y[j];
            sxx += (long double)x[j] * x[j];
            sxy += (long double)x[j] * y[j];
        }
        long double nn = (long double)n;
        long double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        long double intercept = (sy - slope * sx) / nn;
        long double r2 = oracle_linear_r2(x, y);
        max_err = std::max(max_err, std::fabs(fit.slope - double(slope)));
        max_err = std::max(max_err, std::fabs(fit.intercept - double(intercept)));
        max_err = std::max(max_err, std::fabs(fit.r_squared - double(r2)));

        double rho = pearson(x, y);
        max_pearson_err =
            std::max(max_pearson_err, std::fabs(fit.r_squared - rho * rho));
    }

    // exact linear data on an integer grid solves with zero residual
    std::vector<double> xi, yi;
    for (int j = 1; j <= 10; ++j) {
        xi.push_back(double(j));
        yi.push_back(2.0 * j + 1.0);
    }
    auto exact = ols_r2(xi, yi);

    bool ok = max_err <= 1e-10 && max_pearson_err <= 1e-10 &&
              exact.r_squared == 1.0;
    std::ostringstream detail;
    detail << "100 instances, max vs normal equations " << max_err
           << ", max |R^2 - rho^2| " << max_pearson_err << ", exact-linear R^2 "
           << exact.r_squared;
    report(7, ok,
           "OLS matches the closed-form normal equations within 1e-10, R^2 = "
           "squared Pearson, exact-linear R^2 = 1",
           detail.str());
}

void criterion_8_ses() {
    std::mt19937_64 rng(20240808);
    std::uniform_int_distribution<int> n_d(5, 40);
    std::uniform_real_distribution<double> start_d(0.1, 0.5);
    std::uniform_real_distribution<double> drift_d(0.0, 0.03);
    std::uniform_real_distribution<double> noise_d(-0.05, 0.05);

    double worst_margin = -1e300;
    for (int i = 0; i < 20; ++i) {
        int n = n_d(rng);
        std::vector<double> y(n);
        double level = start_d(rng), drift = drift_d(rng);
        for (int t = 0; t < n; ++t) {
            level += drift;
            y[t] = level + noise_d(rng);
        }
        auto fit = ses_fit(y);
        double grid_best = 1e300;
        for (int k = 1; k <= 1000; ++k) {
            grid_best = std::min(grid_best, ses_sse(y, double(k) / 1000.0));
        }
        worst_margin = std::max(worst_margin, fit.sse - grid_best);
    }
    std::ostringstream detail;
    detail << "20 series, worst SSE margin vs 0.001-step grid " << worst_margin;
    report(8, worst_margin <= 1e-6,
           "optimized smoothing alpha is at least as good as a dense grid "
           "search",
           detail.str());
}

void criterion_9_synergy(const std::string& src) {
    auto cfg = RunConfig::from_json_file(src + "/data/run_config.json");
    PipelineState state;
    ingest_stage(cfg, state);
    index_stage(cfg, state);
    cluster_stage(cfg, state);

    auto syn = load_scenario(src + "/data/scenarios/synergy_push.json");
    ScenarioSpec ict = syn;
    ict.name = "ict_only";
    ict.lever = Lever::ict_only;
    ict.lever_boosts = {{"ict_index", syn.lever_boosts.at("ict_index")},
                        {"broadband_adoption",
                         syn.lever_boosts.at("broadband_adoption")}};
    ScenarioSpec fdi = syn;
    fdi.name = "fdi_only";
    fdi.lever = Lever::fdi_only;
    fdi.lever_boosts = {
        {"fdi_net_inflows", syn.lever_boosts.at("fdi_net_inflows")}};
    // the bundled synergy boosts are the componentwise max (= union on
    // disjoint dimensions) of the two single-lever boost sets

    auto series = forecast_clusters(state.profiles, {ict, fdi, syn},
                                    cfg.weights);
    std::map<std::string, std::map<std::string, double>> final_by_entity;
    for (const auto& s : series) {
        final_by_entity[s.entity][s.scenario] = s.values.at(2028).value;
    }
    bool ok = !final_by_entity.empty();
    std::ostringstream detail;
    for (const auto& [entity, finals] : final_by_entity) {
        double s = finals.at("synergy_push");
        if (s < finals.at("ict_only") || s < finals.at("fdi_only")) ok = false;
        detail << entity << " " << s << ">=max(" << finals.at("ict_only") << ","
               << finals.at("fdi_only") << ") ";
    }
    report(9, ok,
           "the combined-lever scenario dominates both single levers for every "
           "demo cluster in 2028",
           detail.str());
}

void criterion_10_determinism(const std::string& src, const std::string& cli) {
    fs::path scratch = fs::temp_directory_path() /
                       ("dcit_accept_" + std::to_string(::getpid()));
    fs::create_directories(scratch);
    fs::path out_a = scratch / "det_a";
    fs::path out_b = scratch / "det_b";

    auto run_once = [&](const fs::path& out) {
        std::string cmd = "\"" + cli + "\" run --config \"" + src +
                          "/data/run_config.json\" --out \"" + out.string() +
                          "\" > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    int rc_a = run_once(out_a);
    int rc_b = run_once(out_b);

    bool ok = rc_a == 0 && rc_b == 0;
    int files = 0;
    std::string mismatch;
    if (ok) {
        for (const auto& entry : fs::directory_iterator(out_a)) {
            auto name = entry.path().filename();
            if (!fs::exists(out_b / name)) {
                ok = false;
                mismatch = name.string() + " missing";
                break;
            }
            auto ha = csv::fnv1a_hex(read_all(entry.path()));
            auto hb = csv::fnv1a_hex(read_all(out_b / name));
            if (ha != hb || read_all(entry.path()) != read_all(out_b / name)) {
                ok = false;
                mismatch = name.string() + " differs";
                break;
            }
            ++files;
        }
        if (ok && files < 10) {
            ok = false;
            mismatch = "only " + std::to_string(files) + " outputs";
        }
    } else {
        mismatch = "exit codes " + std::to_string(rc_a) + "/" +
                   std::to_string(rc_b);
    }
    std::ostringstream detail;
    detail << files << " files hash-identical";
    if (!mismatch.empty()) detail << ", " << mismatch;
    report(10, ok,
           "two CLI runs with the same config and seed produce byte-identical "
           "outputs",
           detail.str());
    std::error_code ec;
    fs::remove_all(scratch, ec);
}

void criterion_11_gap() {
    // published benchmark table: per-cluster index means and the external
    // trade-digitalization levels, one of them unavailable
    std::vector<ClusterProfile> profiles(4);
    const double dcit_means[] = {0.33, 0.11, 0.28, 0.81};
    for (int c = 0; c < 4; ++c) {
        profiles[c].cluster = c;
        profiles[c].mean_dcit = dcit_means[c];
    }
    TdiBenchmark tdi;
    tdi.tdi[0] = 0.81;
    tdi.tdi[1] = 0.60;
    tdi.tdi[2] = 0.71;
    tdi.tdi[3] = std::nullopt;

    auto rows = gap_report(profiles, tdi);
    const double expected[] = {0.48, 0.49, 0.43};
    bool ok = rows.size() == 4;
    double max_err = 0.0;
    for (int c = 0; c < 3 && ok; ++c) {
        if (!rows[c].gap.has_value()) {
            ok = false;
            break;
        }
        max_err = std::max(max_err, std::fabs(*rows[c].gap - expected[c]));
    }
    ok = ok && max_err <= 0.01;
    // missing benchmark: no gap, no quadrant, rendered as n/a
    ok = ok && !rows[3].gap.has_value() && !rows[3].quadrant.has_value();
    auto csv_text = gap_to_csv(rows);
    ok = ok && csv_text.find("n/a") != std::string::npos;

    std::ostringstream detail;
    detail << "gaps +" << (rows[0].gap ? *rows[0].gap : -1) << "/+"
           << (rows[1].gap ? *rows[1].gap : -1) << "/+"
           << (rows[2].gap ? *rows[2].gap : -1) << "/n/a, max err " << max_err;
    report(11, ok,
           "benchmark-table gaps come out at +0.48/+0.49/+0.43 within 0.01 "
           "with the missing entry marked n/a",
           detail.str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: dcit_acceptance <source-root> <path-to-dcit-cli>\n";
        return 2;
    }
    const std::string src = argv[1];
    const std::string cli = argv[2];

    auto guarded = [](int criterion, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(criterion, false, "threw an exception", e.what());
        }
    };

    guarded(1, [&] { criterion_1_table3(src); });
    guarded(2, [] { criterion_2_calibration(); });
    guarded(3, [] { criterion_3_normalization(); });
    guarded(4, [&] { criterion_4_sweep_linearity(src); });
    guarded(5, [] { criterion_5_spearman(); });
    guarded(6, [] { criterion_6_clustering(); });
    guarded(7, [] { criterion_7_ols(); });
    guarded(8, [] { criterion_8_ses(); });
    guarded(9, [&] { criterion_9_synergy(src); });
    guarded(10, [&] { criterion_10_determinism(src, cli); });
    guarded(11, [] { criterion_11_gap(); });

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) +
                                        " CRITERIA FAILED")
              << "\n";
    return g_failures;
}
