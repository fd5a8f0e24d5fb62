#include "dcit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "dcit/csv.hpp"
#include "dcit/error.hpp"

namespace dcit {

namespace {

constexpr int kMaxLloydIterations = 300;

// Uniform [0,1) from the engine's raw 64-bit output. std::mt19937_64 output
// is pinned by the standard, so results are identical across platforms
// (the std distributions are not).
double rand_u01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

std::size_t rand_index(std::mt19937_64& rng, std::size_t n) {
    auto i = std::size_t(rand_u01(rng) * double(n));
    return std::min(i, n - 1);
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::vector<std::vector<double>> kmeanspp_init(const FeatureMatrix& x, int k,
                                               std::mt19937_64& rng) {
    const std::size_t n = x.rows.size();
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    centers.push_back(x.rows[rand_index(rng, n)]);
    std::vector<double> d2(n);
    while (centers.size() < std::size_t(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = sq_dist(x.rows[i], centers[0]);
            for (std::size_t c = 1; c < centers.size(); ++c) {
                best = std::min(best, sq_dist(x.rows[i], centers[c]));
            }
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = rand_index(rng, n);  // all points coincide with a center
        } else {
            double r = rand_u01(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(x.rows[pick]);
    }
    return centers;
}

struct LloydRun {
    std::vector<int> assignment;
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
};

LloydRun lloyd(const FeatureMatrix& x, int k, std::mt19937_64& rng) {
    const std::size_t n = x.rows.size();
    LloydRun run;
    run.centroids = kmeanspp_init(x, k, rng);
    run.assignment.assign(n, -1);

    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(x.rows[i], run.centroids[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(x.rows[i], run.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (run.assignment[i] != best) {
                run.assignment[i] = best;
                changed = true;
            }
        }

        // refill empty clusters with the point farthest from its centroid
        std::vector<int> sizes(k, 0);
        for (int a : run.assignment) ++sizes[a];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[run.assignment[i]] <= 1) continue;
                double d = sq_dist(x.rows[i], run.centroids[run.assignment[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            --sizes[run.assignment[far]];
            run.assignment[far] = c;
            ++sizes[c];
            changed = true;
        }

        for (int c = 0; c < k; ++c) {
            std::vector<double> mean(x.dim(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                if (run.assignment[i] != c) continue;
                for (std::size_t d = 0; d < x.dim(); ++d) mean[d] += x.rows[i][d];
            }
            for (double& m : mean) m /= double(sizes[c]);
            run.centroids[c] = std::move(mean);
        }

        if (!changed) break;
    }

    run.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run.inertia += sq_dist(x.rows[i], run.centroids[run.assignment[i]]);
    }
    return run;
}

// Relabel so cluster ids follow the ascending order of each cluster's
// smallest member label; ids then do not depend on input row order.
void canonicalize(const FeatureMatrix& x, std::vector<int>& assignment,
                  std::vector<std::vector<double>>& centroids, int k) {
    std::vector<std::string> min_label(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        std::string& m = min_label[assignment[i]];
        if (m.empty() || x.labels[i] < m) m = x.labels[i];
    }
    std::vector<int> order(k);
    for (int c = 0; c < k; ++c) order[c] = c;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return min_label[a] < min_label[b]; });
    std::vector<int> remap(k);
    for (int pos = 0; pos < k; ++pos) remap[order[pos]] = pos;

    for (int& a : assignment) a = remap[a];
    std::vector<std::vector<double>> reordered(k);
    for (int c = 0; c < k; ++c) reordered[remap[c]] = std::move(centroids[c]);
    centroids = std::move(reordered);
}

std::map<std::string, int> to_assignment_map(const FeatureMatrix& x,
                                             const std::vector<int>& assignment) {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < x.rows.size(); ++i) m[x.labels[i]] = assignment[i];
    return m;
}

}  // namespace

void FeatureMatrix::validate() const {
    if (rows.size() < 2) throw Error("feature matrix needs >= 2 rows");
    if (labels.size() != rows.size()) {
        throw Error("feature matrix: labels/rows size mismatch");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim()) {
            throw Error("feature matrix: ragged rows");
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) {
                throw Error("feature matrix: non-finite value in row '" +
                            labels[i] + "'");
            }
        }
        if (!seen.insert(labels[i]).second) {
            throw Error("feature matrix: duplicate label '" + labels[i] + "'");
        }
    }
}

std::string to_string(ClusterMethod m) {
    return m == ClusterMethod::kmeans ? "kmeans" : "agglomerative_ward";
}

std::vector<int> ClusteringResult::row_assignment(const FeatureMatrix& x) const {
    std::vector<int> out(x.rows.size());
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        auto it = assignment.find(x.labels[i]);
        if (it == assignment.end()) {
            throw Error("no cluster assignment for '" + x.labels[i] + "'");
        }
        out[i] = it->second;
    }
    return out;
}

std::string ClusteringResult::to_json() const {
    nlohmann::json j;
    j["method"] = to_string(method);
    j["k"] = k;
    j["silhouette"] = silhouette;
    j["seed"] = seed;
    if (inertia) j["inertia"] = *inertia;
    nlohmann::json a;
    for (const auto& [label, c] : assignment) a[label] = c;
    j["assignment"] = a;
    j["centroids"] = centroids;
    return j.dump(2) + "\n";
}

std::string ClusteringResult::to_csv() const {
    std::string out = "country,cluster\n";
    for (const auto& [label, c] : assignment) {
        out += label + "," + std::to_string(c) + "\n";
    }
    return out;
}

FeatureMatrix build_feature_matrix(const NormalizedMatrix& z, FeatureMode mode,
                                   int reference_year) {
    FeatureMatrix x;
    if (mode == FeatureMode::reference_year) {
        if (!z.has_year(reference_year)) {
            throw Error("no normalized data for reference year " +
                        std::to_string(reference_year));
        }
        for (const auto& [row, vals] : z.values) {
            if (row.second != reference_year) continue;
            x.labels.push_back(row.first);
            x.rows.emplace_back(vals.begin(), vals.end());
        }
    } else {
        for (const auto& country : z.countries) {
            std::vector<double> mean(kNumDimensions, 0.0);
            int n = 0;
            for (const auto& [row, vals] : z.values) {
                if (row.first != country) continue;
                for (std::size_t d = 0; d < kNumDimensions; ++d) mean[d] += vals[d];
                ++n;
            }
            if (n == 0) continue;
            for (double& m : mean) m /= double(n);
            x.labels.push_back(country);
            x.rows.push_back(std::move(mean));
        }
    }
    x.validate();
    return x;
}

ClusteringResult kmeans(const FeatureMatrix& x, int k, std::uint64_t seed,
                        int restarts) {
    x.validate();
    if (k < 2 || std::size_t(k) > x.rows.size()) {
        throw Error("kmeans: K must be in [2, rows], got " + std::to_string(k));
    }
    if (restarts < 1) throw Error("kmeans: restarts must be >= 1");

    LloydRun best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                          std::uint32_t(r)};
        std::mt19937_64 rng(seq);
        LloydRun run = lloyd(x, k, rng);
        if (run.inertia < best.inertia) best = std::move(run);
    }

    canonicalize(x, best.assignment, best.centroids, k);

    ClusteringResult result;
    result.method = ClusterMethod::kmeans;
    result.k = k;
    result.assignment = to_assignment_map(x, best.assignment);
    result.centroids = std::move(best.centroids);
    result.inertia = best.inertia;
    result.seed = seed;
    result.silhouette = silhouette(x, best.assignment);
    return result;
}

std::vector<WardMerge> ward_merge_steps(const FeatureMatrix& x) {
    x.validate();
    const std::size_t n = x.rows.size();

    // active clusters keyed by smallest original row index
    struct Cluster {
        std::size_t size = 0;
        bool active = false;
    };
    std::vector<Cluster> clusters(n);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i] = {1, true};
        active.push_back(i);
    }

    // cost[i][j]: Ward merge cost n_i n_j / (n_i + n_j) * ||mu_i - mu_j||^2,
    // maintained by the Lance-Williams recurrence.
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            cost[i][j] = cost[j][i] = 0.5 * sq_dist(x.rows[i], x.rows[j]);
        }
    }

    std::vector<WardMerge> steps;
    steps.reserve(n - 1);
    while (active.size() > 1) {
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                std::size_t i = active[a], j = active[b];
                // tie rule: smallest (i, j) pair wins, and active is sorted
                if (cost[i][j] < best) {
                    best = cost[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        steps.push_back({bi, bj, best});

        std::size_t ni = clusters[bi].size, nj = clusters[bj].size;
        for (std::size_t kidx : active) {
            if (kidx == bi || kidx == bj) continue;
            std::size_t nk = clusters[kidx].size;
            double updated = ((double(ni + nk) * cost[bi][kidx]) +
                              (double(nj + nk) * cost[bj][kidx]) -
                              (double(nk) * cost[bi][bj])) /
                             double(ni + nj + nk);
            cost[bi][kidx] = cost[kidx][bi] = updated;
        }
        clusters[bi].size = ni + nj;
        clusters[bj].active = false;
        active.erase(std::find(active.begin(), active.end(), bj));
    }
    return steps;
}

ClusteringResult agglomerative_ward(const FeatureMatrix& x, int k) {
    x.validate();
    const std::size_t n = x.rows.size();
    if (k < 2 || std::size_t(k) > n) {
        throw Error("ward: K must be in [2, rows], got " + std::to_string(k));
    }

    auto steps = ward_merge_steps(x);

    // replay merges until k clusters remain
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    std::size_t merges = n - std::size_t(k);
    for (std::size_t m = 0; m < merges; ++m) {
        parent[find(steps[m].b)] = find(steps[m].a);
    }

    std::map<std::size_t, int> root_to_id;
    std::vector<int> assignment(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = find(i);
        auto [it, inserted] = root_to_id.emplace(root, int(root_to_id.size()));
        assignment[i] = it->second;
    }

    std::vector<std::vector<double>> centroids(k, std::vector<double>(x.dim(), 0.0));
    std::vector<int> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++sizes[assignment[i]];
        for (std::size_t d = 0; d < x.dim(); ++d) {
            centroids[assignment[i]][d] += x.rows[i][d];
        }
    }
    for (int c = 0; c < k; ++c) {
        for (double& v : centroids[c]) v /= double(sizes[c]);
    }

    canonicalize(x, assignment, centroids, k);

    ClusteringResult result;
    result.method = ClusterMethod::agglomerative_ward;
    result.k = k;
    result.assignment = to_assignment_map(x, assignment);
    result.centroids = std::move(centroids);
    result.seed = 0;
    result.silhouette = silhouette(x, assignment);
    return result;
}

double silhouette(const FeatureMatrix& x, const std::vector<int>& assignment) {
    const std::size_t n = x.rows.size();
    if (assignment.size() != n) throw Error("silhouette: assignment size mismatch");
    int k = 0;
    for (int a : assignment) k = std::max(k, a + 1);
    std::vector<int> sizes(k, 0);
    for (int a : assignment) ++sizes[a];
    int non_empty = 0;
    for (int s : sizes) non_empty += (s > 0);
    if (non_empty < 2) {
        throw Error("silhouette: undefined for a single cluster");
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[assignment[i]] == 1) continue;  // singleton: s(i) = 0
        std::vector<double> mean_dist(k, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            mean_dist[assignment[j]] += std::sqrt(sq_dist(x.rows[i], x.rows[j]));
        }
        double a = mean_dist[assignment[i]] / double(sizes[assignment[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == assignment[i] || sizes[c] == 0) continue;
            b = std::min(b, mean_dist[c] / double(sizes[c]));
        }
        double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / double(n);
}

double silhouette(const FeatureMatrix& x,
                  const std::map<std::string, int>& assignment) {
    std::vector<int> rows(x.rows.size());
    for (std::size_t i = 0; i < x.rows.size(); ++i) {
        auto it = assignment.find(x.labels[i]);
        if (it == assignment.end()) {
            throw Error("silhouette: no assignment for '" + x.labels[i] + "'");
        }
        rows[i] = it->second;
    }
    return silhouette(x, rows);
}

ClusteringResult select_clustering(const FeatureMatrix& x, int k_min, int k_max,
                                   const std::vector<ClusterMethod>& methods,
                                   std::uint64_t seed, int restarts) {
    x.validate();
    if (k_min < 2 || k_max < k_min || std::size_t(k_max) > x.rows.size()) {
        throw Error("select_clustering: K range must lie within [2, rows]");
    }
    if (methods.empty()) throw Error("select_clustering: no methods given");

    // kmeans is tried before agglomerative at each K so ties resolve that way
    std::vector<ClusterMethod> ordered;
    for (ClusterMethod m :
         {ClusterMethod::kmeans, ClusterMethod::agglomerative_ward}) {
        if (std::find(methods.begin(), methods.end(), m) != methods.end()) {
            ordered.push_back(m);
        }
    }

    std::optional<ClusteringResult> best;
    for (int k = k_min; k <= k_max; ++k) {
        for (ClusterMethod m : ordered) {
            ClusteringResult r = (m == ClusterMethod::kmeans)
                                     ? kmeans(x, k, seed, restarts)
                                     : agglomerative_ward(x, k);
            if (!best || r.silhouette > best->silhouette) best = std::move(r);
        }
    }
    return *best;
}

int ClusterProfile::share_pct() const {
    return int(std::lround(share * 100.0));
}

std::vector<ClusterProfile> cluster_profile(const IndexScores& scores,
                                            const ClusteringResult& result,
                                            int year) {
    auto it = scores.ranking.find(year);
    if (it == scores.ranking.end()) {
        throw Error("cluster_profile: no scores for year " + std::to_string(year));
    }

    std::map<int, std::pair<double, int>> acc;  // cluster -> (sum, count)
    int total = 0;
    for (const auto& rc : it->second) {
        auto a = result.assignment.find(rc.country);
        if (a == result.assignment.end()) {
            throw Error("cluster_profile: scored country '" + rc.country +
                        "' has no cluster assignment");
        }
        acc[a->second].first += rc.score;
        acc[a->second].second += 1;
        ++total;
    }

    std::vector<ClusterProfile> profiles;
    for (const auto& [cluster, sum_count] : acc) {
        ClusterProfile p;
        p.cluster = cluster;
        p.count = sum_count.second;
        p.mean_dcit = sum_count.first / double(sum_count.second);
        p.share = double(sum_count.second) / double(total);
        if (cluster >= 0 && std::size_t(cluster) < result.centroids.size()) {
            p.centroid = result.centroids[cluster];
        }
        profiles.push_back(std::move(p));
    }
    return profiles;
}

}  // namespace dcit
