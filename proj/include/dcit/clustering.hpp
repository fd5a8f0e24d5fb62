#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcit/index.hpp"

namespace dcit {

struct FeatureMatrix {
    std::vector<std::string> labels;         // row labels (ISO3)
    std::vector<std::vector<double>> rows;   // uniform width

    std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }
    void validate() const;  // >= 2 rows, uniform finite rows
};

enum class ClusterMethod { kmeans, agglomerative_ward };
std::string to_string(ClusterMethod m);

struct ClusteringResult {
    ClusterMethod method = ClusterMethod::kmeans;
    int k = 0;
    std::map<std::string, int> assignment;        // label -> cluster id
    std::vector<std::vector<double>> centroids;   // k rows
    double silhouette = 0.0;
    std::optional<double> inertia;                // kmeans only
    std::uint64_t seed = 0;

    std::vector<int> row_assignment(const FeatureMatrix& x) const;
    std::string to_json() const;
    std::string to_csv() const;  // country,cluster
};

enum class FeatureMode { reference_year, time_average };

// Country rows of the five normalized dimensions, either the reference-year
// cross-section or per-country means over all years.
FeatureMatrix build_feature_matrix(const NormalizedMatrix& z, FeatureMode mode,
                                   int reference_year);

// Lloyd iterations with k-means++ seeding; `restarts` independent runs, the
// one with minimal inertia wins (ties: lowest restart index). Cluster ids are
// canonical: ordered by each cluster's smallest member label, so they do not
// depend on input row order.
ClusteringResult kmeans(const FeatureMatrix& x, int k, std::uint64_t seed,
                        int restarts);

struct WardMerge {
    std::size_t a = 0;  // cluster indices (smallest original row index)
    std::size_t b = 0;  // a < b
    double cost = 0.0;  // Ward variance increase of the merge
};

// Full bottom-up merge sequence (n-1 steps); ties broken by smallest (a, b).
std::vector<WardMerge> ward_merge_steps(const FeatureMatrix& x);

// Cut the Ward merge sequence at k clusters. Deterministic; centroids are
// post-hoc cluster means and silhouette is computed on the cut.
ClusteringResult agglomerative_ward(const FeatureMatrix& x, int k);

// Mean over points of (b - a) / max(a, b); singleton points contribute 0.
// Throws if the assignment has fewer than 2 clusters.
double silhouette(const FeatureMatrix& x, const std::vector<int>& assignment);
double silhouette(const FeatureMatrix& x,
                  const std::map<std::string, int>& assignment);

// Evaluate every (method, K) in the range and keep the maximum silhouette.
// Ties prefer smaller K, then kmeans over agglomerative.
ClusteringResult select_clustering(const FeatureMatrix& x, int k_min, int k_max,
                                   const std::vector<ClusterMethod>& methods,
                                   std::uint64_t seed, int restarts);

struct ClusterProfile {
    int cluster = 0;
    double mean_dcit = 0.0;
    int count = 0;
    double share = 0.0;             // fraction of countries, exact
    std::vector<double> centroid;   // normalized feature-space mean

    int share_pct() const;  // rounded to integer percent for reports
};

// Per-cluster mean DCIT at `year`, member count and share. Every scored
// country must be assigned.
std::vector<ClusterProfile> cluster_profile(const IndexScores& scores,
                                            const ClusteringResult& result,
                                            int year);

}  // namespace dcit
