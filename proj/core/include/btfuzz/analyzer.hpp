// Copyright 2026 The btfuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "btfuzz/campaign.hpp"
#include "btfuzz/fuzzing.hpp"

namespace btfuzz {

struct CampaignMetrics {
  std::size_t total = 0;
  std::size_t critical = 0;
  std::size_t non_critical = 0;
  std::size_t invalid = 0;
  std::size_t types = 0;
  double cr = 0.0;
  double ir = 0.0;
  double tr = 0.0;
};

/// Ratios from raw counts. Throws Error(kInvalidArgument) when total is 0 or
/// critical + invalid exceeds it.
CampaignMetrics make_metrics(std::size_t total, std::size_t critical, std::size_t invalid,
                             std::size_t types);

/// Verdict counts over the ledger; `types` is the number of clusters found
/// among the ValidCritical records (k forced when given).
CampaignMetrics campaign_metrics(const CampaignLedger& ledger,
                                 std::optional<std::size_t> k = std::nullopt);

struct ViolationType {
  std::size_t id = 0;
  /// Mean member position in the unit cube.
  Point centroid;
  /// Indices into the clustered point set (ledger record indices for the
  /// ledger overload).
  std::vector<std::size_t> members;
  /// Within-cluster standard deviation per variable.
  std::vector<double> spread;
  /// Variables whose spread is below the root-cause threshold.
  std::vector<std::size_t> root_cause;
};

struct Clustering {
  std::size_t k = 0;
  /// Mean silhouette of the returned assignment (0 for a single cluster).
  double silhouette = 0.0;
  /// Mean silhouette per candidate k, empty when k was forced.
  std::vector<std::pair<std::size_t, double>> candidates;
  /// Set when every point coincides and one cluster is returned.
  bool degenerate = false;
  std::vector<std::size_t> assignment;
  std::vector<ViolationType> types;
};

struct ClusterOptions {
  std::optional<std::size_t> k;
  std::uint64_t seed = 1;
  std::size_t max_k = 8;
  std::size_t restarts = 10;
  std::size_t max_iterations = 200;
  double root_cause_spread = 0.15;
};

/// k-means++ seeded Lloyd iterations in the unit cube. Without a forced k
/// the k in [2, min(max_k, m - 1)] with the largest mean silhouette wins.
/// Throws Error(kTooFewPoints) below two points.
Clustering kmeans_cluster(const std::vector<Point>& points, const ClusterOptions& options = {});

double mean_silhouette(const std::vector<Point>& points, const std::vector<std::size_t>& assignment,
                       std::size_t k);

/// Clusters the ValidCritical records by their unit-cube coordinates, seeded
/// with the campaign seed.
Clustering cluster_critical(const CampaignLedger& ledger,
                            std::optional<std::size_t> k = std::nullopt);

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> r;
  /// Variables without spread; their off-diagonal entries are 0.
  std::vector<bool> zero_variance;
};

/// Pearson correlation of the columns of `points`. Throws
/// Error(kTooFewPoints) below three points.
CorrelationMatrix correlation_matrix(const std::vector<Point>& points,
                                     const std::vector<std::string>& names);

CorrelationMatrix variable_correlation(const CampaignLedger& ledger);

struct ReportOptions {
  std::optional<std::size_t> k;
  /// Variable indices for the 3D projection; clamped to the variable count.
  std::array<std::size_t, 3> projection{0, 1, 2};
};

struct ReportBundle {
  CampaignMetrics metrics;
  std::optional<Clustering> clustering;
  std::optional<CorrelationMatrix> correlation;
  std::vector<std::string> notes;
  std::vector<std::filesystem::path> files;
};

/// Writes metrics.csv, clusters.csv, correlations.csv, summary.txt and SVG
/// plots into `dir`. Throws Error(kTooFewPoints) on an empty ledger and
/// Error(kIoError) when a file cannot be written.
ReportBundle report(const CampaignLedger& ledger, const std::filesystem::path& dir,
                    const ReportOptions& options = {});

}  // namespace btfuzz
