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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/analyzer.hpp"
#include "btfuzz/error.hpp"

namespace btfuzz {
namespace {

std::vector<Point> blobs(const std::vector<Point>& centers, std::size_t per, double sd,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, sd);
  std::vector<Point> out;
  for (const auto& c : centers) {
    for (std::size_t i = 0; i < per; ++i) {
      Point p = c;
      for (auto& x : p) x = std::clamp(x + N(rng), 0.0, 1.0);
      out.push_back(p);
    }
  }
  return out;
}

TEST(Metrics, RatiosFromCounts) {
  const auto m = make_metrics(200, 50, 20, 3);
  EXPECT_DOUBLE_EQ(m.cr, 0.25);
  EXPECT_DOUBLE_EQ(m.ir, 0.10);
  EXPECT_DOUBLE_EQ(m.tr, 3.0 / 200.0);
  EXPECT_EQ(m.non_critical, 130u);
  EXPECT_THROW(make_metrics(0, 0, 0, 0), Error);
  EXPECT_THROW(make_metrics(10, 8, 5, 1), Error);
}

TEST(Metrics, CountsFromLedger) {
  CampaignLedger l;
  l.variables = {"a", "b"};
  const Verdict vs[] = {Verdict::kValidCritical, Verdict::kInvalid, Verdict::kValidNonCritical,
                        Verdict::kValidCritical};
  for (std::size_t i = 0; i < 4; ++i) {
    LedgerRecord r;
    r.index = i;
    r.verdict = vs[i];
    r.u = {0.1 * static_cast<double>(i), 0.5};
    l.records.push_back(r);
  }
  const auto m = campaign_metrics(l);
  EXPECT_EQ(m.total, 4u);
  EXPECT_EQ(m.critical, 2u);
  EXPECT_EQ(m.invalid, 1u);
  EXPECT_GE(m.types, 1u);
}

TEST(Silhouette, HandComputedValue) {
  const std::vector<Point> pts{{0.0}, {0.1}, {1.0}, {1.1}};
  const std::vector<std::size_t> asg{0, 0, 1, 1};
  // Each point: a = 0.1, b = mean distance to the other pair.
  const double s0 = (1.05 - 0.1) / 1.05;
  const double s1 = (0.95 - 0.1) / 0.95;
  EXPECT_NEAR(mean_silhouette(pts, asg, 2), (2 * s0 + 2 * s1) / 4.0, 1e-12);
}

TEST(KMeans, RecoversThreeBlobs) {
  const std::vector<Point> centers{{0.2, 0.2}, {0.8, 0.3}, {0.5, 0.85}};
  const auto pts = blobs(centers, 30, 0.03, 4);
  const auto c = kmeans_cluster(pts);
  ASSERT_EQ(c.k, 3u);
  EXPECT_GT(c.silhouette, 0.7);
  EXPECT_FALSE(c.candidates.empty());
  for (const auto& ctr : centers) {
    double best = 1e9;
    for (const auto& t : c.types) best = std::min(best, std::hypot(t.centroid[0] - ctr[0], t.centroid[1] - ctr[1]));
    EXPECT_LT(best, 0.03);
  }
  std::size_t total = 0;
  for (const auto& t : c.types) total += t.members.size();
  EXPECT_EQ(total, pts.size());
  // Tight blobs: both coordinates are root causes.
  for (const auto& t : c.types) EXPECT_EQ(t.root_cause.size(), 2u);
}

TEST(KMeans, ForcedKDegenerateAndErrors) {
  const auto pts = blobs({{0.3, 0.3}, {0.7, 0.7}}, 20, 0.02, 8);
  ClusterOptions o;
  o.k = 4;
  EXPECT_EQ(kmeans_cluster(pts, o).k, 4u);
  EXPECT_TRUE(kmeans_cluster(pts, o).candidates.empty());

  const std::vector<Point> same(5, Point{0.4, 0.4});
  const auto d = kmeans_cluster(same);
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.k, 1u);

  EXPECT_THROW(kmeans_cluster({Point{0.1, 0.1}}), Error);
}

TEST(KMeans, DeterministicForSeed) {
  const auto pts = blobs({{0.2, 0.5}, {0.8, 0.5}}, 25, 0.1, 3);
  EXPECT_EQ(kmeans_cluster(pts).assignment, kmeans_cluster(pts).assignment);
}

TEST(Correlation, SignsAndZeroVariance) {
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) {
    const double x = i / 10.0;
    pts.push_back({x, 1.0 - 2.0 * x, 0.5, x * x});
  }
  const auto c = correlation_matrix(pts, {"a", "b", "c", "d"});
  EXPECT_NEAR(c.r[0][0], 1.0, 1e-12);
  EXPECT_NEAR(c.r[0][1], -1.0, 1e-12);
  EXPECT_TRUE(c.zero_variance[2]);
  EXPECT_EQ(c.r[0][2], 0.0);
  EXPECT_GT(c.r[0][3], 0.9);
  EXPECT_NEAR(c.r[1][0], c.r[0][1], 1e-15);
  EXPECT_THROW(correlation_matrix({{0.1}, {0.2}}, {"a"}), Error);
}

TEST(Report, WritesFiles) {
  CampaignLedger l;
  l.variables = {"s1", "s2", "v"};
  l.seed = 1;
  const auto pts = blobs({{0.1, 0.5, 0.5}, {0.9, 0.5, 0.2}}, 15, 0.03, 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    LedgerRecord r;
    r.index = i;
    r.u = pts[i];
    r.values = pts[i];
    r.verdict = i % 5 == 0 ? Verdict::kValidNonCritical : Verdict::kValidCritical;
    r.score = i % 5 == 0 ? 1.0 : 6.0;
    l.records.push_back(r);
  }
  const auto dir = std::filesystem::temp_directory_path() / "btfuzz_report_test";
  std::filesystem::remove_all(dir);
  const auto bundle = report(l, dir);
  ASSERT_TRUE(bundle.clustering.has_value());
  EXPECT_EQ(bundle.clustering->k, 2u);
  for (const char* f : {"metrics.csv", "clusters.csv", "correlations.csv", "summary.txt",
                        "iterations.svg", "clusters.svg", "projection3d.svg", "correlation.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_THROW(report(CampaignLedger{}, dir), Error);
  std::filesystem::remove_all(dir);
}

TEST(Report, NoCriticalScenarios) {
  CampaignLedger l;
  l.variables = {"a"};
  for (std::size_t i = 0; i < 5; ++i) {
    LedgerRecord r;
    r.index = i;
    r.u = {0.2 * static_cast<double>(i)};
    r.verdict = Verdict::kValidNonCritical;
    l.records.push_back(r);
  }
  const auto dir = std::filesystem::temp_directory_path() / "btfuzz_report_none";
  const auto bundle = report(l, dir);
  EXPECT_FALSE(bundle.clustering.has_value());
  EXPECT_EQ(bundle.metrics.critical, 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace btfuzz
