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

#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "btfuzz/campaign.hpp"
#include "btfuzz/error.hpp"

namespace btfuzz {
namespace {

const std::string kExample1 = std::string(BTFUZZ_FIXTURE_DIR) + "/example1/scenario.json";

TEST(CampaignConfig, ValidationAndJsonRoundTrip) {
  CampaignConfig cfg;
  EXPECT_NO_THROW(check_config(cfg));
  cfg.budget = 0;
  EXPECT_THROW(check_config(cfg), Error);
  cfg = {};
  cfg.mutation_rate = 1.5;
  EXPECT_THROW(check_config(cfg), Error);

  cfg = {};
  cfg.budget = 123;
  cfg.seed = 99;
  cfg.algorithm = Algorithm::kGA;
  cfg.workers = 3;
  cfg.weights.b = 4.0;
  const auto back = campaign_config_from_json(to_json(cfg));
  EXPECT_EQ(to_json(back).dump(), to_json(cfg).dump());
  EXPECT_EQ(back.budget, 123u);
  EXPECT_EQ(back.algorithm, Algorithm::kGA);
  const auto defaults = campaign_config_from_json(Json::object());
  EXPECT_EQ(defaults.budget, 500u);
  EXPECT_THROW(campaign_config_from_json(Json{{"budget", "many"}}), Error);
}

TEST(Campaign, BoPhasesAndLedgerRoundTrip) {
  const auto ls = load_scenario(kExample1);
  CampaignConfig cfg;
  cfg.budget = 90;
  cfg.seed = 4;
  const auto ledger = run_campaign(ls, cfg);
  EXPECT_EQ(ledger.algorithm, "bo");
  ASSERT_FALSE(ledger.records.empty());
  EXPECT_LE(ledger.records.size(), 90u);
  for (std::size_t i = 0; i < ledger.records.size(); ++i) {
    const auto& r = ledger.records[i];
    EXPECT_EQ(r.index, i);
    EXPECT_EQ(r.phase, i < 80 ? "seed" : "bo");
    ASSERT_EQ(r.u.size(), 4u);
    ASSERT_EQ(r.values.size(), 4u);
    ASSERT_EQ(r.relative_values.size(), 2u);
    EXPECT_NEAR(r.relative_values[0], r.values[0] + 204.8, 1e-9);
  }
  const auto text = ledger_to_ndjson(ledger);
  const auto back = ledger_from_ndjson(text);
  EXPECT_EQ(ledger_to_ndjson(back), text);
  EXPECT_EQ(back.records.size(), ledger.records.size());
  EXPECT_THROW(ledger_from_ndjson("{not json"), Error);
}

TEST(Campaign, ParallelEvaluationKeepsOrder) {
  const auto ls = load_scenario(kExample1);
  CampaignConfig cfg;
  cfg.budget = 40;
  cfg.seed = 2;
  const auto one = ledger_to_ndjson(run_campaign(ls, cfg));
  cfg.workers = 4;
  const auto four = ledger_to_ndjson(run_campaign(ls, cfg));
  EXPECT_EQ(one, four);
}

TEST(Campaign, GeneticPhases) {
  const auto ls = load_scenario(kExample1);
  CampaignConfig cfg;
  cfg.budget = 100;
  cfg.algorithm = Algorithm::kGA;
  const auto ledger = run_campaign(ls, cfg);
  EXPECT_EQ(ledger.algorithm, "ga");
  std::set<std::string> phases;
  for (const auto& r : ledger.records) phases.insert(r.phase);
  EXPECT_TRUE(phases.contains("seed"));
  EXPECT_TRUE(phases.contains("ga"));
}

TEST(Campaign, GridAndRandomBaselines) {
  const auto ls = load_scenario(kExample1);
  CampaignConfig cfg;
  const auto grid = run_grid(ls, 2, cfg);
  ASSERT_EQ(grid.records.size(), 16u);
  EXPECT_EQ(grid.stop_reason, "grid_complete");
  for (const auto& r : grid.records) {
    EXPECT_EQ(r.phase, "grid");
    for (double u : r.u) EXPECT_TRUE(u == 0.0 || u == 1.0);
  }
  cfg.budget = 12;
  const auto rnd = run_random(ls, cfg);
  EXPECT_EQ(rnd.records.size(), 12u);
}

TEST(Campaign, NoVariablesIsRejected) {
  auto ls = load_scenario(kExample1);
  ls.variables.clear();
  ls.relative_variables.clear();
  EXPECT_THROW(run_campaign(ls, CampaignConfig{}), Error);
}

TEST(Campaign, FailedPointIsRecordedAsInvalid) {
  auto ls = load_scenario(kExample1);
  ls.relative_variables[0].hi = 210.0;
  CampaignConfig cfg;
  const auto rec = evaluate_point(ls, {1.0, 0.5, 0.5, 0.5}, cfg);
  EXPECT_FALSE(rec.error.empty());
  EXPECT_EQ(rec.verdict, Verdict::kInvalid);
  EXPECT_EQ(rec.score, cfg.failure_score);
  const auto ok = evaluate_point(ls, {0.1, 0.5, 0.5, 0.5}, cfg);
  EXPECT_TRUE(ok.error.empty());
}

TEST(Campaign, RunPointMatchesLedgerRecord) {
  const auto ls = load_scenario(kExample1);
  CampaignConfig cfg;
  const std::vector<double> u{0.2, 0.4, 0.6, 0.8};
  const auto rec = evaluate_point(ls, u, cfg);
  const auto pr = run_point(sample(ls, u), cfg);
  EXPECT_EQ(pr.fitness.score, rec.score);
  EXPECT_EQ(pr.fitness.verdict, rec.verdict);
  EXPECT_EQ(pr.trace.min_dist, rec.min_dist);
}

}  // namespace
}  // namespace btfuzz
