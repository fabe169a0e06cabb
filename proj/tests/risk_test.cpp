#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gridline/metrics.hpp"
#include "gridline/risk.hpp"
#include "oracles.hpp"

namespace gridline {
namespace {

TEST(RiskTest, AssetRiskIsProduct) {
  EXPECT_DOUBLE_EQ(asset_risk({1.0, 0.9, 20.0, 0, 0}), 18.0);
  EXPECT_DOUBLE_EQ(asset_risk({0.5, 0.5, 4.0, 0, 0}), 1.0);
  EXPECT_EQ(asset_risk({1.0, 0.0, 20.0, 0, 0}), 0.0);
}

TEST(RiskTest, GreenLineTotal) {
  const auto report = network_risk(load_bundled("greenline17"));
  EXPECT_NEAR(report.total_risk, 230.20, 0.01);
  EXPECT_EQ(report.per_asset.size(), 33u);
}

TEST(RiskTest, GreenLineListedNodeRisks) {
  const auto report = network_risk(load_bundled("greenline17"));
  const std::vector<std::pair<const char*, double>> expected = {
      {"NorthStation", 18.00}, {"GovernmentCenter", 15.30}, {"Haymarket", 14.40},
      {"ParkStreet", 12.00},   {"Copley", 9.00},            {"BrooklineVillage", 9.00},
      {"Boylston", 7.80},      {"Arlington", 7.20},         {"Lechmere", 6.30},
      {"Kenmore", 6.00}};
  for (const auto& [id, risk] : expected) EXPECT_NEAR(report.risk_of(id), risk, 1e-12) << id;
  for (const auto& asset : report.per_asset) {
    if (asset.kind == AssetKind::link) EXPECT_NEAR(asset.risk, 6.40, 1e-12) << asset.id;
  }
}

TEST(RiskTest, GreenLineDecomposes) {
  const auto network = load_bundled("greenline17");
  const auto report = network_risk(network);
  double listed = 0, rest = 0, links = 0;
  const std::vector<std::string> listed_ids = {"NorthStation", "GovernmentCenter", "Haymarket",
                                               "ParkStreet",   "Copley",           "BrooklineVillage",
                                               "Boylston",     "Arlington",        "Lechmere",
                                               "Kenmore"};
  for (const auto& asset : report.per_asset) {
    if (asset.kind == AssetKind::link) {
      links += asset.risk;
    } else if (std::find(listed_ids.begin(), listed_ids.end(), asset.id) != listed_ids.end()) {
      listed += asset.risk;
    } else {
      rest += asset.risk;
    }
  }
  EXPECT_NEAR(listed, 105.0, 1e-9);
  EXPECT_NEAR(rest, 22.8, 1e-9);
  EXPECT_NEAR(links, 102.4, 1e-9);
}

TEST(RiskTest, RankingIsNonIncreasingWithIdTieBreak) {
  const auto report = network_risk(load_bundled("greenline17"));
  ASSERT_EQ(report.ranking.size(), report.per_asset.size());
  EXPECT_EQ(report.ranking.front().id, "NorthStation");
  for (std::size_t i = 1; i < report.ranking.size(); ++i) {
    const auto& prev = report.ranking[i - 1];
    const auto& cur = report.ranking[i];
    EXPECT_GE(prev.risk, cur.risk);
    if (prev.risk == cur.risk) EXPECT_LT(prev.id, cur.id);
  }
}

TEST(RiskTest, TotalIsLinearAndScalesWithConsequence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto network = oracle::random_connected_network(rng, 2 + trial % 15, 0.2);
    const auto base = network_risk(network);
    double sum = 0.0;
    for (const auto& asset : base.per_asset) sum += asset.risk;
    EXPECT_NEAR(base.total_risk, sum, 1e-9);

    const double factor = 1.0 + trial;
    for (auto& node : network.nodes) node.profile.consequence *= factor;
    for (auto& link : network.links) link.profile.consequence *= factor;
    EXPECT_NEAR(network_risk(network).total_risk, factor * base.total_risk,
                1e-9 * factor * (1.0 + base.total_risk));
  }
}

TEST(RiskTest, DoublingOneConsequenceAddsThatAssetsRisk) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto network = oracle::random_connected_network(rng, 2 + trial % 15, 0.2);
    const auto before = network_risk(network);
    auto& node = network.nodes[rng() % network.nodes.size()];
    const Money original = before.risk_of(node.id);
    node.profile.consequence *= 2.0;
    const auto after = network_risk(network);
    EXPECT_NEAR(after.risk_of(node.id), 2.0 * original, 1e-12 * (1.0 + original));
    EXPECT_NEAR(after.total_risk, before.total_risk + original, 1e-9 * (1.0 + before.total_risk));
  }
}

TEST(RiskTest, RankingOrderSurvivesUniformScaling) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto network = oracle::random_connected_network(rng, 3 + trial % 15, 0.2);
    const auto before = rank_assets(network, RankKey::risk);
    const double factor = scale(rng);
    for (auto& node : network.nodes) node.profile.consequence *= factor;
    const auto after = rank_assets(network, RankKey::risk);
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i].id, after[i].id) << "trial " << trial;
  }
}

TEST(RiskTest, EmptyNetworkHasZeroRisk) {
  const auto report = network_risk(TransitNetwork{});
  EXPECT_EQ(report.total_risk, 0.0);
  EXPECT_TRUE(report.ranking.empty());
}

TEST(RankTest, ByRiskPutsNorthStationFirstAndBreaksTiesById) {
  const auto ranking = rank_assets(load_bundled("greenline17"), RankKey::risk);
  ASSERT_EQ(ranking.size(), 17u);
  EXPECT_EQ(ranking[0].id, "NorthStation");
  EXPECT_EQ(ranking[4].id, "BrooklineVillage");
  EXPECT_EQ(ranking[5].id, "Copley");
}

TEST(RankTest, ByDegreeAndBetweenness) {
  const auto network = load_bundled("greenline17");
  EXPECT_EQ(rank_assets(network, RankKey::degree).front().id, "Kenmore");
  const auto by_betweenness = rank_assets(network, RankKey::betweenness);
  EXPECT_EQ(by_betweenness.front().id, "Copley");
  // Hynes and GovernmentCenter tie; the smaller id comes first.
  const auto pos = [&](const char* id) {
    return std::find_if(by_betweenness.begin(), by_betweenness.end(),
                        [&](const RankedAsset& r) { return r.id == id; }) -
           by_betweenness.begin();
  };
  EXPECT_EQ(pos("Hynes"), pos("GovernmentCenter") + 1);
}

TEST(RankTest, NearTiesAreTreatedAsTies) {
  std::vector<RankedAsset> items = {{"b", 1.0}, {"a", 1.0 - 1e-13}, {"c", 2.0}};
  sort_ranking(items);
  EXPECT_EQ(items[0].id, "c");
  EXPECT_EQ(items[1].id, "a");
  EXPECT_EQ(items[2].id, "b");
}

TEST(RankTest, KeyNames) {
  EXPECT_EQ(rank_key_from_string("betweenness"), RankKey::betweenness);
  EXPECT_FALSE(rank_key_from_string("pagerank").has_value());
  EXPECT_EQ(to_string(RankKey::degree), "degree");
}

}  // namespace
}  // namespace gridline
