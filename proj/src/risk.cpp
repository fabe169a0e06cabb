#include "gridline/risk.hpp"

#include <algorithm>
#include <cmath>

#include "gridline/errors.hpp"
#include "gridline/metrics.hpp"

namespace gridline {

namespace {

long long tie_bucket(double value) { return std::llround(value * 1e9); }

template <typename Item>
void sort_by_value_then_id(std::vector<Item>& items, double Item::*field) {
  std::stable_sort(items.begin(), items.end(), [field](const Item& x, const Item& y) {
    const auto bx = tie_bucket(x.*field);
    const auto by = tie_bucket(y.*field);
    if (bx != by) return bx > by;
    return x.id < y.id;
  });
}

}  // namespace

Money RiskReport::risk_of(std::string_view id) const {
  for (const auto& asset : per_asset) {
    if (asset.id == id) return asset.risk;
  }
  throw DomainError("unknown asset " + std::string(id));
}

Money asset_risk(const ThreatProfile& profile) {
  return profile.threat * profile.vulnerability * profile.consequence;
}

RiskReport network_risk(const TransitNetwork& network) {
  RiskReport report;
  for (const auto& node : network.nodes) {
    report.per_asset.push_back({node.id, AssetKind::node, asset_risk(node.profile)});
  }
  for (const auto& link : network.links) {
    report.per_asset.push_back({link_key(link.a, link.b), AssetKind::link, asset_risk(link.profile)});
  }
  for (const auto& asset : report.per_asset) report.total_risk += asset.risk;
  report.ranking = report.per_asset;
  sort_by_value_then_id(report.ranking, &AssetRisk::risk);
  return report;
}

std::optional<RankKey> rank_key_from_string(std::string_view text) {
  if (text == "risk") return RankKey::risk;
  if (text == "degree") return RankKey::degree;
  if (text == "betweenness") return RankKey::betweenness;
  return std::nullopt;
}

std::string_view to_string(RankKey key) {
  switch (key) {
    case RankKey::risk: return "risk";
    case RankKey::degree: return "degree";
    case RankKey::betweenness: return "betweenness";
  }
  return "risk";
}

void sort_ranking(std::vector<RankedAsset>& items) {
  sort_by_value_then_id(items, &RankedAsset::value);
}

std::vector<RankedAsset> rank_assets(const TransitNetwork& network, RankKey key) {
  std::vector<RankedAsset> out;
  out.reserve(network.node_count());
  switch (key) {
    case RankKey::risk:
      for (const auto& node : network.nodes) out.push_back({node.id, asset_risk(node.profile)});
      break;
    case RankKey::degree: {
      const auto degrees = degree_summary(network).per_node;
      for (std::size_t i = 0; i < degrees.size(); ++i) {
        out.push_back({network.nodes[i].id, static_cast<double>(degrees[i])});
      }
      break;
    }
    case RankKey::betweenness: {
      const auto table = betweenness_centrality(network);
      for (std::size_t i = 0; i < table.ids.size(); ++i) out.push_back({table.ids[i], table.values[i]});
      break;
    }
  }
  sort_ranking(out);
  return out;
}

}  // namespace gridline
