#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridline/network.hpp"

namespace gridline {

enum class AssetKind { node, link };

struct AssetRisk {
  std::string id;  // node id, or link_key(a, b) for links
  AssetKind kind = AssetKind::node;
  Money risk = 0.0;
};

struct RiskReport {
  std::vector<AssetRisk> per_asset;  // nodes in network order, then links
  Money total_risk = 0.0;
  std::vector<AssetRisk> ranking;    // non-increasing risk, ties by id

  Money risk_of(std::string_view id) const;
};

/// threat x vulnerability x consequence.
Money asset_risk(const ThreatProfile& profile);

RiskReport network_risk(const TransitNetwork& network);

enum class RankKey { risk, degree, betweenness };

std::optional<RankKey> rank_key_from_string(std::string_view text);
std::string_view to_string(RankKey key);

struct RankedAsset {
  std::string id;
  double value = 0.0;
};

/// Stations ordered by the key, non-increasing; ties broken by id. Values that
/// agree to 1e-9 are treated as ties so float noise cannot reorder them.
std::vector<RankedAsset> rank_assets(const TransitNetwork& network, RankKey key);

/// Sorts in place with the ranking rule above.
void sort_ranking(std::vector<RankedAsset>& items);

}  // namespace gridline
