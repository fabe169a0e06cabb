#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridline/network.hpp"

namespace gridline {

struct RemoveNode {
  std::string id;
  friend bool operator==(const RemoveNode&, const RemoveNode&) = default;
};

struct RemoveLink {
  std::string a;
  std::string b;
  friend bool operator==(const RemoveLink&, const RemoveLink&) = default;
};

struct DegradeNode {
  std::string id;
  double vulnerability = 1.0;
  friend bool operator==(const DegradeNode&, const DegradeNode&) = default;
};

struct RandomNodes {
  int count = 1;
  friend bool operator==(const RandomNodes&, const RandomNodes&) = default;
};

using AttackStep = std::variant<RemoveNode, RemoveLink, DegradeNode, RandomNodes>;

enum class ScenarioKind { random, targeted, combined };

std::string_view to_string(ScenarioKind kind);

struct AttackScenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::targeted;
  std::vector<AttackStep> steps;

  /// True when applying the scenario consumes randomness.
  bool is_randomized() const;

  friend bool operator==(const AttackScenario&, const AttackScenario&) = default;
};

/// Scenario JSON: {"name","kind","steps":[{"op", ...}]} with ops
/// remove_node{id}, remove_link{a,b}, degrade_node{id,vulnerability}, random_nodes{count}.
AttackScenario parse_scenario(std::string_view text);
std::string serialize_scenario(const AttackScenario& scenario);

/// Applies steps in order. Removing a station drops its links; random_nodes
/// removes distinct stations chosen uniformly from those still present.
/// Throws DomainError when a step names a station that is absent.
TransitNetwork apply_scenario(const TransitNetwork& network, const AttackScenario& scenario,
                              std::uint64_t seed);

/// kenmore-random, kenmore-targeted, kenmore-combined.
AttackScenario preset(std::string_view name);
std::vector<std::string> preset_names();

struct ImpactReport {
  int components_before = 0;
  int components_after = 0;
  int largest_component_before = 0;
  int largest_component_after = 0;
  /// Pairs of termini (degree 1 before the attack) that were connected before
  /// and are not connected afterwards, either end missing included.
  std::vector<std::pair<std::string, std::string>> disconnected_termini;
  Money risk_before = 0.0;
  Money risk_after = 0.0;
  double spectral_radius_before = 0.0;
  double spectral_radius_after = 0.0;

  int disconnected_terminus_pairs() const { return static_cast<int>(disconnected_termini.size()); }
};

ImpactReport impact_report(const TransitNetwork& before, const TransitNetwork& after);

/// Spectral radius of the network's adjacency matrix, 0 when it has no links.
double network_spectral_radius(const TransitNetwork& network);

enum class TargetMetric { degree, betweenness, risk };

std::optional<TargetMetric> target_metric_from_string(std::string_view text);

/// Removes the top-k stations by the metric, computed once on the intact network.
AttackScenario targeted_attack(const TransitNetwork& network, int k, TargetMetric metric);

}  // namespace gridline
