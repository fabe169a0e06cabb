#include "gridline/attack.hpp"

#include <algorithm>
#include <random>

#include "gridline/errors.hpp"
#include "gridline/metrics.hpp"
#include "gridline/risk.hpp"
#include "json_fields.hpp"

namespace gridline {

namespace {

using detail::FieldReader;
using detail::Json;
using detail::OrderedJson;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::optional<ScenarioKind> scenario_kind_from_string(std::string_view text) {
  if (text == "random") return ScenarioKind::random;
  if (text == "targeted") return ScenarioKind::targeted;
  if (text == "combined") return ScenarioKind::combined;
  return std::nullopt;
}

void drop_node(TransitNetwork& network, const std::string& id) {
  auto index = network.index_of(id);
  std::erase_if(network.links, [&](const RailLink& link) { return link.a == id || link.b == id; });
  network.nodes.erase(network.nodes.begin() + static_cast<std::ptrdiff_t>(*index));
}

std::vector<int> component_labels(const TransitNetwork& network) {
  const auto adjacency = adjacency_lists(network);
  std::vector<int> label(adjacency.size(), -1);
  int next = 0;
  for (std::size_t start = 0; start < adjacency.size(); ++start) {
    if (label[start] >= 0) continue;
    std::vector<std::size_t> stack{start};
    label[start] = next;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adjacency[u]) {
        if (label[v] < 0) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::random: return "random";
    case ScenarioKind::targeted: return "targeted";
    case ScenarioKind::combined: return "combined";
  }
  return "targeted";
}

bool AttackScenario::is_randomized() const {
  return std::any_of(steps.begin(), steps.end(),
                     [](const AttackStep& step) { return std::holds_alternative<RandomNodes>(step); });
}

AttackScenario parse_scenario(std::string_view text) {
  const Json doc = detail::parse_json_text(text, "scenario");
  FieldReader root(doc, "scenario");
  root.allow_only({"name", "kind", "steps"});
  AttackScenario scenario;
  scenario.name = root.string("name");
  const auto kind_text = root.string("kind");
  auto kind = scenario_kind_from_string(kind_text);
  if (!kind) root.fail_field("kind", "unknown scenario kind \"" + kind_text + "\"");
  scenario.kind = *kind;

  const Json& steps = root.array("steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    FieldReader reader(steps[i], root.child("steps", i));
    const auto op = reader.string("op");
    if (op == "remove_node") {
      reader.allow_only({"op", "id"});
      scenario.steps.emplace_back(RemoveNode{reader.string("id")});
    } else if (op == "remove_link") {
      reader.allow_only({"op", "a", "b"});
      scenario.steps.emplace_back(RemoveLink{reader.string("a"), reader.string("b")});
    } else if (op == "degrade_node") {
      reader.allow_only({"op", "id", "vulnerability"});
      scenario.steps.emplace_back(DegradeNode{reader.string("id"), reader.number("vulnerability")});
    } else if (op == "random_nodes") {
      reader.allow_only({"op", "count"});
      const Json& count = reader.at("count");
      if (!count.is_number_integer()) reader.fail_field("count", "expected an integer");
      scenario.steps.emplace_back(RandomNodes{count.get<int>()});
    } else {
      reader.fail_field("op", "unknown step \"" + op + "\"");
    }
  }
  return scenario;
}

std::string serialize_scenario(const AttackScenario& scenario) {
  OrderedJson doc;
  doc["name"] = scenario.name;
  doc["kind"] = std::string(to_string(scenario.kind));
  doc["steps"] = OrderedJson::array();
  for (const auto& step : scenario.steps) {
    OrderedJson item;
    std::visit(Overloaded{
                   [&](const RemoveNode& s) {
                     item["op"] = "remove_node";
                     item["id"] = s.id;
                   },
                   [&](const RemoveLink& s) {
                     item["op"] = "remove_link";
                     item["a"] = s.a;
                     item["b"] = s.b;
                   },
                   [&](const DegradeNode& s) {
                     item["op"] = "degrade_node";
                     item["id"] = s.id;
                     item["vulnerability"] = s.vulnerability;
                   },
                   [&](const RandomNodes& s) {
                     item["op"] = "random_nodes";
                     item["count"] = s.count;
                   },
               },
               step);
    doc["steps"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

TransitNetwork apply_scenario(const TransitNetwork& network, const AttackScenario& scenario,
                              std::uint64_t seed) {
  TransitNetwork out = network;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
    const std::string where = "step " + std::to_string(i) + ": ";
    auto require_node = [&](const std::string& id) {
      if (!out.index_of(id)) throw DomainError(where + "node " + id + " is not present");
    };
    std::visit(Overloaded{
                   [&](const RemoveNode& s) {
                     require_node(s.id);
                     drop_node(out, s.id);
                   },
                   [&](const RemoveLink& s) {
                     auto it = std::find_if(out.links.begin(), out.links.end(),
                                            [&](const RailLink& l) { return l.joins(s.a, s.b); });
                     if (it == out.links.end()) {
                       throw DomainError(where + "link " + link_key(s.a, s.b) + " is not present");
                     }
                     out.links.erase(it);
                   },
                   [&](const DegradeNode& s) {
                     require_node(s.id);
                     if (!(s.vulnerability >= 0.0 && s.vulnerability <= 1.0)) {
                       throw DomainError(where + "vulnerability out of range");
                     }
                     out.nodes[*out.index_of(s.id)].profile.vulnerability = s.vulnerability;
                   },
                   [&](const RandomNodes& s) {
                     if (s.count < 0 || static_cast<std::size_t>(s.count) > out.node_count()) {
                       throw DomainError(where + "cannot remove " + std::to_string(s.count) +
                                         " of " + std::to_string(out.node_count()) + " stations");
                     }
                     std::vector<std::string> ids;
                     for (const auto& node : out.nodes) ids.push_back(node.id);
                     // Partial Fisher-Yates: the first `count` entries are the victims.
                     for (std::size_t j = 0; j < static_cast<std::size_t>(s.count); ++j) {
                       std::uniform_int_distribution<std::size_t> pick(j, ids.size() - 1);
                       std::swap(ids[j], ids[pick(rng)]);
                       drop_node(out, ids[j]);
                     }
                   },
               },
               scenario.steps[i]);
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"kenmore-random", "kenmore-targeted", "kenmore-combined"};
}

AttackScenario preset(std::string_view name) {
  if (name == "kenmore-random") {
    return {"kenmore-random", ScenarioKind::random, {RandomNodes{1}}};
  }
  if (name == "kenmore-targeted") {
    return {"kenmore-targeted", ScenarioKind::targeted, {RemoveNode{"Kenmore"}}};
  }
  if (name == "kenmore-combined") {
    return {"kenmore-combined",
            ScenarioKind::combined,
            {RemoveNode{"Kenmore"}, DegradeNode{"Hynes", 1.0}, DegradeNode{"BrooklineVillage", 1.0},
             DegradeNode{"BostonCollege", 1.0}, DegradeNode{"ClevelandCircle", 1.0}}};
  }
  throw DomainError("unknown preset \"" + std::string(name) + "\"");
}

double network_spectral_radius(const TransitNetwork& network) {
  if (network.link_count() == 0) return 0.0;
  return spectral_radius(adjacency_matrix(network));
}

ImpactReport impact_report(const TransitNetwork& before, const TransitNetwork& after) {
  ImpactReport report;
  const auto sizes_before = component_sizes(before);
  const auto sizes_after = component_sizes(after);
  report.components_before = static_cast<int>(sizes_before.size());
  report.components_after = static_cast<int>(sizes_after.size());
  if (!sizes_before.empty()) {
    report.largest_component_before =
        static_cast<int>(*std::max_element(sizes_before.begin(), sizes_before.end()));
  }
  if (!sizes_after.empty()) {
    report.largest_component_after =
        static_cast<int>(*std::max_element(sizes_after.begin(), sizes_after.end()));
  }

  const auto degrees = degree_summary(before).per_node;
  const auto labels_before = component_labels(before);
  const auto labels_after = component_labels(after);
  std::vector<std::size_t> termini;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] == 1) termini.push_back(i);
  }
  for (std::size_t x = 0; x < termini.size(); ++x) {
    for (std::size_t y = x + 1; y < termini.size(); ++y) {
      const auto& s = before.nodes[termini[x]];
      const auto& t = before.nodes[termini[y]];
      if (labels_before[termini[x]] != labels_before[termini[y]]) continue;
      auto s_after = after.index_of(s.id);
      auto t_after = after.index_of(t.id);
      if (s_after && t_after && labels_after[*s_after] == labels_after[*t_after]) continue;
      report.disconnected_termini.emplace_back(std::min(s.id, t.id), std::max(s.id, t.id));
    }
  }

  report.risk_before = network_risk(before).total_risk;
  report.risk_after = network_risk(after).total_risk;
  report.spectral_radius_before = network_spectral_radius(before);
  report.spectral_radius_after = network_spectral_radius(after);
  return report;
}

std::optional<TargetMetric> target_metric_from_string(std::string_view text) {
  if (text == "degree") return TargetMetric::degree;
  if (text == "betweenness") return TargetMetric::betweenness;
  if (text == "risk") return TargetMetric::risk;
  return std::nullopt;
}

AttackScenario targeted_attack(const TransitNetwork& network, int k, TargetMetric metric) {
  if (k < 0 || static_cast<std::size_t>(k) > network.node_count()) {
    throw DomainError("k must lie in [0, N]");
  }
  RankKey key = RankKey::degree;
  std::string metric_name = "degree";
  if (metric == TargetMetric::betweenness) {
    key = RankKey::betweenness;
    metric_name = "betweenness";
  } else if (metric == TargetMetric::risk) {
    key = RankKey::risk;
    metric_name = "risk";
  }
  const auto ranking = rank_assets(network, key);
  AttackScenario scenario;
  scenario.name = "targeted-top" + std::to_string(k) + "-" + metric_name;
  scenario.kind = ScenarioKind::targeted;
  for (int i = 0; i < k; ++i) scenario.steps.emplace_back(RemoveNode{ranking[static_cast<std::size_t>(i)].id});
  return scenario;
}

}  // namespace gridline
