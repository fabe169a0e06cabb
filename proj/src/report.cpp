#include "gridline/report.hpp"

#include <cstdlib>
#include <sstream>

#include "gridline/errors.hpp"

namespace gridline {

namespace {

template <typename Table>
Json table_json(const Table& table) {
  Json out = Json::object();
  for (std::size_t i = 0; i < table.ids.size(); ++i) out[table.ids[i]] = table.values[i];
  return out;
}

double parse_number(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (token.empty() || end != begin + token.size()) {
    throw DomainError("not a number: \"" + token + "\"");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, separator)) out.push_back(item);
  return out;
}

}  // namespace

std::string render(const Json& payload) { return payload.dump(2) + "\n"; }

void require_analyzable(const TransitNetwork& network) {
  std::vector<std::string> problems;
  if (network.node_count() == 0) problems.emplace_back("network has no nodes");
  for (const auto& violation : validate(network)) problems.push_back(violation.message());
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

Json metrics_payload(const TransitNetwork& network) {
  require_analyzable(network);
  const MetricsSummary summary = robustness_summary(network);
  Json out;
  out["nodes"] = network.node_count();
  out["links"] = network.link_count();
  Json degrees = Json::object();
  for (std::size_t i = 0; i < network.node_count(); ++i) {
    degrees[network.nodes[i].id] = summary.degree.per_node[i];
  }
  out["per_node_degree"] = std::move(degrees);
  out["total_degree"] = summary.degree.total;
  out["network_degree"] = summary.degree.max;
  out["mean_degree_per_link"] = summary.degree.mean_per_link;
  out["mean_degree_per_node"] = summary.degree.mean_per_node;
  out["spectral_radius"] = summary.spectral_radius;
  out["link_robustness"] = summary.link_robustness;
  out["node_robustness"] = summary.node_robustness;
  out["blocking_fraction"] = summary.blocking_fraction;
  out["removable_links"] = summary.removable_links;
  out["removable_nodes"] = summary.removable_nodes;
  out["irremovable_blocking_nodes"] = summary.irremovable_blocking_nodes;
  out["blocking_set"] = summary.blocking_set;
  const std::size_t n = network.node_count();
  out["degree_centrality"] = n >= 2 ? table_json(degree_centrality(network)) : Json(nullptr);
  out["betweenness_centrality"] = n >= 3 ? table_json(betweenness_centrality(network)) : Json(nullptr);
  out["eigenvector_centrality"] =
      is_connected(network) ? table_json(eigenvector_centrality(network)) : Json(nullptr);
  return out;
}

Json risk_payload(const TransitNetwork& network) {
  require_analyzable(network);
  const RiskReport report = network_risk(network);
  Json out;
  Json assets = Json::object();
  for (const auto& asset : report.per_asset) assets[asset.id] = asset.risk;
  out["assets"] = std::move(assets);
  out["total_risk"] = report.total_risk;
  out["ranking"] = Json::array();
  for (const auto& asset : report.ranking) {
    out["ranking"].push_back(Json{{"asset", asset.id},
                                  {"kind", asset.kind == AssetKind::node ? "node" : "link"},
                                  {"risk", asset.risk}});
  }
  return out;
}

Json ranking_payload(const TransitNetwork& network, RankKey key) {
  require_analyzable(network);
  Json out;
  out["key"] = std::string(to_string(key));
  out["ranking"] = Json::array();
  for (const auto& item : rank_assets(network, key)) {
    out["ranking"].push_back(Json{{"asset", item.id}, {"value", item.value}});
  }
  return out;
}

std::vector<CalibrationPoint> reference_calibration() { return {{0.10, 1.86052}, {0.90, 0.763993}}; }

Json fit_json(const ResilienceFit& fit) {
  Json out;
  out["b"] = fit.b;
  out["k"] = fit.k;
  out["rho"] = fit.rho;
  out["gamma_critical"] = fit.gamma_critical ? Json(*fit.gamma_critical) : Json(nullptr);
  return out;
}

Json resilience_payload(const TransitNetwork& network, const ResilienceRequest& request) {
  require_analyzable(network);
  const double rho = request.rho ? *request.rho : network_spectral_radius(network);

  std::vector<CalibrationPoint> points = request.points;
  std::string source = "supplied";
  if (!request.estimate_gammas.empty()) {
    if (!request.seed) throw DomainError("Monte Carlo estimation requires an explicit seed");
    points.clear();
    CascadeOptions options;
    options.trials = request.trials;
    options.seed = *request.seed;
    for (double gamma : request.estimate_gammas) {
      points.push_back({gamma, estimate_q(network, gamma, options)});
    }
    source = "monte-carlo";
  }

  const ResilienceFit fit = fit_resilience_line(points, rho);
  Json out = fit_json(fit);
  out["gamma_critical_in_range"] =
      fit.gamma_critical ? Json(critical_vulnerability(fit).in_range) : Json(nullptr);
  out["source"] = source;
  out["points"] = Json::array();
  for (const auto& p : points) out["points"].push_back(Json{{"gamma", p.gamma}, {"q", p.q}});
  return out;
}

Json sweep_point_json(const FaultTree& tree, const SweepPoint& point) {
  Json out;
  out["budget"] = point.budget;
  out["vulnerability"] = point.vulnerability;
  out["risk"] = point.risk;
  Json allocation = Json::object();
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    allocation[tree.leaves[i].label] = point.allocation.spend[i];
  }
  out["allocation"] = std::move(allocation);
  return out;
}

namespace {

ReductionCurve checked_curve(const FaultTree& tree) {
  auto problems = validate_fault_tree(tree);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return curve_of(tree);
}

}  // namespace

Json allocation_payload(const FaultTree& tree, Money budget, const AllocatorChoice& allocator) {
  const std::vector<Money> budgets{budget};
  return sweep_payload(tree, budgets, allocator).at(0);
}

Json sweep_payload(const FaultTree& tree, const std::vector<Money>& budgets,
                   const AllocatorChoice& allocator) {
  const ReductionCurve curve = checked_curve(tree);
  Json out = Json::array();
  for (const auto& point : budget_sweep(tree, budgets, allocator, curve)) {
    out.push_back(sweep_point_json(tree, point));
  }
  return out;
}

Json impact_json(const ImpactReport& report) {
  Json out;
  out["components_before"] = report.components_before;
  out["components_after"] = report.components_after;
  out["largest_component_before"] = report.largest_component_before;
  out["largest_component_after"] = report.largest_component_after;
  out["disconnected_terminus_pairs"] = report.disconnected_terminus_pairs();
  Json pairs = Json::array();
  for (const auto& [a, b] : report.disconnected_termini) pairs.push_back(Json::array({a, b}));
  out["disconnected_termini"] = std::move(pairs);
  out["risk_before"] = report.risk_before;
  out["risk_after"] = report.risk_after;
  out["spectral_radius_before"] = report.spectral_radius_before;
  out["spectral_radius_after"] = report.spectral_radius_after;
  return out;
}

Json attack_payload(const TransitNetwork& network, const AttackScenario& scenario,
                    std::optional<std::uint64_t> seed) {
  require_analyzable(network);
  if (scenario.is_randomized() && !seed) {
    throw DomainError("scenario \"" + scenario.name + "\" is randomized and requires an explicit seed");
  }
  const TransitNetwork after = apply_scenario(network, scenario, seed.value_or(0));
  Json out;
  out["scenario"] = Json::parse(serialize_scenario(scenario));
  out["seed"] = seed ? Json(*seed) : Json(nullptr);
  std::vector<std::string> removed;
  for (const auto& node : network.nodes) {
    if (!after.index_of(node.id)) removed.push_back(node.id);
  }
  out["removed_nodes"] = removed;
  out["impact"] = impact_json(impact_report(network, after));
  out["network"] = Json::parse(serialize_network(after));
  return out;
}

Json roi_payload(Money risk_initial, Money risk_final, Money expenditure) {
  Json out;
  out["risk_initial"] = risk_initial;
  out["risk_final"] = risk_final;
  out["expenditure"] = expenditure;
  out["roi"] = roi(risk_initial, risk_final, expenditure);
  return out;
}

std::vector<RoiPoint> tree_roi_curve(const FaultTree& tree, const std::vector<Money>& budgets,
                                     const AllocatorChoice& allocator) {
  const ReductionCurve curve = checked_curve(tree);
  const Money initial = tree_risk(tree, allocate_proportional(tree, 0.0), curve);
  return roi_curve(tree, budgets, allocator, curve, initial);
}

Json roi_curve_payload(const FaultTree& tree, const std::vector<Money>& budgets,
                       const AllocatorChoice& allocator) {
  Json out = Json::array();
  for (const auto& point : tree_roi_curve(tree, budgets, allocator)) {
    out.push_back(
        Json{{"expenditure", point.expenditure}, {"risk_final", point.risk_final}, {"roi", point.roi}});
  }
  return out;
}

Json budget_plan_payload(const BudgetPlan& plan) {
  Json out;
  out["total"] = plan.total;
  out["prevention"] = plan.prevention;
  out["response"] = plan.response;
  Json tiers = Json::object();
  for (const auto& [id, tier] : plan.tier_assignment) {
    const auto& costs = plan.per_node_costs.at(id);
    tiers[id] = Json{{"tier", std::string(to_string(tier))},
                     {"prevention", costs.prevention},
                     {"response", costs.response}};
  }
  out["stations"] = std::move(tiers);
  return out;
}

Json error_payload(const std::string& message, const std::vector<std::string>& violations) {
  Json out;
  out["error"] = message;
  out["violations"] = violations;
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_number(token));
  if (out.empty()) throw DomainError("empty number list");
  return out;
}

std::vector<CalibrationPoint> parse_calibration_points(const std::string& text) {
  std::vector<CalibrationPoint> out;
  for (const auto& token : split(text, ',')) {
    const auto parts = split(token, ':');
    if (parts.size() != 2) throw DomainError("calibration point must be gamma:q, got \"" + token + "\"");
    out.push_back({parse_number(parts[0]), parse_number(parts[1])});
  }
  return out;
}

}  // namespace gridline
