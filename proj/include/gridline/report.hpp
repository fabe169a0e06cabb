#pragma once

// JSON payloads for every analysis. The CLI and the HTTP service both render
// through these functions, so the same inputs give byte-identical output.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridline/attack.hpp"
#include "gridline/fault_tree.hpp"
#include "gridline/investment.hpp"
#include "gridline/metrics.hpp"
#include "gridline/network.hpp"
#include "gridline/resilience.hpp"
#include "gridline/risk.hpp"
#include "json.hpp"

namespace gridline {

using Json = nlohmann::ordered_json;

/// Canonical text form: two-space indent plus trailing newline.
std::string render(const Json& payload);

/// Throws ValidationError unless the network is valid and has at least one node.
void require_analyzable(const TransitNetwork& network);

Json metrics_payload(const TransitNetwork& network);
Json risk_payload(const TransitNetwork& network);
Json ranking_payload(const TransitNetwork& network, RankKey key);

/// Measured Green Line cascade exponents at uniform vulnerability 10% and 90%.
std::vector<CalibrationPoint> reference_calibration();

struct ResilienceRequest {
  std::vector<CalibrationPoint> points = reference_calibration();
  std::optional<double> rho;                // default: the network's spectral radius
  std::vector<double> estimate_gammas;      // non-empty: fit Monte Carlo q instead of points
  int trials = 10000;
  std::optional<std::uint64_t> seed;        // required with estimate_gammas
};

Json resilience_payload(const TransitNetwork& network, const ResilienceRequest& request);
Json fit_json(const ResilienceFit& fit);

Json sweep_point_json(const FaultTree& tree, const SweepPoint& point);
Json allocation_payload(const FaultTree& tree, Money budget, const AllocatorChoice& allocator);
Json sweep_payload(const FaultTree& tree, const std::vector<Money>& budgets,
                   const AllocatorChoice& allocator);

Json impact_json(const ImpactReport& report);
/// Applies the scenario; seed is required when the scenario is randomized.
Json attack_payload(const TransitNetwork& network, const AttackScenario& scenario,
                    std::optional<std::uint64_t> seed);

Json roi_payload(Money risk_initial, Money risk_final, Money expenditure);
/// ROI of the tree against its zero-spend risk at each budget.
Json roi_curve_payload(const FaultTree& tree, const std::vector<Money>& budgets,
                       const AllocatorChoice& allocator);
std::vector<RoiPoint> tree_roi_curve(const FaultTree& tree, const std::vector<Money>& budgets,
                                     const AllocatorChoice& allocator);

Json budget_plan_payload(const BudgetPlan& plan);

Json error_payload(const std::string& message, const std::vector<std::string>& violations = {});

/// "1,2.5,3" -> {1, 2.5, 3}; throws DomainError on anything else.
std::vector<double> parse_number_list(const std::string& text);

/// "0.1:1.86,0.9:0.76" -> calibration points.
std::vector<CalibrationPoint> parse_calibration_points(const std::string& text);

}  // namespace gridline
