#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridline/fault_tree.hpp"
#include "gridline/network.hpp"

namespace gridline {

/// (risk_initial - risk_final) / expenditure; dimensionless (risk reduced per unit spent).
double roi(Money risk_initial, Money risk_final, Money expenditure);

struct BudgetSplit {
  Money prevention = 0.0;
  Money response = 0.0;
};

BudgetSplit split_budget(Money total, double response_share);

enum class Tier { high, medium, low };

std::optional<Tier> tier_from_string(std::string_view text);
std::string_view to_string(Tier tier);

struct TierCosts {
  Money prevention = 0.0;
  Money response = 0.0;
};

/// Per-station funding for each tier; response is 1.5x prevention in every tier.
TierCosts tier_costs(Tier tier);

/// The tier whose cost pair matches (to 1e-9), if any.
std::optional<Tier> tier_for_costs(Money prevention, Money response);

struct BudgetPlan {
  Money total = 0.0;
  Money prevention = 0.0;
  Money response = 0.0;
  std::map<std::string, Tier> tier_assignment;
  std::map<std::string, TierCosts> per_node_costs;
};

/// Splits the total and reads each station's tier off its prevention/response
/// costs. Throws ValidationError listing stations whose costs match no tier.
BudgetPlan plan_budget(const TransitNetwork& network, Money total, double response_share);

struct RoiPoint {
  Money expenditure = 0.0;
  Money risk_final = 0.0;
  double roi = 0.0;
};

/// Evaluates the tree at each budget (strictly positive, strictly ascending)
/// and reports ROI against the fixed initial risk.
std::vector<RoiPoint> roi_curve(const FaultTree& tree, std::span<const Money> budgets,
                                const AllocatorChoice& allocator, const ReductionCurve& curve,
                                Money risk_initial);

/// Standalone SVG line plot of ROI against expenditure.
std::string render_roi_svg(std::span<const RoiPoint> points);

}  // namespace gridline
