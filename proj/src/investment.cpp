#include "gridline/investment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "gridline/errors.hpp"

namespace gridline {

double roi(Money risk_initial, Money risk_final, Money expenditure) {
  if (!(expenditure > 0.0)) throw DomainError("expenditure must be positive");
  return (risk_initial - risk_final) / expenditure;
}

BudgetSplit split_budget(Money total, double response_share) {
  if (!(response_share >= 0.0 && response_share <= 1.0)) {
    throw DomainError("response share must lie in [0, 1]");
  }
  const Money response = total * response_share;
  return {total - response, response};
}

std::optional<Tier> tier_from_string(std::string_view text) {
  if (text == "high") return Tier::high;
  if (text == "medium") return Tier::medium;
  if (text == "low") return Tier::low;
  return std::nullopt;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::high: return "high";
    case Tier::medium: return "medium";
    case Tier::low: return "low";
  }
  return "low";
}

TierCosts tier_costs(Tier tier) {
  switch (tier) {
    case Tier::high: return {3.0, 4.5};
    case Tier::medium: return {2.16, 3.24};
    case Tier::low: return {1.2, 1.8};
  }
  throw DomainError("unknown tier");
}

std::optional<Tier> tier_for_costs(Money prevention, Money response) {
  for (auto tier : {Tier::high, Tier::medium, Tier::low}) {
    const auto costs = tier_costs(tier);
    if (std::abs(costs.prevention - prevention) <= 1e-9 &&
        std::abs(costs.response - response) <= 1e-9) {
      return tier;
    }
  }
  return std::nullopt;
}

BudgetPlan plan_budget(const TransitNetwork& network, Money total, double response_share) {
  BudgetPlan plan;
  plan.total = total;
  const auto split = split_budget(total, response_share);
  plan.prevention = split.prevention;
  plan.response = split.response;

  std::vector<std::string> unmatched;
  for (const auto& node : network.nodes) {
    auto tier = tier_for_costs(node.profile.prevention_cost, node.profile.response_cost);
    if (!tier) {
      unmatched.push_back("node " + node.id + ": costs match no funding tier");
      continue;
    }
    plan.tier_assignment[node.id] = *tier;
    plan.per_node_costs[node.id] = tier_costs(*tier);
  }
  if (!unmatched.empty()) throw ValidationError(std::move(unmatched));
  return plan;
}

std::vector<RoiPoint> roi_curve(const FaultTree& tree, std::span<const Money> budgets,
                                const AllocatorChoice& allocator, const ReductionCurve& curve,
                                Money risk_initial) {
  if (budgets.empty()) throw DomainError("roi curve needs at least one budget");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (!(budgets[i] > 0.0)) throw DomainError("roi curve budgets must be positive");
    if (i > 0 && !(budgets[i] > budgets[i - 1])) {
      throw DomainError("roi curve budgets must be strictly ascending");
    }
  }
  std::vector<RoiPoint> out;
  for (const auto& point : budget_sweep(tree, budgets, allocator, curve)) {
    out.push_back({point.budget, point.risk, roi(risk_initial, point.risk, point.budget)});
  }
  return out;
}

std::string render_roi_svg(std::span<const RoiPoint> points) {
  constexpr double width = 640, height = 400, margin = 50;
  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">expenditure (million USD)</text>\n";
  svg << "  <text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">ROI</text>\n";
  if (!points.empty()) {
    double x_min = points.front().expenditure, x_max = x_min;
    double y_min = points.front().roi, y_max = y_min;
    for (const auto& p : points) {
      x_min = std::min(x_min, p.expenditure);
      x_max = std::max(x_max, p.expenditure);
      y_min = std::min(y_min, p.roi);
      y_max = std::max(y_max, p.roi);
    }
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;
    const double y_span = y_max > y_min ? y_max - y_min : 1.0;
    auto px = [&](double x) { return margin + (x - x_min) / x_span * (width - 2 * margin); };
    auto py = [&](double y) { return height - margin - (y - y_min) / y_span * (height - 2 * margin); };
    if (points.size() > 1) {
      svg << "  <polyline fill=\"none\" stroke=\"#00843d\" stroke-width=\"2\" points=\"";
      for (const auto& p : points) svg << px(p.expenditure) << ',' << py(p.roi) << ' ';
      svg << "\"/>\n";
    }
    for (const auto& p : points) {
      svg << "  <circle cx=\"" << px(p.expenditure) << "\" cy=\"" << py(p.roi)
          << "\" r=\"3\" fill=\"#00843d\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gridline
