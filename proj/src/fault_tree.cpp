#include "gridline/fault_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gridline/errors.hpp"
#include "json_fields.hpp"

namespace gridline {

namespace detail {
extern const std::string_view kHubsFaultTreeJson;
}

namespace {

using detail::FieldReader;
using detail::Json;
using detail::OrderedJson;

constexpr double kHubsFullBudgetTarget = 0.1855;

void check_allocation(const FaultTree& tree, const Allocation& allocation) {
  if (allocation.spend.size() != tree.leaves.size()) {
    throw DomainError("allocation does not match the fault tree's leaves");
  }
  for (auto spend : allocation.spend) {
    if (!(spend >= 0.0)) throw DomainError("allocation has a negative spend");
  }
  if (allocation.total() > allocation.budget + 1e-9) {
    throw DomainError("allocation exceeds its budget");
  }
}

double leaf_beta(const ThreatLeaf& leaf, const ReductionCurve& curve) {
  return leaf.beta.value_or(curve.beta);
}

}  // namespace

Money FaultTree::total_elimination_cost() const {
  Money total = 0.0;
  for (const auto& leaf : leaves) total += leaf.elimination_cost;
  return total;
}

Money Allocation::total() const { return std::accumulate(spend.begin(), spend.end(), 0.0); }

std::optional<AllocatorKind> allocator_from_string(std::string_view text) {
  if (text == "proportional") return AllocatorKind::proportional;
  if (text == "greedy") return AllocatorKind::greedy;
  return std::nullopt;
}

std::string_view to_string(AllocatorKind kind) {
  return kind == AllocatorKind::greedy ? "greedy" : "proportional";
}

std::vector<std::string> validate_fault_tree(const FaultTree& tree) {
  std::vector<std::string> out;
  if (tree.leaves.empty()) out.emplace_back("fault tree has no leaves");
  std::set<std::string_view> labels;
  for (const auto& leaf : tree.leaves) {
    const std::string prefix = "leaf " + leaf.label + ": ";
    if (!labels.insert(leaf.label).second) out.push_back(prefix + "duplicate label");
    if (!(leaf.threat >= 0.0 && leaf.threat <= 1.0)) out.push_back(prefix + "threat out of range");
    if (!(leaf.base_vulnerability >= 0.0 && leaf.base_vulnerability <= 1.0)) {
      out.push_back(prefix + "v0 out of range");
    }
    if (!(leaf.consequence >= 0.0)) out.push_back(prefix + "consequence negative");
    if (!(leaf.elimination_cost > 0.0)) out.push_back(prefix + "elimination_cost not positive");
    if (leaf.beta && !(*leaf.beta > 0.0)) out.push_back(prefix + "beta not positive");
  }
  if (tree.beta && !(*tree.beta > 0.0)) out.emplace_back("beta not positive");
  return out;
}

FaultTree parse_fault_tree(std::string_view text) {
  const Json doc = detail::parse_json_text(text, "fault tree");
  FieldReader root(doc, "faulttree");
  root.allow_only({"leaves", "beta"});
  FaultTree tree;
  if (root.has("beta")) tree.beta = root.number("beta");
  std::set<std::string> labels;
  const Json& leaves = root.array("leaves");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    FieldReader reader(leaves[i], root.child("leaves", i));
    reader.allow_only({"label", "asset", "threat", "v0", "consequence", "elimination_cost", "beta"});
    ThreatLeaf leaf;
    leaf.label = reader.string("label");
    leaf.asset = reader.string("asset");
    leaf.threat = reader.number("threat");
    leaf.base_vulnerability = reader.number("v0");
    leaf.consequence = reader.number("consequence");
    leaf.elimination_cost = reader.number("elimination_cost");
    if (reader.has("beta")) leaf.beta = reader.number("beta");
    if (!labels.insert(leaf.label).second) reader.fail("duplicate leaf label \"" + leaf.label + "\"");
    tree.leaves.push_back(std::move(leaf));
  }
  return tree;
}

std::string serialize_fault_tree(const FaultTree& tree) {
  OrderedJson doc;
  doc["leaves"] = OrderedJson::array();
  for (const auto& leaf : tree.leaves) {
    OrderedJson item;
    item["label"] = leaf.label;
    item["asset"] = leaf.asset;
    item["threat"] = leaf.threat;
    item["v0"] = leaf.base_vulnerability;
    item["consequence"] = leaf.consequence;
    item["elimination_cost"] = leaf.elimination_cost;
    if (leaf.beta) item["beta"] = *leaf.beta;
    doc["leaves"].push_back(std::move(item));
  }
  if (tree.beta) doc["beta"] = *tree.beta;
  return doc.dump(2) + "\n";
}

FaultTree load_bundled_fault_tree(std::string_view name) {
  if (name != "greenline-hubs") {
    throw DomainError("unknown fault tree \"" + std::string(name) + "\"");
  }
  FaultTree tree = parse_fault_tree(detail::kHubsFaultTreeJson);
  if (!tree.beta) {
    tree.beta = calibrate_beta(tree, tree.total_elimination_cost(), kHubsFullBudgetTarget).beta;
  }
  return tree;
}

FaultTree load_fault_tree(std::string_view reference) {
  constexpr std::string_view prefix = "bundled:";
  if (reference.substr(0, prefix.size()) == prefix) {
    return load_bundled_fault_tree(reference.substr(prefix.size()));
  }
  return parse_fault_tree(read_text_file(std::string(reference)));
}

ReductionCurve curve_of(const FaultTree& tree) {
  if (!tree.beta) throw DomainError("fault tree has no decay rate (beta); calibrate or supply one");
  return ReductionCurve{*tree.beta};
}

double leaf_vulnerability(const ThreatLeaf& leaf, Money spend, const ReductionCurve& curve) {
  if (!(spend >= 0.0)) throw DomainError("spend must be non-negative");
  return leaf.base_vulnerability * std::exp(-leaf_beta(leaf, curve) * spend / leaf.elimination_cost);
}

double top_vulnerability(const FaultTree& tree, const Allocation& allocation,
                         const ReductionCurve& curve) {
  check_allocation(tree, allocation);
  double survive = 1.0;
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    survive *= 1.0 - leaf_vulnerability(tree.leaves[i], allocation.spend[i], curve);
  }
  return 1.0 - survive;
}

Money tree_risk(const FaultTree& tree, const Allocation& allocation, const ReductionCurve& curve) {
  check_allocation(tree, allocation);
  Money risk = 0.0;
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    const auto& leaf = tree.leaves[i];
    risk += leaf.threat * leaf_vulnerability(leaf, allocation.spend[i], curve) * leaf.consequence;
  }
  return risk;
}

ReductionCurve calibrate_beta(const FaultTree& tree, Money full_budget, double target) {
  if (!(full_budget > 0.0)) throw DomainError("calibration budget must be positive");
  if (tree.leaves.empty()) throw DomainError("fault tree has no leaves");
  const Allocation allocation = allocate_proportional(tree, full_budget);
  auto top_at = [&](double beta) { return top_vulnerability(tree, allocation, ReductionCurve{beta}); };

  const double unreduced = top_at(0.0);
  if (!(target > 0.0) || target > unreduced + 1e-12) {
    throw DomainError("calibration target unreachable");
  }
  if (target >= unreduced - 1e-12) return ReductionCurve{kMinimumBeta};

  double lo = 0.0;
  double hi = 1.0;
  while (top_at(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw DomainError("calibration target unreachable");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (top_at(mid) > target ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);
  if (std::abs(top_at(beta) - target) > 1e-9) {
    throw ConvergenceError("decay-rate calibration did not reach the target");
  }
  return ReductionCurve{beta};
}

Allocation allocate_proportional(const FaultTree& tree, Money budget) {
  if (!(budget >= 0.0)) throw DomainError("budget must be non-negative");
  Allocation allocation{std::vector<Money>(tree.leaves.size(), 0.0), budget};
  const Money total_cost = tree.total_elimination_cost();
  if (budget == 0.0 || total_cost <= 0.0) return allocation;
  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    allocation.spend[i] = budget * tree.leaves[i].elimination_cost / total_cost;
  }
  return allocation;
}

Allocation allocate_greedy(const FaultTree& tree, Money budget, Money step,
                           const ReductionCurve& curve) {
  if (!(budget >= 0.0)) throw DomainError("budget must be non-negative");
  if (!(step > 0.0)) throw DomainError("greedy step must be positive");
  Allocation allocation{std::vector<Money>(tree.leaves.size(), 0.0), budget};
  if (tree.leaves.empty() || budget == 0.0) return allocation;

  auto marginal = [&](std::size_t i) {
    const auto& leaf = tree.leaves[i];
    return leaf_beta(leaf, curve) / leaf.elimination_cost * leaf.threat *
           leaf_vulnerability(leaf, allocation.spend[i], curve) * leaf.consequence;
  };
  auto best_leaf = [&] {
    std::size_t best = 0;
    double best_gain = marginal(0);
    for (std::size_t i = 1; i < tree.leaves.size(); ++i) {
      const double gain = marginal(i);
      if (gain > best_gain || (gain == best_gain && tree.leaves[i].label < tree.leaves[best].label)) {
        best = i;
        best_gain = gain;
      }
    }
    return best;
  };

  const auto whole_steps = static_cast<long long>(std::floor(budget / step + 1e-9));
  for (long long s = 0; s < whole_steps; ++s) allocation.spend[best_leaf()] += step;
  const Money remainder = budget - static_cast<double>(whole_steps) * step;
  if (remainder > 1e-12) allocation.spend[best_leaf()] += remainder;
  return allocation;
}

Allocation allocate(const FaultTree& tree, Money budget, const AllocatorChoice& allocator,
                    const ReductionCurve& curve) {
  if (allocator.kind == AllocatorKind::greedy) {
    return allocate_greedy(tree, budget, allocator.greedy_step, curve);
  }
  return allocate_proportional(tree, budget);
}

std::vector<SweepPoint> budget_sweep(const FaultTree& tree, std::span<const Money> budgets,
                                     const AllocatorChoice& allocator,
                                     const ReductionCurve& curve) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw DomainError("sweep budgets must be sorted ascending");
  }
  std::vector<SweepPoint> out;
  out.reserve(budgets.size());
  for (Money budget : budgets) {
    SweepPoint point;
    point.budget = budget;
    point.allocation = allocate(tree, budget, allocator, curve);
    point.vulnerability = top_vulnerability(tree, point.allocation, curve);
    point.risk = tree_risk(tree, point.allocation, curve);
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace gridline
