#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridline/network.hpp"

namespace gridline {

struct ThreatLeaf {
  std::string label;  // e.g. "Bomb@Copley"
  std::string asset;
  double threat = 1.0;
  double base_vulnerability = 0.0;
  Money consequence = 0.0;
  Money elimination_cost = 1.0;
  /// Overrides the tree-wide decay rate for this leaf.
  std::optional<double> beta;

  friend bool operator==(const ThreatLeaf&, const ThreatLeaf&) = default;
};

/// Flat OR gate: the top event occurs if any leaf succeeds.
struct FaultTree {
  std::vector<ThreatLeaf> leaves;
  std::optional<double> beta;

  Money total_elimination_cost() const;

  friend bool operator==(const FaultTree&, const FaultTree&) = default;
};

/// Vulnerability decays as v0 * exp(-beta * spend / E).
struct ReductionCurve {
  double beta = 1.0;
};

/// Spend per leaf, aligned with FaultTree::leaves.
struct Allocation {
  std::vector<Money> spend;
  Money budget = 0.0;

  Money total() const;
};

enum class AllocatorKind { proportional, greedy };

std::optional<AllocatorKind> allocator_from_string(std::string_view text);
std::string_view to_string(AllocatorKind kind);

struct AllocatorChoice {
  AllocatorKind kind = AllocatorKind::proportional;
  Money greedy_step = 0.01;
};

std::vector<std::string> validate_fault_tree(const FaultTree& tree);

/// Throws ParseError on malformed documents, unknown fields and duplicate labels.
FaultTree parse_fault_tree(std::string_view text);
std::string serialize_fault_tree(const FaultTree& tree);

/// Known names: "greenline-hubs" (bomb and SCADA threats at Copley and Kenmore).
/// The bundled tree has its decay rate calibrated on load so that spending the
/// full elimination budget proportionally leaves a top vulnerability of 18.55%.
FaultTree load_bundled_fault_tree(std::string_view name);

/// Resolves "bundled:<name>" or reads a file path.
FaultTree load_fault_tree(std::string_view reference);

/// The tree's own decay rate; throws DomainError when it has none.
ReductionCurve curve_of(const FaultTree& tree);

double leaf_vulnerability(const ThreatLeaf& leaf, Money spend, const ReductionCurve& curve);

/// 1 - prod(1 - v_i).
double top_vulnerability(const FaultTree& tree, const Allocation& allocation,
                         const ReductionCurve& curve);

/// Sum of threat * v_i * consequence over leaves.
Money tree_risk(const FaultTree& tree, const Allocation& allocation, const ReductionCurve& curve);

/// Smallest reportable decay rate; returned when no reduction is needed.
inline constexpr double kMinimumBeta = 1e-12;

/// Bisection on the shared decay rate so that proportional allocation of
/// full_budget yields the target top vulnerability to within 1e-9.
ReductionCurve calibrate_beta(const FaultTree& tree, Money full_budget, double target);

/// spend_i = budget * E_i / sum(E).
Allocation allocate_proportional(const FaultTree& tree, Money budget);

/// Hands out `step` at a time to the leaf with the largest marginal risk
/// decrease (beta / E) * threat * v * consequence, ties to the smaller label.
Allocation allocate_greedy(const FaultTree& tree, Money budget, Money step,
                           const ReductionCurve& curve);

Allocation allocate(const FaultTree& tree, Money budget, const AllocatorChoice& allocator,
                    const ReductionCurve& curve);

struct SweepPoint {
  Money budget = 0.0;
  double vulnerability = 0.0;
  Money risk = 0.0;
  Allocation allocation;
};

std::vector<SweepPoint> budget_sweep(const FaultTree& tree, std::span<const Money> budgets,
                                     const AllocatorChoice& allocator,
                                     const ReductionCurve& curve);

}  // namespace gridline
