#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridline/network.hpp"

namespace gridline {

/// One measured cascade exponent q at uniform asset vulnerability gamma.
struct CalibrationPoint {
  double gamma = 0.0;
  double q = 0.0;
};

/// Resiliency line log10(q) = b + k * gamma * rho.
struct ResilienceFit {
  double b = 0.0;
  double k = 0.0;
  double rho = 0.0;
  /// Root of the line, present only when k < 0.
  std::optional<double> gamma_critical;
};

/// Least-squares fit of log10(q) against gamma * rho; exact for two points.
/// The result does not depend on the order of the points.
ResilienceFit fit_resilience_line(std::span<const CalibrationPoint> points, double rho);

struct CriticalVulnerability {
  double value = 0.0;    // -b / (k rho), unclamped
  double clamped = 0.0;  // value clamped to [0, 1]
  bool in_range = false; // value lies in (0, 1]
};

CriticalVulnerability critical_vulnerability(const ResilienceFit& fit);

struct CascadeOptions {
  int trials = 10000;
  std::uint64_t seed = 0;
  /// Fraction of the empirical distribution, from the top, used in the tail fit.
  double tail_fraction = 0.9;
};

/// Monte Carlo cascade exponent. Each trial fails one uniformly chosen station,
/// then every failed station fails each surviving neighbor independently with
/// probability gamma until nothing changes. The cascade consequence is the sum
/// of failed stations' consequences, and q is the negative least-squares slope
/// of log10 P(X >= x) against log10 x over the upper tail. Trial t draws from
/// a generator seeded by (seed, t) only.
double estimate_q(const TransitNetwork& network, double gamma, const CascadeOptions& options);

/// The consequence of every trial, in trial order (exposed for testing).
std::vector<double> simulate_cascades(const TransitNetwork& network, double gamma,
                                      const CascadeOptions& options);

/// Fitted exceedance exponent for a consequence sample.
double exceedance_exponent(std::vector<double> consequences, double tail_fraction);

}  // namespace gridline
