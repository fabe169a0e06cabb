#include "gridline/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gridline/errors.hpp"

namespace gridline {

namespace {

struct Line {
  double intercept;
  double slope;
};

// Centered least squares; callers sort the samples first so the result is order-free.
Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
  }
  const double slope = sxy / sxx;
  return {mean_y - slope * mean_x, slope};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

ResilienceFit fit_resilience_line(std::span<const CalibrationPoint> points, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  std::vector<CalibrationPoint> sorted(points.begin(), points.end());
  for (const auto& p : sorted) {
    if (!(p.q > 0.0)) throw DomainError("calibration q must be positive");
    if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) throw DomainError("calibration gamma out of range");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return x.gamma != y.gamma ? x.gamma < y.gamma : x.q < y.q;
  });
  if (sorted.size() < 2 || sorted.front().gamma == sorted.back().gamma) {
    throw DomainError("resilience fit needs at least 2 distinct gamma values");
  }

  std::vector<double> x, y;
  for (const auto& p : sorted) {
    x.push_back(p.gamma * rho);
    y.push_back(std::log10(p.q));
  }
  const Line line = least_squares(x, y);

  ResilienceFit fit{line.intercept, line.slope, rho, std::nullopt};
  if (fit.k < 0.0) fit.gamma_critical = -fit.b / (fit.k * fit.rho);
  return fit;
}

CriticalVulnerability critical_vulnerability(const ResilienceFit& fit) {
  if (!(fit.rho > 0.0)) throw DomainError("rho must be positive");
  if (!(fit.k < 0.0)) throw DomainError("resilience line does not decline (k >= 0); no crossing");
  CriticalVulnerability out;
  out.value = -fit.b / (fit.k * fit.rho);
  out.clamped = std::clamp(out.value, 0.0, 1.0);
  out.in_range = out.value > 0.0 && out.value <= 1.0;
  return out;
}

std::vector<double> simulate_cascades(const TransitNetwork& network, double gamma,
                                      const CascadeOptions& options) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (options.trials < 1000) throw DomainError("cascade estimation needs at least 1000 trials");
  if (network.node_count() == 0) throw DomainError("network has no nodes");
  if (!is_connected(network)) throw DomainError("cascade estimation needs a connected network");

  const auto adjacency = adjacency_lists(network);
  const std::size_t n = adjacency.size();
  std::vector<double> consequences;
  consequences.reserve(static_cast<std::size_t>(options.trials));

  std::vector<char> failed(n);
  std::vector<std::size_t> frontier, next;
  for (int trial = 0; trial < options.trials; ++trial) {
    std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::fill(failed.begin(), failed.end(), 0);
    const std::size_t origin = pick(rng);
    failed[origin] = 1;
    double total = network.nodes[origin].profile.consequence;
    frontier.assign(1, origin);
    while (!frontier.empty()) {
      next.clear();
      for (auto u : frontier) {
        for (auto v : adjacency[u]) {
          if (!failed[v] && coin(rng) < gamma) {
            failed[v] = 1;
            total += network.nodes[v].profile.consequence;
            next.push_back(v);
          }
        }
      }
      frontier.swap(next);
    }
    consequences.push_back(total);
  }
  return consequences;
}

double exceedance_exponent(std::vector<double> consequences, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("tail fraction must lie in (0, 1]");
  }
  if (consequences.empty()) throw DomainError("no cascade samples");
  std::sort(consequences.begin(), consequences.end());
  const std::size_t n = consequences.size();
  const auto cut = static_cast<std::size_t>(std::floor((1.0 - tail_fraction) * static_cast<double>(n)));
  const double threshold = consequences[std::min(cut, n - 1)];

  // One point per distinct value: (log10 x, log10 P(X >= x)).
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && consequences[j] == consequences[i]) ++j;
    const double value = consequences[i];
    if (value >= threshold && value > 0.0) {
      x.push_back(std::log10(value));
      y.push_back(std::log10(static_cast<double>(n - i) / static_cast<double>(n)));
    }
    i = j;
  }
  if (x.size() < 2) {
    throw ConvergenceError("cascade consequences are degenerate; cannot fit an exponent");
  }
  return -least_squares(x, y).slope;
}

double estimate_q(const TransitNetwork& network, double gamma, const CascadeOptions& options) {
  return exceedance_exponent(simulate_cascades(network, gamma, options), options.tail_fraction);
}

}  // namespace gridline
