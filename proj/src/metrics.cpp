#include "gridline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stack>

#include "gridline/errors.hpp"

namespace gridline {

namespace {

std::vector<double> shifted_product(const SquareMatrix& matrix, const std::vector<double>& x) {
  const std::size_t n = matrix.size();
  std::vector<double> y(x);  // identity shift
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += matrix(i, j) * x[j];
    y[i] += sum;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_symmetric_nonnegative(const SquareMatrix& matrix) {
  if (matrix.size() == 0) throw DomainError("spectral radius of an empty matrix");
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      if (matrix(i, j) < 0.0) throw DomainError("matrix has a negative entry");
      if (matrix(i, j) != matrix(j, i)) throw DomainError("matrix is not symmetric");
    }
  }
}

struct PowerResult {
  double eigenvalue;
  std::vector<double> vector;  // unit 2-norm
};

PowerResult shifted_power_iteration(const SquareMatrix& matrix,
                                    const PowerIterationOptions& options,
                                    bool require_vector_convergence) {
  const std::size_t n = matrix.size();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double previous = 0.0;
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    std::vector<double> y = shifted_product(matrix, x);
    const double rayleigh = dot(x, y);
    const double norm = std::sqrt(dot(y, y));
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      step = std::max(step, std::abs(y[i] - x[i]));
    }
    x = std::move(y);
    const bool value_converged = iteration > 0 && std::abs(rayleigh - previous) < options.tolerance;
    const bool vector_converged = !require_vector_convergence || step < options.tolerance;
    if (value_converged && vector_converged) return {rayleigh - 1.0, std::move(x)};
    previous = rayleigh;
  }
  throw ConvergenceError("power iteration did not converge within " +
                         std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

SquareMatrix adjacency_matrix(const TransitNetwork& network) {
  SquareMatrix matrix(network.node_count());
  const auto adjacency = adjacency_lists(network);
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    for (auto j : adjacency[i]) matrix(i, j) = 1.0;
  }
  return matrix;
}

DegreeSummary degree_summary(const TransitNetwork& network) {
  DegreeSummary summary;
  for (const auto& neighbors : adjacency_lists(network)) {
    const int degree = static_cast<int>(neighbors.size());
    summary.per_node.push_back(degree);
    summary.total += degree;
    summary.max = std::max(summary.max, degree);
  }
  if (network.link_count() > 0) {
    summary.mean_per_link = static_cast<double>(summary.total) / network.link_count();
  }
  if (network.node_count() > 0) {
    summary.mean_per_node = static_cast<double>(summary.total) / network.node_count();
  }
  return summary;
}

double spectral_radius(const SquareMatrix& matrix, const PowerIterationOptions& options) {
  check_symmetric_nonnegative(matrix);
  return shifted_power_iteration(matrix, options, false).eigenvalue;
}

std::string_view to_string(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::degree: return "degree";
    case CentralityKind::betweenness: return "betweenness";
    case CentralityKind::eigenvector: return "eigenvector";
  }
  return "degree";
}

double CentralityTable::at(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return values[i];
  }
  throw DomainError("unknown node id " + std::string(id));
}

namespace {

CentralityTable make_table(const TransitNetwork& network, CentralityKind kind) {
  CentralityTable table;
  table.kind = kind;
  for (const auto& node : network.nodes) table.ids.push_back(node.id);
  table.values.assign(network.node_count(), 0.0);
  return table;
}

}  // namespace

CentralityTable degree_centrality(const TransitNetwork& network) {
  const std::size_t n = network.node_count();
  if (n < 2) throw DomainError("degree centrality needs at least 2 nodes");
  auto table = make_table(network, CentralityKind::degree);
  const auto adjacency = adjacency_lists(network);
  for (std::size_t i = 0; i < n; ++i) {
    table.values[i] = static_cast<double>(adjacency[i].size()) / static_cast<double>(n - 1);
  }
  return table;
}

CentralityTable betweenness_centrality(const TransitNetwork& network) {
  const std::size_t n = network.node_count();
  if (n < 3) throw DomainError("betweenness centrality needs at least 3 nodes");
  auto table = make_table(network, CentralityKind::betweenness);
  const auto adjacency = adjacency_lists(network);

  std::vector<double> sigma(n), delta(n);
  std::vector<long> distance(n);
  std::vector<std::vector<std::size_t>> predecessors(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(distance.begin(), distance.end(), -1L);
    for (auto& p : predecessors) p.clear();

    std::stack<std::size_t> order;
    std::queue<std::size_t> frontier;
    sigma[s] = 1.0;
    distance[s] = 0;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      order.push(v);
      for (auto w : adjacency[v]) {
        if (distance[w] < 0) {
          distance[w] = distance[v] + 1;
          frontier.push(w);
        }
        if (distance[w] == distance[v] + 1) {
          sigma[w] += sigma[v];
          predecessors[w].push_back(v);
        }
      }
    }
    while (!order.empty()) {
      const auto w = order.top();
      order.pop();
      for (auto v : predecessors[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) table.values[w] += delta[w];
    }
  }

  // Each unordered pair was visited from both ends.
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (auto& value : table.values) value = value / 2.0 / pairs;
  return table;
}

CentralityTable eigenvector_centrality(const TransitNetwork& network,
                                       const PowerIterationOptions& options) {
  if (network.node_count() == 0) throw DomainError("eigenvector centrality of an empty network");
  if (!is_connected(network)) {
    throw DomainError("eigenvector centrality is ambiguous on a disconnected network");
  }
  auto table = make_table(network, CentralityKind::eigenvector);
  auto result = shifted_power_iteration(adjacency_matrix(network), options, true);
  const double peak = *std::max_element(result.vector.begin(), result.vector.end());
  for (std::size_t i = 0; i < result.vector.size(); ++i) {
    table.values[i] = std::max(0.0, result.vector[i] / peak);
  }
  return table;
}

int round_half_down(double x) { return static_cast<int>(std::ceil(x - 0.5)); }

namespace {

std::size_t components_without(const std::vector<std::vector<std::size_t>>& adjacency,
                               std::size_t removed) {
  std::vector<bool> seen(adjacency.size(), false);
  seen[removed] = true;
  std::size_t count = 0;
  for (std::size_t start = 0; start < adjacency.size(); ++start) {
    if (seen[start]) continue;
    ++count;
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adjacency[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return count;
}

std::vector<std::string> blocking_set(const TransitNetwork& network, std::size_t limit) {
  const auto adjacency = adjacency_lists(network);
  const std::size_t n = adjacency.size();
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n && out.size() < limit; ++i) {
    if (adjacency[i].size() == 1) out.push_back(network.nodes[i].id);
  }
  if (out.size() >= limit) return out;

  const std::size_t base = component_sizes(network).size();
  std::vector<double> betweenness(n, 0.0);
  if (n >= 3) betweenness = betweenness_centrality(network).values;

  struct Candidate {
    std::size_t index;
    std::size_t pieces;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() < 2) continue;
    const std::size_t after = components_without(adjacency, i);
    if (after > base) candidates.push_back({i, after - base + 1});
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.pieces != y.pieces) return x.pieces > y.pieces;
    if (betweenness[x.index] != betweenness[y.index]) {
      return betweenness[x.index] > betweenness[y.index];
    }
    return network.nodes[x.index].id < network.nodes[y.index].id;
  });
  for (const auto& candidate : candidates) {
    if (out.size() >= limit) break;
    out.push_back(network.nodes[candidate.index].id);
  }
  return out;
}

}  // namespace

MetricsSummary robustness_summary(const TransitNetwork& network) {
  if (network.node_count() == 0) throw DomainError("network has no nodes");
  MetricsSummary summary;
  summary.degree = degree_summary(network);
  summary.spectral_radius =
      network.link_count() == 0 ? 0.0 : spectral_radius(adjacency_matrix(network));
  if (summary.spectral_radius <= 0.0) {
    throw DomainError("spectral radius must be positive for robustness figures");
  }

  if (summary.degree.mean_per_link > 0.0) {
    summary.link_robustness = std::clamp(1.0 - 2.0 / summary.degree.mean_per_link, 0.0, 1.0);
  }
  // Both subtractions below are exact for operands in [0.5, 1], so the pair sums to 1 exactly.
  summary.blocking_fraction = 1.0 / summary.spectral_radius;
  summary.node_robustness = 1.0 - summary.blocking_fraction;
  if (summary.blocking_fraction < 0.5) summary.blocking_fraction = 1.0 - summary.node_robustness;

  const auto links = static_cast<double>(network.link_count());
  const auto nodes = static_cast<int>(network.node_count());
  summary.removable_links = round_half_down(links * summary.link_robustness);
  summary.removable_nodes = round_half_down(nodes * summary.node_robustness);
  summary.irremovable_blocking_nodes = nodes - summary.removable_nodes;
  summary.blocking_set =
      blocking_set(network, static_cast<std::size_t>(summary.irremovable_blocking_nodes));
  return summary;
}

}  // namespace gridline
