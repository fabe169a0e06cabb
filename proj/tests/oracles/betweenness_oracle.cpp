#include <functional>
#include <queue>

#include "oracles.hpp"

namespace gridline::oracle {

namespace {

std::vector<int> bfs_distances(const std::vector<std::vector<std::size_t>>& adjacency, std::size_t source) {
  std::vector<int> dist(adjacency.size(), -1);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adjacency[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> betweenness_by_enumeration(const TransitNetwork& network) {
  const auto adjacency = adjacency_lists(network);
  const std::size_t n = adjacency.size();
  std::vector<std::vector<int>> dist(n);
  for (std::size_t s = 0; s < n; ++s) dist[s] = bfs_distances(adjacency, s);

  std::vector<double> score(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const int length = dist[s][t];
      if (length < 0) continue;
      // Every walk of exactly `length` steps from s to t is a shortest path.
      std::vector<std::vector<std::size_t>> paths;
      std::vector<std::size_t> current{s};
      std::function<void(std::size_t)> extend = [&](std::size_t u) {
        if (u == t) {
          paths.push_back(current);
          return;
        }
        if (static_cast<int>(current.size()) - 1 >= length) return;
        for (auto v : adjacency[u]) {
          current.push_back(v);
          extend(v);
          current.pop_back();
        }
      };
      extend(s);
      std::vector<double> through(n, 0.0);
      std::size_t shortest = 0;
      for (const auto& path : paths) {
        if (static_cast<int>(path.size()) - 1 != length) continue;
        ++shortest;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) through[path[i]] += 1.0;
      }
      for (std::size_t v = 0; v < n; ++v) score[v] += through[v] / static_cast<double>(shortest);
    }
  }
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (auto& value : score) value /= pairs;
  return score;
}

}  // namespace gridline::oracle
