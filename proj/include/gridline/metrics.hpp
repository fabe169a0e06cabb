#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gridline/network.hpp"

namespace gridline {

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// 0/1 adjacency matrix in node order.
SquareMatrix adjacency_matrix(const TransitNetwork& network);

struct DegreeSummary {
  std::vector<int> per_node;  // in node order
  int total = 0;
  int max = 0;
  double mean_per_link = 0.0;  // total degree / link count
  double mean_per_node = 0.0;  // total degree / node count
};

DegreeSummary degree_summary(const TransitNetwork& network);

struct PowerIterationOptions {
  double tolerance = 1e-9;
  int max_iterations = 10000;
};

/// Largest eigenvalue magnitude of a symmetric nonnegative matrix.
///
/// Iterates on the shifted matrix A + I from the all-ones vector and stops when
/// successive Rayleigh quotients differ by less than the tolerance. The shift
/// leaves the Perron eigenvector unchanged but separates it from -rho, which
/// bipartite graphs (every tree) always carry; unshifted iteration would
/// oscillate between the two.
double spectral_radius(const SquareMatrix& matrix, const PowerIterationOptions& options = {});

enum class CentralityKind { degree, betweenness, eigenvector };

std::string_view to_string(CentralityKind kind);

struct CentralityTable {
  CentralityKind kind = CentralityKind::degree;
  std::vector<std::string> ids;  // node order
  std::vector<double> values;

  double at(std::string_view id) const;
};

/// degree / (N - 1). Requires N >= 2.
CentralityTable degree_centrality(const TransitNetwork& network);

/// Brandes accumulation with fractional credit over equally short paths,
/// normalized by (N-1)(N-2)/2. Requires N >= 3.
CentralityTable betweenness_centrality(const TransitNetwork& network);

/// Principal eigenvector scaled to unit maximum. Requires a connected network.
CentralityTable eigenvector_centrality(const TransitNetwork& network,
                                       const PowerIterationOptions& options = {});

struct MetricsSummary {
  DegreeSummary degree;
  double spectral_radius = 0.0;
  double link_robustness = 0.0;
  double node_robustness = 0.0;
  double blocking_fraction = 0.0;
  int removable_links = 0;
  int removable_nodes = 0;
  int irremovable_blocking_nodes = 0;
  /// Display-only: termini first, then articulation points by the number of
  /// pieces their removal leaves (then betweenness), up to the irremovable count.
  std::vector<std::string> blocking_set;
};

MetricsSummary robustness_summary(const TransitNetwork& network);

/// Nearest integer with exact halves rounded down.
int round_half_down(double x);

}  // namespace gridline
