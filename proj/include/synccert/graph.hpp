#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace synccert {

/// Undirected edge with canonical orientation: `lo` is the +1 endpoint in the
/// incidence matrix, `hi` the -1 endpoint. Node labels are 1-based.
struct Edge {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;

  std::string label() const { return std::to_string(lo) + "-" + std::to_string(hi); }
};

/// Simple undirected graph on nodes 1..n. Edges are stored sorted by (lo, hi) and
/// that order defines the edge index k used by every per-edge vector.
class Graph {
 public:
  Graph() = default;

  int node_count() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int k) const { return edges_.at(static_cast<std::size_t>(k)); }

  /// Sorted neighbour labels of `node` (1-based).
  const std::vector<int>& neighbours(int node) const { return adjacency_.at(static_cast<std::size_t>(node - 1)); }
  int degree(int node) const { return static_cast<int>(neighbours(node).size()); }

  /// Indices of edges incident to `node`.
  const std::vector<int>& incident_edges(int node) const {
    return incident_.at(static_cast<std::size_t>(node - 1));
  }

  /// Edge index of {a, b} in either orientation.
  std::optional<int> edge_index(int a, int b) const;

  bool connected() const;

  std::vector<std::string> edge_labels() const;

 private:
  friend Graph build_graph(int n, std::span<const std::pair<int, int>> edge_list);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> incident_;
};

/// Validates and canonicalises an edge list. Throws InvalidGraph naming the
/// offending pair on self-loops, duplicates and out-of-range labels.
Graph build_graph(int n, std::span<const std::pair<int, int>> edge_list);
Graph build_graph(int n, const std::vector<std::pair<int, int>>& edge_list);

Graph complete_graph(int n);
Graph path_graph(int n);

/// G(n, prob) with a caller-owned generator.
Graph erdos_renyi(int n, double prob, std::mt19937_64& rng);
/// Resamples G(n, prob) until the result is connected.
Graph random_connected_graph(int n, double prob, std::mt19937_64& rng);

using IncidenceMatrix = Eigen::MatrixXi;

/// n x p incidence matrix: D(i, k) = +1 if node i+1 is the lower endpoint of e_k,
/// -1 if it is the higher one, 0 otherwise.
IncidenceMatrix incidence(const Graph& g);

/// Degree matrix minus adjacency, computed directly from the edge list.
Eigen::MatrixXi laplacian(const Graph& g);

struct EdgeStats {
  std::vector<Edge> edges;
  std::vector<int> degree;     // r_i, indexed by node - 1
  std::vector<int> common;     // r~_k: common neighbours of the endpoints of e_k
  std::vector<int> exclusive;  // r-bar_k: neighbours of exactly one endpoint, endpoints excluded

  int node_count() const noexcept { return static_cast<int>(degree.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges.size()); }
};

/// Neighbour statistics. The exclusive count is enumerated from the neighbour
/// sets and checked against r_i + r_j - 2 r~_k - 2.
EdgeStats edge_stats(const Graph& g);

struct GraphWeightMatrices {
  Eigen::MatrixXd phi;      // diag(r~_1, ..., r~_p)
  Eigen::MatrixXd phi_bar;  // 0.5 * diag(r-bar_1, ..., r-bar_p)
};

GraphWeightMatrices weight_matrices(const EdgeStats& stats);

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

/// Gershgorin-type sufficient test for D^T diag(mu) D + diag(sigma) > 0.
struct PositiveDefiniteCheck {
  std::vector<double> slack;  // sigma_k + mu_i + mu_j - (r_i-1)|mu_i| - (r_j-1)|mu_j|
  std::vector<bool> positive;
  bool all_positive = false;
  bool connected = true;
  Verdict verdict = Verdict::Fail;  // NotApplicable when the graph is disconnected
  std::string warning;
};

/// Strict positivity threshold used by every certificate verdict.
inline constexpr double kStrictPositivity = 1e-12;

PositiveDefiniteCheck prop1_check(const Graph& g, std::span<const double> mu, std::span<const double> sigma);

/// M = D^T diag(mu) D + diag(sigma).
Eigen::MatrixXd edge_weighted_matrix(const Graph& g, std::span<const double> mu, std::span<const double> sigma);

/// Smallest eigenvalue of D^T diag(mu) D + diag(sigma) by Jacobi rotations.
double pd_oracle(const Graph& g, std::span<const double> mu, std::span<const double> sigma);

}  // namespace synccert
