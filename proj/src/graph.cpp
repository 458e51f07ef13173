#include "synccert/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "synccert/error.hpp"
#include "synccert/symmetric_eigen.hpp"

namespace synccert {

namespace {

std::string pair_text(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

void check_lengths(const Graph& g, std::span<const double> mu, std::span<const double> sigma) {
  if (static_cast<int>(mu.size()) != g.node_count())
    throw DimensionMismatch("mu has " + std::to_string(mu.size()) + " entries, graph has " +
                            std::to_string(g.node_count()) + " nodes");
  if (static_cast<int>(sigma.size()) != g.edge_count())
    throw DimensionMismatch("sigma has " + std::to_string(sigma.size()) + " entries, graph has " +
                            std::to_string(g.edge_count()) + " edges");
}

}  // namespace

std::optional<int> Graph::edge_index(int a, int b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<int>(std::distance(edges_.begin(), it));
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  std::vector<int> stack{1};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighbours(v)) {
      if (!seen[static_cast<std::size_t>(w - 1)]) {
        seen[static_cast<std::size_t>(w - 1)] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n_;
}

std::vector<std::string> Graph::edge_labels() const {
  std::vector<std::string> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.label());
  return out;
}

Graph build_graph(int n, std::span<const std::pair<int, int>> edge_list) {
  if (n < 1) throw InvalidGraph("node count must be >= 1, got " + std::to_string(n));
  Graph g;
  g.n_ = n;
  g.edges_.reserve(edge_list.size());
  for (const auto& [a, b] : edge_list) {
    if (a < 1 || a > n || b < 1 || b > n)
      throw InvalidGraph("edge " + pair_text(a, b) + " references a node outside 1.." + std::to_string(n));
    if (a == b) throw InvalidGraph("self-loop " + pair_text(a, b));
    g.edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  const auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end());
  if (dup != g.edges_.end()) throw InvalidGraph("duplicate edge " + pair_text(dup->lo, dup->hi));

  g.adjacency_.assign(static_cast<std::size_t>(n), {});
  g.incident_.assign(static_cast<std::size_t>(n), {});
  for (int k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edges_[static_cast<std::size_t>(k)];
    g.adjacency_[static_cast<std::size_t>(e.lo - 1)].push_back(e.hi);
    g.adjacency_[static_cast<std::size_t>(e.hi - 1)].push_back(e.lo);
    g.incident_[static_cast<std::size_t>(e.lo - 1)].push_back(k);
    g.incident_[static_cast<std::size_t>(e.hi - 1)].push_back(k);
  }
  for (auto& nb : g.adjacency_) std::sort(nb.begin(), nb.end());
  return g;
}

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edge_list) {
  return build_graph(n, std::span<const std::pair<int, int>>(edge_list));
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
  return build_graph(n, edges);
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return build_graph(n, edges);
}

Graph erdos_renyi(int n, double prob, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (u(rng) < prob) edges.emplace_back(i, j);
  return build_graph(n, edges);
}

Graph random_connected_graph(int n, double prob, std::mt19937_64& rng) {
  if (n >= 2 && prob <= 0.0) throw InvalidGraph("edge probability must be positive for a connected graph");
  for (;;) {
    Graph g = erdos_renyi(n, prob, rng);
    if (g.connected()) return g;
  }
}

IncidenceMatrix incidence(const Graph& g) {
  IncidenceMatrix d = IncidenceMatrix::Zero(g.node_count(), g.edge_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    d(g.edge(k).lo - 1, k) = 1;
    d(g.edge(k).hi - 1, k) = -1;
  }
  return d;
}

Eigen::MatrixXi laplacian(const Graph& g) {
  Eigen::MatrixXi l = Eigen::MatrixXi::Zero(g.node_count(), g.node_count());
  for (const auto& e : g.edges()) {
    l(e.lo - 1, e.lo - 1) += 1;
    l(e.hi - 1, e.hi - 1) += 1;
    l(e.lo - 1, e.hi - 1) -= 1;
    l(e.hi - 1, e.lo - 1) -= 1;
  }
  return l;
}

EdgeStats edge_stats(const Graph& g) {
  EdgeStats s;
  s.edges = g.edges();
  s.degree.resize(static_cast<std::size_t>(g.node_count()));
  for (int i = 1; i <= g.node_count(); ++i) s.degree[static_cast<std::size_t>(i - 1)] = g.degree(i);

  s.common.reserve(s.edges.size());
  s.exclusive.reserve(s.edges.size());
  for (const auto& e : s.edges) {
    const auto& ni = g.neighbours(e.lo);
    const auto& nj = g.neighbours(e.hi);
    std::vector<int> shared;
    std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(), std::back_inserter(shared));
    const int common = static_cast<int>(shared.size());

    // |N_i^j| + |N_j^i|: neighbours of one endpoint that are neither shared nor the other endpoint.
    int exclusive = 0;
    for (int l : ni)
      if (l != e.hi && !std::binary_search(shared.begin(), shared.end(), l)) ++exclusive;
    for (int l : nj)
      if (l != e.lo && !std::binary_search(shared.begin(), shared.end(), l)) ++exclusive;

    const int closed_form = g.degree(e.lo) + g.degree(e.hi) - 2 * common - 2;
    if (exclusive != closed_form)
      throw std::logic_error("exclusive neighbour count mismatch on edge " + e.label());
    s.common.push_back(common);
    s.exclusive.push_back(exclusive);
  }
  return s;
}

GraphWeightMatrices weight_matrices(const EdgeStats& stats) {
  const int p = stats.edge_count();
  GraphWeightMatrices w{Eigen::MatrixXd::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
  for (int k = 0; k < p; ++k) {
    w.phi(k, k) = stats.common[static_cast<std::size_t>(k)];
    w.phi_bar(k, k) = 0.5 * stats.exclusive[static_cast<std::size_t>(k)];
  }
  return w;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::NotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

PositiveDefiniteCheck prop1_check(const Graph& g, std::span<const double> mu, std::span<const double> sigma) {
  check_lengths(g, mu, sigma);
  PositiveDefiniteCheck out;
  out.slack.reserve(static_cast<std::size_t>(g.edge_count()));
  out.all_positive = true;
  for (int k = 0; k < g.edge_count(); ++k) {
    const Edge& e = g.edge(k);
    const double mi = mu[static_cast<std::size_t>(e.lo - 1)];
    const double mj = mu[static_cast<std::size_t>(e.hi - 1)];
    const double slack = sigma[static_cast<std::size_t>(k)] + mi + mj - (g.degree(e.lo) - 1) * std::abs(mi) -
                         (g.degree(e.hi) - 1) * std::abs(mj);
    out.slack.push_back(slack);
    out.positive.push_back(slack > kStrictPositivity);
    out.all_positive = out.all_positive && out.positive.back();
  }
  out.connected = g.connected();
  if (!out.connected) {
    out.verdict = Verdict::NotApplicable;
    out.warning = "graph is disconnected; the per-edge test assumes a connected graph";
  } else {
    out.verdict = out.all_positive ? Verdict::Pass : Verdict::Fail;
  }
  return out;
}

Eigen::MatrixXd edge_weighted_matrix(const Graph& g, std::span<const double> mu, std::span<const double> sigma) {
  check_lengths(g, mu, sigma);
  const Eigen::MatrixXd d = incidence(g).cast<double>();
  const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  const Eigen::VectorXd s =
      Eigen::Map<const Eigen::VectorXd>(sigma.data(), static_cast<Eigen::Index>(sigma.size()));
  Eigen::MatrixXd out = d.transpose() * m.asDiagonal() * d;
  out.diagonal() += s;
  return out;
}

double pd_oracle(const Graph& g, std::span<const double> mu, std::span<const double> sigma) {
  const Eigen::MatrixXd m = edge_weighted_matrix(g, mu, sigma);
  if (m.size() == 0) throw DimensionMismatch("graph has no edges");
  return min_eigenvalue(m);
}

}  // namespace synccert
