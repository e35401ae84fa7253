#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vfcp/errors.hpp"

namespace vfcp {

using NodeId = std::string;

/// Resource kinds carried by every vehicle node: k=1 CPU (abstract cycles/s),
/// k=2 memory (MB), k=3 camera count, k=4 GPU units.
enum class Resource : int { cpu = 0, mem = 1, camera = 2, gpu = 3 };

inline constexpr int kResourceCount = 4;
inline constexpr std::array<const char*, kResourceCount> kResourceNames{"cpu", "mem", "camera",
                                                                        "gpu"};

using Capacities = std::array<double, kResourceCount>;

inline double& at(Capacities& c, Resource k) { return c[static_cast<int>(k)]; }
inline double at(const Capacities& c, Resource k) { return c[static_cast<int>(k)]; }

struct VehicleNode {
  NodeId id;
  Capacities capacities{};
  double ccp = 0.0;  ///< cluster cohesion probability, in [0,1]; 1 for RSUs
  double confidence = 0.0;
  bool is_rsu = false;
};

/// Undirected link between two vehicles. Stored with a < b.
struct ClusterEdge {
  NodeId a;
  NodeId b;
  double bandwidth_kbps = 0.0;
  double joint_ccp = 1.0;
};

/// A simple path given as a node-id sequence. A single-node sequence is the
/// trivial path of a co-located flow (0 hops).
struct GraphPath {
  std::vector<NodeId> nodes;

  int hop_count() const { return nodes.empty() ? 0 : static_cast<int>(nodes.size()) - 1; }
  bool operator==(const GraphPath& other) const { return nodes == other.nodes; }
  bool operator<(const GraphPath& other) const { return nodes < other.nodes; }
};

/// Immutable undirected cluster graph. Nodes and edges are canonicalized
/// (sorted by id) at construction, so all queries iterate deterministically.
class ClusterGraph {
 public:
  ClusterGraph() = default;

  ClusterGraph(std::vector<VehicleNode> nodes, std::vector<ClusterEdge> edges) {
    std::sort(nodes.begin(), nodes.end(),
              [](const VehicleNode& x, const VehicleNode& y) { return x.id < y.id; });
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (nodes[i].id == nodes[i + 1].id)
        throw std::invalid_argument("duplicate node id: " + nodes[i].id);
    }
    for (const VehicleNode& n : nodes) {
      for (double c : n.capacities) {
        if (c < 0.0 || !std::isfinite(c))
          throw std::invalid_argument("negative capacity on node " + n.id);
      }
      if (n.ccp < 0.0 || n.ccp > 1.0)
        throw std::invalid_argument("ccp out of [0,1] on node " + n.id);
      if (n.is_rsu && n.ccp != 1.0)
        throw std::invalid_argument("RSU node " + n.id + " must have ccp 1");
    }
    nodes_ = std::move(nodes);
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].id] = static_cast<int>(i);

    for (ClusterEdge& e : edges) {
      if (e.a == e.b) throw std::invalid_argument("self-loop on node " + e.a);
      if (!index_.count(e.a)) throw std::invalid_argument("edge endpoint not in graph: " + e.a);
      if (!index_.count(e.b)) throw std::invalid_argument("edge endpoint not in graph: " + e.b);
      if (e.bandwidth_kbps < 0.0) throw std::invalid_argument("negative bandwidth");
      if (e.joint_ccp < 0.0 || e.joint_ccp > 1.0)
        throw std::invalid_argument("joint_ccp out of [0,1]");
      if (e.b < e.a) std::swap(e.a, e.b);
    }
    std::sort(edges.begin(), edges.end(), [](const ClusterEdge& x, const ClusterEdge& y) {
      return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (edges[i].a == edges[i + 1].a && edges[i].b == edges[i + 1].b)
        throw std::invalid_argument("duplicate edge " + edges[i].a + "-" + edges[i].b);
    }
    edges_ = std::move(edges);

    adjacency_.assign(nodes_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const int ia = index_.at(edges_[e].a);
      const int ib = index_.at(edges_[e].b);
      adjacency_[ia].push_back({ib, static_cast<int>(e)});
      adjacency_[ib].push_back({ia, static_cast<int>(e)});
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<VehicleNode>& nodes() const { return nodes_; }
  const std::vector<ClusterEdge>& edges() const { return edges_; }

  bool has_node(const NodeId& id) const { return index_.count(id) != 0; }

  int index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownNodeError(id);
    return it->second;
  }

  const VehicleNode& node(const NodeId& id) const { return nodes_[index_of(id)]; }
  const VehicleNode& node_at(int idx) const { return nodes_.at(idx); }

  /// Neighbors of node index, as (neighbor index, edge index), sorted by id.
  const std::vector<std::pair<int, int>>& neighbors(int idx) const { return adjacency_.at(idx); }

  std::optional<int> edge_between(int ia, int ib) const {
    for (const auto& [nbr, e] : adjacency_.at(ia)) {
      if (nbr == ib) return e;
    }
    return std::nullopt;
  }

  const ClusterEdge& edge_at(int e) const { return edges_.at(e); }

  /// Subgraph induced by a member set; edges with both endpoints kept.
  ClusterGraph induced_subgraph(const std::set<NodeId>& members) const {
    std::vector<VehicleNode> keep_nodes;
    for (const VehicleNode& n : nodes_) {
      if (members.count(n.id)) keep_nodes.push_back(n);
    }
    if (keep_nodes.size() != members.size()) {
      for (const NodeId& id : members) {
        if (!index_.count(id)) throw UnknownNodeError(id);
      }
    }
    std::vector<ClusterEdge> keep_edges;
    for (const ClusterEdge& e : edges_) {
      if (members.count(e.a) && members.count(e.b)) keep_edges.push_back(e);
    }
    return ClusterGraph(std::move(keep_nodes), std::move(keep_edges));
  }

  /// Connected components as sorted id lists, ordered by smallest member.
  std::vector<std::vector<NodeId>> components() const {
    std::vector<std::vector<NodeId>> out;
    std::vector<char> seen(nodes_.size(), 0);
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      if (seen[s]) continue;
      std::vector<NodeId> comp;
      std::deque<int> frontier{static_cast<int>(s)};
      seen[s] = 1;
      while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        comp.push_back(nodes_[u].id);
        for (const auto& [v, e] : adjacency_[u]) {
          (void)e;
          if (!seen[v]) {
            seen[v] = 1;
            frontier.push_back(v);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Total edge weight (joint_ccp) inside a member set.
  double internal_weight(const std::set<NodeId>& members) const {
    double w = 0.0;
    for (const ClusterEdge& e : edges_) {
      if (members.count(e.a) && members.count(e.b)) w += e.joint_ccp;
    }
    return w;
  }

 private:
  std::vector<VehicleNode> nodes_;
  std::vector<ClusterEdge> edges_;
  std::map<NodeId, int> index_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

/// All simple paths from src to dst with at most max_hops edges, sorted
/// lexicographically by node-id sequence.
inline std::vector<GraphPath> enumerate_paths(const ClusterGraph& g, const NodeId& src,
                                              const NodeId& dst, int max_hops) {
  if (max_hops < 1) throw std::invalid_argument("enumerate_paths: max_hops must be >= 1");
  if (src == dst) throw std::invalid_argument("enumerate_paths: src and dst must differ");
  const int s = g.index_of(src);
  const int t = g.index_of(dst);

  std::vector<GraphPath> out;
  std::vector<int> stack{s};
  std::vector<char> on_path(g.size(), 0);
  on_path[s] = 1;

  // Depth-first; neighbor lists are id-sorted so output is already near-lex.
  auto dfs = [&](auto&& self, int u) -> void {
    if (u == t) {
      GraphPath p;
      p.nodes.reserve(stack.size());
      for (int idx : stack) p.nodes.push_back(g.node_at(idx).id);
      out.push_back(std::move(p));
      return;
    }
    if (static_cast<int>(stack.size()) - 1 >= max_hops) return;
    for (const auto& [v, e] : g.neighbors(u)) {
      (void)e;
      if (on_path[v]) continue;
      on_path[v] = 1;
      stack.push_back(v);
      self(self, v);
      stack.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(dfs, s);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline int require_edge(const ClusterGraph& g, const GraphPath& p, std::size_t i) {
  const int ia = g.index_of(p.nodes[i]);
  const int ib = g.index_of(p.nodes[i + 1]);
  const auto e = g.edge_between(ia, ib);
  if (!e) throw InvalidPathError("path nodes " + p.nodes[i] + " and " + p.nodes[i + 1] +
                                 " are not adjacent");
  return *e;
}

}  // namespace detail

/// Joint CCP of a path: product of its edges' joint CCPs (independence across
/// hops). Trivial paths have CCP 1.
inline double path_ccp(const ClusterGraph& g, const GraphPath& p) {
  if (p.nodes.empty()) throw InvalidPathError("empty path");
  double prod = 1.0;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    prod *= g.edge_at(detail::require_edge(g, p, i)).joint_ccp;
  }
  return prod;
}

/// Minimum bandwidth over a path's edges; +inf for trivial paths.
inline double bottleneck_bandwidth(const ClusterGraph& g, const GraphPath& p) {
  if (p.nodes.empty()) throw InvalidPathError("empty path");
  double bn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    bn = std::min(bn, g.edge_at(detail::require_edge(g, p, i)).bandwidth_kbps);
  }
  return bn;
}

/// Sum of bandwidths along a path (the Eq. 8 denominator); 0 for trivial paths.
inline double path_bandwidth_sum(const ClusterGraph& g, const GraphPath& p) {
  if (p.nodes.empty()) throw InvalidPathError("empty path");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    sum += g.edge_at(detail::require_edge(g, p, i)).bandwidth_kbps;
  }
  return sum;
}

namespace detail {

/// Brandes accumulation over a graph with per-edge lengths. Produces raw
/// unordered-pair counts (the undirected halving is applied here). When
/// edge_scores is non-null, edge betweenness is accumulated as well.
inline std::vector<double> brandes(const ClusterGraph& g, const std::vector<double>* lengths,
                                   std::map<std::pair<NodeId, NodeId>, double>* edge_scores) {
  const int n = g.size();
  std::vector<double> bc(n, 0.0);
  std::vector<double> edge_bc(g.edges().size(), 0.0);
  constexpr double kEps = 1e-12;

  std::vector<double> dist(n), sigma(n), delta(n);
  std::vector<std::vector<std::pair<int, int>>> preds(n);  // (pred node, edge idx)

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();

    std::vector<int> order;
    dist[s] = 0.0;
    sigma[s] = 1.0;

    if (lengths == nullptr) {
      std::deque<int> q{s};
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        order.push_back(u);
        for (const auto& [v, e] : g.neighbors(u)) {
          if (std::isinf(dist[v])) {
            dist[v] = dist[u] + 1.0;
            q.push_back(v);
          }
          if (dist[v] == dist[u] + 1.0) {
            sigma[v] += sigma[u];
            preds[v].push_back({u, e});
          }
        }
      }
    } else {
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      std::vector<char> settled(n, 0);
      pq.push({0.0, s});
      while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        order.push_back(u);
        for (const auto& [v, e] : g.neighbors(u)) {
          if (settled[v]) continue;
          const double nd = dist[u] + (*lengths)[e];
          if (nd < dist[v] - kEps) {
            dist[v] = nd;
            sigma[v] = sigma[u];
            preds[v].assign(1, {u, e});
            pq.push({nd, v});
          } else if (std::abs(nd - dist[v]) <= kEps) {
            sigma[v] += sigma[u];
            preds[v].push_back({u, e});
          }
        }
      }
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (const auto& [v, e] : preds[w]) {
        const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
        delta[v] += c;
        edge_bc[e] += c;
      }
      if (w != s) bc[w] += delta[w];
    }
  }

  for (double& x : bc) x /= 2.0;
  if (edge_scores != nullptr) {
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const ClusterEdge& ed = g.edge_at(static_cast<int>(e));
      (*edge_scores)[{ed.a, ed.b}] = edge_bc[e] / 2.0;
    }
  }
  return bc;
}

}  // namespace detail

/// Betweenness centrality over unweighted (hop-count) shortest paths; raw
/// unordered-pair counts, fractional under shortest-path ties.
inline std::map<NodeId, double> betweenness_centrality(const ClusterGraph& g) {
  if (g.empty()) throw std::invalid_argument("betweenness_centrality: empty graph");
  const auto bc = detail::brandes(g, nullptr, nullptr);
  std::map<NodeId, double> out;
  for (int i = 0; i < g.size(); ++i) out[g.node_at(i).id] = bc[i];
  return out;
}

/// Weighted variant with edge length 1 - joint_ccp, used by the resilience
/// score. Lengths are clamped to a small positive floor so that joint_ccp = 1
/// edges do not create zero-length cycles with ill-defined path counts.
inline std::map<NodeId, double> betweenness_centrality_weighted(const ClusterGraph& g) {
  if (g.empty()) throw std::invalid_argument("betweenness_centrality_weighted: empty graph");
  std::vector<double> lengths(g.edges().size());
  for (std::size_t e = 0; e < lengths.size(); ++e) {
    lengths[e] = std::max(1.0 - g.edge_at(static_cast<int>(e)).joint_ccp, 1e-9);
  }
  const auto bc = detail::brandes(g, &lengths, nullptr);
  std::map<NodeId, double> out;
  for (int i = 0; i < g.size(); ++i) out[g.node_at(i).id] = bc[i];
  return out;
}

/// Edge betweenness over unweighted shortest paths, keyed by (a,b) with a < b.
inline std::map<std::pair<NodeId, NodeId>, double> edge_betweenness(const ClusterGraph& g) {
  if (g.empty()) throw std::invalid_argument("edge_betweenness: empty graph");
  std::map<std::pair<NodeId, NodeId>, double> out;
  detail::brandes(g, nullptr, &out);
  return out;
}

}  // namespace vfcp
