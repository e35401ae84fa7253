#pragma once

// Shared test fixtures and independent oracles. Everything here recomputes
// results from first principles (definition-level enumeration) so library
// outputs can be cross-checked against a second, unrelated code path.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vfcp/graph.hpp"
#include "vfcp/rng.hpp"

namespace testsupport {

using vfcp::ClusterEdge;
using vfcp::ClusterGraph;
using vfcp::GraphPath;
using vfcp::NodeId;
using vfcp::VehicleNode;

inline VehicleNode mk_node(const std::string& id, double ccp = 1.0, double cpu = 100.0,
                           double mem = 1024.0, double cam = 1.0, double gpu = 0.0,
                           bool rsu = false) {
  VehicleNode n;
  n.id = id;
  n.capacities = {cpu, mem, cam, gpu};
  n.ccp = ccp;
  n.confidence = 1.0;
  n.is_rsu = rsu;
  return n;
}

inline ClusterEdge mk_edge(const std::string& a, const std::string& b, double bw = 1000.0,
                           double jccp = 1.0) {
  ClusterEdge e;
  e.a = a;
  e.b = b;
  e.bandwidth_kbps = bw;
  e.joint_ccp = jccp;
  return e;
}

/// Graph from an edge list over implicit unit nodes.
inline ClusterGraph graph_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                                     double bw = 1000.0, double jccp = 1.0) {
  std::set<std::string> ids;
  for (const auto& [a, b] : edges) {
    ids.insert(a);
    ids.insert(b);
  }
  std::vector<VehicleNode> nodes;
  for (const auto& id : ids) nodes.push_back(mk_node(id));
  std::vector<ClusterEdge> es;
  for (const auto& [a, b] : edges) es.push_back(mk_edge(a, b, bw, jccp));
  return ClusterGraph(std::move(nodes), std::move(es));
}

/// Seeded random connected graph with random ccps/bandwidths.
inline ClusterGraph random_graph(std::mt19937_64& rng, int n, double edge_prob,
                                 bool random_weights = true) {
  std::vector<VehicleNode> nodes;
  for (int i = 0; i < n; ++i) {
    std::string id = "N" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    const double ccp = random_weights ? 0.3 + 0.7 * vfcp::uniform01(rng) : 1.0;
    nodes.push_back(mk_node(id, ccp));
  }
  std::vector<ClusterEdge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool chain_link = (j == i + 1);  // guarantees connectivity
      if (chain_link || vfcp::uniform01(rng) < edge_prob) {
        const double bw = random_weights ? 100.0 + 900.0 * vfcp::uniform01(rng) : 1000.0;
        const double jc = nodes[i].ccp * nodes[j].ccp;
        edges.push_back(mk_edge(nodes[i].id, nodes[j].id, bw, jc));
      }
    }
  }
  return ClusterGraph(std::move(nodes), std::move(edges));
}

/// Brute-force enumeration of all simple paths with <= max_hops edges,
/// written as plain recursion over the node set (no shared code with the
/// library's DFS).
inline std::vector<GraphPath> oracle_enumerate_paths(const ClusterGraph& g, const NodeId& src,
                                                     const NodeId& dst, int max_hops) {
  std::vector<GraphPath> found;
  std::vector<NodeId> cur{src};
  std::set<NodeId> used{src};
  auto adjacent = [&](const NodeId& a, const NodeId& b) {
    return g.edge_between(g.index_of(a), g.index_of(b)).has_value();
  };
  auto recurse = [&](auto&& self) -> void {
    const NodeId tail = cur.back();  // copy: cur reallocates during recursion
    if (tail == dst) {
      found.push_back(GraphPath{cur});
      return;
    }
    if (static_cast<int>(cur.size()) - 1 >= max_hops) return;
    for (const VehicleNode& cand : g.nodes()) {
      if (used.count(cand.id)) continue;
      if (!adjacent(tail, cand.id)) continue;
      cur.push_back(cand.id);
      used.insert(cand.id);
      self(self);
      cur.pop_back();
      used.erase(cand.id);
    }
  };
  recurse(recurse);
  std::sort(found.begin(), found.end());
  return found;
}

/// Definition-level betweenness: for every unordered pair, enumerate all
/// shortest paths explicitly and credit interior nodes fractionally.
inline std::map<NodeId, double> oracle_betweenness(const ClusterGraph& g) {
  std::map<NodeId, double> score;
  for (const auto& n : g.nodes()) score[n.id] = 0.0;
  const int n = g.size();

  auto bfs_dist = [&](int s) {
    std::vector<int> d(n, -1);
    std::vector<int> q{s};
    d[s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const int u = q[h];
      for (const auto& [v, e] : g.neighbors(u)) {
        (void)e;
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push_back(v);
        }
      }
    }
    return d;
  };

  for (int s = 0; s < n; ++s) {
    const auto dist_s = bfs_dist(s);
    for (int t = s + 1; t < n; ++t) {
      if (dist_s[t] < 0) continue;
      const auto dist_t = bfs_dist(t);
      // Enumerate all shortest s-t paths by walking strictly along dist_s
      // levels that stay on a shortest path to t.
      std::vector<std::vector<int>> paths;
      std::vector<int> cur{s};
      auto walk = [&](auto&& self, int u) -> void {
        if (u == t) {
          paths.push_back(cur);
          return;
        }
        for (const auto& [v, e] : g.neighbors(u)) {
          (void)e;
          if (dist_s[v] == dist_s[u] + 1 && dist_s[v] + dist_t[v] == dist_s[t]) {
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
          }
        }
      };
      walk(walk, s);
      if (paths.empty()) continue;
      const double frac = 1.0 / static_cast<double>(paths.size());
      for (const auto& p : paths) {
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
          score[g.node_at(p[i]).id] += frac;
        }
      }
    }
  }
  return score;
}

/// Same pairwise enumeration, crediting edges instead of interior nodes.
inline std::map<std::pair<NodeId, NodeId>, double> oracle_edge_betweenness(const ClusterGraph& g) {
  std::map<std::pair<NodeId, NodeId>, double> score;
  for (const auto& e : g.edges()) score[{e.a, e.b}] = 0.0;
  const int n = g.size();

  auto bfs_dist = [&](int s) {
    std::vector<int> d(n, -1);
    std::vector<int> q{s};
    d[s] = 0;
    for (std::size_t h = 0; h < q.size(); ++h) {
      const int u = q[h];
      for (const auto& [v, e] : g.neighbors(u)) {
        (void)e;
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push_back(v);
        }
      }
    }
    return d;
  };

  for (int s = 0; s < n; ++s) {
    const auto dist_s = bfs_dist(s);
    for (int t = s + 1; t < n; ++t) {
      if (dist_s[t] < 0) continue;
      const auto dist_t = bfs_dist(t);
      std::vector<std::vector<int>> paths;
      std::vector<int> cur{s};
      auto walk = [&](auto&& self, int u) -> void {
        if (u == t) {
          paths.push_back(cur);
          return;
        }
        for (const auto& [v, e] : g.neighbors(u)) {
          (void)e;
          if (dist_s[v] == dist_s[u] + 1 && dist_s[v] + dist_t[v] == dist_s[t]) {
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
          }
        }
      };
      walk(walk, s);
      if (paths.empty()) continue;
      const double frac = 1.0 / static_cast<double>(paths.size());
      for (const auto& p : paths) {
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
          NodeId a = g.node_at(p[i]).id;
          NodeId b = g.node_at(p[i + 1]).id;
          if (b < a) std::swap(a, b);
          score[{a, b}] += frac;
        }
      }
    }
  }
  return score;
}

/// Direct evaluation of weighted modularity: Q = sum_c [W_c/m - (d_c/2m)^2].
inline double oracle_modularity(const ClusterGraph& g,
                                const std::vector<std::vector<NodeId>>& parts) {
  double m = 0.0;
  std::map<NodeId, double> degree;
  for (const auto& e : g.edges()) {
    m += e.joint_ccp;
    degree[e.a] += e.joint_ccp;
    degree[e.b] += e.joint_ccp;
  }
  if (m <= 0.0) return 0.0;
  double q = 0.0;
  for (const auto& part : parts) {
    std::set<NodeId> members(part.begin(), part.end());
    double w_in = 0.0;
    for (const auto& e : g.edges()) {
      if (members.count(e.a) && members.count(e.b)) w_in += e.joint_ccp;
    }
    double d = 0.0;
    for (const auto& id : part) d += degree.count(id) ? degree[id] : 0.0;
    q += w_in / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

/// All set partitions of the node set (for exhaustive modularity search on
/// small graphs), via restricted growth strings.
inline std::vector<std::vector<std::vector<NodeId>>> all_partitions(
    const std::vector<NodeId>& ids) {
  std::vector<std::vector<std::vector<NodeId>>> out;
  const int n = static_cast<int>(ids.size());
  std::vector<int> rgs(n, 0);
  auto emit = [&]() {
    const int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<NodeId>> parts(blocks);
    for (int i = 0; i < n; ++i) parts[rgs[i]].push_back(ids[i]);
    out.push_back(std::move(parts));
  };
  auto rec = [&](auto&& self, int i, int maxv) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[i] = v;
      self(self, i + 1, std::max(maxv, v));
    }
  };
  if (n == 0) return out;
  rec(rec, 1, 0);  // rgs[0] fixed at 0
  return out;
}

}  // namespace testsupport
