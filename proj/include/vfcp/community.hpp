#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vfcp/errors.hpp"
#include "vfcp/graph.hpp"
#include "vfcp/rng.hpp"

namespace vfcp {

struct Community {
  std::vector<NodeId> members;  ///< sorted
  double modularity_contribution = 0.0;
};

struct Partition {
  std::vector<Community> communities;
  double modularity = 0.0;

  std::vector<std::vector<NodeId>> member_lists() const {
    std::vector<std::vector<NodeId>> out;
    out.reserve(communities.size());
    for (const auto& c : communities) out.push_back(c.members);
    return out;
  }
};

/// Weighted modularity of a node partition, edge weight = joint_ccp:
/// Q = sum_c [ W_c/m - (d_c/(2m))^2 ]. Edgeless graphs evaluate to 0.
inline double modularity(const ClusterGraph& g, const std::vector<std::vector<NodeId>>& parts) {
  double m = 0.0;
  std::map<NodeId, double> degree;
  for (const ClusterEdge& e : g.edges()) {
    m += e.joint_ccp;
    degree[e.a] += e.joint_ccp;
    degree[e.b] += e.joint_ccp;
  }
  if (m <= 0.0) return 0.0;
  std::map<NodeId, int> comm;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    for (const NodeId& id : parts[c]) comm[id] = static_cast<int>(c);
  }
  std::vector<double> w_in(parts.size(), 0.0), d_tot(parts.size(), 0.0);
  for (const ClusterEdge& e : g.edges()) {
    if (comm.at(e.a) == comm.at(e.b)) w_in[comm.at(e.a)] += e.joint_ccp;
  }
  for (const auto& [id, d] : degree) d_tot[comm.at(id)] += d;
  double q = 0.0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    q += w_in[c] / m - (d_tot[c] / (2.0 * m)) * (d_tot[c] / (2.0 * m));
  }
  return q;
}

namespace detail {

struct LevelGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor, weight), no self entries
  std::vector<double> self_loop;                         // self weight, counted once
  std::vector<double> strength;                          // k_i = sum_w + 2*self
  double total_weight = 0.0;                             // m
};

inline LevelGraph level_from_cluster(const ClusterGraph& g) {
  LevelGraph lg;
  lg.n = g.size();
  lg.adj.assign(lg.n, {});
  lg.self_loop.assign(lg.n, 0.0);
  lg.strength.assign(lg.n, 0.0);
  for (const ClusterEdge& e : g.edges()) {
    const int a = g.index_of(e.a);
    const int b = g.index_of(e.b);
    lg.adj[a].push_back({b, e.joint_ccp});
    lg.adj[b].push_back({a, e.joint_ccp});
    lg.strength[a] += e.joint_ccp;
    lg.strength[b] += e.joint_ccp;
    lg.total_weight += e.joint_ccp;
  }
  return lg;
}

/// One Louvain level: local moving until the modularity gain of a full pass
/// drops below min_gain. Returns the node -> community assignment (compacted)
/// and whether any move happened at all.
inline std::pair<std::vector<int>, bool> louvain_level(const LevelGraph& lg, double min_gain,
                                                       std::mt19937_64& rng) {
  const int n = lg.n;
  const double m = lg.total_weight;
  std::vector<int> comm(n);
  std::vector<double> comm_tot(n);
  for (int i = 0; i < n; ++i) {
    comm[i] = i;
    comm_tot[i] = lg.strength[i];
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  bool any_move = false;
  if (m <= 0.0) return {comm, false};

  while (true) {
    shuffle(order, rng);
    double pass_gain = 0.0;
    for (const int u : order) {
      const int c0 = comm[u];
      // Link weight from u to each adjacent community (self loops excluded).
      std::map<int, double> w_to;
      w_to[c0];  // staying is always a candidate
      for (const auto& [v, w] : lg.adj[u]) w_to[comm[v]] += w;

      comm_tot[c0] -= lg.strength[u];
      const double k_u = lg.strength[u];
      auto gain_of = [&](int c) {
        return w_to.count(c) ? w_to[c] / m - comm_tot[c] * k_u / (2.0 * m * m)
                             : -comm_tot[c] * k_u / (2.0 * m * m);
      };
      const double stay_gain = gain_of(c0);
      int best = c0;
      double best_gain = stay_gain;
      for (const auto& [c, w] : w_to) {
        (void)w;
        const double gain = gain_of(c);
        if (gain > best_gain + 1e-15) {  // strict improvement; ties keep lowest label
          best = c;
          best_gain = gain;
        }
      }
      if (best != c0) {
        pass_gain += best_gain - stay_gain;
        any_move = true;
      }
      comm[u] = best;
      comm_tot[best] += lg.strength[u];
    }
    if (pass_gain < min_gain) break;
  }

  // Compact community labels to 0..k-1 preserving smallest-member order.
  std::map<int, int> relabel;
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    const auto [it, inserted] = relabel.try_emplace(comm[i], static_cast<int>(relabel.size()));
    out[i] = it->second;
  }
  return {out, any_move};
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& comm, int k) {
  LevelGraph next;
  next.n = k;
  next.adj.assign(k, {});
  next.self_loop.assign(k, 0.0);
  next.strength.assign(k, 0.0);
  next.total_weight = lg.total_weight;
  std::map<std::pair<int, int>, double> wsum;
  for (int u = 0; u < lg.n; ++u) {
    next.self_loop[comm[u]] += lg.self_loop[u];
    for (const auto& [v, w] : lg.adj[u]) {
      if (u < v) {
        const int ca = comm[u], cb = comm[v];
        if (ca == cb) {
          next.self_loop[ca] += w;
        } else {
          wsum[{std::min(ca, cb), std::max(ca, cb)}] += w;
        }
      }
    }
  }
  for (const auto& [key, w] : wsum) {
    next.adj[key.first].push_back({key.second, w});
    next.adj[key.second].push_back({key.first, w});
    next.strength[key.first] += w;
    next.strength[key.second] += w;
  }
  for (int c = 0; c < k; ++c) next.strength[c] += 2.0 * next.self_loop[c];
  return next;
}

inline Partition make_partition(const ClusterGraph& g,
                                const std::vector<std::vector<NodeId>>& parts) {
  Partition out;
  double m = 0.0;
  std::map<NodeId, double> degree;
  for (const ClusterEdge& e : g.edges()) {
    m += e.joint_ccp;
    degree[e.a] += e.joint_ccp;
    degree[e.b] += e.joint_ccp;
  }
  std::vector<std::vector<NodeId>> sorted_parts = parts;
  for (auto& p : sorted_parts) std::sort(p.begin(), p.end());
  std::sort(sorted_parts.begin(), sorted_parts.end());
  for (const auto& p : sorted_parts) {
    Community c;
    c.members = p;
    if (m > 0.0) {
      std::set<NodeId> mem(p.begin(), p.end());
      double w_in = 0.0, d_tot = 0.0;
      for (const ClusterEdge& e : g.edges()) {
        if (mem.count(e.a) && mem.count(e.b)) w_in += e.joint_ccp;
      }
      for (const NodeId& id : p) d_tot += degree.count(id) ? degree.at(id) : 0.0;
      c.modularity_contribution = w_in / m - (d_tot / (2.0 * m)) * (d_tot / (2.0 * m));
    }
    out.communities.push_back(std::move(c));
  }
  out.modularity = modularity(g, parts);
  return out;
}

}  // namespace detail

inline constexpr double kDefaultLouvainMinGain = 1e-6;

/// Modularity-maximizing Louvain over joint-CCP edge weights. Starts from |V|
/// singleton communities and stops a level when the per-pass gain drops below
/// min_gain; node visit order is a seeded shuffle (seed 0 by default). The
/// returned partition is the final (coarsest) aggregation level projected to
/// the original nodes.
inline Partition louvain(const ClusterGraph& g, double min_gain = kDefaultLouvainMinGain,
                         std::uint64_t seed = 0) {
  if (g.empty()) throw std::invalid_argument("louvain: empty graph");
  std::mt19937_64 rng(seed);
  detail::LevelGraph lg = detail::level_from_cluster(g);

  // membership[i] = current community of original node i
  std::vector<int> membership(g.size());
  for (int i = 0; i < g.size(); ++i) membership[i] = i;

  while (true) {
    auto [comm, moved] = detail::louvain_level(lg, min_gain, rng);
    if (!moved) break;
    const int k = 1 + *std::max_element(comm.begin(), comm.end());
    for (auto& c : membership) c = comm[c];
    if (k == lg.n) break;  // no aggregation possible
    lg = detail::aggregate(lg, comm, k);
    if (k == 1) break;
  }

  std::map<int, std::vector<NodeId>> groups;
  for (int i = 0; i < g.size(); ++i) groups[membership[i]].push_back(g.node_at(i).id);
  std::vector<std::vector<NodeId>> parts;
  for (auto& [c, ids] : groups) parts.push_back(std::move(ids));
  return detail::make_partition(g, parts);
}

/// Divisive Girvan-Newman: repeatedly removes the edge with maximal edge
/// betweenness (ties: smallest endpoint pair) until the component count
/// reaches target_communities. Modularity is evaluated on the input graph.
inline Partition girvan_newman(const ClusterGraph& g, int target_communities = 2) {
  if (g.empty()) throw std::invalid_argument("girvan_newman: empty graph");
  if (target_communities < 2)
    throw std::invalid_argument("girvan_newman: target_communities must be >= 2");
  if (target_communities > g.size())
    throw TargetExceedsNodesError("target " + std::to_string(target_communities) +
                                  " exceeds node count " + std::to_string(g.size()));

  std::vector<ClusterEdge> edges = g.edges();
  ClusterGraph work = g;
  while (static_cast<int>(work.components().size()) < target_communities && !edges.empty()) {
    const auto eb = edge_betweenness(work);
    std::pair<NodeId, NodeId> victim = eb.begin()->first;
    double best = eb.begin()->second;
    for (const auto& [key, score] : eb) {
      if (score > best + 1e-12) {
        best = score;
        victim = key;
      }
    }
    std::vector<ClusterEdge> kept;
    kept.reserve(edges.size() - 1);
    for (const ClusterEdge& e : edges) {
      if (std::make_pair(e.a, e.b) != victim) kept.push_back(e);
    }
    edges = std::move(kept);
    work = ClusterGraph(g.nodes(), edges);
  }
  return detail::make_partition(g, work.components());
}

/// Full dendrogram: the partition after every component-count increase, down
/// to isolated nodes.
inline std::vector<Partition> girvan_newman_dendrogram(const ClusterGraph& g) {
  if (g.empty()) throw std::invalid_argument("girvan_newman_dendrogram: empty graph");
  std::vector<Partition> levels;
  std::vector<ClusterEdge> edges = g.edges();
  ClusterGraph work = g;
  std::size_t count = work.components().size();
  levels.push_back(detail::make_partition(g, work.components()));
  while (!edges.empty()) {
    const auto eb = edge_betweenness(work);
    std::pair<NodeId, NodeId> victim = eb.begin()->first;
    double best = eb.begin()->second;
    for (const auto& [key, score] : eb) {
      if (score > best + 1e-12) {
        best = score;
        victim = key;
      }
    }
    std::vector<ClusterEdge> kept;
    for (const ClusterEdge& e : edges) {
      if (std::make_pair(e.a, e.b) != victim) kept.push_back(e);
    }
    edges = std::move(kept);
    work = ClusterGraph(g.nodes(), edges);
    const auto comps = work.components();
    if (comps.size() > count) {
      count = comps.size();
      levels.push_back(detail::make_partition(g, comps));
    }
  }
  return levels;
}

enum class DetectionMethod { louvain, girvan_newman };

inline const char* to_string(DetectionMethod m) {
  return m == DetectionMethod::louvain ? "louvain" : "girvan_newman";
}

struct DetectionParams {
  double min_gain = kDefaultLouvainMinGain;
  std::uint64_t seed = 0;
  int target_communities = 2;
};

struct SelectedCluster {
  std::vector<NodeId> members;  ///< sorted
  ClusterGraph subgraph;
  NodeId control_node;
  DetectionMethod method = DetectionMethod::louvain;
  double modularity = 0.0;
};

/// Runs detection, keeps the biggest community (ties: higher internal joint
/// CCP, then lexicographic members) and elects the control node as the
/// member with maximal betweenness centrality (tie: lowest id).
inline SelectedCluster select_cluster(const ClusterGraph& g, DetectionMethod method,
                                      const DetectionParams& params = {}) {
  if (g.empty()) throw std::invalid_argument("select_cluster: empty graph");
  const Partition partition = method == DetectionMethod::louvain
                                  ? louvain(g, params.min_gain, params.seed)
                                  : girvan_newman(g, params.target_communities);

  const Community* best = nullptr;
  double best_weight = 0.0;
  for (const Community& c : partition.communities) {
    const std::set<NodeId> members(c.members.begin(), c.members.end());
    const double w = g.internal_weight(members);
    if (best == nullptr || c.members.size() > best->members.size() ||
        (c.members.size() == best->members.size() &&
         (w > best_weight + 1e-12 ||
          (std::abs(w - best_weight) <= 1e-12 && c.members < best->members)))) {
      best = &c;
      best_weight = w;
    }
  }

  SelectedCluster out;
  out.members = best->members;
  out.subgraph = g.induced_subgraph(std::set<NodeId>(best->members.begin(), best->members.end()));
  out.method = method;
  out.modularity = partition.modularity;

  const auto bc = betweenness_centrality(out.subgraph);
  NodeId cn = bc.begin()->first;
  double top = bc.begin()->second;
  for (const auto& [id, score] : bc) {
    if (score > top + 1e-12) {
      top = score;
      cn = id;
    }
  }
  out.control_node = cn;
  return out;
}

/// Resilience of the surviving cluster: sum of survivors' weighted-BCS over
/// the whole cluster's total, with edge length 1 - joint_ccp.
inline double resilience_score(const SelectedCluster& selected,
                               const std::set<NodeId>& survivors) {
  for (const NodeId& id : survivors) {
    if (!selected.subgraph.has_node(id))
      throw std::invalid_argument("resilience_score: survivor " + id + " not in cluster");
  }
  const auto bc = betweenness_centrality_weighted(selected.subgraph);
  double total = 0.0, kept = 0.0;
  for (const auto& [id, score] : bc) {
    total += score;
    if (survivors.count(id)) kept += score;
  }
  if (total <= 0.0) {
    if (survivors.size() == static_cast<std::size_t>(selected.subgraph.size())) return 1.0;
    throw UndefinedScoreError("total betweenness is zero and some members departed");
  }
  return kept / total;
}

}  // namespace vfcp
