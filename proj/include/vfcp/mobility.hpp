#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vfcp/errors.hpp"
#include "vfcp/graph.hpp"

namespace vfcp {

/// Road segments act as Markov states. Adjacency lists describe which
/// segments a vehicle can move to next; a vehicle may always also remain on
/// its current segment (self-transition).
struct SegmentRegistry {
  std::vector<std::string> segments;
  std::map<std::string, std::vector<std::string>> adjacency;

  bool has(const std::string& id) const {
    return std::find(segments.begin(), segments.end(), id) != segments.end();
  }

  int index_of(const std::string& id) const {
    const auto it = std::find(segments.begin(), segments.end(), id);
    if (it == segments.end()) throw UnknownSegmentError(id);
    return static_cast<int>(it - segments.begin());
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& s : segments) {
      if (!seen.insert(s).second) throw InvalidSpecError("duplicate segment id: " + s);
    }
    for (const auto& [from, tos] : adjacency) {
      if (!seen.count(from)) throw UnknownSegmentError(from);
      for (const auto& to : tos) {
        if (!seen.count(to)) throw UnknownSegmentError(to);
      }
    }
  }

  /// Next-state support for a segment: itself plus registered neighbors.
  std::vector<std::string> next_states(const std::string& from) const {
    std::vector<std::string> out{from};
    const auto it = adjacency.find(from);
    if (it != adjacency.end()) {
      for (const auto& to : it->second) {
        if (to != from) out.push_back(to);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

struct TransitionRecord {
  std::string vehicle_id;
  double timestamp = 0.0;  ///< seconds
  std::string from_segment;
  std::string to_segment;
};

/// Count-aggregation window. 300 s for free-flow traffic, 600 s when the
/// road is congested; selected per scenario, not inferred.
struct TimeWindow {
  double t1 = 0.0;
  double t2 = 300.0;

  TimeWindow() = default;
  TimeWindow(double start, double end) : t1(start), t2(end) {
    if (t2 <= t1) throw std::invalid_argument("TimeWindow: t2 must exceed t1");
  }
  double length() const { return t2 - t1; }
};

inline constexpr double kFreeFlowWindowSeconds = 300.0;
inline constexpr double kCongestedWindowSeconds = 600.0;

/// Per-vehicle transition counts over the segment registry. Probabilities are
/// derived per row; rows that were never observed are flagged.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::string vehicle_id, int segment_count)
      : vehicle_id_(std::move(vehicle_id)),
        n_(segment_count),
        counts_(static_cast<std::size_t>(segment_count) * segment_count, 0),
        row_totals_(segment_count, 0) {}

  const std::string& vehicle_id() const { return vehicle_id_; }
  int segment_count() const { return n_; }

  void add_transition(int from, int to, long long count = 1) {
    counts_.at(idx(from, to)) += count;
    row_totals_.at(from) += count;
  }

  long long count(int from, int to) const { return counts_.at(idx(from, to)); }
  long long row_total(int from) const { return row_totals_.at(from); }
  bool row_observed(int from) const { return row_totals_.at(from) > 0; }

  /// Eq. 6: #(RS_i to RS_j) / #(RS_i); 0 for unobserved rows.
  double probability(int from, int to) const {
    const long long total = row_totals_.at(from);
    if (total == 0) return 0.0;
    return static_cast<double>(counts_.at(idx(from, to))) / static_cast<double>(total);
  }

  bool operator==(const TransitionMatrix& other) const {
    return vehicle_id_ == other.vehicle_id_ && n_ == other.n_ && counts_ == other.counts_;
  }

 private:
  std::size_t idx(int from, int to) const {
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(to);
  }

  std::string vehicle_id_;
  int n_ = 0;
  std::vector<long long> counts_;
  std::vector<long long> row_totals_;
};

/// Fold a record stream into per-vehicle matrices. Order-invariant: counts do
/// not depend on record order. Unregistered segments raise UnknownSegment.
inline std::map<std::string, TransitionMatrix> calibrate(std::span<const TransitionRecord> records,
                                                         const SegmentRegistry& registry) {
  registry.validate();
  std::map<std::string, TransitionMatrix> out;
  const int n = static_cast<int>(registry.segments.size());
  for (const TransitionRecord& r : records) {
    const int from = registry.index_of(r.from_segment);
    const int to = registry.index_of(r.to_segment);
    auto [it, inserted] = out.try_emplace(r.vehicle_id, r.vehicle_id, n);
    it->second.add_transition(from, to);
  }
  return out;
}

/// Probability that the vehicle's next transition lands on cluster_segment
/// (Eq. 6 row lookup). Unobserved rows fall back to a uniform draw over the
/// segment's registered next states, so sparsely observed vehicles do not
/// produce zero-CCP artifacts.
inline double node_ccp(const TransitionMatrix& m, const SegmentRegistry& registry,
                       const std::string& current, const std::string& cluster_segment,
                       const TimeWindow& window) {
  (void)window;  // probabilities are per transition within the configured window
  const int from = registry.index_of(current);
  const int to = registry.index_of(cluster_segment);
  if (m.segment_count() == static_cast<int>(registry.segments.size()) && m.row_observed(from)) {
    return m.probability(from, to);
  }
  const auto support = registry.next_states(current);
  const bool reachable = std::find(support.begin(), support.end(), cluster_segment) !=
                         support.end();
  return reachable ? 1.0 / static_cast<double>(support.size()) : 0.0;
}

/// Joint CCP of a link: both endpoints stay, assuming independent mobility.
inline double link_joint_ccp(double ccp_a, double ccp_b) {
  if (ccp_a < 0.0 || ccp_a > 1.0 || ccp_b < 0.0 || ccp_b > 1.0)
    throw std::invalid_argument("link_joint_ccp: inputs must be probabilities");
  return ccp_a * ccp_b;
}

/// New vehicles start at zero confidence and only join the candidate pool
/// after a minimum trip count.
inline constexpr int kMinTripsForCandidacy = 3;

/// Trip-following score: times the vehicle followed its preferred trajectory
/// over total registered trips.
struct ConfidenceScore {
  long long followed = 0;
  long long total = 0;

  double value() const {
    if (total < 0 || followed < 0 || followed > total)
      throw std::invalid_argument("ConfidenceScore: need total >= followed >= 0");
    return total == 0 ? 0.0 : static_cast<double>(followed) / static_cast<double>(total);
  }
  bool is_new_participant(int min_trips = kMinTripsForCandidacy) const {
    return total < min_trips;
  }
};

/// Record one more trip and return the updated score.
inline ConfidenceScore update_confidence(ConfidenceScore prev, bool followed_preferred) {
  if (prev.total < prev.followed || prev.followed < 0)
    throw std::invalid_argument("update_confidence: need total >= followed >= 0");
  prev.total += 1;
  if (followed_preferred) prev.followed += 1;
  return prev;
}

/// Scenario-side view of a vehicle before it is admitted to a cluster graph.
struct VehicleDescriptor {
  NodeId id;
  Capacities capacities{};
  std::string current_segment;
  ConfidenceScore confidence;
  bool is_rsu = false;
};

struct ConnectivityEdge {
  NodeId a;
  NodeId b;
  double bandwidth_kbps = 0.0;
};

inline constexpr double kDefaultConfidenceThreshold = 0.5;

/// Assemble the CCP-weighted cluster graph: vehicles filtered by confidence
/// threshold and minimum trips, node CCPs from their transition matrices,
/// edge joint CCPs as endpoint products. The RSU is always admitted with
/// CCP 1.
inline ClusterGraph build_cluster_graph(std::span<const VehicleDescriptor> vehicles,
                                        const std::map<std::string, TransitionMatrix>& matrices,
                                        const SegmentRegistry& registry,
                                        const std::string& cluster_segment,
                                        const TimeWindow& window,
                                        std::span<const ConnectivityEdge> connectivity,
                                        double threshold = kDefaultConfidenceThreshold,
                                        int min_trips = kMinTripsForCandidacy) {
  std::vector<VehicleNode> nodes;
  int admitted_vehicles = 0;
  for (const VehicleDescriptor& v : vehicles) {
    VehicleNode n;
    n.id = v.id;
    n.capacities = v.capacities;
    n.is_rsu = v.is_rsu;
    if (v.is_rsu) {
      n.ccp = 1.0;  // stationary, always available
      n.confidence = 1.0;
    } else {
      if (v.confidence.value() < threshold || v.confidence.is_new_participant(min_trips)) continue;
      const auto it = matrices.find(v.id);
      static const TransitionMatrix kEmpty;
      const TransitionMatrix& m = it == matrices.end() ? kEmpty : it->second;
      n.ccp = node_ccp(m, registry, v.current_segment, cluster_segment, window);
      n.confidence = v.confidence.value();
      ++admitted_vehicles;
    }
    nodes.push_back(std::move(n));
  }
  if (admitted_vehicles == 0) throw EmptyClusterError("no vehicle passes the confidence threshold");

  std::map<NodeId, double> ccp_by_id;
  for (const VehicleNode& n : nodes) ccp_by_id[n.id] = n.ccp;

  std::vector<ClusterEdge> edges;
  for (const ConnectivityEdge& c : connectivity) {
    const auto a = ccp_by_id.find(c.a);
    const auto b = ccp_by_id.find(c.b);
    if (a == ccp_by_id.end() || b == ccp_by_id.end()) continue;  // filtered endpoint
    ClusterEdge e;
    e.a = c.a;
    e.b = c.b;
    e.bandwidth_kbps = c.bandwidth_kbps;
    e.joint_ccp = link_joint_ccp(a->second, b->second);
    edges.push_back(std::move(e));
  }
  return ClusterGraph(std::move(nodes), std::move(edges));
}

}  // namespace vfcp
