#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vfcp/errors.hpp"
#include "vfcp/graph.hpp"

namespace vfcp {

/// One task type in a linear chain. alpha is the data processing factor:
/// the ratio of outgoing to incoming flow for instances of this type
/// (1 = pure forwarding, values < 1 shrink the stream).
struct TaskType {
  int position = 1;  ///< 1-based slot in the chain
  std::string label;
  Capacities demands{};
  double alpha = 1.0;
  int min_instances = 1;
  int max_instances = std::numeric_limits<int>::max();
  double proc_latency_s = 0.0;

  void validate() const {
    if (alpha < 0.0 || alpha > 1.0)
      throw InvalidSpecError("task " + label + ": alpha must be in [0,1]");
    if (min_instances < 1 || min_instances > max_instances)
      throw InvalidSpecError("task " + label + ": need 1 <= min_instances <= max_instances");
    for (double d : demands) {
      if (d < 0.0 || !std::isfinite(d))
        throw InvalidSpecError("task " + label + ": negative demand");
    }
  }
};

/// Linear chain of task types; the terminal sink of every chain is the
/// cluster's control node.
struct TypeGraph {
  std::string app_name;
  std::vector<TaskType> chain;
  double source_flow_kbps = 0.0;

  int length() const { return static_cast<int>(chain.size()); }

  const TaskType& type_at(int position) const {  // 1-based
    if (position < 1 || position > length())
      throw std::out_of_range("type position " + std::to_string(position));
    return chain[static_cast<std::size_t>(position - 1)];
  }

  /// Rate of the flow leaving type `position`: the source rate shrunk by the
  /// alphas of every processing type up to and including `position`.
  /// position = length() gives the rate of the final leg into the control
  /// node sink.
  double flow_rate_after(int position) const {
    if (position < 1 || position > length())
      throw std::out_of_range("type position " + std::to_string(position));
    double rate = source_flow_kbps;
    for (int p = 2; p <= position; ++p) rate *= type_at(p).alpha;
    return rate;
  }

  void validate() const {
    if (chain.empty()) throw InvalidSpecError("type graph " + app_name + " has an empty chain");
    if (source_flow_kbps < 0.0) throw InvalidSpecError("negative source flow");
    for (int p = 1; p <= length(); ++p) {
      if (type_at(p).position != p)
        throw InvalidSpecError("chain positions must be 1..len in order");
      type_at(p).validate();
    }
  }
};

/// Profile parameters measured in the underlying application study.
inline constexpr double kStreamingMemoryMbMin = 110.0;
inline constexpr double kStreamingMemoryMbMax = 220.0;
inline constexpr double kFrameSizeKbMin = 2.7;
inline constexpr double kFrameSizeKbMax = 33.7;
inline constexpr double kDetectLatencyFullS = 7.417;    ///< YOLOv3-class detector
inline constexpr double kDetectLatencyTinyS = 0.31277;  ///< tiny variant, lower confidence

enum class DetectorVariant { full, tiny };

struct ApplicationProfile {
  std::string name;
  TypeGraph type_graph;
  int source_count_min = 1;
  int source_count_max = 7;
  double frame_kb_min = kFrameSizeKbMin;
  double frame_kb_max = kFrameSizeKbMax;
};

namespace detail {

inline TaskType make_task(int pos, const std::string& label, double cpu, double mem, double cam,
                          double gpu, double alpha, double latency) {
  TaskType t;
  t.position = pos;
  t.label = label;
  t.demands = {cpu, mem, cam, gpu};
  t.alpha = alpha;
  t.proc_latency_s = latency;
  return t;
}

}  // namespace detail

/// app1: data collection (chain 3, capture -> preprocess -> compress);
/// app2: object detection (chain 4, capture -> preprocess -> frame_extract
/// -> detect). Numeric demands and alphas are artifact defaults; memory and
/// detector latencies follow the measured profile figures.
inline std::vector<ApplicationProfile> builtin_profiles(
    DetectorVariant detector = DetectorVariant::full) {
  const bool full = detector == DetectorVariant::full;

  ApplicationProfile app1;
  app1.name = "app1";
  app1.type_graph.app_name = "app1";
  app1.type_graph.source_flow_kbps = 200.0;
  app1.type_graph.chain = {
      detail::make_task(1, "capture", 5.0, 150.0, 1.0, 0.0, 1.0, 0.033),
      detail::make_task(2, "preprocess", 10.0, 120.0, 0.0, 0.0, 0.8, 0.05),
      detail::make_task(3, "compress", 8.0, 110.0, 0.0, 0.0, 0.3, 0.04),
  };

  ApplicationProfile app2;
  app2.name = "app2";
  app2.type_graph.app_name = "app2";
  app2.type_graph.source_flow_kbps = 200.0;
  app2.type_graph.chain = {
      detail::make_task(1, "capture", 5.0, 150.0, 1.0, 0.0, 1.0, 0.033),
      detail::make_task(2, "preprocess", 10.0, 120.0, 0.0, 0.0, 0.8, 0.05),
      detail::make_task(3, "frame_extract", 6.0, 110.0, 0.0, 0.0, 0.5, 0.02),
      detail::make_task(4, "detect", full ? 18.0 : 5.0, 220.0, 0.0, 0.0, 0.05,
                        full ? kDetectLatencyFullS : kDetectLatencyTinyS),
  };

  return {app1, app2};
}

inline ApplicationProfile builtin_profile(const std::string& name,
                                          DetectorVariant detector = DetectorVariant::full) {
  for (auto& p : builtin_profiles(detector)) {
    if (p.name == name) return p;
  }
  throw InvalidSpecError("unknown application profile: " + name);
}

/// One replica s_pj of a task type. Instances get flat ids so that merged
/// multi-application graphs can share them.
struct TaskInstance {
  int id = 0;
  int app = 0;       ///< index into InstanceGraph::apps
  int type_pos = 0;  ///< 1-based chain position within its app
  int replica = 0;   ///< 1-based replica index within (app, type_pos)
  std::string label;
};

inline constexpr int kSinkInstance = -1;  ///< flow target: control-node sink

struct InstanceFlow {
  int id = 0;
  int app = 0;
  int stream = 0;  ///< 1-based source stream index within the app
  int from_instance = 0;
  int to_instance = kSinkInstance;
  double rate_kbps = 0.0;

  bool to_sink() const { return to_instance == kSinkInstance; }
};

/// Scaled expansion of one or more type graphs: concrete instances plus the
/// per-stream flows that connect consecutive types and end at the control
/// node sink.
struct InstanceGraph {
  std::vector<TypeGraph> apps;
  std::vector<TaskInstance> instances;
  std::vector<InstanceFlow> flows;

  const TaskInstance& instance(int id) const {
    for (const auto& inst : instances) {
      if (inst.id == id) return inst;
    }
    throw std::out_of_range("unknown instance id " + std::to_string(id));
  }

  const TaskType& type_of(const TaskInstance& inst) const {
    return apps.at(static_cast<std::size_t>(inst.app)).type_at(inst.type_pos);
  }

  std::vector<const InstanceFlow*> inbound(int instance_id) const {
    std::vector<const InstanceFlow*> out;
    for (const auto& f : flows) {
      if (f.to_instance == instance_id) out.push_back(&f);
    }
    return out;
  }

  std::vector<const InstanceFlow*> outbound(int instance_id) const {
    std::vector<const InstanceFlow*> out;
    for (const auto& f : flows) {
      if (f.from_instance == instance_id) out.push_back(&f);
    }
    return out;
  }

  /// Distinct instances serving app at a chain position: both the app's own
  /// replicas and shared instances that receive one of its flows.
  int count(int app, int type_pos) const {
    std::set<int> ids;
    for (const auto& inst : instances) {
      if (inst.app == app && inst.type_pos == type_pos) ids.insert(inst.id);
    }
    for (const auto& f : flows) {
      if (f.app != app || f.to_sink()) continue;
      const auto& to = instance(f.to_instance);
      if (to.type_pos == type_pos) ids.insert(to.id);
    }
    return static_cast<int>(ids.size());
  }

  int next_instance_id() const {
    int next = 0;
    for (const auto& inst : instances) next = std::max(next, inst.id + 1);
    return next;
  }

  int next_flow_id() const {
    int next = 0;
    for (const auto& f : flows) next = std::max(next, f.id + 1);
    return next;
  }
};

/// Per-type instance-count bounds for a request: LL is 1 everywhere and UL
/// equals the number of Type-1 sources.
inline std::map<int, int> upper_limit(const TypeGraph& tg, int sources) {
  if (sources < 1) throw std::invalid_argument("upper_limit: sources must be >= 1");
  tg.validate();
  std::map<int, int> out;
  for (int p = 1; p <= tg.length(); ++p) out[p] = sources;
  return out;
}

/// Minimum scaling: `sources` Type-1 instances, one instance of every other
/// type, flows wired many-to-one with rates derived via the alphas.
inline InstanceGraph scale_minimum(const TypeGraph& tg, int sources) {
  if (sources < 1) throw std::invalid_argument("scale_minimum: sources must be >= 1");
  tg.validate();
  InstanceGraph ig;
  ig.apps = {tg};

  int next_id = 0;
  std::vector<int> source_ids;
  for (int j = 1; j <= sources; ++j) {
    ig.instances.push_back({next_id, 0, 1, j, tg.type_at(1).label});
    source_ids.push_back(next_id);
    ++next_id;
  }
  std::vector<int> downstream;  // instance id per type position >= 2
  for (int p = 2; p <= tg.length(); ++p) {
    ig.instances.push_back({next_id, 0, p, 1, tg.type_at(p).label});
    downstream.push_back(next_id);
    ++next_id;
  }

  int flow_id = 0;
  for (int j = 1; j <= sources; ++j) {
    int upstream = source_ids[static_cast<std::size_t>(j - 1)];
    for (int p = 1; p <= tg.length(); ++p) {
      InstanceFlow f;
      f.id = flow_id++;
      f.app = 0;
      f.stream = j;
      f.from_instance = upstream;
      f.rate_kbps = tg.flow_rate_after(p);
      if (p < tg.length()) {
        f.to_instance = downstream[static_cast<std::size_t>(p - 1)];
        upstream = f.to_instance;
      } else {
        f.to_instance = kSinkInstance;
      }
      ig.flows.push_back(f);
    }
  }
  return ig;
}

/// Merge instance graphs of several applications, consolidating instances of
/// shared task types (label equality) when the combined inbound processing
/// load fits within instance_cpu_capacity. Type-1 instances are only shared
/// across apps for matching replica indices (the same physical source).
inline InstanceGraph shared_type_merge(
    std::span<const InstanceGraph> apps,
    double instance_cpu_capacity = std::numeric_limits<double>::infinity()) {
  InstanceGraph merged;
  int next_inst = 0;
  int next_flow = 0;

  for (std::size_t a = 0; a < apps.size(); ++a) {
    const InstanceGraph& src = apps[a];
    if (src.apps.size() != 1)
      throw std::invalid_argument("shared_type_merge expects single-app graphs");
    const int app_index = static_cast<int>(merged.apps.size());
    merged.apps.push_back(src.apps[0]);

    std::map<int, int> id_map;  // src instance id -> merged id
    for (const TaskInstance& inst : src.instances) {
      int target = -1;
      for (const TaskInstance& cand : merged.instances) {
        if (cand.app == app_index) continue;
        if (cand.label != inst.label) continue;
        if (inst.type_pos == 1 && cand.replica != inst.replica) continue;
        // demands must agree for a shared type
        const auto& cand_demands = merged.apps[static_cast<std::size_t>(cand.app)]
                                       .type_at(cand.type_pos)
                                       .demands;
        const auto& inst_demands = src.apps[0].type_at(inst.type_pos).demands;
        if (cand_demands != inst_demands) continue;
        if (inst.type_pos >= 2) {
          const double cpu_demand = at(inst_demands, Resource::cpu);
          double existing_load = 0.0;
          for (const auto& f : merged.flows) {
            if (f.to_instance == cand.id) existing_load += cpu_demand;
          }
          double incoming_load = 0.0;
          for (const auto& f : src.flows) {
            if (f.to_instance == inst.id) incoming_load += cpu_demand;
          }
          if (existing_load + incoming_load > instance_cpu_capacity + 1e-9) continue;
        }
        target = cand.id;
        break;
      }
      if (target >= 0) {
        id_map[inst.id] = target;
      } else {
        TaskInstance copy = inst;
        copy.id = next_inst++;
        copy.app = app_index;
        id_map[inst.id] = copy.id;
        merged.instances.push_back(std::move(copy));
      }
    }
    for (const InstanceFlow& f : src.flows) {
      InstanceFlow copy = f;
      copy.id = next_flow++;
      copy.app = app_index;
      copy.from_instance = id_map.at(f.from_instance);
      copy.to_instance = f.to_sink() ? kSinkInstance : id_map.at(f.to_instance);
      merged.flows.push_back(std::move(copy));
    }
  }
  return merged;
}

}  // namespace vfcp
