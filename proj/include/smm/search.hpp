#pragma once

#include <map>
#include <string>
#include <vector>

#include "smm/ik.hpp"
#include "smm/ivp.hpp"

namespace smm {

/// Disconnected self-motion manifold components found for one task pose.
struct ComponentSet {
  std::vector<Trace> components;
  std::vector<JointConfig> seeds_used;      // seeds_used[i] spawned components[i]
  std::vector<JointConfig> seeds_rejected;  // seeds already on a component
  std::vector<std::size_t> rejected_owner;  // component that absorbed each rejected seed
  std::vector<std::string> seed_errors;     // seeds that could not start a trace
  Posed pose;
};

/// min over samples of the wrapped joint distance. Throws EmptyTrace.
double point_to_set_distance(const ChainModel& model, const JointConfig& q, const Trace& trace);
/// Minimum over every component of the set.
double point_to_set_distance(const ChainModel& model, const JointConfig& q, const ComponentSet& set);

/// Component search: the first seed always spawns a trace, every later seed
/// spawns one only if it is farther than h from all accepted components.
ComponentSet search_components(const ChainModel& model, const TaskSpec& task, const SeedSet& seeds,
                               const IntegratorConfig& cfg = {});

/// True when some sample has every coordinate inside its joint limits,
/// revolute coordinates taken modulo 2 pi.
bool is_usable(const Trace& trace, const ChainModel& model);
/// Indices of components with at least one in-limit sample.
std::vector<std::size_t> usable_components(const ComponentSet& set, const ChainModel& model);

struct SweepRow {
  int pose_id = 0;
  int component_count = 0;
  int usable_count = 0;
  bool near_singular = false;
  bool failed = false;
  Posed pose;
  std::string note;
};

struct SweepConfig {
  int poses = 50;     // K
  int restarts = 30;  // N
  std::uint64_t seed = 0;
  int jobs = 1;
  IntegratorConfig integrator;
  IkConfig ik;
};

/// Samples K in-limit configurations, takes their end-effector poses, seeds
/// each with N IK restarts and counts (usable) components. A pose is flagged
/// near-singular when some seed's smallest task singular value is below
/// 10 sigma_tol. Failures are recorded per row; rows come back in pose order
/// regardless of `jobs`.
std::vector<SweepRow> workspace_sweep(const ChainModel& model, const TaskSpec& task, const SweepConfig& cfg);

/// count -> occurrences over rows that did not fail.
std::map<int, int> component_histogram(const std::vector<SweepRow>& rows);
std::map<int, int> usable_histogram(const std::vector<SweepRow>& rows);

}  // namespace smm
