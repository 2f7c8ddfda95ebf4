#include "smm/search.hpp"

#include <atomic>
#include <limits>
#include <numbers>
#include <thread>

namespace smm {

double point_to_set_distance(const ChainModel& model, const JointConfig& q, const Trace& trace) {
  if (trace.samples.empty()) throw Error(ErrorKind::EmptyTrace, "trace has no samples");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : trace.samples) best = std::min(best, joint_distance(model, q, p));
  return best;
}

double point_to_set_distance(const ChainModel& model, const JointConfig& q, const ComponentSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : set.components) best = std::min(best, point_to_set_distance(model, q, c));
  return best;
}

ComponentSet search_components(const ChainModel& model, const TaskSpec& task, const SeedSet& seeds,
                               const IntegratorConfig& cfg) {
  if (seeds.configs.empty()) throw Error(ErrorKind::Validation, "component search needs at least one seed");
  ComponentSet out;
  out.pose = fk(model, seeds.configs.front());
  for (const auto& q : seeds.configs) {
    std::size_t owner = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < out.components.size(); ++c) {
      const double d = point_to_set_distance(model, q, out.components[c]);
      if (d < best) {
        best = d;
        owner = c;
      }
    }
    if (!out.components.empty() && !(best > cfg.h)) {
      out.seeds_rejected.push_back(q);
      out.rejected_owner.push_back(owner);
      continue;
    }
    try {
      out.components.push_back(solve_smm_ivp(model, task, q, cfg));
      out.seeds_used.push_back(q);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularStart && e.kind() != ErrorKind::InvalidSeed) throw;
      out.seed_errors.push_back(e.what());
    }
  }
  return out;
}

bool is_usable(const Trace& trace, const ChainModel& model) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  auto coordinate_ok = [&](int i, double v) {
    const auto& j = model.joint(i);
    if (j.kind == JointKind::Prismatic) return j.within_limits(v);
    // Smallest equivalent angle not below lo.
    const double shifted = v - std::floor((v - j.lo) / kTwoPi) * kTwoPi;
    return shifted <= j.hi;
  };
  for (const auto& q : trace.samples) {
    bool ok = true;
    for (int i = 0; i < model.dof() && ok; ++i) ok = coordinate_ok(i, q[i]);
    if (ok) return true;
  }
  return false;
}

std::vector<std::size_t> usable_components(const ComponentSet& set, const ChainModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < set.components.size(); ++i)
    if (is_usable(set.components[i], model)) out.push_back(i);
  return out;
}

namespace {

bool seed_near_singular(const ChainModel& model, const TaskSpec& task, const JointConfig& q) {
  try {
    const auto k = task_kernel(model, task, q);
    const double smallest = task.mode == TaskMode::Rows ? k.sigma_second : k.sigma_min;
    return smallest < 10.0 * kSigmaRelTol * k.sigma_max;
  } catch (const Error&) {
    return true;
  }
}

SweepRow sweep_pose(const ChainModel& model, const TaskSpec& task, const SweepConfig& cfg, int id) {
  SweepRow row;
  row.pose_id = id;
  // Stream 2k draws the pose, stream 2k+1 seeds the restarts.
  auto rng = stream_rng(cfg.seed, 2 * static_cast<std::uint64_t>(id));
  const JointConfig q = random_config(model, rng);
  row.pose = fk(model, q);
  try {
    IkConfig ik = cfg.ik;
    ik.seed = stream_rng(cfg.seed, 2 * static_cast<std::uint64_t>(id) + 1)();
    const SeedSet seeds = random_restart_seeds(model, task, row.pose, cfg.restarts, ik);
    for (const auto& s : seeds.configs) row.near_singular = row.near_singular || seed_near_singular(model, task, s);
    const ComponentSet set = search_components(model, task, seeds, cfg.integrator);
    row.component_count = static_cast<int>(set.components.size());
    row.usable_count = static_cast<int>(usable_components(set, model).size());
    if (!set.seed_errors.empty()) row.near_singular = true;
  } catch (const Error& e) {
    row.failed = true;
    row.note = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> workspace_sweep(const ChainModel& model, const TaskSpec& task, const SweepConfig& cfg) {
  if (cfg.poses < 1 || cfg.restarts < 1) throw Error(ErrorKind::Validation, "sweep needs K >= 1 and N >= 1");
  cfg.integrator.validate();
  cfg.ik.validate();
  validate_task(model, task);

  std::vector<SweepRow> rows(static_cast<std::size_t>(cfg.poses));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int id = next++; id < cfg.poses; id = next++)
      rows[static_cast<std::size_t>(id)] = sweep_pose(model, task, cfg, id);
  };
  const int jobs = std::max(1, std::min(cfg.jobs, cfg.poses));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return rows;
}

std::map<int, int> component_histogram(const std::vector<SweepRow>& rows) {
  std::map<int, int> h;
  for (const auto& r : rows)
    if (!r.failed) ++h[r.component_count];
  return h;
}

std::map<int, int> usable_histogram(const std::vector<SweepRow>& rows) {
  std::map<int, int> h;
  for (const auto& r : rows)
    if (!r.failed) ++h[r.usable_count];
  return h;
}

}  // namespace smm
