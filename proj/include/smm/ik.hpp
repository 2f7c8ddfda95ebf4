#pragma once

#include <cstdint>
#include <random>

#include "smm/kinematics.hpp"

namespace smm {

struct IkConfig {
  double damping = 1e-3;  // lambda
  double tol = 1e-10;     // residual norm threshold
  int max_iters = 500;
  double max_error_step = 0.5;  // task error is clipped to this norm per iteration
  std::uint64_t seed = 0;       // sampler seed for random initializations

  void validate() const;
};

/// Configurations that all solve one task pose.
struct SeedSet {
  std::vector<JointConfig> configs;
  int failures = 0;  // restarts that did not converge
};

/// Damped least squares on the task residual, q += J^T (J J^T + lambda^2 I)^-1 e.
/// Joint limits are ignored. Throws NoConvergence after max_iters.
JointConfig solve_ik(const ChainModel& model, const TaskSpec& task, const Posed& target,
                     const JointConfig& q_init, const IkConfig& cfg = {});

/// Uniform draw inside the joint limits.
JointConfig random_config(const ChainModel& model, std::mt19937_64& rng);

/// Generator for restart i under a sampler seed; independent of thread scheduling.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);

/// N independent uniformly initialized IK solves; converged results are kept
/// in restart order. Throws AllFailed when none converges.
SeedSet random_restart_seeds(const ChainModel& model, const TaskSpec& task, const Posed& target, int count,
                             const IkConfig& cfg = {});

/// Planar RRR seeds {q0, q1, q2}: q1 flips elbow 1 (joint index 1) by
/// reflecting links 1-2 across the chord to the joint-3 point, q2 flips elbow
/// 2 (joint index 2) by reflecting links 2-3 across the chord from the joint-2
/// point to the end effector. Link absolute angles outside each subchain are
/// kept, so the end-effector position is unchanged.
SeedSet toggle_seeds_rrr(const ChainModel& model, const JointConfig& q0);

/// Link lengths of a planar 3R chain built from z-axis joints spaced along x.
/// Throws ValidationError for any other chain.
Vector3d planar_rrr_lengths(const ChainModel& model);

}  // namespace smm
