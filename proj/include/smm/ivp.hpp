#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smm/kinematics.hpp"
#include "smm/nullspace.hpp"
#include "smm/tableau.hpp"

namespace smm {

struct IntegratorConfig {
  double h = 0.05;  // joint-space arc length per step
  ButcherTableau tableau = ButcherTableau::dormand_prince5();
  int max_steps = 100000;
  int min_steps_before_closure = 10;

  void validate() const;
};

enum class Termination { Closed, Singular, StepLimit };
std::string_view to_string(Termination t);

/// Samples of one self-motion manifold trace. refs[i] is the reference
/// heading used for the step leaving samples[i].
struct Trace {
  std::vector<JointConfig> samples;
  std::vector<VectorXd> refs;
  double h = 0.0;
  bool closed = false;
  Termination termination = Termination::StepLimit;
  double arc_length = 0.0;  // steps * h
  std::string note;            // failure detail for open traces
  std::size_t seed_index = 0;  // position of q0 inside samples
  KernelResult<double> seed_kernel;

  int steps() const { return samples.empty() ? 0 : static_cast<int>(samples.size()) - 1; }
  const JointConfig& seed() const { return samples.at(seed_index); }
};

/// Raw unit kernel direction of the task Jacobian at q (sign arbitrary).
KernelResult<double> task_kernel(const ChainModel& model, const TaskSpec& task, const JointConfig& q);

/// Task Jacobian at q, in the task's frame.
MatrixXd task_jacobian_at(const ChainModel& model, const TaskSpec& task, const JointConfig& q);

/// Task-space error from fk(q) to `target` over the task rows (rotation as a
/// rotation vector in the task frame); projected by P in induced mode.
VectorXd task_residual(const ChainModel& model, const TaskSpec& task, const Posed& target,
                       const JointConfig& q);

struct FieldValue {
  TangentVector velocity;
  KernelResult<double> diag;
};

/// Directionally regularized kernel field: n(q) if <n(q), ref> > 0, else -n(q).
FieldValue regularized_field(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                             const VectorXd& ref);

/// Sign selection only; exposed for the strict-inequality edge case.
VectorXd regularize(const VectorXd& direction, const VectorXd& ref);

using Field = std::function<TangentVector(const JointConfig& q, const VectorXd& ref)>;

/// One fixed step. Every stage uses the same reference heading `ref`.
/// Stage failures are rethrown with the stage index attached.
JointConfig rk_step(const Field& field, const JointConfig& q, const VectorXd& ref,
                    const IntegratorConfig& cfg);
JointConfig rk_step(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                    const VectorXd& ref, const IntegratorConfig& cfg);

/// Reference heading at q: the raw kernel without a previous heading,
/// otherwise the regularized field with the previous heading as reference.
VectorXd update_reference(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                          const std::optional<VectorXd>& ref_prev);

/// Traces the self-motion manifold through q0.
///
/// Integrates from q0 until the wrapped joint distance to q0 drops below h
/// (after at least min_steps_before_closure steps). If the field fails
/// mid-trace, the opposite branch is integrated from q0 and the two are
/// joined into one open trace. Throws SingularStart when q0 is rank
/// deficient and InvalidSeed when `target` is given and fk(q0) misses it by
/// more than 1e-6.
Trace solve_smm_ivp(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                    const IntegratorConfig& cfg = {}, const std::optional<Posed>& target = {});

/// Same, starting with an explicit initial heading instead of the raw kernel.
Trace solve_smm_ivp(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                    const VectorXd& initial_ref, const IntegratorConfig& cfg);

/// Classic comparator: q + gamma g(q; ref) + J^+ dx, where dx is the task
/// residual to `target`. Pass `project = false` to drop the correction term.
JointConfig baseline_step(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                          const VectorXd& ref, double gamma, const Posed& target, bool project = true);

}  // namespace smm
