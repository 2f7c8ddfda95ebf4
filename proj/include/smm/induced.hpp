#pragma once

#include "smm/kinematics.hpp"
#include "smm/nullspace.hpp"

namespace smm {

/// A non-redundant task made degree-1 redundant by projecting out the
/// symmetry direction u of the selected twist rows.
struct InducedTask {
  Vector6d direction_raw = Vector6d::Zero();
  Vector6d direction_unit = Vector6d::Zero();
  Frame frame = Frame::Base;
  std::vector<int> rows{Vx, Vy, Vz, Wx, Wy, Wz};
  MatrixXd projection;  // dim x dim over the selected rows

  /// True when u mixes translational and rotational components, so its
  /// normalization combines meters and radians.
  bool mixed_units() const;
  TaskSpec task() const;
};

/// Builds P = I - u u^T / |u|^2 over `rows`. `u` has either 6 entries or one
/// per selected row. Throws DegenerateDirection for |u| <= 1e-12.
InducedTask make_induced_task(const VectorXd& u, Frame frame,
                              std::vector<int> rows = {Vx, Vy, Vz, Wx, Wy, Wz});
InducedTask make_induced_task(const TaskSpec& task);

struct InducedResidual {
  double position = 0.0;  // |delta|, m
  double angular = 0.0;   // |gamma|, rad
};

/// Deviation of `current` from the symmetry subspace through `seed`.
///
/// Translational u: perpendicular distance of the end-effector from the line
/// through the seed position along u; the angular part is the relative
/// rotation restricted to the task's angular rows. Rotational u: position
/// change, and the deflection of the symmetry axis (tool frame: the body axis
/// u as carried by each pose; base frame: the base axis u seen from the tool).
InducedResidual induced_residual(const Posed& seed, const Posed& current, const InducedTask& task);

}  // namespace smm
