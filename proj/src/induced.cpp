#include "smm/induced.hpp"

#include <algorithm>

namespace smm {

namespace {

bool has_row(const std::vector<int>& rows, int r) {
  return std::find(rows.begin(), rows.end(), r) != rows.end();
}

constexpr double kPartTol = 1e-12;

}  // namespace

bool InducedTask::mixed_units() const {
  return direction_unit.head<3>().norm() > kPartTol && direction_unit.tail<3>().norm() > kPartTol;
}

TaskSpec InducedTask::task() const { return TaskSpec::induced(direction_raw, frame, rows); }

InducedTask make_induced_task(const VectorXd& u, Frame frame, std::vector<int> rows) {
  InducedTask out;
  out.frame = frame;
  out.rows = std::move(rows);
  if (u.size() == 6) {
    out.direction_raw = u;
    for (int i = 0; i < 6; ++i)
      if (u[i] != 0.0 && !has_row(out.rows, i))
        throw Error(ErrorKind::Validation, "redundancy direction has a component outside the task rows");
  } else if (u.size() == static_cast<Eigen::Index>(out.rows.size())) {
    for (std::size_t i = 0; i < out.rows.size(); ++i)
      out.direction_raw[out.rows[i]] = u[static_cast<Eigen::Index>(i)];
  } else {
    throw Error(ErrorKind::DimensionMismatch, "redundancy direction must have 6 entries or one per task row");
  }
  const double norm = out.direction_raw.norm();
  if (!(norm > 1e-12)) throw Error(ErrorKind::DegenerateDirection, "redundancy direction has zero norm");
  out.direction_unit = out.direction_raw / norm;
  out.projection = projection(out.task().restrict(out.direction_raw));
  return out;
}

InducedTask make_induced_task(const TaskSpec& task) {
  if (task.mode != TaskMode::Induced) throw Error(ErrorKind::Validation, "task is not in induced mode");
  return make_induced_task(VectorXd(task.direction), task.frame, task.rows);
}

InducedResidual induced_residual(const Posed& seed, const Posed& current, const InducedTask& task) {
  Vector3d dp = current.position - seed.position;
  for (int i = 0; i < 3; ++i)
    if (!has_row(task.rows, i)) dp[i] = 0.0;

  const Vector3d trans = task.direction_unit.head<3>();
  const Vector3d rot = task.direction_unit.tail<3>();
  InducedResidual out;

  if (trans.norm() > kPartTol) {
    Vector3d line = trans.normalized();
    if (task.frame == Frame::Tool) line = seed.rotation * line;
    out.position = (dp - dp.dot(line) * line).norm();
  } else {
    out.position = dp.norm();
  }

  if (rot.norm() > kPartTol) {
    const Vector3d axis = rot.normalized();
    if (task.frame == Frame::Tool) {
      out.angular = axis_deflection(seed, current, axis);
    } else {
      const Vector3d a = seed.rotation.transpose() * axis;
      const Vector3d b = current.rotation.transpose() * axis;
      out.angular = std::atan2(a.cross(b).norm(), a.dot(b));
    }
  } else {
    Vector3d w = task.frame == Frame::Tool ? Vector3d(pose_error(seed, current).tail<3>())
                                           : Vector3d(pose_error_base(seed, current).tail<3>());
    for (int i = 0; i < 3; ++i)
      if (!has_row(task.rows, 3 + i)) w[i] = 0.0;
    out.angular = w.norm();
  }
  return out;
}

}  // namespace smm
