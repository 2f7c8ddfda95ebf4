#include "smm/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace smm {

namespace {

constexpr double kAxisTol = 1e-12;

void check_joint(const JointSpec& j, int index) {
  auto fail = [index](const std::string& msg) {
    throw Error(ErrorKind::Validation, "joint " + std::to_string(index) + ": " + msg);
  };
  if (!j.xyz.allFinite() || !j.rpy.allFinite() || !j.axis.allFinite()) fail("non-finite value");
  if (std::abs(j.axis.norm() - 1.0) > kAxisTol) fail("axis is not a unit vector");
  if (!(j.lo <= j.hi)) fail("lower limit exceeds upper limit");
}

}  // namespace

Eigen::Matrix3d rpy_to_matrix(const Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vector3d::UnitX()))
      .toRotationMatrix();
}

Vector3d matrix_to_rpy(const Matrix3d& r) {
  const double pitch = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  const double roll = std::atan2(r(2, 1), r(2, 2));
  const double yaw = std::atan2(r(1, 0), r(0, 0));
  return {roll, pitch, yaw};
}

Eigen::Isometry3d JointSpec::origin() const {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = rpy_to_matrix(rpy);
  t.translation() = xyz;
  return t;
}

JointSpec JointSpec::revolute(const Vector3d& xyz, const Vector3d& rpy, const Vector3d& axis) {
  return {JointKind::Revolute, xyz, rpy, axis, -std::numbers::pi, std::numbers::pi};
}

JointSpec JointSpec::prismatic(const Vector3d& xyz, const Vector3d& axis, const Vector3d& rpy) {
  return {JointKind::Prismatic, xyz, rpy, axis, -1.0, 1.0};
}

ChainModel::ChainModel(std::string name, std::vector<JointSpec> joints,
                       const Vector3d& tool_xyz, const Vector3d& tool_rpy)
    : name_(std::move(name)),
      joints_(std::move(joints)),
      tool_xyz_(tool_xyz),
      tool_rpy_(tool_rpy) {
  if (joints_.empty()) throw Error(ErrorKind::Validation, "chain has no joints");
  if (!tool_xyz_.allFinite() || !tool_rpy_.allFinite())
    throw Error(ErrorKind::Validation, "tool transform is not finite");
  origins_.reserve(joints_.size());
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    check_joint(joints_[i], static_cast<int>(i));
    origins_.push_back(joints_[i].origin());
  }
  tool_ = Eigen::Isometry3d::Identity();
  tool_.linear() = rpy_to_matrix(tool_rpy_);
  tool_.translation() = tool_xyz_;
}

bool ChainModel::within_limits(const JointConfig& q) const {
  if (q.size() != dof()) return false;
  for (int i = 0; i < dof(); ++i)
    if (!joint(i).within_limits(q[i])) return false;
  return true;
}

VectorXd TaskSpec::restrict(const Vector6d& twist) const {
  VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = twist[rows[static_cast<std::size_t>(i)]];
  return out;
}

TaskSpec TaskSpec::select(std::vector<int> rows) {
  TaskSpec t;
  t.mode = TaskMode::Rows;
  t.rows = std::move(rows);
  return t;
}

TaskSpec TaskSpec::induced(const Vector6d& u, Frame frame, std::vector<int> rows) {
  TaskSpec t;
  t.mode = TaskMode::Induced;
  t.rows = std::move(rows);
  t.direction = u;
  t.frame = frame;
  return t;
}

void validate_task(const ChainModel& model, const TaskSpec& task) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Validation, msg); };
  if (task.rows.empty()) fail("task selects no twist rows");
  std::vector<int> sorted = task.rows;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail("task rows contain duplicates");
  if (sorted.front() < 0 || sorted.back() > 5) fail("task row index out of range 0..5");

  const int n = model.dof();
  const int m = task.dim();
  if (task.mode == TaskMode::Rows) {
    if (n - m != 1) {
      std::ostringstream os;
      os << "rows task needs n - m = 1, got n = " << n << ", m = " << m;
      fail(os.str());
    }
    return;
  }
  if (m != n) {
    std::ostringstream os;
    os << "induced task needs a square task Jacobian, got n = " << n << ", m = " << m;
    fail(os.str());
  }
  if (!task.direction.allFinite()) fail("induced direction is not finite");
  for (int i = 0; i < 6; ++i) {
    if (task.direction[i] != 0.0 && std::find(task.rows.begin(), task.rows.end(), i) == task.rows.end())
      fail("induced direction has a component outside the task rows");
  }
  if (task.direction.norm() <= 1e-12)
    throw Error(ErrorKind::DegenerateDirection, "induced direction has zero norm");
}

}  // namespace smm
