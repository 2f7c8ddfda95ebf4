#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "smm/error.hpp"
#include "smm/types.hpp"

namespace smm {

enum class JointKind { Revolute, Prismatic };

/// One joint: a fixed origin transform from the parent frame followed by
/// motion about (revolute) or along (prismatic) a unit axis in the joint frame.
struct JointSpec {
  JointKind kind = JointKind::Revolute;
  Vector3d xyz = Vector3d::Zero();
  Vector3d rpy = Vector3d::Zero();  // roll-pitch-yaw, R = Rz(y) Ry(p) Rx(r)
  Vector3d axis = Vector3d::UnitZ();
  double lo = 0.0;
  double hi = 0.0;

  Eigen::Isometry3d origin() const;
  bool within_limits(double value) const { return value >= lo && value <= hi; }

  static JointSpec revolute(const Vector3d& xyz, const Vector3d& rpy = Vector3d::Zero(),
                            const Vector3d& axis = Vector3d::UnitZ());
  static JointSpec prismatic(const Vector3d& xyz, const Vector3d& axis,
                             const Vector3d& rpy = Vector3d::Zero());

  bool operator==(const JointSpec&) const = default;
};

Eigen::Matrix3d rpy_to_matrix(const Vector3d& rpy);
Vector3d matrix_to_rpy(const Matrix3d& rot);

/// Immutable serial chain. Construction validates every joint.
class ChainModel {
 public:
  ChainModel(std::string name, std::vector<JointSpec> joints,
             const Vector3d& tool_xyz = Vector3d::Zero(),
             const Vector3d& tool_rpy = Vector3d::Zero());

  const std::string& name() const { return name_; }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const JointSpec& joint(int i) const { return joints_[static_cast<std::size_t>(i)]; }
  int dof() const { return static_cast<int>(joints_.size()); }

  const Vector3d& tool_xyz() const { return tool_xyz_; }
  const Vector3d& tool_rpy() const { return tool_rpy_; }
  const Eigen::Isometry3d& tool() const { return tool_; }
  const std::vector<Eigen::Isometry3d>& origins() const { return origins_; }

  bool is_revolute(int i) const { return joint(i).kind == JointKind::Revolute; }
  bool within_limits(const JointConfig& q) const;

  bool operator==(const ChainModel& other) const {
    return name_ == other.name_ && joints_ == other.joints_ &&
           tool_xyz_ == other.tool_xyz_ && tool_rpy_ == other.tool_rpy_;
  }

 private:
  std::string name_;
  std::vector<JointSpec> joints_;
  Vector3d tool_xyz_;
  Vector3d tool_rpy_;
  Eigen::Isometry3d tool_;
  std::vector<Eigen::Isometry3d> origins_;
};

enum class TaskMode { Rows, Induced };

/// Twist component indices, rows ordered (vx, vy, vz, wx, wy, wz).
enum Twist : int { Vx = 0, Vy = 1, Vz = 2, Wx = 3, Wy = 4, Wz = 5 };

/// Which twist components the task constrains.
///
/// In rows mode the task is the selected rows of the Jacobian and the chain
/// must have exactly one more joint than selected rows. In induced mode the
/// selected rows span a square task Jacobian and `direction` is the symmetry
/// direction u (zero outside the selected rows) that is projected out.
struct TaskSpec {
  TaskMode mode = TaskMode::Rows;
  std::vector<int> rows{Vx, Vy, Vz, Wx, Wy, Wz};
  Vector6d direction = Vector6d::Zero();
  Frame frame = Frame::Base;

  int dim() const { return static_cast<int>(rows.size()); }

  /// Restricts a 6-vector to the selected rows.
  VectorXd restrict(const Vector6d& twist) const;

  static TaskSpec select(std::vector<int> rows);
  static TaskSpec full_pose() { return select({Vx, Vy, Vz, Wx, Wy, Wz}); }
  static TaskSpec planar() { return select({Vx, Vy}); }
  static TaskSpec induced(const Vector6d& u, Frame frame,
                          std::vector<int> rows = {Vx, Vy, Vz, Wx, Wy, Wz});

  bool operator==(const TaskSpec&) const = default;
};

/// Throws ValidationError when the task cannot pair with the chain as a
/// redundancy-degree-1 problem.
void validate_task(const ChainModel& model, const TaskSpec& task);

struct ModelAndTask {
  ChainModel model;
  TaskSpec task;
};

/// Reads a chain file (JSON). Throws ParseError or ValidationError.
ModelAndTask load_chain(const std::string& path);
ModelAndTask parse_chain(std::string_view text);
std::string serialize_chain(const ChainModel& model, const TaskSpec& task);
void save_chain(const std::string& path, const ChainModel& model, const TaskSpec& task);

/// The six reference cases plus the RRR link-length variant used for
/// component search.
std::vector<ModelAndTask> builtin_models();

/// Finds a builtin by name, or loads a chain file when `name_or_path` is not
/// a builtin name.
ModelAndTask resolve_model(const std::string& name_or_path);
std::vector<std::string> builtin_names();

}  // namespace smm
