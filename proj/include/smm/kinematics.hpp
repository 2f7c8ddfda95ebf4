#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "smm/chain.hpp"

namespace smm {

template <typename Scalar>
struct Pose {
  Vec3<Scalar> position = Vec3<Scalar>::Zero();
  Mat3<Scalar> rotation = Mat3<Scalar>::Identity();
};

using Posed = Pose<double>;

namespace detail {

template <typename Scalar>
struct ChainFrames {
  std::vector<Vec3<Scalar>> points;  // joint frame origins, base coordinates
  std::vector<Vec3<Scalar>> axes;    // joint axes, base coordinates
  Pose<Scalar> tip;
};

inline void check_dims(const ChainModel& model, Eigen::Index size) {
  if (size != model.dof())
    throw Error(ErrorKind::DimensionMismatch,
                "configuration has " + std::to_string(size) + " entries, chain has " +
                    std::to_string(model.dof()) + " joints");
}

template <typename Derived>
ChainFrames<typename Derived::Scalar> chain_frames(const ChainModel& model,
                                                   const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  check_dims(model, q.size());
  ChainFrames<Scalar> out;
  out.points.reserve(static_cast<std::size_t>(model.dof()));
  out.axes.reserve(static_cast<std::size_t>(model.dof()));

  Mat3<Scalar> rot = Mat3<Scalar>::Identity();
  Vec3<Scalar> pos = Vec3<Scalar>::Zero();
  for (int i = 0; i < model.dof(); ++i) {
    const auto& origin = model.origins()[static_cast<std::size_t>(i)];
    pos += rot * origin.translation().template cast<Scalar>();
    rot = rot * origin.linear().template cast<Scalar>();
    const Vec3<Scalar> axis = model.joint(i).axis.template cast<Scalar>();
    out.points.push_back(pos);
    out.axes.push_back(rot * axis);
    if (model.is_revolute(i)) {
      rot = rot * Eigen::AngleAxis<Scalar>(q[i], axis).toRotationMatrix();
    } else {
      pos += rot * axis * q[i];
    }
  }
  out.tip.position = pos + rot * model.tool().translation().template cast<Scalar>();
  out.tip.rotation = rot * model.tool().linear().template cast<Scalar>();
  return out;
}

}  // namespace detail

/// Forward kinematics: end-effector pose in the base frame.
template <typename Derived>
Pose<typename Derived::Scalar> fk(const ChainModel& model, const Eigen::MatrixBase<Derived>& q) {
  return detail::chain_frames(model, q).tip;
}

/// Geometric Jacobian, rows (vx, vy, vz, wx, wy, wz). In the tool frame both
/// blocks are expressed in end-effector coordinates.
template <typename Derived>
Jac<typename Derived::Scalar> jacobian(const ChainModel& model, const Eigen::MatrixBase<Derived>& q,
                                       Frame frame = Frame::Base) {
  using Scalar = typename Derived::Scalar;
  const auto frames = detail::chain_frames(model, q);
  Jac<Scalar> jac(6, model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    const auto& z = frames.axes[static_cast<std::size_t>(i)];
    if (model.is_revolute(i)) {
      jac.col(i).template head<3>() = z.cross(frames.tip.position - frames.points[static_cast<std::size_t>(i)]);
      jac.col(i).template tail<3>() = z;
    } else {
      jac.col(i).template head<3>() = z;
      jac.col(i).template tail<3>().setZero();
    }
  }
  if (frame == Frame::Tool) {
    const Mat3<Scalar> rt = frames.tip.rotation.transpose();
    jac.template topRows<3>() = rt * jac.template topRows<3>();
    jac.template bottomRows<3>() = rt * jac.template bottomRows<3>();
  }
  return jac;
}

/// Rotation vector (angle * axis, angle in [0, pi]) of a rotation matrix.
template <typename Scalar>
Vec3<Scalar> rotation_log(const Mat3<Scalar>& rot) {
  const Eigen::AngleAxis<Scalar> aa{Eigen::Quaternion<Scalar>(rot).normalized()};
  Scalar angle = aa.angle();
  Vec3<Scalar> axis = aa.axis();
  if (angle > Scalar(std::numbers::pi)) {
    angle = Scalar(2.0 * std::numbers::pi) - angle;
    axis = -axis;
  }
  return axis * angle;
}

/// Pose difference: (b.p - a.p ; log(a.R^T b.R)), the rotation vector in a's frame.
template <typename Scalar>
Vec6<Scalar> pose_error(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  Vec6<Scalar> e;
  e.template head<3>() = b.position - a.position;
  e.template tail<3>() = rotation_log<Scalar>(a.rotation.transpose() * b.rotation);
  return e;
}

/// Same as pose_error but with the rotation vector expressed in the base frame,
/// so its components line up with base-frame Jacobian rows.
template <typename Scalar>
Vec6<Scalar> pose_error_base(const Pose<Scalar>& a, const Pose<Scalar>& b) {
  Vec6<Scalar> e = pose_error(a, b);
  e.template tail<3>() = a.rotation * e.template tail<3>();
  return e;
}

/// Angle between a body-fixed axis as carried by two orientations.
template <typename Scalar>
Scalar axis_deflection(const Pose<Scalar>& a, const Pose<Scalar>& b, const Vec3<Scalar>& axis) {
  const Vec3<Scalar> va = a.rotation * axis;
  const Vec3<Scalar> vb = b.rotation * axis;
  // atan2 form of arccos(<va, vb>); it stays accurate for tiny angles.
  using std::atan2;
  return atan2(va.cross(vb).norm(), va.dot(vb));
}

template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  using std::remainder;
  return remainder(a, Scalar(2.0 * std::numbers::pi));
}

/// Joint-space difference b - a with revolute entries wrapped to [-pi, pi].
template <typename DerivedA, typename DerivedB>
Vec<typename DerivedA::Scalar> joint_difference(const ChainModel& model,
                                                const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedB>& b) {
  detail::check_dims(model, a.size());
  detail::check_dims(model, b.size());
  Vec<typename DerivedA::Scalar> d = b - a;
  for (int i = 0; i < model.dof(); ++i)
    if (model.is_revolute(i)) d[i] = wrap_angle(d[i]);
  return d;
}

/// Wrapped joint metric: revolute differences modulo 2 pi, prismatic raw.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar joint_distance(const ChainModel& model, const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  return joint_difference(model, a, b).norm();
}

}  // namespace smm
