#include "doctest.h"
#include "helpers.hpp"

using namespace smm;
using namespace smm::test;

namespace {

// Shepperd's method, written out independently of Eigen's quaternion type.
Eigen::Vector4d quat_wxyz(const Matrix3d& r) {
  const double tr = r.trace();
  Eigen::Vector4d q;
  if (tr > 0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s;
  }
  return q.normalized();
}

Vector3d quat_log(const Matrix3d& r) {
  Eigen::Vector4d q = quat_wxyz(r);
  if (q[0] < 0) q = -q;
  const Vector3d v = q.tail<3>();
  const double vn = v.norm();
  if (vn < 1e-300) return Vector3d::Zero();
  return 2.0 * std::atan2(vn, q[0]) * v / vn;
}

Posed random_pose(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Posed p;
  p.position = Vector3d(n(rng), n(rng), n(rng));
  const Vector3d axis = Vector3d(n(rng), n(rng), n(rng)).normalized();
  std::uniform_real_distribution<double> ang(0.0, 3.1);
  p.rotation = Eigen::AngleAxisd(ang(rng), axis).toRotationMatrix();
  return p;
}

Vector3d vee_skew(const Matrix3d& m) {
  const Matrix3d s = 0.5 * (m - m.transpose());
  return Vector3d(s(2, 1), s(0, 2), s(1, 0));
}

}  // namespace

TEST_CASE("fk of straight RR") {
  CHECK((fk(builtin("RR").model, Eigen::Vector2d::Zero()).position - Vector3d(2, 0, 0)).norm() < 1e-15);
}

TEST_CASE("fk of RRR matches complex angle accumulation") {
  const auto model = builtin("RRR").model;
  VectorXd q(3);
  q << -pi / 3, pi / 2, 5 * pi / 6;
  const auto z = planar_tip({1, 1, 1}, q);
  CHECK((fk(model, q).position - Vector3d(z.real(), z.imag(), 0)).norm() < 1e-14);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const VectorXd r = uniform_in_limits(model, rng);
    const auto w = planar_tip({1, 1, 1}, r);
    CHECK((fk(model, r).position - Vector3d(w.real(), w.imag(), 0)).norm() < 1e-13);
  }
}

TEST_CASE("fk of PRR") {
  VectorXd q(3);
  q << -0.5, 0.0, pi / 4;
  const Vector3d expect(-0.5 + 1 + std::cos(pi / 4), std::sin(pi / 4), 0);
  CHECK((fk(builtin("PRR").model, q).position - expect).norm() < 1e-15);
}

TEST_CASE("RR planar Jacobian at (0, pi/2)") {
  const auto j = jacobian(builtin("RR").model, Eigen::Vector2d(0, pi / 2), Frame::Base);
  Eigen::Matrix2d expect;
  expect << -1, -1, 1, 0;
  CHECK((j.topRows<2>() - expect).norm() < 1e-14);
}

TEST_CASE("prismatic column is a pure translation") {
  std::mt19937_64 rng(5);
  const auto model = builtin("PRR").model;
  for (int k = 0; k < 5; ++k) {
    const auto j = jacobian(model, uniform_in_limits(model, rng), Frame::Base);
    Vector6d e1 = Vector6d::Zero();
    e1[0] = 1;
    CHECK((j.col(0) - e1).norm() < 1e-15);
  }
}

TEST_CASE("Jacobian columns match finite differences on every builtin") {
  std::mt19937_64 rng(7);
  const double eps = 1e-7;
  for (const auto& mt : builtin_models()) {
    CAPTURE(mt.model.name());
    for (int k = 0; k < 5; ++k) {
      const VectorXd q = uniform_in_limits(mt.model, rng);
      const auto base = fk(mt.model, q);
      const auto jb = jacobian(mt.model, q, Frame::Base);
      const auto jt = jacobian(mt.model, q, Frame::Tool);
      for (int i = 0; i < mt.model.dof(); ++i) {
        VectorXd qe = q;
        qe[i] += eps;
        const auto moved = fk(mt.model, qe);
        Vector6d fd;
        fd.head<3>() = (moved.position - base.position) / eps;
        fd.tail<3>() = vee_skew((moved.rotation - base.rotation) * base.rotation.transpose()) / eps;
        CHECK((jb.col(i) - fd).norm() < 1e-5);

        Vector6d fd_tool;
        fd_tool.head<3>() = base.rotation.transpose() * fd.head<3>();
        fd_tool.tail<3>() = vee_skew(base.rotation.transpose() * (moved.rotation - base.rotation)) / eps;
        CHECK((jt.col(i) - fd_tool).norm() < 1e-5);
      }
    }
  }
}

TEST_CASE("wrong configuration length is a dimension mismatch") {
  const auto model = builtin("RRR").model;
  try {
    fk(model, Eigen::Vector2d::Zero());
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  CHECK_THROWS_AS(jacobian(model, VectorXd::Zero(4), Frame::Base), Error);
}

TEST_CASE("pose_error basics") {
  Posed a;
  a.position = Vector3d(0.1, 0.2, 0.3);
  a.rotation = rpy_to_matrix(Vector3d(0.4, -0.2, 1.0));
  CHECK(pose_error(a, a).norm() == 0.0);

  Posed b = a;
  b.rotation = a.rotation * Eigen::AngleAxisd(0.3, Vector3d::UnitZ()).toRotationMatrix();
  Vector6d expect = Vector6d::Zero();
  expect[5] = 0.3;
  CHECK((pose_error(a, b) - expect).norm() < 1e-15);
  CHECK(pose_error(a, b).norm() == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("pose_error matches a quaternion logarithm") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_pose(rng);
    const auto b = random_pose(rng);
    const Vector6d e = pose_error(a, b);
    CHECK((e.head<3>() - (b.position - a.position)).norm() < 1e-15);
    CHECK((e.tail<3>() - quat_log(a.rotation.transpose() * b.rotation)).norm() < 1e-12);
    CHECK(e.tail<3>().norm() <= pi + 1e-12);
  }
}

TEST_CASE("angular error is invariant to a common left rotation") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    auto a = random_pose(rng);
    auto b = random_pose(rng);
    const Matrix3d g = random_pose(rng).rotation;
    const Vector3d before = pose_error(a, b).tail<3>();
    a.rotation = g * a.rotation;
    b.rotation = g * b.rotation;
    CHECK((pose_error(a, b).tail<3>() - before).norm() < 1e-12);
  }
}

TEST_CASE("axis deflection") {
  Posed a;
  a.position.setZero();
  a.rotation = rpy_to_matrix(Vector3d(0.2, 0.1, -0.3));
  CHECK(axis_deflection(a, a, Vector3d::UnitY().eval()) == 0.0);

  Posed b = a;
  b.rotation = a.rotation * Eigen::AngleAxisd(1.1, Vector3d::UnitY()).toRotationMatrix();
  CHECK(axis_deflection(a, b, Vector3d::UnitY().eval()) < 1e-15);

  b.rotation = a.rotation * Eigen::AngleAxisd(pi / 2, Vector3d::UnitZ()).toRotationMatrix();
  CHECK(axis_deflection(a, b, Vector3d::UnitY().eval()) == doctest::Approx(pi / 2).epsilon(1e-14));
}

TEST_CASE("joint metric wraps revolute coordinates only") {
  const auto prr = builtin("PRR").model;
  VectorXd a(3), b(3);
  a << 0.0, 0.0, 0.0;
  b << 0.0, 2 * pi, -2 * pi;
  CHECK(joint_distance(prr, a, b) < 1e-15);
  b << 2 * pi, 0.0, 0.0;
  CHECK(joint_distance(prr, a, b) == doctest::Approx(2 * pi));
  CHECK(wrap_angle(3 * pi / 2) == doctest::Approx(-pi / 2));
}

TEST_CASE("kinematics instantiate for long double") {
  const auto model = builtin("RRR").model;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> q(3);
  q << -1.0L, 0.5L, 0.25L;
  const auto p = fk(model, q);
  const auto z = planar_tip({1, 1, 1}, q.cast<double>());
  CHECK(std::abs(static_cast<double>(p.position.x()) - z.real()) < 1e-14);
  CHECK(jacobian(model, q, Frame::Base).cols() == 3);
}
