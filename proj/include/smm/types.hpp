#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace smm {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat6 = Eigen::Matrix<Scalar, 6, 6>;
template <typename Scalar>
using Jac = Eigen::Matrix<Scalar, 6, Eigen::Dynamic>;

using VectorXd = Vec<double>;
using MatrixXd = Mat<double>;
using Vector3d = Vec3<double>;
using Vector6d = Vec6<double>;
using Matrix3d = Mat3<double>;
using Matrix6d = Mat6<double>;

// Points q in the configuration space and tangent vectors at q share one
// representation: radians for revolute entries, meters for prismatic ones.
using JointConfig = VectorXd;
using TangentVector = VectorXd;

enum class Frame { Base, Tool };

}  // namespace smm
