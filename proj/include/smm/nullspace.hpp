#pragma once

#include <cmath>
#include <limits>

#include "smm/chain.hpp"

namespace smm {

/// Relative singular value cutoff, sigma_tol = kSigmaRelTol * sigma_max.
inline constexpr double kSigmaRelTol = 1e-8;

template <typename Scalar>
struct KernelResult {
  Vec<Scalar> direction;
  Scalar sigma_min{};
  Scalar sigma_second{};
  Scalar sigma_max{};
};

/// Orthogonal projector I - u u^T / |u|^2 that removes the direction u.
template <typename Derived>
Mat<typename Derived::Scalar> projection(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  const Scalar norm = u.norm();
  if (!(norm >= Scalar(1e-12)))
    throw Error(ErrorKind::DegenerateDirection, "redundancy direction has zero norm");
  const Vec<Scalar> unit = u / norm;
  return Mat<Scalar>::Identity(u.size(), u.size()) - unit * unit.transpose();
}

/// Task Jacobian from a full 6 x n Jacobian: the selected rows, then the
/// projector P = I - u u^T in induced mode. The caller supplies J in the
/// task's frame.
template <typename Derived>
Mat<typename Derived::Scalar> task_jacobian(const Eigen::MatrixBase<Derived>& jac, const TaskSpec& task) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> rows(task.dim(), jac.cols());
  for (int i = 0; i < task.dim(); ++i) rows.row(i) = jac.row(task.rows[static_cast<std::size_t>(i)]);
  if (task.mode == TaskMode::Rows) return rows;
  const Vec<Scalar> u = task.restrict(task.direction).template cast<Scalar>();
  return projection(u) * rows;
}

/// Unit kernel vector of a matrix with a one-dimensional null space, via SVD.
/// Wide matrices count their structural zero singular values.
template <typename Derived>
KernelResult<typename Derived::Scalar> kernel(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.cols();
  const Eigen::Index m = a.rows();
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "kernel of a matrix without columns");
  if (!a.allFinite()) throw Error(ErrorKind::NumericalFailure, "non-finite matrix entries");

  Eigen::JacobiSVD<Mat<Scalar>> svd(a, Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "SVD failed");

  // All n singular values, descending, padded with structural zeros.
  Vec<Scalar> sv = Vec<Scalar>::Zero(n);
  sv.head(std::min(m, n)) = svd.singularValues();

  KernelResult<Scalar> out;
  out.direction = svd.matrixV().col(n - 1);
  out.direction.normalize();
  out.sigma_min = sv[n - 1];
  out.sigma_second = n >= 2 ? sv[n - 2] : std::numeric_limits<Scalar>::infinity();
  out.sigma_max = sv[0];

  const Scalar tol = Scalar(kSigmaRelTol) * sv[0];
  if (!(sv[0] > Scalar(0)) || out.sigma_second < tol)
    throw Error(ErrorKind::RankDeficient, "null space has dimension greater than one");
  return out;
}

/// Moore-Penrose pseudo-inverse; singular values below sigma_tol are dropped.
template <typename Derived>
Mat<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (!a.allFinite()) throw Error(ErrorKind::NumericalFailure, "non-finite matrix entries");
  Eigen::JacobiSVD<Mat<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "SVD failed");
  const auto& sv = svd.singularValues();
  Vec<Scalar> inv = Vec<Scalar>::Zero(sv.size());
  if (sv.size() > 0) {
    const Scalar tol = Scalar(kSigmaRelTol) * sv[0];
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol && sv[i] > Scalar(0)) inv[i] = Scalar(1) / sv[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Kernel of P J for P = I - u u^T, taken as normalize(pinv(J) u) since
/// ker(P) = span{u}. J must be square and nonsingular within sigma_tol.
template <typename DerivedJ, typename DerivedU>
KernelResult<typename DerivedJ::Scalar> induced_kernel(const Eigen::MatrixBase<DerivedJ>& jac,
                                                       const Eigen::MatrixBase<DerivedU>& u) {
  using Scalar = typename DerivedJ::Scalar;
  if (jac.rows() != u.size())
    throw Error(ErrorKind::DimensionMismatch, "direction length does not match Jacobian rows");
  const Scalar unorm = u.norm();
  if (!(unorm >= Scalar(1e-12)))
    throw Error(ErrorKind::DegenerateDirection, "redundancy direction has zero norm");
  if (!jac.allFinite()) throw Error(ErrorKind::NumericalFailure, "non-finite matrix entries");

  Eigen::JacobiSVD<Mat<Scalar>> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "SVD failed");
  const Vec<Scalar> sv = svd.singularValues();
  const Eigen::Index k = sv.size();

  KernelResult<Scalar> out;
  out.sigma_min = sv[k - 1];
  out.sigma_second = k >= 2 ? sv[k - 2] : std::numeric_limits<Scalar>::infinity();
  out.sigma_max = sv[0];
  const Scalar tol = Scalar(kSigmaRelTol) * sv[0];
  if (jac.rows() < jac.cols() || !(sv[0] > Scalar(0)) || out.sigma_min < tol)
    throw Error(ErrorKind::RankDeficient, "task Jacobian is rank deficient");

  const Vec<Scalar> unit = u / unorm;
  const Vec<Scalar> n = svd.matrixV() * (svd.matrixU().transpose() * unit).cwiseQuotient(sv);
  const Scalar nnorm = n.norm();
  if (!(nnorm >= Scalar(1e-10)))
    throw Error(ErrorKind::DegenerateDirection, "redundancy direction is not reachable");
  out.direction = n / nnorm;
  return out;
}

}  // namespace smm
