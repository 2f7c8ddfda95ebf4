#include "smm/ik.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "smm/ivp.hpp"

namespace smm {

void IkConfig::validate() const {
  if (!(damping > 0.0)) throw Error(ErrorKind::Validation, "IK damping must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::Validation, "IK tolerance must be positive");
  if (max_iters < 1) throw Error(ErrorKind::Validation, "IK max_iters must be at least 1");
  if (!(max_error_step > 0.0)) throw Error(ErrorKind::Validation, "IK max_error_step must be positive");
}

JointConfig solve_ik(const ChainModel& model, const TaskSpec& task, const Posed& target,
                     const JointConfig& q_init, const IkConfig& cfg) {
  cfg.validate();
  detail::check_dims(model, q_init.size());
  if (!target.position.allFinite() || !target.rotation.allFinite())
    throw Error(ErrorKind::Validation, "IK target is not finite");

  JointConfig q = q_init;
  const double lambda2 = cfg.damping * cfg.damping;
  double err = 0.0;
  for (int it = 0; it <= cfg.max_iters; ++it) {
    VectorXd e = task_residual(model, task, target, q);
    err = e.norm();
    if (err < cfg.tol) return q;
    if (it == cfg.max_iters || !std::isfinite(err)) break;
    if (err > cfg.max_error_step) e *= cfg.max_error_step / err;
    const MatrixXd jac = task_jacobian_at(model, task, q);
    const MatrixXd jjt = jac * jac.transpose() + lambda2 * MatrixXd::Identity(jac.rows(), jac.rows());
    q += jac.transpose() * jjt.ldlt().solve(e);
  }
  std::ostringstream os;
  os << "IK did not converge in " << cfg.max_iters << " iterations (residual " << err << ")";
  throw Error(ErrorKind::NoConvergence, os.str());
}

JointConfig random_config(const ChainModel& model, std::mt19937_64& rng) {
  JointConfig q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    std::uniform_real_distribution<double> dist(model.joint(i).lo, model.joint(i).hi);
    q[i] = dist(rng);
  }
  return q;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

SeedSet random_restart_seeds(const ChainModel& model, const TaskSpec& task, const Posed& target, int count,
                             const IkConfig& cfg) {
  if (count < 1) throw Error(ErrorKind::Validation, "restart count must be at least 1");
  SeedSet out;
  for (int i = 0; i < count; ++i) {
    auto rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(i));
    try {
      out.configs.push_back(solve_ik(model, task, target, random_config(model, rng), cfg));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence) throw;
      ++out.failures;
    }
  }
  if (out.configs.empty())
    throw Error(ErrorKind::AllFailed, "none of " + std::to_string(count) + " IK restarts converged");
  return out;
}

Vector3d planar_rrr_lengths(const ChainModel& model) {
  auto fail = [] { throw Error(ErrorKind::Validation, "elbow toggling needs a planar 3R chain"); };
  if (model.dof() != 3) fail();
  for (int i = 0; i < 3; ++i) {
    const auto& j = model.joint(i);
    if (j.kind != JointKind::Revolute || j.axis != Vector3d::UnitZ() || !j.rpy.isZero()) fail();
    if (j.xyz.y() != 0.0 || j.xyz.z() != 0.0) fail();
  }
  if (model.joint(0).xyz.x() != 0.0 || !model.tool_rpy().isZero() || model.tool_xyz().y() != 0.0 ||
      model.tool_xyz().z() != 0.0)
    fail();
  return {model.joint(1).xyz.x(), model.joint(2).xyz.x(), model.tool_xyz().x()};
}

SeedSet toggle_seeds_rrr(const ChainModel& model, const JointConfig& q0) {
  const Vector3d len = planar_rrr_lengths(model);
  detail::check_dims(model, q0.size());
  constexpr double kDegenerate = 1e-9;
  if (std::abs(std::sin(q0[1])) < kDegenerate)
    throw Error(ErrorKind::DegenerateToggle, "elbow 1 is straight or folded; both branches coincide");
  if (std::abs(std::sin(q0[2])) < kDegenerate)
    throw Error(ErrorKind::DegenerateToggle, "elbow 2 is straight or folded; both branches coincide");

  using C = std::complex<double>;
  const double a1 = q0[0];
  const double a2 = a1 + q0[1];
  const double a3 = a2 + q0[2];
  const C elbow1 = std::polar(len[0], a1);
  const C wrist = elbow1 + std::polar(len[1], a2);
  const C tip = wrist + std::polar(len[2], a3);

  SeedSet out;
  out.configs.push_back(q0);

  // Links 1-2 mirrored across the base-to-wrist chord.
  {
    const double chord = std::arg(wrist);
    const double b1 = 2.0 * chord - a1;
    const double b2 = 2.0 * chord - a2;
    JointConfig q(3);
    q << wrap_angle(b1), wrap_angle(b2 - b1), wrap_angle(a3 - b2);
    out.configs.push_back(q);
  }
  // Links 2-3 mirrored across the elbow-to-tip chord.
  {
    const double chord = std::arg(tip - elbow1);
    const double b2 = 2.0 * chord - a2;
    const double b3 = 2.0 * chord - a3;
    JointConfig q(3);
    q << q0[0], wrap_angle(b2 - a1), wrap_angle(b3 - b2);
    out.configs.push_back(q);
  }
  return out;
}

}  // namespace smm
