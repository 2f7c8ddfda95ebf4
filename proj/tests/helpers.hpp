#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "smm/chain.hpp"
#include "smm/kinematics.hpp"

namespace smm::test {

inline constexpr double pi = std::numbers::pi;

inline double deg(double d) { return d * pi / 180.0; }

inline ModelAndTask builtin(const std::string& name) { return resolve_model(name); }

// Planar chain endpoint by accumulating link angles as unit complex numbers.
inline std::complex<double> planar_tip(const std::vector<double>& lengths, const VectorXd& q) {
  std::complex<double> p = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    theta += q[static_cast<Eigen::Index>(i)];
    p += lengths[i] * std::polar(1.0, theta);
  }
  return p;
}

inline VectorXd uniform_in_limits(const ChainModel& model, std::mt19937_64& rng) {
  VectorXd q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    std::uniform_real_distribution<double> d(model.joint(i).lo, model.joint(i).hi);
    q[i] = d(rng);
  }
  return q;
}

}  // namespace smm::test
