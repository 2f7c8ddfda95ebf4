#include <filesystem>
#include <numbers>

#include "smm/chain.hpp"

namespace smm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

JointSpec limited(JointSpec j, double lo, double hi) {
  j.lo = lo;
  j.hi = hi;
  return j;
}

// Planar revolute chain about the base z-axis; joint i sits at the tip of
// link i - 1 and the tool frame at the tip of the last link.
ChainModel planar_revolute(std::string name, const std::vector<double>& lengths) {
  std::vector<JointSpec> joints;
  double offset = 0.0;
  for (double len : lengths) {
    joints.push_back(JointSpec::revolute({offset, 0.0, 0.0}));
    offset = len;
  }
  return ChainModel(std::move(name), std::move(joints), {offset, 0.0, 0.0});
}

// Generic spatial arms. Every joint turns about its local z-axis and the
// frame changes live in the origin roll angles. The offsets are round
// numbers in the size class of a light collaborative arm; they are not any
// vendor's published geometry.
std::vector<JointSpec> arm6_joints() {
  const double h = kPi / 2.0;
  return {
      limited(JointSpec::revolute({0.0, 0.0, 0.27}), -kTwoPi, kTwoPi),
      limited(JointSpec::revolute({0.0, 0.0, 0.0}, {-h, 0.0, 0.0}), -2.0, 2.0),
      limited(JointSpec::revolute({0.05, -0.29, 0.0}), -3.9, 0.2),
      limited(JointSpec::revolute({0.08, 0.34, 0.0}, {-h, 0.0, 0.0}), -kTwoPi, kTwoPi),
      limited(JointSpec::revolute({0.0, 0.0, 0.0}, {h, 0.0, 0.0}), -1.7, kPi),
      limited(JointSpec::revolute({0.08, 0.10, 0.0}, {-h, 0.0, 0.0}), -kTwoPi, kTwoPi),
  };
}

std::vector<JointSpec> arm7_joints() {
  const double h = kPi / 2.0;
  return {
      limited(JointSpec::revolute({0.0, 0.0, 0.27}), -kTwoPi, kTwoPi),
      limited(JointSpec::revolute({0.0, 0.0, 0.0}, {-h, 0.0, 0.0}), -2.0, 2.0),
      limited(JointSpec::revolute({0.0, -0.29, 0.0}, {h, 0.0, 0.0}), -kTwoPi, kTwoPi),
      limited(JointSpec::revolute({0.05, 0.0, 0.0}, {h, 0.0, 0.0}), -0.2, 3.9),
      limited(JointSpec::revolute({0.08, -0.34, 0.0}, {h, 0.0, 0.0}), -kTwoPi, kTwoPi),
      limited(JointSpec::revolute({0.0, 0.0, 0.0}, {h, 0.0, 0.0}), -1.7, kPi),
      limited(JointSpec::revolute({0.08, 0.10, 0.0}, {-h, 0.0, 0.0}), -kTwoPi, kTwoPi),
  };
}

}  // namespace

std::vector<ModelAndTask> builtin_models() {
  std::vector<ModelAndTask> out;

  out.push_back({planar_revolute("RRR", {1.0, 1.0, 1.0}), TaskSpec::planar()});
  out.push_back({ChainModel("arm7", arm7_joints()), TaskSpec::full_pose()});

  Vector6d u_line = Vector6d::Zero();
  u_line << 1.0, 0.5, 0.0, 0.0, 0.0, 0.0;
  out.push_back({planar_revolute("RR", {1.0, 1.0}),
                 TaskSpec::induced(u_line, Frame::Base, {Vx, Vy})});

  Vector6d u_yaw = Vector6d::Zero();
  u_yaw[Wy] = 1.0;
  out.push_back({ChainModel("arm6", arm6_joints()), TaskSpec::induced(u_yaw, Frame::Tool)});

  {
    std::vector<JointSpec> joints{JointSpec::prismatic({0.0, 0.0, 0.0}, Vector3d::UnitX()),
                                  JointSpec::revolute({0.0, 0.0, 0.0}),
                                  JointSpec::revolute({1.0, 0.0, 0.0})};
    out.push_back({ChainModel("PRR", std::move(joints), {1.0, 0.0, 0.0}), TaskSpec::planar()});
  }

  {
    std::vector<JointSpec> joints{JointSpec::prismatic({0.0, 0.0, 0.0}, Vector3d::UnitY())};
    for (auto& j : arm6_joints()) joints.push_back(j);
    out.push_back({ChainModel("rail6", std::move(joints)), TaskSpec::full_pose()});
  }

  out.push_back({planar_revolute("RRR-0.9-0.8", {1.0, 0.9, 0.8}), TaskSpec::planar()});
  return out;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& m : builtin_models()) names.push_back(m.model.name());
  return names;
}

ModelAndTask resolve_model(const std::string& name_or_path) {
  for (auto& m : builtin_models())
    if (m.model.name() == name_or_path) return m;
  if (std::filesystem::exists(name_or_path)) return load_chain(name_or_path);
  throw Error(ErrorKind::Parse, "'" + name_or_path + "' is neither a builtin model nor a chain file");
}

}  // namespace smm
