#include "doctest.h"
#include "helpers.hpp"
#include "smm/ivp.hpp"
#include "smm/search.hpp"

using namespace smm;
using namespace smm::test;

namespace {

VectorXd e(int n, int i) { return VectorXd::Unit(n, i); }

VectorXd rrr_seed() {
  VectorXd q(3);
  q << -pi / 3, pi / 2, 5 * pi / 6;
  return q;
}

double max_position_drift(const ChainModel& model, const Trace& t) {
  const Vector3d p0 = fk(model, t.seed()).position;
  double worst = 0;
  for (const auto& q : t.samples) worst = std::max(worst, (fk(model, q).position - p0).norm());
  return worst;
}

}  // namespace

TEST_CASE("regularization sign rule") {
  CHECK(regularize(e(3, 2), e(3, 2)) == e(3, 2));
  CHECK(regularize(e(3, 2), -e(3, 2)) == -e(3, 2));
  // strict inequality: orthogonal reference picks the negated kernel
  CHECK(regularize(e(3, 2), e(3, 0)) == -e(3, 2));
}

TEST_CASE("tableaus are consistent") {
  for (const auto& name : ButcherTableau::names()) {
    const auto t = ButcherTableau::by_name(name);
    CAPTURE(name);
    CHECK_NOTHROW(t.validate());
    CHECK(std::abs(t.b.sum() - 1.0) < 1e-14);
  }
  CHECK(ButcherTableau::dormand_prince5().stages() == 6);
  CHECK(ButcherTableau::dormand_prince5().order == 5);
  auto bad = ButcherTableau::classic_rk4();
  bad.b[0] += 1e-6;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ButcherTableau::classic_rk4();
  bad.a(0, 1) = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(ButcherTableau::by_name("rk45-adaptive"), Error);
}

TEST_CASE("constant field advances by h along it") {
  const Field constant = [](const JointConfig& q, const VectorXd&) { return e(q.size(), 0); };
  for (const auto& name : {"dopri5", "cashkarp5"}) {
    IntegratorConfig cfg;
    cfg.tableau = ButcherTableau::by_name(name);
    const VectorXd q(Eigen::Vector3d(0.3, -0.2, 1.0));
    CHECK((rk_step(constant, q, e(3, 0), cfg) - (q + cfg.h * e(3, 0))).norm() < 1e-16);
  }
}

TEST_CASE("every stage sees the same reference") {
  const VectorXd ref = Eigen::Vector3d(0.6, 0.0, 0.8);
  int calls = 0;
  const Field probe = [&](const JointConfig& q, const VectorXd& r) {
    ++calls;
    CHECK(r == ref);
    return e(q.size(), 1);
  };
  rk_step(probe, VectorXd::Zero(3), ref, IntegratorConfig{});
  CHECK(calls == 6);
}

TEST_CASE("stage failure carries the stage index") {
  // Dormand-Prince nodes are 0, .2, .3, .8, 8/9, 1; with h = 0.05 the first
  // stage past 0.02 is index 3.
  const Field wall = [](const JointConfig& q, const VectorXd&) -> TangentVector {
    if (q[0] > 0.02) throw Error(ErrorKind::RankDeficient, "wall");
    return e(q.size(), 0);
  };
  try {
    rk_step(wall, VectorXd::Zero(2), e(2, 0), IntegratorConfig{});
    FAIL("expected a stage error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::RankDeficient);
    REQUIRE(err.stage().has_value());
    CHECK(*err.stage() == 3);
  }
}

TEST_CASE("RRR step has unit speed") {
  // The step is an arc of length h on a curved manifold, so the chord is
  // shorter by h^3 k^2 / 24 for path curvature k. k comes from a finite
  // difference of the unit field along itself.
  const auto mt = builtin("RRR");
  const VectorXd q0 = rrr_seed();
  const VectorXd ref = update_reference(mt.model, mt.task, q0, std::nullopt);
  const VectorXd q1 = rk_step(mt.model, mt.task, q0, ref, IntegratorConfig{});
  const double h = 0.05, eps = 1e-5;
  const VectorXd mid = 0.5 * (q0 + q1);
  const VectorXd g = regularized_field(mt.model, mt.task, mid, ref).velocity;
  const VectorXd g2 = regularized_field(mt.model, mt.task, mid + eps * g, ref).velocity;
  const double k = (g2 - g).norm() / eps;
  CHECK(std::abs((q1 - q0).norm() - (h - h * h * h * k * k / 24)) < 1e-7);
  CHECK(std::abs((q1 - q0).norm() - h) < 1e-3 * h);

  // Arc length of the same step resolved with many small steps.
  IntegratorConfig fine;
  fine.h = h / 500;
  VectorXd q = q0, r = ref;
  double arc = 0;
  for (int i = 0; i < 500; ++i) {
    const VectorXd next = rk_step(mt.model, mt.task, q, r, fine);
    arc += (next - q).norm();
    q = next;
    r = update_reference(mt.model, mt.task, q, r);
  }
  CHECK(std::abs(arc - h) < 1e-8);
  CHECK((q - q1).norm() < 1e-8);
}

TEST_CASE("reference update") {
  const auto mt = builtin("RRR");
  const VectorXd q0 = rrr_seed();
  const auto raw = task_kernel(mt.model, mt.task, q0).direction;
  CHECK(update_reference(mt.model, mt.task, q0, std::nullopt) == raw);
  CHECK((update_reference(mt.model, mt.task, q0, -raw) + raw).norm() == 0.0);
  const VectorXd once = update_reference(mt.model, mt.task, q0, -raw);
  CHECK(update_reference(mt.model, mt.task, q0, once) == once);
}

TEST_CASE("field is a unit kernel vector") {
  std::mt19937_64 rng(21);
  for (const auto& mt : builtin_models()) {
    for (int k = 0; k < 20; ++k) {
      const VectorXd q = uniform_in_limits(mt.model, rng);
      const VectorXd ref = VectorXd::Ones(mt.model.dof()).normalized();
      const auto f = regularized_field(mt.model, mt.task, q, ref);
      const MatrixXd j = task_jacobian_at(mt.model, mt.task, q);
      CHECK(std::abs(f.velocity.norm() - 1.0) < 1e-12);
      CHECK((j * f.velocity).norm() <= 1e-10 * j.norm());
      CHECK(f.velocity.dot(ref) > 0);
    }
  }
}

TEST_CASE("RRR traces close with nanometre drift") {
  const auto mt = builtin("RRR");
  VectorXd second(3);
  second << -5 * pi / 11, -2 * pi / 3, pi / 7;
  for (const VectorXd& q0 : {rrr_seed(), second}) {
    const Trace t = solve_smm_ivp(mt.model, mt.task, q0);
    CHECK(t.closed);
    CHECK(t.termination == Termination::Closed);
    CHECK(t.steps() >= 10);
    CHECK(max_position_drift(mt.model, t) <= 1e-9);
    CHECK(joint_distance(mt.model, t.samples.back(), q0) < t.h);
    CHECK(t.arc_length == doctest::Approx(t.steps() * t.h));
    for (std::size_t i = 1; i < t.samples.size(); ++i) {
      CHECK(t.refs[i].dot(t.refs[i - 1]) > 0);
      const double step = (t.samples[i] - t.samples[i - 1]).norm();
      CHECK(step <= 1.25 * t.h);
      CHECK(std::abs(step - t.h) < 1e-3 * t.h);
    }
  }
}

TEST_CASE("only the first RRR example winds a joint through a full turn") {
  const auto mt = builtin("RRR");
  VectorXd other(3);
  other << -5 * pi / 11, -2 * pi / 3, pi / 7;
  auto widest = [&](const VectorXd& q0) {
    const Trace t = solve_smm_ivp(mt.model, mt.task, q0);
    double span = 0;
    for (int j = 0; j < 3; ++j) {
      double lo = q0[j], hi = q0[j];
      for (const auto& q : t.samples) {
        lo = std::min(lo, q[j]);
        hi = std::max(hi, q[j]);
      }
      span = std::max(span, hi - lo);
    }
    return span;
  };
  CHECK(widest(rrr_seed()) >= 2 * pi - 0.1);
  CHECK(widest(other) < 2 * pi - 0.5);
}

TEST_CASE("arm7 trace keeps the full pose") {
  const auto mt = builtin("arm7");
  VectorXd q0(7);
  q0 << 0.43, 1.113, 5.098, 1.035, 2.348, 0.418, 4.468;
  const Trace t = solve_smm_ivp(mt.model, mt.task, q0);
  CHECK(t.closed);
  const auto p0 = fk(mt.model, q0);
  for (const auto& q : t.samples) CHECK(pose_error(p0, fk(mt.model, q)).norm() <= 1e-8);
}

TEST_CASE("reversed start traverses the same manifold") {
  const auto mt = builtin("RRR");
  const VectorXd q0 = rrr_seed();
  const Trace fwd = solve_smm_ivp(mt.model, mt.task, q0);
  const VectorXd raw = task_kernel(mt.model, mt.task, q0).direction;
  const Trace rev = solve_smm_ivp(mt.model, mt.task, q0, -raw, IntegratorConfig{});
  CHECK(rev.closed);
  CHECK(rev.samples[1].dot(raw) < q0.dot(raw));
  for (const auto& q : rev.samples) CHECK(point_to_set_distance(mt.model, q, fwd) <= 0.5 * fwd.h);
}

TEST_CASE("singular seed is rejected") {
  const auto mt = builtin("RRR");
  try {
    solve_smm_ivp(mt.model, mt.task, VectorXd::Zero(3));
    FAIL("expected SingularStart");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SingularStart);
  }
}

TEST_CASE("seed off the target pose is rejected") {
  const auto mt = builtin("RRR");
  Posed target = fk(mt.model, rrr_seed());
  target.position.x() += 1e-3;
  try {
    solve_smm_ivp(mt.model, mt.task, rrr_seed(), IntegratorConfig{}, target);
    FAIL("expected InvalidSeed");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::InvalidSeed);
  }
  target.position.x() -= 1e-3;
  CHECK_NOTHROW(solve_smm_ivp(mt.model, mt.task, rrr_seed(), IntegratorConfig{}, target));
}

TEST_CASE("step limit ends an open trace") {
  const auto mt = builtin("RRR");
  IntegratorConfig cfg;
  cfg.max_steps = 20;
  const Trace t = solve_smm_ivp(mt.model, mt.task, rrr_seed(), cfg);
  CHECK(!t.closed);
  CHECK(t.termination == Termination::StepLimit);
  CHECK(t.steps() == 20);
}

TEST_CASE("mid-trace singularity yields a bidirectional open trace") {
  // Line through the base at 30 degrees: the straightened elbow lies on it,
  // so the RR trace runs into the arm's boundary singularity.
  const auto model = builtin("RR").model;
  Vector6d u = Vector6d::Zero();
  u[Vx] = std::cos(pi / 6);
  u[Vy] = std::sin(pi / 6);
  const auto task = TaskSpec::induced(u, Frame::Base, {Vx, Vy});
  const double q2 = pi + 10 * 0.05 * 2 / std::sqrt(5.0);
  const Eigen::Vector2d q0(pi / 6 - q2 / 2, q2);

  const Trace t = solve_smm_ivp(model, task, q0);
  CHECK(!t.closed);
  CHECK(t.termination == Termination::Singular);
  CHECK(!t.note.empty());
  CHECK(t.seed_index > 0);
  CHECK(t.seed_index < t.samples.size() - 1);
  CHECK((t.seed() - VectorXd(q0)).norm() == 0.0);
  const Vector3d p0 = fk(model, q0).position;
  const Vector3d dir(u[Vx], u[Vy], 0);
  for (const auto& q : t.samples) {
    const Vector3d d = fk(model, q).position - p0;
    CHECK((d - d.dot(dir) * dir).norm() <= 1e-7);
  }
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.refs[i].dot(t.refs[i - 1]) > 0);
}

TEST_CASE("baseline comparator") {
  const auto mt = builtin("RRR");
  const VectorXd q0 = rrr_seed();
  const Posed target = fk(mt.model, q0);
  const VectorXd ref = update_reference(mt.model, mt.task, q0, std::nullopt);
  const VectorXd n = task_kernel(mt.model, mt.task, q0).direction;

  CHECK((baseline_step(mt.model, mt.task, q0, ref, 0.0, target) - q0).norm() < 1e-15);
  CHECK((baseline_step(mt.model, mt.task, q0, ref, 0.05, target) - (q0 + 0.05 * n)).norm() < 1e-12);

  // Per-step drift: Euler without projection against the fifth-order step.
  IntegratorConfig cfg;
  VectorXd qb = q0, qr = q0;
  VectorXd rb = ref, rr = ref;
  double drift_b = 0, drift_r = 0;
  for (int k = 0; k < 20; ++k) {
    const VectorXd nb = baseline_step(mt.model, mt.task, qb, rb, cfg.h, target, false);
    const VectorXd nr = rk_step(mt.model, mt.task, qr, rr, cfg);
    drift_b = std::max(drift_b, (fk(mt.model, nb).position - fk(mt.model, qb).position).norm());
    drift_r = std::max(drift_r, (fk(mt.model, nr).position - fk(mt.model, qr).position).norm());
    qb = nb;
    qr = nr;
    rb = update_reference(mt.model, mt.task, qb, rb);
    rr = update_reference(mt.model, mt.task, qr, rr);
  }
  CHECK(drift_b >= 10 * drift_r);
}

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg;
  cfg.h = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.h = 0.05;
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
