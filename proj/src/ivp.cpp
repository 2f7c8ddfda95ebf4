#include "smm/ivp.hpp"

#include <cmath>
#include <sstream>

namespace smm {

// ---- tableaus ---------------------------------------------------------------

void ButcherTableau::validate() const {
  const int s = stages();
  auto fail = [this](const std::string& msg) {
    throw Error(ErrorKind::Validation, "tableau '" + name + "': " + msg);
  };
  if (s < 1) fail("no stages");
  if (a.rows() != s || a.cols() != s || c.size() != s) fail("inconsistent sizes");
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (a(i, j) != 0.0) fail("not explicit");
  if (std::abs(b.sum() - 1.0) > 1e-14) fail("weights do not sum to one");
  if (!a.allFinite() || !b.allFinite() || !c.allFinite()) fail("non-finite coefficient");
}

ButcherTableau ButcherTableau::dormand_prince5() {
  ButcherTableau t;
  t.name = "dopri5";
  t.order = 5;
  t.a = MatrixXd::Zero(6, 6);
  t.a(1, 0) = 1.0 / 5.0;
  t.a(2, 0) = 3.0 / 40.0;
  t.a(2, 1) = 9.0 / 40.0;
  t.a(3, 0) = 44.0 / 45.0;
  t.a(3, 1) = -56.0 / 15.0;
  t.a(3, 2) = 32.0 / 9.0;
  t.a(4, 0) = 19372.0 / 6561.0;
  t.a(4, 1) = -25360.0 / 2187.0;
  t.a(4, 2) = 64448.0 / 6561.0;
  t.a(4, 3) = -212.0 / 729.0;
  t.a(5, 0) = 9017.0 / 3168.0;
  t.a(5, 1) = -355.0 / 33.0;
  t.a(5, 2) = 46732.0 / 5247.0;
  t.a(5, 3) = 49.0 / 176.0;
  t.a(5, 4) = -5103.0 / 18656.0;
  t.b.resize(6);
  t.b << 35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0;
  t.c.resize(6);
  t.c << 0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0;
  return t;
}

ButcherTableau ButcherTableau::cash_karp5() {
  ButcherTableau t;
  t.name = "cashkarp5";
  t.order = 5;
  t.a = MatrixXd::Zero(6, 6);
  t.a(1, 0) = 1.0 / 5.0;
  t.a(2, 0) = 3.0 / 40.0;
  t.a(2, 1) = 9.0 / 40.0;
  t.a(3, 0) = 3.0 / 10.0;
  t.a(3, 1) = -9.0 / 10.0;
  t.a(3, 2) = 6.0 / 5.0;
  t.a(4, 0) = -11.0 / 54.0;
  t.a(4, 1) = 5.0 / 2.0;
  t.a(4, 2) = -70.0 / 27.0;
  t.a(4, 3) = 35.0 / 27.0;
  t.a(5, 0) = 1631.0 / 55296.0;
  t.a(5, 1) = 175.0 / 512.0;
  t.a(5, 2) = 575.0 / 13824.0;
  t.a(5, 3) = 44275.0 / 110592.0;
  t.a(5, 4) = 253.0 / 4096.0;
  t.b.resize(6);
  t.b << 37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0;
  t.c.resize(6);
  t.c << 0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0;
  return t;
}

ButcherTableau ButcherTableau::classic_rk4() {
  ButcherTableau t;
  t.name = "rk4";
  t.order = 4;
  t.a = MatrixXd::Zero(4, 4);
  t.a(1, 0) = 0.5;
  t.a(2, 1) = 0.5;
  t.a(3, 2) = 1.0;
  t.b.resize(4);
  t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  t.c.resize(4);
  t.c << 0.0, 0.5, 0.5, 1.0;
  return t;
}

ButcherTableau ButcherTableau::euler() {
  ButcherTableau t;
  t.name = "euler";
  t.order = 1;
  t.a = MatrixXd::Zero(1, 1);
  t.b = VectorXd::Ones(1);
  t.c = VectorXd::Zero(1);
  return t;
}

ButcherTableau ButcherTableau::by_name(const std::string& name) {
  if (name == "dopri5") return dormand_prince5();
  if (name == "cashkarp5") return cash_karp5();
  if (name == "rk4") return classic_rk4();
  if (name == "euler") return euler();
  throw Error(ErrorKind::Validation, "unknown tableau '" + name + "'");
}

std::vector<std::string> ButcherTableau::names() { return {"dopri5", "cashkarp5", "rk4", "euler"}; }

// ---- field ------------------------------------------------------------------

void IntegratorConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::Validation, "step size must be positive");
  if (max_steps < 1) throw Error(ErrorKind::Validation, "max_steps must be at least 1");
  if (min_steps_before_closure < 1)
    throw Error(ErrorKind::Validation, "min_steps_before_closure must be at least 1");
  tableau.validate();
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Closed: return "Closed";
    case Termination::Singular: return "Singular";
    case Termination::StepLimit: return "StepLimit";
  }
  return "Unknown";
}

MatrixXd task_jacobian_at(const ChainModel& model, const TaskSpec& task, const JointConfig& q) {
  return task_jacobian(jacobian(model, q, task.frame), task);
}

KernelResult<double> task_kernel(const ChainModel& model, const TaskSpec& task, const JointConfig& q) {
  if (!q.allFinite()) throw Error(ErrorKind::NumericalFailure, "non-finite configuration");
  const Jac<double> jac = jacobian(model, q, task.frame);
  if (task.mode == TaskMode::Rows) return kernel(task_jacobian(jac, task));

  MatrixXd rows(task.dim(), jac.cols());
  for (int i = 0; i < task.dim(); ++i) rows.row(i) = jac.row(task.rows[static_cast<std::size_t>(i)]);
  return induced_kernel(rows, task.restrict(task.direction));
}

VectorXd task_residual(const ChainModel& model, const TaskSpec& task, const Posed& target,
                       const JointConfig& q) {
  const Posed current = fk(model, q);
  Vector6d e;
  if (task.frame == Frame::Base) {
    e = pose_error_base(current, target);
  } else {
    e = pose_error(current, target);
    e.head<3>() = current.rotation.transpose() * e.head<3>();
  }
  VectorXd r = task.restrict(e);
  if (task.mode == TaskMode::Induced) r = projection(task.restrict(task.direction)) * r;
  return r;
}

VectorXd regularize(const VectorXd& direction, const VectorXd& ref) {
  return direction.dot(ref) > 0.0 ? VectorXd(direction) : VectorXd(-direction);
}

FieldValue regularized_field(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                             const VectorXd& ref) {
  FieldValue out;
  out.diag = task_kernel(model, task, q);
  out.velocity = regularize(out.diag.direction, ref);
  return out;
}

JointConfig rk_step(const Field& field, const JointConfig& q, const VectorXd& ref,
                    const IntegratorConfig& cfg) {
  const auto& tab = cfg.tableau;
  const int s = tab.stages();
  std::vector<TangentVector> k(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) {
    JointConfig stage = q;
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0) stage += cfg.h * tab.a(i, j) * k[static_cast<std::size_t>(j)];
    try {
      k[static_cast<std::size_t>(i)] = field(stage, ref);
    } catch (const Error& e) {
      throw e.with_stage(i);
    }
  }
  JointConfig next = q;
  for (int i = 0; i < s; ++i)
    if (tab.b[i] != 0.0) next += cfg.h * tab.b[i] * k[static_cast<std::size_t>(i)];
  return next;
}

JointConfig rk_step(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                    const VectorXd& ref, const IntegratorConfig& cfg) {
  return rk_step(
      [&](const JointConfig& x, const VectorXd& r) { return regularized_field(model, task, x, r).velocity; },
      q, ref, cfg);
}

VectorXd update_reference(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                          const std::optional<VectorXd>& ref_prev) {
  if (!ref_prev) return task_kernel(model, task, q).direction;
  return regularized_field(model, task, q, *ref_prev).velocity;
}

// ---- integration ------------------------------------------------------------

namespace {

bool is_field_failure(ErrorKind k) {
  return k == ErrorKind::RankDeficient || k == ErrorKind::DegenerateDirection ||
         k == ErrorKind::NumericalFailure;
}

struct Branch {
  std::vector<JointConfig> samples;
  std::vector<VectorXd> refs;
  Termination termination = Termination::StepLimit;
  std::string note;
};

// Integrates from q0 with heading ref0 until the trace comes back within h
// of `goal`, the field fails, or the step budget runs out.
Branch integrate_branch(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                        const VectorXd& ref0, const JointConfig& goal, int max_steps,
                        const IntegratorConfig& cfg) {
  Branch br;
  br.samples.push_back(q0);
  br.refs.push_back(ref0);
  for (int n = 0; n < max_steps; ++n) {
    JointConfig next;
    VectorXd next_ref;
    try {
      next = rk_step(model, task, br.samples.back(), br.refs.back(), cfg);
      next_ref = update_reference(model, task, next, br.refs.back());
    } catch (const Error& e) {
      if (!is_field_failure(e.kind())) throw;
      br.termination = Termination::Singular;
      br.note = e.what();
      return br;
    }
    br.samples.push_back(std::move(next));
    br.refs.push_back(std::move(next_ref));
    const int steps = n + 1;
    if (steps >= cfg.min_steps_before_closure &&
        joint_distance(model, br.samples.back(), goal) < cfg.h) {
      br.termination = Termination::Closed;
      return br;
    }
  }
  br.termination = Termination::StepLimit;
  return br;
}

Trace solve_from(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                 const VectorXd& ref0, const KernelResult<double>& seed_kernel,
                 const IntegratorConfig& cfg) {
  Trace trace;
  trace.h = cfg.h;
  trace.seed_kernel = seed_kernel;

  Branch fwd = integrate_branch(model, task, q0, ref0, q0, cfg.max_steps, cfg);
  if (fwd.termination != Termination::Singular) {
    trace.samples = std::move(fwd.samples);
    trace.refs = std::move(fwd.refs);
    trace.closed = fwd.termination == Termination::Closed;
    trace.termination = fwd.termination;
  } else {
    // Opposite branch from q0, stopping if it reaches the far end of the
    // forward branch from the other side.
    const int budget = cfg.max_steps - (static_cast<int>(fwd.samples.size()) - 1);
    Branch rev = budget > 0 ? integrate_branch(model, task, q0, -ref0, fwd.samples.back(), budget, cfg)
                            : Branch{{q0}, {-ref0}, Termination::StepLimit, {}};
    const std::size_t nrev = rev.samples.size() - 1;
    trace.samples.reserve(nrev + fwd.samples.size());
    for (std::size_t i = nrev; i >= 1; --i) {
      trace.samples.push_back(std::move(rev.samples[i]));
      trace.refs.push_back(-rev.refs[i]);
    }
    trace.seed_index = nrev;
    for (std::size_t i = 0; i < fwd.samples.size(); ++i) {
      trace.samples.push_back(std::move(fwd.samples[i]));
      trace.refs.push_back(std::move(fwd.refs[i]));
    }
    trace.closed = false;
    trace.termination = Termination::Singular;
    trace.note = fwd.note;
    if (!rev.note.empty()) trace.note += "; reverse branch: " + rev.note;
  }
  trace.arc_length = trace.steps() * cfg.h;
  return trace;
}

KernelResult<double> seed_kernel_or_throw(const ChainModel& model, const TaskSpec& task,
                                          const JointConfig& q0) {
  try {
    return task_kernel(model, task, q0);
  } catch (const Error& e) {
    if (!is_field_failure(e.kind())) throw;
    throw Error(ErrorKind::SingularStart, std::string("initial configuration is singular: ") + e.what());
  }
}

}  // namespace

Trace solve_smm_ivp(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                    const IntegratorConfig& cfg, const std::optional<Posed>& target) {
  cfg.validate();
  validate_task(model, task);
  detail::check_dims(model, q0.size());
  if (!q0.allFinite()) throw Error(ErrorKind::InvalidSeed, "initial configuration is not finite");
  if (target) {
    const double residual = task_residual(model, task, *target, q0).norm();
    if (!(residual <= 1e-6)) {
      std::ostringstream os;
      os << "initial configuration misses the task pose by " << residual;
      throw Error(ErrorKind::InvalidSeed, os.str());
    }
  }
  const auto seed = seed_kernel_or_throw(model, task, q0);
  return solve_from(model, task, q0, seed.direction, seed, cfg);
}

Trace solve_smm_ivp(const ChainModel& model, const TaskSpec& task, const JointConfig& q0,
                    const VectorXd& initial_ref, const IntegratorConfig& cfg) {
  cfg.validate();
  validate_task(model, task);
  detail::check_dims(model, q0.size());
  if (initial_ref.size() != q0.size())
    throw Error(ErrorKind::DimensionMismatch, "initial heading has the wrong length");
  const auto seed = seed_kernel_or_throw(model, task, q0);
  return solve_from(model, task, q0, regularize(seed.direction, initial_ref), seed, cfg);
}

JointConfig baseline_step(const ChainModel& model, const TaskSpec& task, const JointConfig& q,
                          const VectorXd& ref, double gamma, const Posed& target, bool project) {
  JointConfig next = q + gamma * regularized_field(model, task, q, ref).velocity;
  if (project) next += pinv(task_jacobian_at(model, task, q)) * task_residual(model, task, target, q);
  return next;
}

}  // namespace smm
