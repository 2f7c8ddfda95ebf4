#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "smm/io.hpp"

namespace smm::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string model;
  double h = 0.05;
  int max_steps = 100000;
  std::uint64_t seed = 0;
  std::string out = "out";
  int jobs = 1;
  bool deg = false;
  std::string tableau = "dopri5";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--model", c.model, "Builtin model name or chain file path")->required();
  app->add_option("--h", c.h, "Integration step (joint-space arc length)")->capture_default_str();
  app->add_option("--max-steps", c.max_steps, "Step cap per trace")->capture_default_str();
  app->add_option("--seed", c.seed, "Sampler seed")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
  app->add_option("--tableau", c.tableau, "dopri5 | cashkarp5 | rk4 | euler")->capture_default_str();
  app->add_flag("--deg", c.deg, "Angles on the command line are in degrees");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string cell;
  std::stringstream ss(text);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::size_t used = 0;
    try {
      out.push_back(std::stod(cell.substr(first), &used));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, std::string("cannot parse ") + what + " entry '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t", first + used) != std::string::npos)
      throw Error(ErrorKind::Parse, std::string("cannot parse ") + what + " entry '" + cell + "'");
  }
  return out;
}

VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double deg_scale(bool deg) { return deg ? std::numbers::pi / 180.0 : 1.0; }

JointConfig parse_config(const std::string& text, const ChainModel& model, bool deg) {
  JointConfig q = to_vector(parse_list(text, "--q"));
  if (q.size() != model.dof())
    throw Error(ErrorKind::DimensionMismatch, "--q has " + std::to_string(q.size()) + " entries, model has " +
                                                  std::to_string(model.dof()) + " joints");
  for (int i = 0; i < model.dof(); ++i)
    if (model.is_revolute(i)) q[i] *= deg_scale(deg);
  return q;
}

Posed parse_pose(const std::string& xyz, const std::string& rpy, bool deg) {
  const auto p = parse_list(xyz, "--xyz");
  if (p.size() != 3) throw Error(ErrorKind::Parse, "--xyz needs three numbers");
  Vector3d angles = Vector3d::Zero();
  if (!rpy.empty()) {
    const auto r = parse_list(rpy, "--rpy");
    if (r.size() != 3) throw Error(ErrorKind::Parse, "--rpy needs three numbers");
    angles = Vector3d(r[0], r[1], r[2]) * deg_scale(deg);
  }
  Posed pose;
  pose.position = Vector3d(p[0], p[1], p[2]);
  pose.rotation = rpy_to_matrix(angles);
  return pose;
}

std::vector<int> parse_rows(const std::string& text) {
  static const std::vector<std::string> names{"vx", "vy", "vz", "wx", "wy", "wz"};
  std::vector<int> rows;
  std::string cell;
  std::stringstream ss(text);
  while (std::getline(ss, cell, ',')) {
    const auto it = std::find(names.begin(), names.end(), cell);
    if (it == names.end()) throw Error(ErrorKind::Parse, "unknown task row '" + cell + "'");
    rows.push_back(static_cast<int>(it - names.begin()));
  }
  return rows;
}

IntegratorConfig integrator(const Common& c) {
  IntegratorConfig cfg;
  cfg.h = c.h;
  cfg.max_steps = c.max_steps;
  cfg.tableau = ButcherTableau::by_name(c.tableau);
  cfg.validate();
  return cfg;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SingularStart: return kSingularStart;
    case ErrorKind::InvalidSeed:
    case ErrorKind::NoConvergence: return kInvalidSeed;
    case ErrorKind::Io: return kIoError;
    case ErrorKind::DegenerateDirection: return kDegenerateDirection;
    case ErrorKind::AllFailed: return kAllFailed;
    default: return kUsage;
  }
}

struct Run {
  RunManifest manifest;
  fs::path out;

  std::string file(const std::string& name) {
    manifest.outputs.push_back(name);
    return (out / name).string();
  }
  void finish() {
    manifest.outputs.push_back("manifest.json");
    write_manifest((out / "manifest.json").string(), manifest);
  }
};

Run start_run(const std::string& command, const Common& c, const std::vector<std::string>& args,
              CLI::App* sub) {
  Run run;
  run.out = prepare_out(c.out);
  run.manifest.command = command;
  run.manifest.model = c.model;
  run.manifest.argv = args;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
    run.manifest.settings[opt->get_name()] = joined;
  }
  return run;
}

// Seed from --q, or from the target pose through IK restarts.
struct SeedInput {
  JointConfig q0;
  std::optional<Posed> target;
};

SeedInput resolve_seed(const ModelAndTask& mt, const TaskSpec& task, const std::string& q_text,
                       const std::string& xyz, const std::string& rpy, int restarts, const Common& c) {
  if (q_text.empty() == xyz.empty()) throw Error(ErrorKind::Parse, "give exactly one of --q or --xyz");
  SeedInput in;
  if (!q_text.empty()) {
    in.q0 = parse_config(q_text, mt.model, c.deg);
    return in;
  }
  in.target = parse_pose(xyz, rpy, c.deg);
  IkConfig ik;
  ik.seed = c.seed;
  try {
    in.q0 = random_restart_seeds(mt.model, task, *in.target, restarts, ik).configs.front();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AllFailed) throw Error(ErrorKind::InvalidSeed, e.what());
    throw;
  }
  return in;
}

void emit_trace(Run& run, const std::string& stem, const ChainModel& model, const TaskSpec& task,
                const Trace& trace) {
  write_trace_csv(run.file(stem + ".csv"), trace);
  write_trace_metadata(run.file(stem + ".json"), trace, task);
  write_error_series(run.file(stem + "_errors.csv"), error_series(model, task, trace));
}

void report_trace(const ChainModel& model, const TaskSpec& task, const Trace& trace) {
  const auto es = error_series(model, task, trace);
  std::vector<double> worst(es.columns.size(), 0.0);
  for (const auto& row : es.values)
    for (std::size_t i = 0; i < row.size(); ++i) worst[i] = std::max(worst[i], row[i]);
  std::cout << "steps " << trace.steps() << ", arc length " << trace.arc_length << ", "
            << to_string(trace.termination) << (trace.closed ? " (closed)" : " (open)");
  for (std::size_t i = 0; i < worst.size(); ++i) std::cout << ", max " << es.columns[i] << ' ' << worst[i];
  std::cout << '\n';
  if (!trace.note.empty()) std::cout << "note: " << trace.note << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Self-motion manifold tracing for serial chains"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  std::string q_text, xyz, rpy, u_text, frame_text, rows_text, seeder = "toggle", manifest_path;
  int restarts = 0, validate = 0, poses = 50;

  auto* trace_cmd = app.add_subcommand("trace", "Trace the self-motion manifold through a seed");
  add_common(trace_cmd, common);
  trace_cmd->add_option("--q", q_text, "Seed configuration, comma separated");
  trace_cmd->add_option("--xyz", xyz, "Target position; the seed comes from IK");
  trace_cmd->add_option("--rpy", rpy, "Target roll, pitch, yaw");
  trace_cmd->add_option("--restarts", restarts, "IK restarts when seeding from a pose")->default_val(20);

  auto* induced_cmd = app.add_subcommand("induced", "Induced-redundancy trace for a non-redundant chain");
  add_common(induced_cmd, common);
  induced_cmd->add_option("--q", q_text, "Seed configuration")->required();
  induced_cmd->add_option("--u", u_text, "Redundancy direction: 6 numbers, or one per task row")->required();
  induced_cmd->add_option("--frame", frame_text, "base | tool")->check(CLI::IsMember({"base", "tool"}));
  induced_cmd->add_option("--rows", rows_text, "Task rows, e.g. vx,vy (default: from the model)");

  auto* search_cmd = app.add_subcommand("search", "Find disconnected manifold components");
  add_common(search_cmd, common);
  search_cmd->add_option("--q", q_text, "Configuration defining the task pose");
  search_cmd->add_option("--xyz", xyz, "Target position");
  search_cmd->add_option("--rpy", rpy, "Target roll, pitch, yaw");
  search_cmd->add_option("--seeder", seeder, "toggle | restarts")
      ->check(CLI::IsMember({"toggle", "restarts"}))
      ->capture_default_str();
  search_cmd->add_option("--restarts", restarts, "IK restarts for the restarts seeder")->default_val(150);
  search_cmd->add_option("--validate", validate, "Fresh IK solutions to check against the components")
      ->default_val(0);

  auto* sweep_cmd = app.add_subcommand("sweep", "Component counts over random workspace poses");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--poses", poses, "Number of poses K")->capture_default_str();
  sweep_cmd->add_option("--restarts", restarts, "IK restarts per pose N")->default_val(30);

  auto* ik_cmd = app.add_subcommand("ik", "Unconstrained IK for a target pose");
  add_common(ik_cmd, common);
  ik_cmd->add_option("--xyz", xyz, "Target position")->required();
  ik_cmd->add_option("--rpy", rpy, "Target roll, pitch, yaw");
  ik_cmd->add_option("--restarts", restarts, "Random restarts N")->default_val(1);

  auto* replay_cmd = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*replay_cmd) return run(read_manifest(manifest_path).argv);

    const ModelAndTask mt = resolve_model(common.model);
    const IntegratorConfig cfg = integrator(common);

    if (*trace_cmd) {
      const SeedInput seed = resolve_seed(mt, mt.task, q_text, xyz, rpy, restarts, common);
      Run run = start_run("trace", common, args, trace_cmd);
      const Trace trace = solve_smm_ivp(mt.model, mt.task, seed.q0, cfg, seed.target);
      emit_trace(run, "trace", mt.model, mt.task, trace);
      run.finish();
      report_trace(mt.model, mt.task, trace);
      return kOk;
    }

    if (*induced_cmd) {
      std::vector<int> rows;
      if (!rows_text.empty()) {
        rows = parse_rows(rows_text);
      } else if (mt.task.mode == TaskMode::Induced) {
        rows = mt.task.rows;
      } else if (mt.model.dof() == 6) {
        rows = {Vx, Vy, Vz, Wx, Wy, Wz};
      } else {
        throw Error(ErrorKind::Validation, "cannot infer task rows for this model; pass --rows");
      }
      Frame frame = mt.task.mode == TaskMode::Induced ? mt.task.frame : Frame::Base;
      if (!frame_text.empty()) frame = frame_text == "tool" ? Frame::Tool : Frame::Base;
      const InducedTask it = make_induced_task(to_vector(parse_list(u_text, "--u")), frame, rows);
      if (it.mixed_units())
        std::cerr << "warning: redundancy direction mixes translation (m) and rotation (rad)\n";
      const TaskSpec task = it.task();
      validate_task(mt.model, task);
      const JointConfig q0 = parse_config(q_text, mt.model, common.deg);
      Run run = start_run("induced", common, args, induced_cmd);
      const Trace trace = solve_smm_ivp(mt.model, task, q0, cfg);
      emit_trace(run, "trace", mt.model, task, trace);
      run.finish();
      report_trace(mt.model, task, trace);
      return kOk;
    }

    if (*search_cmd) {
      if (q_text.empty() == xyz.empty()) throw Error(ErrorKind::Parse, "give exactly one of --q or --xyz");
      IkConfig ik;
      ik.seed = common.seed;
      JointConfig q0;
      Posed pose;
      if (!q_text.empty()) {
        q0 = parse_config(q_text, mt.model, common.deg);
        pose = fk(mt.model, q0);
      } else {
        pose = parse_pose(xyz, rpy, common.deg);
        if (seeder == "toggle") q0 = random_restart_seeds(mt.model, mt.task, pose, 20, ik).configs.front();
      }
      const SeedSet seeds = seeder == "toggle" ? toggle_seeds_rrr(mt.model, q0)
                                               : random_restart_seeds(mt.model, mt.task, pose, restarts, ik);
      Run run = start_run("search", common, args, search_cmd);
      const ComponentSet set = search_components(mt.model, mt.task, seeds, cfg);
      const auto usable = usable_components(set, mt.model);

      nlohmann::json summary;
      summary["component_count"] = set.components.size();
      summary["usable_count"] = usable.size();
      summary["seeds"] = seeds.configs.size();
      summary["seeds_rejected"] = set.seeds_rejected.size();
      summary["ik_failures"] = seeds.failures;
      summary["seed_errors"] = set.seed_errors;
      summary["components"] = nlohmann::json::array();
      for (std::size_t i = 0; i < set.components.size(); ++i) {
        std::ostringstream stem;
        stem << "component_" << std::setw(2) << std::setfill('0') << i;
        emit_trace(run, stem.str(), mt.model, mt.task, set.components[i]);
        const auto& c = set.components[i];
        summary["components"].push_back({{"file", stem.str() + ".csv"},
                                         {"steps", c.steps()},
                                         {"closed", c.closed},
                                         {"termination", std::string(to_string(c.termination))},
                                         {"usable", std::find(usable.begin(), usable.end(), i) != usable.end()}});
      }
      if (validate > 0) {
        IkConfig vik;
        vik.seed = common.seed + 1;
        const SeedSet fresh = random_restart_seeds(mt.model, mt.task, pose, validate, vik);
        std::ofstream vout(run.file("validation.csv"));
        if (!vout) throw Error(ErrorKind::Io, "cannot write validation.csv");
        vout << std::setprecision(17) << "index,distance\n";
        double worst = 0.0;
        for (std::size_t i = 0; i < fresh.configs.size(); ++i) {
          const double d = point_to_set_distance(mt.model, fresh.configs[i], set);
          worst = std::max(worst, d);
          vout << i << ',' << d << '\n';
        }
        summary["validation"] = {{"solutions", fresh.configs.size()},
                                 {"max_distance", worst},
                                 {"all_within_h", worst < cfg.h}};
        std::cout << "validation: " << fresh.configs.size() << " IK solutions, max distance " << worst
                  << (worst < cfg.h ? " (all within h)\n" : " (some beyond h)\n");
      }
      std::ofstream sout(run.file("summary.json"));
      if (!sout) throw Error(ErrorKind::Io, "cannot write summary.json");
      sout << summary.dump(2) << '\n';
      run.finish();
      std::cout << set.components.size() << " component(s), " << usable.size() << " usable\n";
      return kOk;
    }

    if (*sweep_cmd) {
      SweepConfig sc;
      sc.poses = poses;
      sc.restarts = restarts;
      sc.seed = common.seed;
      sc.jobs = common.jobs;
      sc.integrator = cfg;
      Run run = start_run("sweep", common, args, sweep_cmd);
      const auto rows = workspace_sweep(mt.model, mt.task, sc);
      write_sweep_csv(run.file("sweep.csv"), rows);
      write_histogram_csv(run.file("components_histogram.csv"), "component_count", component_histogram(rows));
      write_histogram_csv(run.file("usable_histogram.csv"), "usable_count", usable_histogram(rows));
      run.finish();
      int done = 0;
      for (const auto& r : rows) {
        if (r.failed) {
          std::cerr << "pose " << r.pose_id << " failed: " << r.note << '\n';
        } else {
          ++done;
        }
      }
      std::cout << done << " of " << rows.size() << " poses completed\n";
      return 10 * done >= 9 * static_cast<int>(rows.size()) ? kOk : kSweepIncomplete;
    }

    if (*ik_cmd) {
      const Posed target = parse_pose(xyz, rpy, common.deg);
      IkConfig ik;
      ik.seed = common.seed;
      Run run = start_run("ik", common, args, ik_cmd);
      const SeedSet seeds = random_restart_seeds(mt.model, mt.task, target, restarts, ik);
      Trace as_trace;
      as_trace.samples = seeds.configs;
      write_trace_csv(run.file("ik.csv"), as_trace);
      run.finish();
      std::cout << seeds.configs.size() << " solution(s), " << seeds.failures << " restart(s) failed\n";
      for (const auto& q : seeds.configs) std::cout << q.transpose() << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e);
  }
  return kUsage;
}

}  // namespace smm::cli
