#include "smm/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace smm {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

json vec_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json task_json(const TaskSpec& task) {
  static const char* names[] = {"vx", "vy", "vz", "wx", "wy", "wz"};
  json t;
  t["mode"] = task.mode == TaskMode::Rows ? "rows" : "induced";
  t["rows"] = json::array();
  for (int r : task.rows) t["rows"].push_back(names[r]);
  t["frame"] = task.frame == Frame::Base ? "base" : "tool";
  if (task.mode == TaskMode::Induced) t["direction"] = vec_json(task.direction);
  return t;
}

}  // namespace

void write_trace_csv(const std::string& path, const Trace& trace) {
  auto out = open_out(path);
  const Eigen::Index n = trace.samples.empty() ? 0 : trace.samples.front().size();
  out << "step";
  for (Eigen::Index i = 0; i < n; ++i) out << ",q" << i;
  out << '\n';
  for (std::size_t s = 0; s < trace.samples.size(); ++s) {
    out << s;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << trace.samples[s][i];
    out << '\n';
  }
  finish(out, path);
}

std::vector<JointConfig> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty trace file");
  std::vector<JointConfig> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // step
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    out.push_back(Eigen::Map<VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
  }
  return out;
}

std::string trace_metadata_json(const Trace& trace, const TaskSpec& task) {
  json j;
  j["closed"] = trace.closed;
  j["termination"] = std::string(to_string(trace.termination));
  j["h"] = trace.h;
  j["arc_length"] = trace.arc_length;
  j["steps"] = trace.steps();
  j["seed"] = trace.samples.empty() ? json::array() : vec_json(trace.seed());
  j["seed_index"] = trace.seed_index;
  j["task"] = task_json(task);
  j["seed_sigma_min"] = trace.seed_kernel.sigma_min;
  j["seed_sigma_second"] = trace.seed_kernel.sigma_second;
  if (!trace.note.empty()) j["note"] = trace.note;
  return j.dump(2);
}

void write_trace_metadata(const std::string& path, const Trace& trace, const TaskSpec& task) {
  auto out = open_out(path);
  out << trace_metadata_json(trace, task) << '\n';
  finish(out, path);
}

ErrorSeries error_series(const ChainModel& model, const TaskSpec& task, const Trace& trace) {
  ErrorSeries es;
  if (trace.samples.empty()) return es;
  const Posed seed = fk(model, trace.seed());
  if (task.mode == TaskMode::Induced) {
    es.columns = {"DistanceError", "YDirectionError"};
    const InducedTask it = make_induced_task(task);
    for (const auto& q : trace.samples) {
      const auto r = induced_residual(seed, fk(model, q), it);
      es.values.push_back({r.position, r.angular});
    }
  } else {
    es.columns = {"Error"};
    for (const auto& q : trace.samples) es.values.push_back({task_residual(model, task, seed, q).norm()});
  }
  return es;
}

void write_error_series(const std::string& path, const ErrorSeries& series) {
  auto out = open_out(path);
  out << "Index";
  for (const auto& c : series.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << i;
    for (double v : series.values[i]) out << ',' << v;
    out << '\n';
  }
  finish(out, path);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "pose_id,component_count,usable_count,near_singular,px,py,pz,r,p,y\n";
  for (const auto& r : rows) {
    if (r.failed) continue;
    const Vector3d rpy = matrix_to_rpy(r.pose.rotation);
    out << r.pose_id << ',' << r.component_count << ',' << r.usable_count << ',' << (r.near_singular ? 1 : 0)
        << ',' << r.pose.position.x() << ',' << r.pose.position.y() << ',' << r.pose.position.z() << ','
        << rpy.x() << ',' << rpy.y() << ',' << rpy.z() << '\n';
  }
  finish(out, path);
}

void write_histogram_csv(const std::string& path, const std::string& label, const std::map<int, int>& hist) {
  auto out = open_out(path);
  out << label << ",occurrences\n";
  for (const auto& [k, v] : hist) out << k << ',' << v << '\n';
  finish(out, path);
}

std::string RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["model"] = model;
  j["argv"] = argv;
  j["settings"] = settings;
  j["outputs"] = outputs;
  j["tool_version"] = tool_version;
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.model = j.at("model").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.settings = j.value("settings", std::map<std::string, std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.tool_version = j.value("tool_version", std::string(kToolVersion));
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("manifest: ") + e.what());
  }
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  auto out = open_out(path);
  out << manifest.to_json() << '\n';
  finish(out, path);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return RunManifest::from_json(buf.str());
}

}  // namespace smm
