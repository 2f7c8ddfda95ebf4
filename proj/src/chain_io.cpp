#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "smm/chain.hpp"

namespace smm {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 6> kRowNames{"vx", "vy", "vz", "wx", "wy", "wz"};

[[noreturn]] void parse_fail(const std::string& msg) {
  throw Error(ErrorKind::Parse, "chain file: " + msg);
}

Vector3d read_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) parse_fail(std::string(what) + " must be an array of 3 numbers");
  Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) parse_fail(std::string(what) + " must hold numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

json write_vec(const Eigen::Ref<const VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

int row_index(const json& j) {
  if (j.is_number_integer()) {
    const int i = j.get<int>();
    if (i < 0 || i > 5) parse_fail("task row index out of range");
    return i;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto it = std::find(kRowNames.begin(), kRowNames.end(), s);
    if (it == kRowNames.end()) parse_fail("unknown task row '" + s + "'");
    return static_cast<int>(it - kRowNames.begin());
  }
  parse_fail("task rows must be names or indices");
}

Frame read_frame(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "base") return Frame::Base;
  if (s == "tool") return Frame::Tool;
  parse_fail("frame must be 'base' or 'tool'");
}

JointSpec read_joint(const json& j) {
  if (!j.is_object()) parse_fail("joint entries must be objects");
  JointSpec spec;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "revolute") {
    spec = JointSpec::revolute(Vector3d::Zero());
  } else if (kind == "prismatic") {
    spec = JointSpec::prismatic(Vector3d::Zero(), Vector3d::UnitX());
  } else {
    parse_fail("unknown joint kind '" + kind + "'");
  }
  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    if (o.contains("xyz")) spec.xyz = read_vec3(o.at("xyz"), "origin.xyz");
    if (o.contains("rpy")) spec.rpy = read_vec3(o.at("rpy"), "origin.rpy");
  }
  spec.axis = read_vec3(j.at("axis"), "axis");
  if (j.contains("limits")) {
    const auto& l = j.at("limits");
    if (!l.is_array() || l.size() != 2 || !l[0].is_number() || !l[1].is_number())
      parse_fail("limits must be [lo, hi]");
    spec.lo = l[0].get<double>();
    spec.hi = l[1].get<double>();
  }
  return spec;
}

TaskSpec read_task(const json& j) {
  TaskSpec task;
  const auto mode = j.at("mode").get<std::string>();
  if (j.contains("rows")) {
    task.rows.clear();
    for (const auto& r : j.at("rows")) task.rows.push_back(row_index(r));
  }
  if (j.contains("frame")) task.frame = read_frame(j.at("frame"));
  if (mode == "rows") {
    task.mode = TaskMode::Rows;
    if (!j.contains("rows")) parse_fail("rows task needs a 'rows' list");
    return task;
  }
  if (mode != "induced") parse_fail("task mode must be 'rows' or 'induced'");
  task.mode = TaskMode::Induced;
  const auto& d = j.at("direction");
  if (!d.is_array()) parse_fail("direction must be an array");
  if (d.size() == 6) {
    for (int i = 0; i < 6; ++i) task.direction[i] = d[static_cast<std::size_t>(i)].get<double>();
  } else if (static_cast<int>(d.size()) == task.dim()) {
    // Short form: one entry per selected row.
    for (int i = 0; i < task.dim(); ++i)
      task.direction[task.rows[static_cast<std::size_t>(i)]] = d[static_cast<std::size_t>(i)].get<double>();
  } else {
    parse_fail("direction must have 6 entries or one per task row");
  }
  return task;
}

}  // namespace

ModelAndTask parse_chain(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
  try {
    if (!doc.is_object()) parse_fail("top level must be an object");
    std::vector<JointSpec> joints;
    for (const auto& j : doc.at("joints")) joints.push_back(read_joint(j));
    Vector3d tool_xyz = Vector3d::Zero();
    Vector3d tool_rpy = Vector3d::Zero();
    if (doc.contains("tool")) {
      const auto& t = doc.at("tool");
      if (t.contains("xyz")) tool_xyz = read_vec3(t.at("xyz"), "tool.xyz");
      if (t.contains("rpy")) tool_rpy = read_vec3(t.at("rpy"), "tool.rpy");
    }
    ChainModel model(doc.value("name", std::string("chain")), std::move(joints), tool_xyz, tool_rpy);
    TaskSpec task = doc.contains("task") ? read_task(doc.at("task"))
                                         : TaskSpec::full_pose();
    validate_task(model, task);
    return {std::move(model), std::move(task)};
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }
}

ModelAndTask load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open chain file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chain(buf.str());
}

std::string serialize_chain(const ChainModel& model, const TaskSpec& task) {
  json doc;
  doc["name"] = model.name();
  doc["joints"] = json::array();
  for (const auto& jt : model.joints()) {
    json j;
    j["kind"] = jt.kind == JointKind::Revolute ? "revolute" : "prismatic";
    j["origin"] = {{"xyz", write_vec(jt.xyz)}, {"rpy", write_vec(jt.rpy)}};
    j["axis"] = write_vec(jt.axis);
    j["limits"] = {jt.lo, jt.hi};
    doc["joints"].push_back(j);
  }
  doc["tool"] = {{"xyz", write_vec(model.tool_xyz())}, {"rpy", write_vec(model.tool_rpy())}};
  json t;
  t["mode"] = task.mode == TaskMode::Rows ? "rows" : "induced";
  t["rows"] = json::array();
  for (int r : task.rows) t["rows"].push_back(kRowNames[static_cast<std::size_t>(r)]);
  t["frame"] = task.frame == Frame::Base ? "base" : "tool";
  if (task.mode == TaskMode::Induced) t["direction"] = write_vec(task.direction);
  doc["task"] = t;
  return doc.dump(2);
}

void save_chain(const std::string& path, const ChainModel& model, const TaskSpec& task) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write chain file '" + path + "'");
  out << serialize_chain(model, task) << '\n';
}

}  // namespace smm
