#pragma once

#include <map>
#include <string>
#include <vector>

#include "smm/induced.hpp"
#include "smm/search.hpp"

namespace smm {

inline constexpr const char* kToolVersion = "0.1.0";

/// CSV with header `step,q0,...,q{n-1}`, one row per sample.
void write_trace_csv(const std::string& path, const Trace& trace);
/// Reads a trace CSV back into samples (metadata left default).
std::vector<JointConfig> read_trace_csv(const std::string& path);

/// Sidecar {closed, termination, h, arc_length, seed, task, ...}.
std::string trace_metadata_json(const Trace& trace, const TaskSpec& task);
void write_trace_metadata(const std::string& path, const Trace& trace, const TaskSpec& task);

/// Per-sample task error against fk(seed). Rows tasks: `Index,Error`, the
/// norm of the task-row pose error. Induced tasks:
/// `Index,DistanceError,YDirectionError` from induced_residual.
struct ErrorSeries {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;  // per sample, one entry per column
};
ErrorSeries error_series(const ChainModel& model, const TaskSpec& task, const Trace& trace);
void write_error_series(const std::string& path, const ErrorSeries& series);

/// `pose_id,component_count,usable_count,near_singular,px,py,pz,r,p,y`.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
/// `<label>,occurrences`.
void write_histogram_csv(const std::string& path, const std::string& label, const std::map<int, int>& hist);

/// Everything needed to rerun one CLI invocation.
struct RunManifest {
  std::string command;
  std::string model;
  std::vector<std::string> argv;
  std::map<std::string, std::string> settings;  // flag -> value as given
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};
void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace smm
