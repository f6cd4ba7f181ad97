#pragma once

#include <string>

#include "physcorrect/correction.hpp"

namespace physcorrect {

inline constexpr int kMotionFileVersion = 1;

/// JSON motion document: a skeleton template block plus per-person shape and
/// frames. Serialization is canonical (fixed field order, %.9g floats) so
/// load -> save round trips are byte-stable.
struct MotionFile {
  int version = kMotionFileVersion;
  Skeleton skeleton_template;
  MotionSequence sequence;
};

MotionFile load_motion_file(const std::string& path);   // throws SchemaError
std::string motion_file_to_string(const MotionFile& mf);
void save_motion_file(const std::string& path, const MotionFile& mf);

/// Standalone skeleton template document: {"version": 1, "joints": [...]}.
Skeleton load_template_file(const std::string& path);

/// PHYSCORRECT_TEMPLATE env var when set, else the compiled-in default.
std::string default_template_path();

/// Run configuration mirroring CorrectionConfig plus metric thresholds.
/// Unknown keys are rejected.
struct RunConfig {
  CorrectionConfig correction;
  double h_thresh = 0.05;
  std::string template_path;
};

RunConfig load_run_config(const std::string& path);

/// Canonical float formatting used by every serializer (%.9g).
std::string format_double(double v);

}  // namespace physcorrect
