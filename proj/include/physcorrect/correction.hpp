#pragma once

#include <string>
#include <vector>

#include "physcorrect/control.hpp"

namespace physcorrect {

enum class DivergencePolicy { kAbort, kResetToReference };

struct CorrectionConfig {
  int loop_n = 2;     // reference-held refinement iterations per frame
  int substeps = 15;  // physics substeps per iteration
  double fps = 30.0;
  ControllerGains gains;
  double pen_tol = 1e-3;
  bool diagnostics = false;
  DivergencePolicy policy = DivergencePolicy::kAbort;
  double ground_height = 0.0;
  double armature = 1.0;  // extra per-DOF inertia, kg*m^2
  int solver_iterations = 8;
  double friction_mu = 0.9;
  double frame_time_budget_ms = 200.0;  // per-frame solver wall clock guard
};

/// Throws SchemaError when a field is out of its documented range.
void validate_config(const CorrectionConfig& c);

struct DiagnosticsRow {
  int frame = 0;
  int agent = 0;
  double max_ground_depth_m = 0.0;
  double max_inter_depth_m = 0.0;
  double tracking_err_rad = 0.0;
  double residual_force_n = 0.0;
};

struct DiagnosticsLog {
  std::string header;  // run parameters, written as a leading comment line
  std::vector<DiagnosticsRow> rows;

  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

struct CorrectionResult {
  MotionSequence corrected;
  DiagnosticsLog log;
};

/// Poses read back from the simulation coordinates (canonicalized).
std::vector<PoseParams> poses_from_world(const WorldState& w);

/// World seeded from frame 0 of the sequence with zero velocities, followed
/// by one contact-resolution pass for a penetration-free start.
WorldState make_initial_world(const MotionSequence& seq, const Skeleton& tmpl,
                              const CorrectionConfig& config);

/// Runs loop_n iterations of {track against the fixed reference, then
/// `substeps` physics substeps} and returns the final state only.
WorldState loop_n_advance(const WorldState& w,
                          const std::vector<PoseParams>& references,
                          const CorrectionConfig& config);

/// The full autoregressive correction: references are consumed one frame
/// ahead and each output frame is the post-loop simulation state.
CorrectionResult correct_sequence(const MotionSequence& kinematic,
                                  const Skeleton& tmpl,
                                  const CorrectionConfig& config);

}  // namespace physcorrect
