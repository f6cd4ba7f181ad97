#include "physcorrect/correction.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "physcorrect/errors.hpp"

namespace physcorrect {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct FrameDiag {
  std::vector<double> tracking_err;
  std::vector<double> residual_force;
};

WorldState settle(const WorldState& w) {
  WorldState out = w;
  for (int round = 0; round < out.solver.max_rounds; ++round) {
    std::vector<std::vector<Capsule>> caps;
    caps.reserve(out.agents.size());
    for (size_t a = 0; a < out.agents.size(); ++a) {
      caps.push_back(world_capsules(out, static_cast<int>(a)));
    }
    const ContactSet contacts = detect_contacts(caps, out.ground_height);
    double max_depth = 0.0;
    for (const Contact& c : contacts) {
      max_depth = std::max(max_depth, c.depth);
    }
    if (contacts.empty() || max_depth <= 0.9995 * out.solver.pen_tol) {
      break;
    }
    out = resolve_contacts(out, contacts, out.solver.iterations);
  }
  return out;
}

WorldState advance_frame(const WorldState& w,
                         const std::vector<PoseParams>& references,
                         const std::vector<ShapeVector>& shapes,
                         const CorrectionConfig& config, FrameDiag* diag) {
  const double dt = 1.0 / (config.fps * config.substeps);
  WorldState out = w;
  std::vector<Action> actions(out.agents.size());
  for (int k = 0; k < config.loop_n; ++k) {
    for (size_t a = 0; a < out.agents.size(); ++a) {
      actions[a] = track(out.agents[a], references[a], shapes[a],
                         config.gains, out.models[a]->skeleton);
    }
    for (int s = 0; s < config.substeps; ++s) {
      out = step(out, actions, dt);
    }
  }
  if (diag != nullptr) {
    diag->tracking_err.resize(out.agents.size());
    diag->residual_force.resize(out.agents.size());
    for (size_t a = 0; a < out.agents.size(); ++a) {
      diag->tracking_err[a] = tracking_error(out.agents[a], references[a]);
      diag->residual_force[a] = actions[a].root_force.norm();
    }
  }
  return out;
}

WorldState reset_to_references(const WorldState& w,
                               const std::vector<PoseParams>& references) {
  WorldState out = w;
  for (size_t a = 0; a < out.agents.size(); ++a) {
    out.agents[a] = state_from_pose(references[a], nullptr, 0.0);
  }
  return settle(out);
}

}  // namespace

void validate_config(const CorrectionConfig& c) {
  if (c.loop_n < 1 || c.loop_n > 16) {
    throw SchemaError("loop_n must lie in [1, 16]");
  }
  if (c.substeps < 1 || c.substeps > 256) {
    throw SchemaError("substeps must lie in [1, 256]");
  }
  if (!(c.fps > 0.0) || !std::isfinite(c.fps)) {
    throw SchemaError("fps must be positive");
  }
  if (!(c.pen_tol > 0.0)) {
    throw SchemaError("pen_tol must be positive");
  }
  if (c.solver_iterations < 1) {
    throw SchemaError("solver_iterations must be >= 1");
  }
  if (c.friction_mu < 0.0 || c.friction_mu > 1.0) {
    throw SchemaError("friction_mu must lie in [0, 1]");
  }
  if (!(c.armature >= 0.0)) {
    throw SchemaError("armature must be >= 0");
  }
  const double dt = 1.0 / (c.fps * c.substeps);
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw SchemaError("fps * substeps must give a substep dt in (0, 0.05]");
  }
}

std::string DiagnosticsLog::to_csv() const {
  std::string s = header.empty() ? std::string() : header + "\n";
  s += "frame,agent,max_ground_depth_m,max_inter_depth_m,tracking_err_rad,"
       "residual_force_N\n";
  for (const DiagnosticsRow& r : rows) {
    s += std::to_string(r.frame) + "," + std::to_string(r.agent) + "," +
         fmt_g(r.max_ground_depth_m) + "," + fmt_g(r.max_inter_depth_m) +
         "," + fmt_g(r.tracking_err_rad) + "," + fmt_g(r.residual_force_n) +
         "\n";
  }
  return s;
}

void DiagnosticsLog::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw SchemaError("cannot write diagnostics to " + path);
  }
  out << to_csv();
}

std::vector<PoseParams> poses_from_world(const WorldState& w) {
  std::vector<PoseParams> poses;
  poses.reserve(w.agents.size());
  for (const SimState& s : w.agents) {
    poses.push_back(pose_from_state(s));
  }
  return poses;
}

WorldState make_initial_world(const MotionSequence& seq, const Skeleton& tmpl,
                              const CorrectionConfig& config) {
  validate_sequence(seq);
  std::vector<Skeleton> skeletons;
  std::vector<SimState> states;
  skeletons.reserve(seq.persons.size());
  states.reserve(seq.persons.size());
  for (const Person& person : seq.persons) {
    skeletons.push_back(build_skeleton(person.shape, tmpl));
    states.push_back(state_from_pose(person.frames[0], nullptr, config.fps));
  }
  SolverParams solver;
  solver.pen_tol = config.pen_tol;
  solver.iterations = config.solver_iterations;
  solver.friction_mu = config.friction_mu;
  WorldState w = make_world(skeletons, std::move(states),
                            config.ground_height, config.armature, solver);
  return settle(w);
}

WorldState loop_n_advance(const WorldState& w,
                          const std::vector<PoseParams>& references,
                          const CorrectionConfig& config) {
  if (references.size() != w.agents.size()) {
    throw DimensionError("one reference pose per agent required");
  }
  validate_config(config);
  // Gains are shape-independent, so default shapes are exact here.
  const std::vector<ShapeVector> shapes(w.agents.size());
  return advance_frame(w, references, shapes, config, nullptr);
}

CorrectionResult correct_sequence(const MotionSequence& kinematic,
                                  const Skeleton& tmpl,
                                  const CorrectionConfig& config) {
  validate_config(config);
  validate_sequence(kinematic);
  const int frames = kinematic.frame_count();
  const int persons = kinematic.person_count();
  if (frames < 2) {
    throw EmptySequence("correction needs at least two frames, got " +
                        std::to_string(frames));
  }

  CorrectionResult result;
  result.corrected.fps = kinematic.fps;
  result.corrected.persons.resize(persons);
  for (int p = 0; p < persons; ++p) {
    result.corrected.persons[p].shape = kinematic.persons[p].shape;
    result.corrected.persons[p].frames.reserve(frames);
  }
  result.log.header =
      "# loop_n=" + std::to_string(config.loop_n) +
      " substeps=" + std::to_string(config.substeps) + " fps=" +
      fmt_g(config.fps) + " pen_tol=" + fmt_g(config.pen_tol) +
      " armature=" + fmt_g(config.armature);

  WorldState world = make_initial_world(kinematic, tmpl, config);
  std::vector<ShapeVector> shapes;
  shapes.reserve(persons);
  for (const Person& person : kinematic.persons) {
    shapes.push_back(person.shape);
  }

  auto record = [&](int frame, const FrameDiag* diag) {
    const std::vector<PoseParams> poses = poses_from_world(world);
    for (int p = 0; p < persons; ++p) {
      result.corrected.persons[p].frames.push_back(poses[p]);
    }
    if (!config.diagnostics) {
      return;
    }
    const DepthSummary depths = max_contact_depths(world);
    for (int p = 0; p < persons; ++p) {
      DiagnosticsRow row;
      row.frame = frame;
      row.agent = p;
      row.max_ground_depth_m = depths.max_ground;
      row.max_inter_depth_m = depths.max_inter;
      if (diag != nullptr) {
        row.tracking_err_rad = diag->tracking_err[p];
        row.residual_force_n = diag->residual_force[p];
      } else {
        row.tracking_err_rad =
            tracking_error(world.agents[p], kinematic.persons[p].frames[0]);
      }
      result.log.rows.push_back(row);
    }
  };

  record(0, nullptr);

  std::vector<PoseParams> references(persons);
  for (int t = 0; t + 1 < frames; ++t) {
    for (int p = 0; p < persons; ++p) {
      references[p] = kinematic.persons[p].frames[t + 1];
    }
    const auto start = std::chrono::steady_clock::now();
    FrameDiag diag;
    bool diverged = false;
    std::string why;
    try {
      world = advance_frame(world, references, shapes, config, &diag);
    } catch (const SimDiverged& e) {
      diverged = true;
      why = e.what();
    }
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    if (!diverged && elapsed_ms > config.frame_time_budget_ms) {
      diverged = true;
      why = "frame solver time " + fmt_g(elapsed_ms) + " ms exceeded budget " +
            fmt_g(config.frame_time_budget_ms) + " ms";
    }
    if (diverged) {
      if (config.policy == DivergencePolicy::kAbort) {
        throw SimDiverged("diverged at frame " + std::to_string(t + 1) + ": " +
                          why);
      }
      world = reset_to_references(world, references);
    }
    record(t + 1, diverged ? nullptr : &diag);
  }
  return result;
}

}  // namespace physcorrect
