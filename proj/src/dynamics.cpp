#include "physcorrect/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "physcorrect/errors.hpp"

namespace physcorrect {

namespace {

PoseParams pose_from_state_raw(const SimState& s) {
  PoseParams p;
  p.root_trans = s.q.segment<3>(0);
  p.root_orient = s.q.segment<3>(3);
  for (int j = 0; j < kNumBodyJoints; ++j) {
    p.body_pose[j] = s.q.segment<3>(6 + 3 * j);
  }
  return p;
}

void check_finite(const SimState& s, int agent) {
  if (!s.q.allFinite() || !s.qdot.allFinite()) {
    throw SimDiverged("non-finite state for agent " + std::to_string(agent));
  }
}

}  // namespace

AgentModel build_agent_model(const Skeleton& skeleton, double armature) {
  validate_skeleton(skeleton);
  AgentModel m;
  m.skeleton = skeleton;
  if (m.skeleton.bone_mass.size() != m.skeleton.joints.size()) {
    recompute_mass(m.skeleton);
  }
  m.total_mass = m.skeleton.total_mass();
  m.inv_mass = 1.0 / m.total_mass;

  const FkResult rest = forward_kinematics(m.skeleton, PoseParams{});
  m.root_rot_inertia = armature;
  m.joint_inertia.fill(armature);
  for (int b = 1; b < kNumJoints; ++b) {
    const double mass = m.skeleton.bone_mass[b];
    const double trans = m.skeleton.bone_inertia[b].x();
    const Vec3 mid =
        0.5 * (rest.positions[b] + rest.positions[m.skeleton.joints[b].parent]);
    m.root_rot_inertia +=
        trans + mass * (mid - rest.positions[0]).squaredNorm();
    // Lump the bone into every joint on its ancestor chain.
    int j = b;
    while (j > 0) {
      m.joint_inertia[j - 1] +=
          trans + mass * (mid - rest.positions[j]).squaredNorm();
      j = m.skeleton.joints[j].parent;
    }
  }
  return m;
}

WorldState make_world(const std::vector<Skeleton>& skeletons,
                      std::vector<SimState> states, double ground_height,
                      double armature, SolverParams solver) {
  if (skeletons.size() != states.size()) {
    throw DimensionError("one skeleton per agent state required");
  }
  WorldState w;
  w.agents = std::move(states);
  w.models.reserve(skeletons.size());
  for (const Skeleton& s : skeletons) {
    w.models.push_back(
        std::make_shared<const AgentModel>(build_agent_model(s, armature)));
  }
  w.ground_height = ground_height;
  w.solver = solver;
  return w;
}

SimState state_from_pose(const PoseParams& pose, const SimState* prev,
                         double fps) {
  SimState s;
  s.q.segment<3>(0) = pose.root_trans;
  s.q.segment<3>(3) = pose.root_orient;
  for (int j = 0; j < kNumBodyJoints; ++j) {
    s.q.segment<3>(6 + 3 * j) = pose.body_pose[j];
  }
  if (prev != nullptr) {
    s.qdot = (s.q - prev->q) * fps;
  }
  return s;
}

PoseParams pose_from_state(const SimState& s) {
  return pose_from_state_raw(s).canonicalized();
}

std::vector<Capsule> world_capsules(const WorldState& w, int agent) {
  const FkResult fk = forward_kinematics(w.models[agent]->skeleton,
                                         pose_from_state_raw(w.agents[agent]));
  return agent_capsules(w.models[agent]->skeleton, fk);
}

WorldState resolve_contacts(const WorldState& w, const ContactSet& contacts,
                            int iterations) {
  if (iterations < 1) {
    throw std::invalid_argument("resolve_contacts: iterations must be >= 1");
  }
  WorldState out = w;
  if (contacts.empty()) {
    return out;
  }

  std::vector<size_t> order(contacts.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    const Contact& a = contacts[x];
    const Contact& b = contacts[y];
    return std::tie(a.agent_i, a.bone_i, a.agent_j, a.bone_j) <
           std::tie(b.agent_i, b.bone_i, b.agent_j, b.bone_j);
  });

  // Project a hair past the allowance so round-off cannot leave depths
  // straddling pen_tol.
  const double target = 0.999 * w.solver.pen_tol;
  std::vector<Vec3> disp(out.agents.size(), Vec3::Zero());
  for (int it = 0; it < iterations; ++it) {
    bool moved = false;
    for (size_t idx : order) {
      const Contact& c = contacts[idx];
      const Vec3 dj =
          c.agent_j == kGround ? Vec3::Zero() : disp[c.agent_j];
      const double depth =
          c.depth - (disp[c.agent_i] - dj).dot(c.normal);
      if (depth <= target) {
        continue;
      }
      const double wi = out.models[c.agent_i]->inv_mass;
      const double wj =
          c.agent_j == kGround ? 0.0 : out.models[c.agent_j]->inv_mass;
      const double move = (depth - target) / (wi + wj);
      disp[c.agent_i] += c.normal * (move * wi);
      if (c.agent_j != kGround) {
        disp[c.agent_j] -= c.normal * (move * wj);
      }
      moved = true;
    }
    if (!moved) {
      break;
    }
  }
  for (size_t a = 0; a < out.agents.size(); ++a) {
    out.agents[a].q.segment<3>(0) += disp[a];
  }

  // Inelastic velocity response, once per contact in the same order.
  for (size_t idx : order) {
    const Contact& c = contacts[idx];
    if (c.agent_j == kGround) {
      Vec3 v = out.agents[c.agent_i].qdot.segment<3>(0);
      const double vn = v.dot(c.normal);
      Vec3 vt = v - c.normal * vn;
      vt *= (1.0 - w.solver.friction_mu);
      out.agents[c.agent_i].qdot.segment<3>(0) =
          vt + c.normal * std::max(vn, 0.0);
    } else {
      Vec3 vi = out.agents[c.agent_i].qdot.segment<3>(0);
      Vec3 vj = out.agents[c.agent_j].qdot.segment<3>(0);
      const double vn = (vi - vj).dot(c.normal);
      if (vn < 0.0) {
        const double wi = out.models[c.agent_i]->inv_mass;
        const double wj = out.models[c.agent_j]->inv_mass;
        const double s = vn / (wi + wj);
        out.agents[c.agent_i].qdot.segment<3>(0) = vi - c.normal * (s * wi);
        out.agents[c.agent_j].qdot.segment<3>(0) = vj + c.normal * (s * wj);
      }
    }
  }
  return out;
}

WorldState step(const WorldState& w, const std::vector<Action>& actions,
                double dt) {
  if (!(dt > 0.0 && dt <= 0.05)) {
    throw std::invalid_argument("step: dt must lie in (0, 0.05]");
  }
  if (actions.size() != w.agents.size()) {
    throw DimensionError("one action per agent required");
  }
  WorldState out = w;
  for (size_t a = 0; a < out.agents.size(); ++a) {
    const AgentModel& m = *out.models[a];
    const Action& act = actions[a];
    if (static_cast<int>(act.joint_command.size()) != kNumBodyJoints) {
      throw DimensionError("action joint command has wrong size");
    }
    Eigen::VectorXd acc(kDofPerAgent);
    acc.segment<3>(0) = out.gravity + act.root_force * m.inv_mass;
    acc.segment<3>(3) = act.root_torque / m.root_rot_inertia;
    for (int j = 0; j < kNumBodyJoints; ++j) {
      acc.segment<3>(6 + 3 * j) = act.joint_command[j] / m.joint_inertia[j];
    }
    SimState& s = out.agents[a];
    s.qdot += acc * (0.5 * dt);
    s.q += s.qdot * dt;
    s.qdot += acc * (0.5 * dt);
    const double clamp = out.solver.velocity_clamp;
    s.qdot = s.qdot.cwiseMax(-clamp).cwiseMin(clamp);
    check_finite(s, static_cast<int>(a));
  }
  if (!std::isfinite(kinetic_energy(out))) {
    throw SimDiverged("non-finite energy after integration");
  }

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

  out.time += dt;
  out.step_index += 1;
  return out;
}

double kinetic_energy(const WorldState& w) {
  double e = 0.0;
  for (size_t a = 0; a < w.agents.size(); ++a) {
    const AgentModel& m = *w.models[a];
    const SimState& s = w.agents[a];
    e += 0.5 * m.total_mass * s.qdot.segment<3>(0).squaredNorm();
    e += 0.5 * m.root_rot_inertia * s.qdot.segment<3>(3).squaredNorm();
    for (int j = 0; j < kNumBodyJoints; ++j) {
      e += 0.5 * m.joint_inertia[j] * s.qdot.segment<3>(6 + 3 * j).squaredNorm();
    }
  }
  return e;
}

DepthSummary max_contact_depths(const WorldState& w) {
  std::vector<std::vector<Capsule>> caps;
  caps.reserve(w.agents.size());
  for (size_t a = 0; a < w.agents.size(); ++a) {
    caps.push_back(world_capsules(w, static_cast<int>(a)));
  }
  DepthSummary summary;
  for (const Contact& c : detect_contacts(caps, w.ground_height)) {
    if (c.agent_j == kGround) {
      summary.max_ground = std::max(summary.max_ground, c.depth);
    } else {
      summary.max_inter = std::max(summary.max_inter, c.depth);
    }
  }
  return summary;
}

}  // namespace physcorrect
