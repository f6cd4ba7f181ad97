#pragma once

#include <memory>
#include <vector>

#include "physcorrect/collision.hpp"
#include "physcorrect/kinematics.hpp"

namespace physcorrect {

inline constexpr int kDofPerAgent = 6 + 3 * kNumBodyJoints;

/// Generalized coordinates of one agent:
/// [root position (3) | root orientation axis-angle (3) | 22 joint
/// axis-angles]. qdot shares the layout (m/s, rad/s).
struct SimState {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(kDofPerAgent);
  Eigen::VectorXd qdot = Eigen::VectorXd::Zero(kDofPerAgent);
};

/// Per-joint PD command (clamped per group by the controller) plus residual
/// root force/torque.
struct Action {
  std::vector<Vec3> joint_command =
      std::vector<Vec3>(kNumBodyJoints, Vec3::Zero());
  Vec3 root_force = Vec3::Zero();   // N
  Vec3 root_torque = Vec3::Zero();  // N*m
};

struct SolverParams {
  double pen_tol = 1e-3;     // residual contact depth allowance, m
  int iterations = 8;        // projection sweeps per resolve call
  double friction_mu = 0.9;  // ground tangential damping proxy
  int max_rounds = 8;        // detect+resolve rounds per step
  double velocity_clamp = 100.0;
};

/// Diagonal joint-space approximation of one humanoid: per-DOF inertias
/// lumped from rest-pose bone masses about each joint, plus a fixed armature
/// term that also bounds the smallest DOF inertia.
struct AgentModel {
  Skeleton skeleton;
  double total_mass = 0.0;
  double inv_mass = 0.0;
  double root_rot_inertia = 0.0;                 // kg*m^2
  std::array<double, kNumBodyJoints> joint_inertia{};
};

AgentModel build_agent_model(const Skeleton& skeleton, double armature);

struct WorldState {
  std::vector<SimState> agents;
  std::vector<std::shared_ptr<const AgentModel>> models;
  double ground_height = 0.0;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  SolverParams solver;
  double time = 0.0;
  long step_index = 0;
};

WorldState make_world(const std::vector<Skeleton>& skeletons,
                      std::vector<SimState> states, double ground_height,
                      double armature = 1.0, SolverParams solver = {});

/// q from the pose; qdot by finite difference against prev scaled by fps,
/// or zero when prev is absent.
SimState state_from_pose(const PoseParams& pose, const SimState* prev,
                         double fps);

/// Inverse of the coordinate embedding; axis-angles are canonicalized.
PoseParams pose_from_state(const SimState& s);

std::vector<Capsule> world_capsules(const WorldState& w, int agent);

/// One integration substep: actions and gravity produce accelerations under
/// the diagonal model, velocities and positions advance (kick-drift-kick),
/// velocities are clamped, then contacts are resolved until no depth
/// exceeds pen_tol. Throws SimDiverged on non-finite state.
WorldState step(const WorldState& w, const std::vector<Action>& actions,
                double dt);

/// Sequential position-level projection along contact normals split by
/// inverse mass, then an inelastic velocity response (approaching normal
/// velocity zeroed; ground tangential velocity scaled by 1 - mu). Contacts
/// are processed in (agent_i, bone_i, agent_j, bone_j) order.
WorldState resolve_contacts(const WorldState& w, const ContactSet& contacts,
                            int iterations);

double kinetic_energy(const WorldState& w);

struct DepthSummary {
  double max_ground = 0.0;
  double max_inter = 0.0;
};

DepthSummary max_contact_depths(const WorldState& w);

}  // namespace physcorrect
