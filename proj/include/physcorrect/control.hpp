#pragma once

#include <string>

#include "physcorrect/dynamics.hpp"

namespace physcorrect {

enum class JointGroup { kTorso = 0, kLimbs = 1, kExtremities = 2 };

JointGroup joint_group(const std::string& joint_name);

/// Gains of the deterministic tracking controller. Per-group kp/kd follow
/// the kd = 2*sqrt(kp) scaling; the root wrench has its own gains and
/// magnitude limits.
struct ControllerGains {
  std::array<double, 3> kp{500.0, 300.0, 100.0};  // torque per rad
  std::array<double, 3> kd{44.721359549995796, 34.641016151377546,
                           20.0};  // torque per rad/s
  std::array<double, 3> torque_limit{200.0, 150.0, 60.0};  // N*m
  double root_kp = 400.0;  // N per m
  double root_kd = 40.0;   // N per m/s
  double f_max = 500.0;    // N
  double root_rot_kp = 300.0;
  double root_rot_kd = 60.0;
  double root_torque_max = 250.0;  // N*m
};

/// Maps (agent state, next reference pose, shape) to the Action driving the
/// agent toward the reference: per-joint command
/// clamp(kp * angle_error - kd * qdot, +-torque_limit) with the shortest-arc
/// rotational error per joint, plus a clamped residual root force/torque.
/// Zero state error and zero velocity produce a zero action. The shape
/// enters only through the skeleton the state was built for.
Action track(const SimState& state, const PoseParams& reference,
             const ShapeVector& shape, const ControllerGains& gains,
             const Skeleton& skeleton);

/// Mean shortest-arc joint angle error (radians) between a state and a
/// reference pose; used for diagnostics.
double tracking_error(const SimState& state, const PoseParams& reference);

}  // namespace physcorrect
