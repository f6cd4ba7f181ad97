#include "physcorrect/control.hpp"

#include <algorithm>
#include <cmath>

#include "physcorrect/errors.hpp"

namespace physcorrect {

namespace {

Vec3 clamp_components(const Vec3& v, double limit) {
  return v.cwiseMax(-limit).cwiseMin(limit);
}

Vec3 clamp_magnitude(const Vec3& v, double limit) {
  const double n = v.norm();
  if (n > limit && n > 0.0) {
    return v * (limit / n);
  }
  return v;
}

bool contains(const std::string& s, const char* needle) {
  return s.find(needle) != std::string::npos;
}

}  // namespace

JointGroup joint_group(const std::string& joint_name) {
  if (contains(joint_name, "hip") || contains(joint_name, "spine")) {
    return JointGroup::kTorso;
  }
  if (contains(joint_name, "knee") || contains(joint_name, "ankle") ||
      contains(joint_name, "neck") || contains(joint_name, "collar") ||
      contains(joint_name, "shoulder") || contains(joint_name, "elbow")) {
    return JointGroup::kLimbs;
  }
  return JointGroup::kExtremities;
}

Action track(const SimState& state, const PoseParams& reference,
             const ShapeVector& /*shape*/, const ControllerGains& gains,
             const Skeleton& skeleton) {
  if (static_cast<int>(reference.body_pose.size()) != kNumBodyJoints ||
      state.q.size() != kDofPerAgent) {
    throw DimensionError("track: inconsistent dimensions");
  }
  Action action;
  for (int j = 0; j < kNumBodyJoints; ++j) {
    const int group =
        static_cast<int>(joint_group(skeleton.joints[j + 1].name));
    const Mat3 cur = rotation_from_axis_angle(state.q.segment<3>(6 + 3 * j));
    const Mat3 ref = rotation_from_axis_angle(reference.body_pose[j]);
    const Vec3 err = rotation_log_between(cur, ref);
    const Vec3 qd = state.qdot.segment<3>(6 + 3 * j);
    action.joint_command[j] = clamp_components(
        gains.kp[group] * err - gains.kd[group] * qd,
        gains.torque_limit[group]);
  }

  const Vec3 pos_err = reference.root_trans - Vec3(state.q.segment<3>(0));
  const Vec3 root_v = state.qdot.segment<3>(0);
  action.root_force = clamp_magnitude(
      gains.root_kp * pos_err - gains.root_kd * root_v, gains.f_max);

  // World-frame orientation error keeps the wrench yaw-equivariant.
  const Mat3 cur_root = rotation_from_axis_angle(state.q.segment<3>(3));
  const Mat3 ref_root = rotation_from_axis_angle(reference.root_orient);
  const Vec3 rot_err =
      axis_angle_from_rotation(Mat3(ref_root * cur_root.transpose()));
  const Vec3 root_w = state.qdot.segment<3>(3);
  action.root_torque = clamp_magnitude(
      gains.root_rot_kp * rot_err - gains.root_rot_kd * root_w,
      gains.root_torque_max);
  return action;
}

double tracking_error(const SimState& state, const PoseParams& reference) {
  double sum = 0.0;
  for (int j = 0; j < kNumBodyJoints; ++j) {
    const Mat3 cur = rotation_from_axis_angle(state.q.segment<3>(6 + 3 * j));
    const Mat3 ref = rotation_from_axis_angle(reference.body_pose[j]);
    sum += rotation_log_between(cur, ref).norm();
  }
  return sum / kNumBodyJoints;
}

}  // namespace physcorrect
