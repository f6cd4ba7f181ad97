#include "physcorrect/synth.hpp"

#include <cmath>

namespace physcorrect {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > kPi) {
    a -= kTwoPi;
  } else if (a < -kPi) {
    a += kTwoPi;
  }
  return a;
}

struct TemplateInfo {
  double stand_z = 0.0;
  double torso_radius = 0.0;
  int left_shoulder = -1;
  int right_shoulder = -1;
  int left_hip = -1;
  int right_hip = -1;
  int left_knee = -1;
  int right_knee = -1;
};

TemplateInfo inspect_template(const Skeleton& tmpl) {
  TemplateInfo info;
  info.stand_z = -rest_lowest_surface_z(tmpl);
  const int spine1 = find_joint(tmpl, "spine1");
  info.torso_radius = spine1 >= 0 ? tmpl.joints[spine1].radius : 0.09;
  info.left_shoulder = find_joint(tmpl, "left_shoulder");
  info.right_shoulder = find_joint(tmpl, "right_shoulder");
  info.left_hip = find_joint(tmpl, "left_hip");
  info.right_hip = find_joint(tmpl, "right_hip");
  info.left_knee = find_joint(tmpl, "left_knee");
  info.right_knee = find_joint(tmpl, "right_knee");
  return info;
}

// Standing pose with the arms lowered so they clear other agents and the
// ground in every scenario.
PoseParams relaxed_pose(const TemplateInfo& info, double x, double y,
                        double yaw) {
  PoseParams pose;
  pose.root_trans = Vec3(x, y, info.stand_z);
  pose.root_orient = Vec3(0.0, 0.0, wrap_pi(yaw));
  if (info.left_shoulder > 0) {
    pose.body_pose[info.left_shoulder - 1] = Vec3(0.0, 1.3, 0.0);
  }
  if (info.right_shoulder > 0) {
    pose.body_pose[info.right_shoulder - 1] = Vec3(0.0, -1.3, 0.0);
  }
  return pose;
}

// Sinusoidal leg swing about the lateral axis. Any pitch or knee flexion
// shortens the leg's vertical extent, so the feet never dip below their
// rest height.
void apply_gait(PoseParams& pose, const TemplateInfo& info, double t_sec,
                double phase) {
  constexpr double kStrideHz = 1.5;
  constexpr double kSwing = 0.35;
  constexpr double kFlex = 0.4;
  const double arg = kTwoPi * kStrideHz * t_sec + phase;
  const double s = std::sin(arg);
  if (info.left_hip > 0) {
    pose.body_pose[info.left_hip - 1].x() = kSwing * s;
  }
  if (info.right_hip > 0) {
    pose.body_pose[info.right_hip - 1].x() = -kSwing * s;
  }
  if (info.left_knee > 0) {
    pose.body_pose[info.left_knee - 1].x() = kFlex * std::max(0.0, s);
  }
  if (info.right_knee > 0) {
    pose.body_pose[info.right_knee - 1].x() = kFlex * std::max(0.0, -s);
  }
}

// Yaw that points the local +y (facing) axis along (cos a, sin a).
double yaw_facing(double a) { return wrap_pi(a - kPi / 2.0); }

}  // namespace

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names = {
      "standing",     "walk-past", "static-overlap",
      "dynamic-shove", "ground-sink", "slide"};
  return names;
}

bool is_known_scenario(const std::string& name) {
  for (const std::string& n : known_scenarios()) {
    if (n == name) {
      return true;
    }
  }
  return false;
}

MotionFile synth_scenario(const std::string& name, int frames, double fps,
                          unsigned seed, const Skeleton& tmpl) {
  if (!is_known_scenario(name)) {
    throw SchemaError("unknown scenario \"" + name + "\"");
  }
  if (frames < 2 || !(fps > 0.0)) {
    throw SchemaError("scenario needs frames >= 2 and fps > 0");
  }
  validate_skeleton(tmpl);
  const TemplateInfo info = inspect_template(tmpl);
  std::mt19937 rng(seed);
  const double azimuth = uniform_real(rng, 0.0, kTwoPi);
  const Vec3 dir(std::cos(azimuth), std::sin(azimuth), 0.0);

  MotionFile mf;
  mf.skeleton_template = tmpl;
  mf.sequence.fps = fps;
  mf.sequence.persons.reserve(2);

  auto add_person = [&]() -> Person& {
    mf.sequence.persons.emplace_back();
    return mf.sequence.persons.back();
  };

  if (name == "standing" || name == "ground-sink") {
    const double base_sep = name == "standing" ? 1.0 : 1.2;
    const double sep = base_sep + uniform_real(rng, -0.05, 0.1);
    const double sink = name == "ground-sink" ? 0.03 : 0.0;
    Person& a = add_person();
    Person& b = add_person();
    for (int t = 0; t < frames; ++t) {
      PoseParams pa = relaxed_pose(info, -0.5 * sep * dir.x(),
                                   -0.5 * sep * dir.y(), yaw_facing(azimuth));
      PoseParams pb = relaxed_pose(info, 0.5 * sep * dir.x(),
                                   0.5 * sep * dir.y(),
                                   yaw_facing(azimuth + kPi));
      pa.root_trans.z() -= sink;
      pb.root_trans.z() -= sink;
      a.frames.push_back(pa);
      b.frames.push_back(pb);
    }
  } else if (name == "walk-past") {
    const double lane = 0.6 + uniform_real(rng, 0.0, 0.05);
    const double speed = 0.8 * (1.0 + uniform_real(rng, -0.1, 0.1));
    const double half_path = 0.5 * speed * (frames - 1) / fps;
    const double phase_a = uniform_real(rng, 0.0, kTwoPi);
    const double phase_b = uniform_real(rng, 0.0, kTwoPi);
    const Vec3 side(-dir.y(), dir.x(), 0.0);
    Person& a = add_person();
    Person& b = add_person();
    for (int t = 0; t < frames; ++t) {
      const double t_sec = t / fps;
      const double along = -half_path + speed * t_sec;
      const Vec3 pos_a = -lane * side + along * dir;
      const Vec3 pos_b = lane * side - along * dir;
      PoseParams pa =
          relaxed_pose(info, pos_a.x(), pos_a.y(), yaw_facing(azimuth));
      PoseParams pb =
          relaxed_pose(info, pos_b.x(), pos_b.y(), yaw_facing(azimuth + kPi));
      apply_gait(pa, info, t_sec, phase_a);
      apply_gait(pb, info, t_sec, phase_b);
      a.frames.push_back(pa);
      b.frames.push_back(pb);
    }
  } else if (name == "static-overlap") {
    // Side-by-side, torso capsule axes exactly 2r - 0.05 apart: 0.05 m of
    // torso interpenetration without entangling the feet.
    const double sep = 2.0 * info.torso_radius - 0.05;
    const double yaw = yaw_facing(azimuth + kPi / 2.0);
    Person& a = add_person();
    Person& b = add_person();
    for (int t = 0; t < frames; ++t) {
      a.frames.push_back(relaxed_pose(info, 0.0, 0.0, yaw));
      b.frames.push_back(
          relaxed_pose(info, sep * dir.x(), sep * dir.y(), yaw));
    }
  } else if (name == "dynamic-shove") {
    // A glides straight through B's standing spot; the raw path crosses the
    // whole body, the corrected one has to shove B aside.
    const double speed = 0.5 + uniform_real(rng, -0.05, 0.05);
    const double start_dist = 0.28 + uniform_real(rng, 0.0, 0.04);
    const double lateral = uniform_real(rng, -0.04, 0.04);
    const Vec3 side(-dir.y(), dir.x(), 0.0);
    Person& a = add_person();
    Person& b = add_person();
    for (int t = 0; t < frames; ++t) {
      const double t_sec = t / fps;
      const Vec3 pos = (-start_dist + speed * t_sec) * dir + lateral * side;
      a.frames.push_back(
          relaxed_pose(info, pos.x(), pos.y(), yaw_facing(azimuth)));
      b.frames.push_back(
          relaxed_pose(info, 0.0, 0.0, yaw_facing(azimuth + kPi)));
    }
  } else {  // slide
    Person& a = add_person();
    for (int t = 0; t < frames; ++t) {
      const Vec3 pos = (0.005 * t) * dir;  // exactly 5 mm per frame
      a.frames.push_back(
          relaxed_pose(info, pos.x(), pos.y(), yaw_facing(azimuth)));
    }
  }
  validate_sequence(mf.sequence);
  return mf;
}

}  // namespace physcorrect
