#include "physcorrect/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace physcorrect {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

bool PoseParams::is_finite() const {
  if (!root_orient.allFinite() || !root_trans.allFinite()) {
    return false;
  }
  for (const Vec3& v : body_pose) {
    if (!v.allFinite()) {
      return false;
    }
  }
  return true;
}

PoseParams PoseParams::canonicalized() const {
  PoseParams out = *this;
  out.root_orient = canonicalize_axis_angle(root_orient);
  for (Vec3& v : out.body_pose) {
    v = canonicalize_axis_angle(v);
  }
  return out;
}

bool ShapeVector::is_finite() const {
  return std::all_of(beta.begin(), beta.end(),
                     [](double b) { return std::isfinite(b); });
}

ShapeVector ShapeVector::clamped() const {
  ShapeVector out = *this;
  for (double& b : out.beta) {
    b = std::clamp(b, -5.0, 5.0);
  }
  return out;
}

double Skeleton::total_mass() const {
  double m = 0.0;
  for (double b : bone_mass) {
    m += b;
  }
  return m;
}

void recompute_mass(Skeleton& s) {
  const int n = static_cast<int>(s.joints.size());
  s.bone_mass.assign(n, 0.0);
  s.bone_inertia.assign(n, Vec3::Zero());
  for (int j = 1; j < n; ++j) {
    const double r = s.joints[j].radius;
    const double len = s.joints[j].offset.norm();
    const double m_cyl = kBodyDensity * kPi * r * r * len;
    const double m_caps = kBodyDensity * (4.0 / 3.0) * kPi * r * r * r;
    const double mass = m_cyl + m_caps;
    const double axial = m_cyl * r * r / 2.0 + m_caps * 2.0 * r * r / 5.0;
    const double trans =
        m_cyl * (len * len / 12.0 + r * r / 4.0) +
        m_caps * (2.0 * r * r / 5.0 + len * len / 4.0 + 3.0 * len * r / 8.0);
    s.bone_mass[j] = mass;
    s.bone_inertia[j] = Vec3(trans, trans, axial);
  }
}

void validate_skeleton(const Skeleton& s) {
  if (static_cast<int>(s.joints.size()) != kNumJoints) {
    throw SchemaError("skeleton must have exactly " +
                      std::to_string(kNumJoints) + " joints, got " +
                      std::to_string(s.joints.size()));
  }
  if (s.joints[0].parent != -1) {
    throw SchemaError("joint 0 must be the root (parent -1)");
  }
  for (int j = 1; j < kNumJoints; ++j) {
    const Joint& joint = s.joints[j];
    if (joint.parent < 0 || joint.parent >= j) {
      throw SchemaError("joint " + std::to_string(j) +
                        " parent must precede it in topological order");
    }
    if (!(joint.radius > 0.0) || !std::isfinite(joint.radius)) {
      throw SchemaError("joint " + std::to_string(j) +
                        " capsule radius must be positive");
    }
    if (!joint.offset.allFinite()) {
      throw SchemaError("joint " + std::to_string(j) + " offset not finite");
    }
  }
  if (s.bone_mass.size() == s.joints.size()) {
    for (int j = 1; j < kNumJoints; ++j) {
      if (!(s.bone_mass[j] > 0.0)) {
        throw SchemaError("bone " + std::to_string(j) +
                          " mass must be positive");
      }
    }
  }
}

void validate_sequence(const MotionSequence& seq) {
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) {
    throw SchemaError("fps must be positive and finite");
  }
  if (seq.persons.empty()) {
    throw SchemaError("sequence needs at least one person");
  }
  const size_t frames = seq.persons[0].frames.size();
  for (size_t p = 0; p < seq.persons.size(); ++p) {
    const Person& person = seq.persons[p];
    if (person.frames.size() != frames) {
      throw SchemaError("person " + std::to_string(p) +
                        " frame count differs from person 0");
    }
    if (!person.shape.is_finite()) {
      throw SchemaError("person " + std::to_string(p) + " shape not finite");
    }
    for (size_t t = 0; t < person.frames.size(); ++t) {
      const PoseParams& f = person.frames[t];
      if (static_cast<int>(f.body_pose.size()) != kNumBodyJoints) {
        throw SchemaError("person " + std::to_string(p) + " frame " +
                          std::to_string(t) + " has wrong joint count");
      }
      if (!f.is_finite()) {
        throw SchemaError("person " + std::to_string(p) + " frame " +
                          std::to_string(t) + " not finite");
      }
    }
  }
}

Skeleton build_skeleton(const ShapeVector& shape, const Skeleton& tmpl) {
  if (!shape.is_finite()) {
    throw InvalidShape("shape vector contains non-finite coefficients");
  }
  validate_skeleton(tmpl);
  const double scale = std::clamp(1.0 + 0.05 * shape.beta[0], 0.7, 1.3);
  Skeleton out = tmpl;
  for (Joint& j : out.joints) {
    j.offset *= scale;
    j.radius *= scale;
  }
  recompute_mass(out);
  return out;
}

FkResult forward_kinematics(const Skeleton& skeleton, const PoseParams& pose) {
  if (static_cast<int>(skeleton.joints.size()) != kNumJoints ||
      static_cast<int>(pose.body_pose.size()) != kNumBodyJoints) {
    throw DimensionError("pose dimensions do not match skeleton");
  }
  if (!pose.is_finite()) {
    throw DimensionError("pose contains non-finite components");
  }
  FkResult r;
  r.positions.resize(kNumJoints);
  r.frames.resize(kNumJoints);
  r.positions[0] = pose.root_trans;
  r.frames[0] = rotation_from_axis_angle(pose.root_orient);
  for (int j = 1; j < kNumJoints; ++j) {
    const int p = skeleton.joints[j].parent;
    r.positions[j] = r.positions[p] + r.frames[p] * skeleton.joints[j].offset;
    r.frames[j] = r.frames[p] * rotation_from_axis_angle(pose.body_pose[j - 1]);
  }
  return r;
}

std::vector<std::vector<std::vector<Vec3>>> sequence_joints(
    const MotionSequence& seq, const std::vector<Skeleton>& skeletons) {
  validate_sequence(seq);
  if (skeletons.size() != seq.persons.size()) {
    throw DimensionError("one skeleton per person required");
  }
  std::vector<std::vector<std::vector<Vec3>>> out(seq.persons.size());
  for (size_t p = 0; p < seq.persons.size(); ++p) {
    out[p].reserve(seq.persons[p].frames.size());
    for (const PoseParams& pose : seq.persons[p].frames) {
      out[p].push_back(forward_kinematics(skeletons[p], pose).positions);
    }
  }
  return out;
}

double rest_lowest_surface_z(const Skeleton& s) {
  const FkResult rest = forward_kinematics(s, PoseParams{});
  double lowest = 0.0;
  for (int j = 1; j < kNumJoints; ++j) {
    const double a = rest.positions[j].z();
    const double b = rest.positions[s.joints[j].parent].z();
    lowest = std::min(lowest, std::min(a, b) - s.joints[j].radius);
  }
  return lowest;
}

int find_joint(const Skeleton& s, const std::string& name) {
  for (size_t j = 0; j < s.joints.size(); ++j) {
    if (s.joints[j].name == name) {
      return static_cast<int>(j);
    }
  }
  return -1;
}

}  // namespace physcorrect
