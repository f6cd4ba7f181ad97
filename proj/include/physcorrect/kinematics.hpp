#pragma once

#include <array>
#include <string>
#include <vector>

#include "physcorrect/errors.hpp"
#include "physcorrect/geometry.hpp"

namespace physcorrect {

inline constexpr int kNumBodyJoints = 22;
inline constexpr int kNumJoints = kNumBodyJoints + 1;  // root + body joints
inline constexpr int kShapeDim = 16;
inline constexpr double kBodyDensity = 1000.0;  // kg/m^3

/// One person's pose at one frame. Axis-angle magnitudes are kept canonical
/// in [0, pi].
struct PoseParams {
  Vec3 root_orient = Vec3::Zero();
  std::vector<Vec3> body_pose =
      std::vector<Vec3>(kNumBodyJoints, Vec3::Zero());
  Vec3 root_trans = Vec3::Zero();

  bool is_finite() const;
  PoseParams canonicalized() const;
};

/// Dimensionless shape coefficients, fixed per person across all frames.
struct ShapeVector {
  std::array<double, kShapeDim> beta{};

  bool is_finite() const;
  ShapeVector clamped() const;  // each coefficient into [-5, 5]
};

struct Joint {
  std::string name;
  int parent = -1;             // -1 marks the root
  Vec3 offset = Vec3::Zero();  // rest offset from parent, meters
  double radius = 0.0;         // capsule radius of the bone to the parent
};

/// Joint tree with one capsule per non-root joint (spanning the joint and
/// its parent). Bone masses and principal inertias follow from capsule
/// volume at kBodyDensity.
struct Skeleton {
  std::vector<Joint> joints;
  std::vector<double> bone_mass;   // [kNumJoints], zero at the root
  std::vector<Vec3> bone_inertia;  // principal (transverse, transverse, axial)

  double total_mass() const;
};

/// Recomputes bone masses/inertias from the current offsets and radii.
void recompute_mass(Skeleton& s);

/// Throws SchemaError when the tree or geometry is invalid.
void validate_skeleton(const Skeleton& s);

struct Person {
  ShapeVector shape;
  std::vector<PoseParams> frames;
};

struct MotionSequence {
  double fps = 0.0;
  std::vector<Person> persons;

  int frame_count() const {
    return persons.empty() ? 0 : static_cast<int>(persons[0].frames.size());
  }
  int person_count() const { return static_cast<int>(persons.size()); }
};

void validate_sequence(const MotionSequence& seq);

/// Scales the template by s(beta) = clamp(1 + 0.05 * beta[0], 0.7, 1.3),
/// applied to every offset and capsule radius, then recomputes masses.
Skeleton build_skeleton(const ShapeVector& shape, const Skeleton& tmpl);

struct FkResult {
  std::vector<Vec3> positions;  // [kNumJoints] world points, meters
  std::vector<Mat3> frames;     // [kNumJoints] world rotations
};

FkResult forward_kinematics(const Skeleton& skeleton, const PoseParams& pose);

/// [person][frame][joint] world positions.
std::vector<std::vector<std::vector<Vec3>>> sequence_joints(
    const MotionSequence& seq, const std::vector<Skeleton>& skeletons);

/// Lowest capsule surface point at the rest pose, relative to the root.
double rest_lowest_surface_z(const Skeleton& s);

/// Index of the named joint, or -1.
int find_joint(const Skeleton& s, const std::string& name);

}  // namespace physcorrect
