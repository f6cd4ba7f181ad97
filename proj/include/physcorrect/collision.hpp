#pragma once

#include <vector>

#include "physcorrect/geometry.hpp"
#include "physcorrect/kinematics.hpp"

namespace physcorrect {

inline constexpr int kGround = -1;             // sentinel agent id
inline constexpr int kSamplesPerCapsule = 64;  // versioned metric constant

struct Capsule {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double radius = 0.0;
};

/// Signed distance to the capsule surface, negative inside. Exact.
double capsule_sdf(const Capsule& c, const Vec3& p);

struct Contact {
  int agent_i = 0;
  int bone_i = 0;
  int agent_j = kGround;
  int bone_j = -1;
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // unit, pointing from j toward i
  double depth = 0.0;           // >= 0, meters
};

using ContactSet = std::vector<Contact>;

/// World-space bone capsules for one posed skeleton. Entry k spans joint
/// k+1 and its parent, so bone ids in contacts index this list.
std::vector<Capsule> agent_capsules(const Skeleton& skeleton,
                                    const FkResult& fk);

/// One contact per overlapping inter-agent capsule pair plus one per capsule
/// dipping below the ground plane z = ground_height. Bones of the same agent
/// are never tested against each other. Capsule pairs are pruned with
/// axis-aligned bounding boxes before the exact segment test.
ContactSet detect_contacts(const std::vector<std::vector<Capsule>>& agents,
                           double ground_height);

/// Fixed quasi-uniform surface sampling: 16 points per end cap (pole first,
/// area-uniform rings with golden-angle azimuths) and 32 on the cylinder.
/// Degenerate capsules (a == b) fall back to a +z axis.
std::vector<Vec3> capsule_surface_samples(const Capsule& c);

/// Min-over-capsules SDF at each sample point; negative values indicate
/// penetration into the capsule set.
std::vector<double> interpenetration_sdf(const std::vector<Capsule>& capsules,
                                         const std::vector<Vec3>& samples);

}  // namespace physcorrect
