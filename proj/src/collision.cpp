#include "physcorrect/collision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace physcorrect {

namespace {

constexpr double kGoldenAngle = 2.3999632297286533;

struct Aabb {
  Vec3 lo;
  Vec3 hi;
};

Aabb capsule_aabb(const Capsule& c) {
  Aabb box;
  box.lo = c.a.cwiseMin(c.b) - Vec3::Constant(c.radius);
  box.hi = c.a.cwiseMax(c.b) + Vec3::Constant(c.radius);
  return box;
}

bool aabb_overlap(const Aabb& a, const Aabb& b) {
  return (a.lo.array() <= b.hi.array()).all() &&
         (b.lo.array() <= a.hi.array()).all();
}

}  // namespace

double capsule_sdf(const Capsule& c, const Vec3& p) {
  return point_segment_distance(p, c.a, c.b) - c.radius;
}

std::vector<Capsule> agent_capsules(const Skeleton& skeleton,
                                    const FkResult& fk) {
  std::vector<Capsule> caps;
  caps.reserve(kNumBodyJoints);
  for (int j = 1; j < kNumJoints; ++j) {
    Capsule c;
    c.a = fk.positions[skeleton.joints[j].parent];
    c.b = fk.positions[j];
    c.radius = skeleton.joints[j].radius;
    caps.push_back(c);
  }
  return caps;
}

ContactSet detect_contacts(const std::vector<std::vector<Capsule>>& agents,
                           double ground_height) {
  ContactSet contacts;
  const int n = static_cast<int>(agents.size());

  std::vector<std::vector<Aabb>> boxes(n);
  for (int a = 0; a < n; ++a) {
    boxes[a].reserve(agents[a].size());
    for (const Capsule& c : agents[a]) {
      boxes[a].push_back(capsule_aabb(c));
    }
  }

  // Ground plane, one contact per dipping capsule.
  for (int a = 0; a < n; ++a) {
    for (size_t k = 0; k < agents[a].size(); ++k) {
      const Capsule& c = agents[a][k];
      const double low_z = std::min(c.a.z(), c.b.z()) - c.radius;
      const double depth = ground_height - low_z;
      if (depth > 0.0) {
        Contact contact;
        contact.agent_i = a;
        contact.bone_i = static_cast<int>(k);
        contact.agent_j = kGround;
        contact.bone_j = -1;
        const Vec3 low_end = c.a.z() <= c.b.z() ? c.a : c.b;
        contact.point = low_end - Vec3(0.0, 0.0, c.radius);
        contact.normal = Vec3::UnitZ();
        contact.depth = depth;
        contacts.push_back(contact);
      }
    }
  }

  // Inter-agent pairs; same-agent bones are never tested.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (size_t bi = 0; bi < agents[i].size(); ++bi) {
        for (size_t bj = 0; bj < agents[j].size(); ++bj) {
          if (!aabb_overlap(boxes[i][bi], boxes[j][bj])) {
            continue;
          }
          const Capsule& ci = agents[i][bi];
          const Capsule& cj = agents[j][bj];
          Vec3 wi;
          Vec3 wj;
          const double d2 =
              closest_point_segment_segment(ci.a, ci.b, cj.a, cj.b, wi, wj);
          const double rsum = ci.radius + cj.radius;
          if (d2 >= rsum * rsum) {
            continue;
          }
          const double dist = std::sqrt(d2);
          Vec3 normal;
          if (dist > 1e-9) {
            normal = (wi - wj) / dist;
          } else {
            // Crossing or coincident segments: separate perpendicular to
            // both axes when possible, else along the center offset.
            const Vec3 cross = (ci.b - ci.a).cross(cj.b - cj.a);
            const Vec3 centers =
                0.5 * (ci.a + ci.b) - 0.5 * (cj.a + cj.b);
            if (cross.norm() > 1e-9) {
              normal = cross.normalized();
              if (normal.dot(centers) < 0.0) {
                normal = -normal;
              }
            } else if (centers.norm() > 1e-9) {
              normal = centers.normalized();
            } else {
              normal = Vec3::UnitZ();
            }
          }
          Contact contact;
          contact.agent_i = i;
          contact.bone_i = static_cast<int>(bi);
          contact.agent_j = j;
          contact.bone_j = static_cast<int>(bj);
          contact.normal = normal;
          contact.depth = rsum - dist;
          contact.point =
              0.5 * ((wi - normal * ci.radius) + (wj + normal * cj.radius));
          contacts.push_back(contact);
        }
      }
    }
  }
  return contacts;
}

std::vector<Vec3> capsule_surface_samples(const Capsule& c) {
  std::vector<Vec3> pts;
  pts.reserve(kSamplesPerCapsule);

  Vec3 axis = c.b - c.a;
  const double len = axis.norm();
  const bool degenerate = len < 1e-9;
  const Vec3 u = degenerate ? Vec3::UnitZ() : Vec3(axis / len);
  const auto [v, w] = orthonormal_basis(u);

  constexpr int kCapPoints = 16;
  // End caps: pole first, then area-uniform rings. cos(phi) runs 1 -> 0.
  for (int end = 0; end < 2; ++end) {
    const Vec3 center = end == 0 ? c.a : c.b;
    const Vec3 out = end == 0 ? Vec3(-u) : u;
    for (int k = 0; k < kCapPoints; ++k) {
      const double cos_phi = 1.0 - static_cast<double>(k) / (kCapPoints - 1);
      const double sin_phi = std::sqrt(std::max(0.0, 1.0 - cos_phi * cos_phi));
      const double psi = kGoldenAngle * k;
      const Vec3 lateral = v * std::cos(psi) + w * std::sin(psi);
      pts.push_back(center +
                    c.radius * (out * cos_phi + lateral * sin_phi));
    }
  }

  // Cylinder: 4 staggered rings of 8. Degenerate capsules keep these on the
  // equator, which still lies on the sphere surface.
  constexpr int kRings = 4;
  constexpr int kPerRing = 8;
  for (int ring = 0; ring < kRings; ++ring) {
    const double s = (ring + 0.5) / kRings;
    const Vec3 on_axis = c.a + axis * s;
    for (int i = 0; i < kPerRing; ++i) {
      const double psi =
          2.0 * M_PI * (i + 0.5 * (ring % 2)) / kPerRing;
      pts.push_back(on_axis +
                    c.radius * (v * std::cos(psi) + w * std::sin(psi)));
    }
  }
  return pts;
}

std::vector<double> interpenetration_sdf(const std::vector<Capsule>& capsules,
                                         const std::vector<Vec3>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const Vec3& p : samples) {
    double best = std::numeric_limits<double>::infinity();
    for (const Capsule& c : capsules) {
      best = std::min(best, capsule_sdf(c, p));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace physcorrect
