#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>

namespace physcorrect {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation matrix for an axis-angle vector (magnitude = angle, radians).
Mat3 rotation_from_axis_angle(const Vec3& aa);

/// Inverse of rotation_from_axis_angle; returned magnitude lies in [0, pi].
Vec3 axis_angle_from_rotation(const Mat3& r);

/// Remaps an axis-angle vector so its magnitude lies in [0, pi]
/// (angle -theta about axis a equals theta about -a). Vectors already in
/// range are returned unchanged, so the operation is idempotent.
Vec3 canonicalize_axis_angle(const Vec3& aa);

/// Shortest-arc rotation taking `from` to `to`, i.e. log(from^T * to).
Vec3 rotation_log_between(const Mat3& from, const Mat3& to);

/// Distance from p to segment [a, b]; optionally reports the closest point.
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                              Vec3* closest = nullptr);

/// Closest points between segments [p1,q1] and [p2,q2]. Returns the squared
/// distance and writes the witness points.
double closest_point_segment_segment(const Vec3& p1, const Vec3& q1,
                                     const Vec3& p2, const Vec3& q2,
                                     Vec3& c1, Vec3& c2);

/// Deterministic orthonormal frame completion for a unit axis.
std::pair<Vec3, Vec3> orthonormal_basis(const Vec3& axis);

// RNG helpers built on raw mt19937 draws. std::uniform_real_distribution is
// not pinned across standard libraries; these are, which keeps seeded
// fixtures reproducible.
double uniform_real(std::mt19937& rng, double lo, double hi);
int uniform_int(std::mt19937& rng, int lo, int hi);  // inclusive bounds
double gaussian(std::mt19937& rng);
Vec3 random_unit_vector(std::mt19937& rng);
Mat3 random_rotation(std::mt19937& rng);

}  // namespace physcorrect
