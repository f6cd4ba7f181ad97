#include "physcorrect/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace physcorrect {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.141592653589793238462643383279;
}  // namespace

Mat3 rotation_from_axis_angle(const Vec3& aa) {
  const double theta = aa.norm();
  if (theta < 1e-12) {
    Mat3 r = Mat3::Identity();
    // First-order term keeps tiny rotations continuous through zero.
    r(0, 1) = -aa.z();
    r(1, 0) = aa.z();
    r(0, 2) = aa.y();
    r(2, 0) = -aa.y();
    r(1, 2) = -aa.x();
    r(2, 1) = aa.x();
    return r;
  }
  return Eigen::AngleAxisd(theta, aa / theta).toRotationMatrix();
}

Vec3 axis_angle_from_rotation(const Mat3& r) {
  Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

Vec3 canonicalize_axis_angle(const Vec3& aa) {
  const double theta = aa.norm();
  if (theta <= kPi) {
    return aa;
  }
  double reduced = std::fmod(theta, kTwoPi);
  if (reduced > kPi) {
    reduced -= kTwoPi;  // negative: flips the axis
  }
  return aa * (reduced / theta);
}

Vec3 rotation_log_between(const Mat3& from, const Mat3& to) {
  return axis_angle_from_rotation(Mat3(from.transpose() * to));
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                              Vec3* closest) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  }
  const Vec3 c = a + t * ab;
  if (closest != nullptr) {
    *closest = c;
  }
  return (p - c).norm();
}

double closest_point_segment_segment(const Vec3& p1, const Vec3& q1,
                                     const Vec3& p2, const Vec3& q2,
                                     Vec3& c1, Vec3& c2) {
  constexpr double kEps = 1e-12;
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= kEps && e <= kEps) {
    // Both segments degenerate to points.
  } else if (a <= kEps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= kEps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > kEps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  c1 = p1 + d1 * s;
  c2 = p2 + d2 * t;
  return (c1 - c2).squaredNorm();
}

std::pair<Vec3, Vec3> orthonormal_basis(const Vec3& axis) {
  Vec3 e = Vec3::UnitX();
  const Vec3 abs = axis.cwiseAbs();
  if (abs.y() <= abs.x() && abs.y() <= abs.z()) {
    e = Vec3::UnitY();
  } else if (abs.z() <= abs.x() && abs.z() <= abs.y()) {
    e = Vec3::UnitZ();
  }
  Vec3 v = axis.cross(e).normalized();
  Vec3 w = axis.cross(v);
  return {v, w};
}

double uniform_real(std::mt19937& rng, double lo, double hi) {
  const std::uint64_t hi32 = rng();
  const std::uint64_t lo32 = rng();
  const std::uint64_t bits = ((hi32 << 32) | lo32) >> 11;  // 53 bits
  const double u = static_cast<double>(bits) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

int uniform_int(std::mt19937& rng, int lo, int hi) {
  const double u = uniform_real(rng, 0.0, 1.0);
  const int span = hi - lo + 1;
  int k = lo + static_cast<int>(u * span);
  return std::min(k, hi);
}

double gaussian(std::mt19937& rng) {
  const double u1 = 1.0 - uniform_real(rng, 0.0, 1.0);  // (0, 1]
  const double u2 = uniform_real(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Vec3 random_unit_vector(std::mt19937& rng) {
  Vec3 v;
  do {
    v = Vec3(gaussian(rng), gaussian(rng), gaussian(rng));
  } while (v.squaredNorm() < 1e-12);
  return v.normalized();
}

Mat3 random_rotation(std::mt19937& rng) {
  Eigen::Quaterniond q(gaussian(rng), gaussian(rng), gaussian(rng),
                       gaussian(rng));
  while (q.squaredNorm() < 1e-12) {
    q = Eigen::Quaterniond(gaussian(rng), gaussian(rng), gaussian(rng),
                           gaussian(rng));
  }
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace physcorrect
