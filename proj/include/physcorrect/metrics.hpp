#pragma once

#include <string>
#include <vector>

#include "physcorrect/collision.hpp"

namespace physcorrect {

/// [person][frame][joint] world positions, meters.
using JointSequence = std::vector<std::vector<std::vector<Vec3>>>;

/// Per-frame capsule lists for one person.
using CapsuleSequence = std::vector<std::vector<Capsule>>;

struct MetricsReport {
  double pen_mm = 0.0;
  double gnd_pen_mm = 0.0;
  double skating_mm = 0.0;
  double acc_err_mm_s2 = 0.0;
  double w_mpjpe_mm = 0.0;
  double pa_mpjpe_joint_mm = 0.0;

  static const char* csv_header();
  std::string csv_row() const;
  std::string to_json() const;
};

struct RigidAlignment {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  Vec3 apply(const Vec3& p) const {
    return scale * (rotation * p) + translation;
  }
};

/// Least-squares rigid (optionally similarity) transform mapping source onto
/// target: Kabsch/Umeyama via cross-covariance SVD with reflection
/// correction. Throws DegenerateAlignment for < 3 pairs or collinear sets.
RigidAlignment procrustes(const std::vector<Vec3>& source,
                          const std::vector<Vec3>& target, bool with_scale);

/// Mean per-joint error without any alignment, mm.
double mpjpe_mm(const JointSequence& pred, const JointSequence& gt);

/// Rigid alignment fit on all persons' frame-0 joints jointly, applied to
/// every predicted frame; mean per-joint error, mm.
double w_mpjpe(const JointSequence& pred, const JointSequence& gt);

/// One rigid alignment over all people and all frames; mean error, mm.
double pa_mpjpe_joint(const JointSequence& pred, const JointSequence& gt);

/// Mean |a_pred - a_gt| of second central differences scaled by fps^2,
/// mm/s^2. Throws TooShort for T < 3.
double accel_error(const JointSequence& pred, const JointSequence& gt,
                   double fps);

struct FootIndices {
  int left = 7;
  int right = 8;
};

FootIndices ankle_indices(const Skeleton& s);

/// Mean horizontal foot displacement per contact frame, mm. A foot is in
/// contact when its height is within h_thresh of the ground in two
/// consecutive frames.
double skating(const JointSequence& joints, double fps, double h_thresh,
               double ground_height, const FootIndices& feet);

CapsuleSequence capsule_track(const Skeleton& skeleton,
                              const std::vector<PoseParams>& frames);

/// Mean over frames of the deepest capsule surface point below the ground
/// plane (all persons pooled), mm.
double ground_penetration(const std::vector<CapsuleSequence>& persons,
                          double ground_height);

/// Cumulative |SDF| of penetrating surface samples of each person into the
/// other, accumulated over the sequence and averaged over the two persons,
/// mm.
double inter_penetration(const CapsuleSequence& a, const CapsuleSequence& b);

/// N-person generalization: each person's samples against the union of all
/// other persons' capsules, averaged per person.
double inter_penetration_multi(const std::vector<CapsuleSequence>& persons);

struct MetricParams {
  double h_thresh = 0.05;
  double ground_height = 0.0;
};

MetricsReport compute_report(const MotionSequence& pred,
                             const std::vector<Skeleton>& pred_skels,
                             const MotionSequence& gt,
                             const std::vector<Skeleton>& gt_skels,
                             const MetricParams& params);

}  // namespace physcorrect
