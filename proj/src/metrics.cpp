#include "physcorrect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "physcorrect/errors.hpp"

namespace physcorrect {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void check_same_shape(const JointSequence& pred, const JointSequence& gt) {
  if (pred.size() != gt.size() || pred.empty()) {
    throw DimensionError("joint sequences must share the person count");
  }
  for (size_t p = 0; p < pred.size(); ++p) {
    if (pred[p].size() != gt[p].size() || pred[p].empty()) {
      throw DimensionError("joint sequences must share the frame count");
    }
    for (size_t t = 0; t < pred[p].size(); ++t) {
      if (pred[p][t].size() != gt[p][t].size() || pred[p][t].empty()) {
        throw DimensionError("joint sequences must share the joint count");
      }
    }
  }
}

double mean_error_mm(const JointSequence& pred, const JointSequence& gt,
                     const RigidAlignment* align) {
  double sum = 0.0;
  long count = 0;
  for (size_t p = 0; p < pred.size(); ++p) {
    for (size_t t = 0; t < pred[p].size(); ++t) {
      for (size_t j = 0; j < pred[p][t].size(); ++j) {
        const Vec3 x =
            align != nullptr ? align->apply(pred[p][t][j]) : pred[p][t][j];
        sum += (x - gt[p][t][j]).norm();
        ++count;
      }
    }
  }
  return count > 0 ? 1000.0 * sum / count : 0.0;
}

// Sum over frames of |SDF| of `self` samples penetrating `others`.
double penetration_into(const CapsuleSequence& self,
                        const std::vector<const CapsuleSequence*>& others) {
  double total = 0.0;
  for (size_t t = 0; t < self.size(); ++t) {
    for (const Capsule& c : self[t]) {
      const std::vector<Vec3> samples = capsule_surface_samples(c);
      for (const Vec3& s : samples) {
        double best = std::numeric_limits<double>::infinity();
        for (const CapsuleSequence* other : others) {
          for (const Capsule& oc : (*other)[t]) {
            best = std::min(best, capsule_sdf(oc, s));
          }
        }
        if (best < 0.0) {
          total += -best;
        }
      }
    }
  }
  return total;
}

}  // namespace

const char* MetricsReport::csv_header() {
  return "pen_mm,gnd_pen_mm,skating_mm,acc_err_mm_s2,w_mpjpe_mm,"
         "pa_mpjpe_joint_mm";
}

std::string MetricsReport::csv_row() const {
  return fmt_g(pen_mm) + "," + fmt_g(gnd_pen_mm) + "," + fmt_g(skating_mm) +
         "," + fmt_g(acc_err_mm_s2) + "," + fmt_g(w_mpjpe_mm) + "," +
         fmt_g(pa_mpjpe_joint_mm);
}

std::string MetricsReport::to_json() const {
  return std::string("{\n") + "\"pen_mm\": " + fmt_g(pen_mm) + ",\n" +
         "\"gnd_pen_mm\": " + fmt_g(gnd_pen_mm) + ",\n" +
         "\"skating_mm\": " + fmt_g(skating_mm) + ",\n" +
         "\"acc_err_mm_s2\": " + fmt_g(acc_err_mm_s2) + ",\n" +
         "\"w_mpjpe_mm\": " + fmt_g(w_mpjpe_mm) + ",\n" +
         "\"pa_mpjpe_joint_mm\": " + fmt_g(pa_mpjpe_joint_mm) + "\n}\n";
}

RigidAlignment procrustes(const std::vector<Vec3>& source,
                          const std::vector<Vec3>& target, bool with_scale) {
  const size_t n = source.size();
  if (n != target.size()) {
    throw DimensionError("procrustes: point counts differ");
  }
  if (n < 3) {
    throw DegenerateAlignment("procrustes: need at least 3 point pairs");
  }
  Vec3 src_mean = Vec3::Zero();
  Vec3 tgt_mean = Vec3::Zero();
  for (size_t i = 0; i < n; ++i) {
    src_mean += source[i];
    tgt_mean += target[i];
  }
  src_mean /= static_cast<double>(n);
  tgt_mean /= static_cast<double>(n);

  Mat3 cross = Mat3::Zero();  // sum of src_hat * tgt_hat^T
  Mat3 src_cov = Mat3::Zero();
  Mat3 tgt_cov = Mat3::Zero();
  double src_var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec3 x = source[i] - src_mean;
    const Vec3 y = target[i] - tgt_mean;
    cross += x * y.transpose();
    src_cov += x * x.transpose();
    tgt_cov += y * y.transpose();
    src_var += x.squaredNorm();
  }

  auto rank_deficient = [](const Mat3& cov) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    const Vec3 ev = es.eigenvalues().cwiseMax(0.0);
    const double largest = ev.maxCoeff();
    // Collinear or coincident: at most one significant direction.
    return largest <= 0.0 || ev(1) <= 1e-12 * largest;
  };
  if (rank_deficient(src_cov) || rank_deficient(tgt_cov)) {
    throw DegenerateAlignment("procrustes: collinear or coincident points");
  }

  Eigen::JacobiSVD<Mat3> svd(cross,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Vec3 d = Vec3::Ones();
  if ((v * u.transpose()).determinant() < 0.0) {
    d(2) = -1.0;
  }
  RigidAlignment out;
  out.rotation = v * d.asDiagonal() * u.transpose();
  if (with_scale) {
    out.scale = svd.singularValues().dot(d) / src_var;
  }
  out.translation = tgt_mean - out.scale * (out.rotation * src_mean);
  return out;
}

double mpjpe_mm(const JointSequence& pred, const JointSequence& gt) {
  check_same_shape(pred, gt);
  return mean_error_mm(pred, gt, nullptr);
}

double w_mpjpe(const JointSequence& pred, const JointSequence& gt) {
  check_same_shape(pred, gt);
  std::vector<Vec3> src;
  std::vector<Vec3> tgt;
  for (size_t p = 0; p < pred.size(); ++p) {
    src.insert(src.end(), pred[p][0].begin(), pred[p][0].end());
    tgt.insert(tgt.end(), gt[p][0].begin(), gt[p][0].end());
  }
  const RigidAlignment align = procrustes(src, tgt, false);
  return mean_error_mm(pred, gt, &align);
}

double pa_mpjpe_joint(const JointSequence& pred, const JointSequence& gt) {
  check_same_shape(pred, gt);
  std::vector<Vec3> src;
  std::vector<Vec3> tgt;
  for (size_t p = 0; p < pred.size(); ++p) {
    for (size_t t = 0; t < pred[p].size(); ++t) {
      src.insert(src.end(), pred[p][t].begin(), pred[p][t].end());
      tgt.insert(tgt.end(), gt[p][t].begin(), gt[p][t].end());
    }
  }
  const RigidAlignment align = procrustes(src, tgt, false);
  return mean_error_mm(pred, gt, &align);
}

double accel_error(const JointSequence& pred, const JointSequence& gt,
                   double fps) {
  check_same_shape(pred, gt);
  const size_t frames = pred[0].size();
  if (frames < 3) {
    throw TooShort("accel_error needs at least 3 frames");
  }
  const double fps2 = fps * fps;
  double sum = 0.0;
  long count = 0;
  for (size_t p = 0; p < pred.size(); ++p) {
    for (size_t t = 1; t + 1 < frames; ++t) {
      for (size_t j = 0; j < pred[p][t].size(); ++j) {
        const Vec3 ap =
            (pred[p][t + 1][j] - 2.0 * pred[p][t][j] + pred[p][t - 1][j]) *
            fps2;
        const Vec3 ag =
            (gt[p][t + 1][j] - 2.0 * gt[p][t][j] + gt[p][t - 1][j]) * fps2;
        sum += (ap - ag).norm();
        ++count;
      }
    }
  }
  return count > 0 ? 1000.0 * sum / count : 0.0;
}

FootIndices ankle_indices(const Skeleton& s) {
  FootIndices feet;
  const int left = find_joint(s, "left_ankle");
  const int right = find_joint(s, "right_ankle");
  if (left >= 0) {
    feet.left = left;
  }
  if (right >= 0) {
    feet.right = right;
  }
  return feet;
}

double skating(const JointSequence& joints, double /*fps*/, double h_thresh,
               double ground_height, const FootIndices& feet) {
  double sum = 0.0;
  long contact_pairs = 0;
  const double limit = ground_height + h_thresh;
  for (const auto& person : joints) {
    for (int foot : {feet.left, feet.right}) {
      for (size_t t = 0; t + 1 < person.size(); ++t) {
        const Vec3& a = person[t][foot];
        const Vec3& b = person[t + 1][foot];
        if (a.z() <= limit && b.z() <= limit) {
          sum += (b.head<2>() - a.head<2>()).norm();
          ++contact_pairs;
        }
      }
    }
  }
  return contact_pairs > 0 ? 1000.0 * sum / contact_pairs : 0.0;
}

CapsuleSequence capsule_track(const Skeleton& skeleton,
                              const std::vector<PoseParams>& frames) {
  CapsuleSequence out;
  out.reserve(frames.size());
  for (const PoseParams& pose : frames) {
    out.push_back(agent_capsules(skeleton, forward_kinematics(skeleton, pose)));
  }
  return out;
}

double ground_penetration(const std::vector<CapsuleSequence>& persons,
                          double ground_height) {
  if (persons.empty() || persons[0].empty()) {
    return 0.0;
  }
  const size_t frames = persons[0].size();
  double sum = 0.0;
  for (size_t t = 0; t < frames; ++t) {
    double depth = 0.0;
    for (const CapsuleSequence& person : persons) {
      for (const Capsule& c : person[t]) {
        const double low = std::min(c.a.z(), c.b.z()) - c.radius;
        depth = std::max(depth, ground_height - low);
      }
    }
    sum += depth;
  }
  return 1000.0 * sum / static_cast<double>(frames);
}

double inter_penetration(const CapsuleSequence& a, const CapsuleSequence& b) {
  if (a.size() != b.size()) {
    throw DimensionError("inter_penetration: frame counts differ");
  }
  const double total = penetration_into(a, {&b}) + penetration_into(b, {&a});
  return 1000.0 * total / 2.0;
}

double inter_penetration_multi(const std::vector<CapsuleSequence>& persons) {
  if (persons.size() < 2) {
    return 0.0;
  }
  double total = 0.0;
  for (size_t p = 0; p < persons.size(); ++p) {
    std::vector<const CapsuleSequence*> others;
    for (size_t q = 0; q < persons.size(); ++q) {
      if (q != p) {
        others.push_back(&persons[q]);
      }
    }
    total += penetration_into(persons[p], others);
  }
  return 1000.0 * total / static_cast<double>(persons.size());
}

MetricsReport compute_report(const MotionSequence& pred,
                             const std::vector<Skeleton>& pred_skels,
                             const MotionSequence& gt,
                             const std::vector<Skeleton>& gt_skels,
                             const MetricParams& params) {
  const JointSequence pred_joints = sequence_joints(pred, pred_skels);
  const JointSequence gt_joints = sequence_joints(gt, gt_skels);

  std::vector<CapsuleSequence> pred_caps;
  pred_caps.reserve(pred.persons.size());
  for (size_t p = 0; p < pred.persons.size(); ++p) {
    pred_caps.push_back(capsule_track(pred_skels[p], pred.persons[p].frames));
  }

  MetricsReport report;
  report.pen_mm = inter_penetration_multi(pred_caps);
  report.gnd_pen_mm = ground_penetration(pred_caps, params.ground_height);
  report.skating_mm = skating(pred_joints, pred.fps, params.h_thresh,
                              params.ground_height,
                              ankle_indices(pred_skels[0]));
  report.acc_err_mm_s2 = accel_error(pred_joints, gt_joints, pred.fps);
  report.w_mpjpe_mm = w_mpjpe(pred_joints, gt_joints);
  report.pa_mpjpe_joint_mm = pa_mpjpe_joint(pred_joints, gt_joints);
  return report;
}

}  // namespace physcorrect
