#include "trajsfm/eval/metrics.h"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {
namespace {

std::vector<Eigen::Vector3d> Positions(const std::vector<TimedPose>& poses) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.position);
  return out;
}

void CheckPaired(const std::vector<TimedPose>& est, const std::vector<TimedPose>& gt) {
  if (est.size() != gt.size()) {
    throw ValidationError("trajectories differ in length: " +
                          std::to_string(est.size()) + " vs " +
                          std::to_string(gt.size()));
  }
}

}  // namespace

double AteRmse(const std::vector<TimedPose>& est, const std::vector<TimedPose>& gt) {
  CheckPaired(est, gt);
  const auto source = Positions(est);
  const auto target = Positions(gt);
  return AlignmentRmse(UmeyamaAlign(source, target, true), source, target);
}

RpeResult Rpe(const std::vector<TimedPose>& est, const std::vector<TimedPose>& gt,
              int delta) {
  CheckPaired(est, gt);
  if (delta < 1) throw ValidationError("RPE delta must be >= 1");
  RpeResult result;
  if (est.size() <= static_cast<size_t>(delta)) return result;
  const Sim3Transform align = UmeyamaAlign(Positions(est), Positions(gt), true);

  // Camera-to-world poses as (R, p); the estimate is similarity-aligned.
  auto aligned = [&](size_t k) {
    return std::pair<Eigen::Matrix3d, Eigen::Vector3d>(
        (align.rotation * est[k].orientation).toRotationMatrix(),
        align.Apply(est[k].position));
  };
  auto truth = [&](size_t k) {
    return std::pair<Eigen::Matrix3d, Eigen::Vector3d>(
        gt[k].orientation.toRotationMatrix(), gt[k].position);
  };
  auto relative = [](const std::pair<Eigen::Matrix3d, Eigen::Vector3d>& a,
                     const std::pair<Eigen::Matrix3d, Eigen::Vector3d>& b) {
    return std::pair<Eigen::Matrix3d, Eigen::Vector3d>(
        a.first.transpose() * b.first, a.first.transpose() * (b.second - a.second));
  };

  double sum_t = 0.0;
  double sum_r = 0.0;
  for (size_t i = 0; i + delta < est.size(); ++i) {
    const auto q = relative(truth(i), truth(i + delta));
    const auto p = relative(aligned(i), aligned(i + delta));
    // E = Q_rel^-1 P_rel
    const Eigen::Matrix3d er = q.first.transpose() * p.first;
    const Eigen::Vector3d et = q.first.transpose() * (p.second - q.second);
    sum_t += et.squaredNorm();
    const double angle = RotationAngle(Eigen::Matrix3d::Identity(), er);
    sum_r += angle * angle;
    ++result.pairs;
  }
  result.trans = std::sqrt(sum_t / result.pairs);
  result.rot_deg = RadToDeg(std::sqrt(sum_r / result.pairs));
  return result;
}

MetricsReport Evaluate(const std::vector<TimedPose>& est,
                       const std::vector<TimedPose>& gt, int delta) {
  std::map<double, const TimedPose*> by_time;
  for (const auto& p : est) by_time[p.timestamp] = &p;
  std::vector<TimedPose> est_paired;
  std::vector<TimedPose> gt_paired;
  for (const auto& g : gt) {
    const auto it = by_time.find(g.timestamp);
    if (it == by_time.end()) continue;
    est_paired.push_back(*it->second);
    gt_paired.push_back(g);
  }
  if (est_paired.size() < 3) {
    throw ValidationError("fewer than 3 poses share timestamps (" +
                          std::to_string(est_paired.size()) + ")");
  }
  MetricsReport report;
  report.poses = est_paired.size();
  report.delta = delta;
  report.ate_rmse = AteRmse(est_paired, gt_paired);
  const RpeResult rpe = Rpe(est_paired, gt_paired, delta);
  report.rpe_trans = rpe.trans;
  report.rpe_rot = rpe.rot_deg;
  return report;
}

std::string FormatReport(const MetricsReport& report) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "poses:      " << report.poses << "\n"
      << "ATE RMSE:   " << report.ate_rmse << "\n"
      << "RPE trans:  " << report.rpe_trans << " (delta " << report.delta << ")\n"
      << "RPE rot:    " << report.rpe_rot << " deg\n";
  return out.str();
}

std::string FormatKeyValue(const MetricsReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "ate_rmse=" << report.ate_rmse << "\n"
      << "rpe_trans=" << report.rpe_trans << "\n"
      << "rpe_rot=" << report.rpe_rot << "\n";
  return out.str();
}

}  // namespace trajsfm
