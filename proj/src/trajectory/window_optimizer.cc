#include "trajsfm/trajectory/window_optimizer.h"

#include <algorithm>

namespace trajsfm {

WindowObjective::WindowObjective(const Eigen::Vector2d& p0,
                                 const Eigen::Vector2d& p1_anchor,
                                 const FlowField& flow_12,
                                 const FlowField& flow_02,
                                 double jacobian_step)
    : p1_anchor_(p1_anchor),
      target_(p0 + SampleBilinear(flow_02, p0)),
      flow_12_(flow_12),
      jacobian_step_(jacobian_step) {}

bool WindowObjective::InBounds(const Eigen::Vector4d& x) const {
  return flow_12_.Contains(x.head<2>()) && flow_12_.Contains(x.tail<2>());
}

double WindowObjective::Cost(const Eigen::Vector4d& x) const {
  const Eigen::Vector2d p1 = x.head<2>();
  const Eigen::Vector2d p2 = x.tail<2>();
  const Eigen::Vector2d r3 = p2 - p1 - SampleBilinear(flow_12_, p1);
  return (p1 - p1_anchor_).squaredNorm() + (p2 - target_).squaredNorm() +
         r3.squaredNorm();
}

Eigen::Matrix2d WindowObjective::FlowJacobian(const Eigen::Vector2d& p1) const {
  Eigen::Matrix2d jacobian;
  const double limits[2] = {static_cast<double>(flow_12_.width() - 1),
                            static_cast<double>(flow_12_.height() - 1)};
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d plus = p1;
    Eigen::Vector2d minus = p1;
    // Near the border the stencil shrinks to stay inside the field.
    plus[k] = std::min(limits[k], p1[k] + jacobian_step_);
    minus[k] = std::max(0.0, p1[k] - jacobian_step_);
    const double span = plus[k] - minus[k];
    if (span <= 0.0) {
      jacobian.col(k).setZero();
      continue;
    }
    jacobian.col(k) =
        (SampleBilinear(flow_12_, plus) - SampleBilinear(flow_12_, minus)) /
        span;
  }
  return jacobian;
}

Eigen::Vector4d WindowObjective::Gradient(const Eigen::Vector4d& x) const {
  const Eigen::Vector2d p1 = x.head<2>();
  const Eigen::Vector2d p2 = x.tail<2>();
  const Eigen::Vector2d r1 = p1 - p1_anchor_;
  const Eigen::Vector2d r2 = p2 - target_;
  const Eigen::Vector2d r3 = p2 - p1 - SampleBilinear(flow_12_, p1);
  const Eigen::Matrix2d d_r3_d_p1 = -(Eigen::Matrix2d::Identity() +
                                      FlowJacobian(p1));
  Eigen::Vector4d gradient;
  gradient.head<2>() = 2.0 * r1 + 2.0 * d_r3_d_p1.transpose() * r3;
  gradient.tail<2>() = 2.0 * r2 + 2.0 * r3;
  return gradient;
}

WindowResult OptimizeWindowFrom(const Eigen::Vector2d& p0,
                                const Eigen::Vector2d& p1_init,
                                const Eigen::Vector2d& p1_start,
                                const Eigen::Vector2d& p2_start,
                                const FlowField& flow_12,
                                const FlowField& flow_02,
                                const WindowOptimizerOptions& options) {
  const WindowObjective objective(p0, p1_init, flow_12, flow_02,
                                  options.jacobian_step);
  Eigen::Vector4d x;
  x << p1_start, p2_start;

  WindowResult result;
  result.p1 = p1_start;
  result.p2 = p2_start;
  if (!objective.InBounds(x)) {
    return result;
  }
  double cost = objective.Cost(x);
  result.initial_cost = cost;
  result.final_cost = cost;

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    const Eigen::Vector4d gradient = objective.Gradient(x);
    if (gradient.norm() < options.gradient_tolerance) break;
    result.iterations = iteration + 1;

    double step = options.step_size;
    bool accepted = false;
    bool left_image = false;
    for (int halving = 0; halving <= options.max_step_halvings; ++halving) {
      const Eigen::Vector4d candidate = x - step * gradient;
      if (!objective.InBounds(candidate)) {
        left_image = true;
        break;
      }
      const double candidate_cost = objective.Cost(candidate);
      if (candidate_cost <= cost) {
        x = candidate;
        cost = candidate_cost;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (left_image || !accepted) break;
  }

  result.p1 = x.head<2>();
  result.p2 = x.tail<2>();
  result.final_cost = cost;
  return result;
}

WindowResult OptimizeWindow(const Eigen::Vector2d& p0,
                            const Eigen::Vector2d& p1_init,
                            const Eigen::Vector2d& p2_init,
                            const FlowField& flow_12, const FlowField& flow_02,
                            const WindowOptimizerOptions& options) {
  return OptimizeWindowFrom(p0, p1_init, p1_init, p2_init, flow_12, flow_02,
                            options);
}

}  // namespace trajsfm
