#pragma once

#include <Eigen/Core>

#include "trajsfm/flow_io/field.h"

namespace trajsfm {

// Path-consistency objective over three consecutive positions p0, p1, p2:
//   L = |p1 - p1'|^2 + |p2 - (p0 + F02(p0))|^2 + |p2 - (p1 + F12(p1))|^2
// where p1' is the accumulated position of frame 1 and p0 is fixed.
class WindowObjective {
 public:
  WindowObjective(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1_anchor,
                  const FlowField& flow_12, const FlowField& flow_02,
                  double jacobian_step = 0.5);

  // Variables are stacked as (p1.u, p1.v, p2.u, p2.v).
  double Cost(const Eigen::Vector4d& x) const;
  // Analytic gradient; dF12/dp1 comes from central differences of the
  // bilinearly interpolated field with step jacobian_step.
  Eigen::Vector4d Gradient(const Eigen::Vector4d& x) const;
  bool InBounds(const Eigen::Vector4d& x) const;

  const Eigen::Vector2d& stride2_target() const { return target_; }

 private:
  Eigen::Matrix2d FlowJacobian(const Eigen::Vector2d& p1) const;

  Eigen::Vector2d p1_anchor_;
  Eigen::Vector2d target_;
  const FlowField& flow_12_;
  double jacobian_step_;
};

struct WindowOptimizerOptions {
  int max_iterations = 20;
  double step_size = 0.25;
  double gradient_tolerance = 1e-6;
  double jacobian_step = 0.5;
  // Step halvings allowed within one iteration when the cost would increase.
  int max_step_halvings = 8;
};

struct WindowResult {
  Eigen::Vector2d p1;
  Eigen::Vector2d p2;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
};

// Minimizes the path-consistency objective by gradient descent starting from
// the accumulated positions. The result never has a higher cost than the
// start and never leaves the image.
WindowResult OptimizeWindow(const Eigen::Vector2d& p0,
                            const Eigen::Vector2d& p1_init,
                            const Eigen::Vector2d& p2_init,
                            const FlowField& flow_12, const FlowField& flow_02,
                            const WindowOptimizerOptions& options = {});

// Same objective with a starting iterate different from the anchor p1_init.
WindowResult OptimizeWindowFrom(const Eigen::Vector2d& p0,
                                const Eigen::Vector2d& p1_init,
                                const Eigen::Vector2d& p1_start,
                                const Eigen::Vector2d& p2_start,
                                const FlowField& flow_12,
                                const FlowField& flow_02,
                                const WindowOptimizerOptions& options = {});

}  // namespace trajsfm
