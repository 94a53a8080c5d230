#include "trajsfm/flow_io/field.h"

namespace trajsfm {

double ForwardBackwardError(const FlowField& forward, const FlowField& backward,
                            const Eigen::Vector2d& p) {
  if (!forward.SameSize(backward)) {
    throw ValidationError("forward/backward flow size mismatch");
  }
  const Eigen::Vector2d fwd = SampleBilinear(forward, p);
  const Eigen::Vector2d q = p + fwd;
  if (!backward.Contains(q)) {
    return kFailedCheck;
  }
  return (fwd + SampleBilinear(backward, q)).norm();
}

}  // namespace trajsfm
