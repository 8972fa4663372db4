#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "unimix/dataset.hpp"
#include "unimix/train.hpp"

namespace unimix {

enum class CircleScenario { balanced, imbalanced, mixup, unimix };

std::string to_string(CircleScenario s);
CircleScenario parse_circle_scenario(const std::string& name);

/// Linear boundary w . x + b = 0 separating class 0 (positive side) from
/// class 1, compared with the ideal boundary y = -x.
struct BoundaryResult {
  CircleScenario scenario;
  Eigen::Vector2d weight;
  double bias = 0.0;
  double angle_error_deg = 0.0;  // angle between w and (1, 1) / sqrt 2, in [0, 90]
  double offset = 0.0;           // signed distance of the boundary from the origin
  double deviation() const { return angle_error_deg + 10.0 * std::abs(offset); }
};

struct CloudPoint {
  double x;
  double y;
  int label;
  bool is_virtual;
};

struct CirclesRun {
  BoundaryResult boundary;
  std::vector<CloudPoint> cloud;
};

/// Boundary geometry of a linear softmax classifier fitted to two (w, b)
/// logit rows.
BoundaryResult boundary_from_logit_rows(CircleScenario scenario, const Eigen::Matrix2d& weight,
                                        const Eigen::Vector2d& bias);

/// Training defaults for the boundary study: no hidden layer, plain CE, all
/// mixing for the first 90% of steps in the mixup/unimix scenarios.
TrainConfig default_circles_train_config(std::uint64_t seed);

/// Balanced scenario uses n_neg = n_pos; the others use spec as given.
/// mixup/unimix add virtual points (mixup: Beta(1,1) with random pairs;
/// unimix: UniMix factor, alpha 0.5, tau -1 partner sampler).
CirclesRun run_circles(const TwoCircleSpec& spec, CircleScenario scenario, const TrainConfig& train_cfg);

}  // namespace unimix
