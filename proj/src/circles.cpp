#include "unimix/circles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "unimix/sampling.hpp"

namespace unimix {

std::string to_string(CircleScenario s) {
  switch (s) {
    case CircleScenario::balanced: return "balanced";
    case CircleScenario::imbalanced: return "imbalanced";
    case CircleScenario::mixup: return "mixup";
    case CircleScenario::unimix: return "unimix";
  }
  return "unknown";
}

CircleScenario parse_circle_scenario(const std::string& name) {
  for (auto s : {CircleScenario::balanced, CircleScenario::imbalanced, CircleScenario::mixup,
                 CircleScenario::unimix}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

BoundaryResult boundary_from_logit_rows(CircleScenario scenario, const Eigen::Matrix2d& weight,
                                        const Eigen::Vector2d& bias) {
  BoundaryResult r;
  r.scenario = scenario;
  r.weight = (weight.row(0) - weight.row(1)).transpose();
  r.bias = bias[0] - bias[1];
  const double norm = r.weight.norm();
  if (!(norm > 0.0)) {
    r.angle_error_deg = 90.0;
    r.offset = 0.0;
    return r;
  }
  // Angle between the lines spanned by w and (1, 1); atan2 stays accurate near 0.
  const double dot = std::abs(r.weight[0] + r.weight[1]);
  const double cross = std::abs(r.weight[0] - r.weight[1]);
  r.angle_error_deg = std::atan2(cross, dot) * 180.0 / std::numbers::pi;
  r.offset = r.bias / norm;
  return r;
}

TrainConfig default_circles_train_config(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.t2_steps = 400;
  cfg.t1_steps = 360;
  cfg.batch_size = 64;
  cfg.lr = LrSchedule{0.1, 0, {}, 1.0};
  cfg.momentum = 0.9;
  cfg.weight_decay = 0.0;
  cfg.loss = LossKind::ce;
  cfg.hidden = {};
  cfg.seed = seed;
  return cfg;
}

CirclesRun run_circles(const TwoCircleSpec& spec, CircleScenario scenario, const TrainConfig& train_cfg) {
  TwoCircleSpec data_spec = spec;
  if (scenario == CircleScenario::balanced) data_spec.n_neg = spec.n_pos;
  const Dataset ds = gen_two_circles(data_spec);

  TrainConfig cfg = train_cfg;
  cfg.hidden = {};
  switch (scenario) {
    case CircleScenario::balanced:
    case CircleScenario::imbalanced:
      cfg.t1_steps = 0;
      break;
    case CircleScenario::mixup:
      cfg.mix = MixConfig{1.0, MixMode::vanilla_mixup, 1.0};
      break;
    case CircleScenario::unimix:
      cfg.mix = MixConfig{0.5, MixMode::unimix_full, -1.0};
      break;
  }

  // Zero start: a random initial direction survives on separable data and
  // would dominate the angle we are trying to measure.
  const Mlp init = init_params({2, 2}, cfg.seed).zeros_like();
  const TrainResult trained = train_alg1(ds, cfg, init);
  const auto& layer = trained.params.layers.front();
  CirclesRun run;
  run.boundary = boundary_from_logit_rows(scenario, layer.weight, layer.bias);

  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    run.cloud.push_back({ds.features()(i, 0), ds.features()(i, 1), ds.labels()[i], false});
  }
  if (scenario == CircleScenario::mixup || scenario == CircleScenario::unimix) {
    // One pass of virtual points the size of the data set, for plotting.
    const ClassPrior prior = empirical_prior(ds);
    const ClassSampler first(ds, prior);
    const ClassSampler second(
        ds, cfg.mix.mode == MixMode::unimix_full ? inverse_prior(prior, cfg.mix.tau) : prior);
    Rng rng = make_stream(cfg.seed, "cloud");
    for (Eigen::Index k = 0; k < ds.size(); ++k) {
      const int a = first.draw_row(rng);
      const int b = second.draw_row(rng);
      const int ya = ds.labels()[a];
      const int yb = ds.labels()[b];
      const double xi = draw_mixing_factor(cfg.mix, prior[ya], prior[yb], rng);
      const MixedSample s =
          mix_pair(ds.features().row(a).transpose(), ya, ds.features().row(b).transpose(), yb, xi);
      run.cloud.push_back({s.x_mixed[0], s.x_mixed[1], xi_aug_class(s), true});
    }
  }
  return run;
}

}  // namespace unimix
