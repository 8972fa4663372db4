#include "unimix/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "unimix/sampling.hpp"

namespace unimix {

double LrSchedule::at(int step) const {
  double lr = base_lr;
  if (warmup_steps > 0 && step < warmup_steps) lr = base_lr * (step + 1) / warmup_steps;
  for (int d : decay_steps) {
    if (step >= d) lr *= decay_factor;
  }
  return lr;
}

LrSchedule LrSchedule::scaled_default(double base_lr, int total_steps) {
  LrSchedule s;
  s.base_lr = base_lr;
  s.warmup_steps = static_cast<int>(std::ceil(0.025 * total_steps));
  s.decay_steps = {static_cast<int>(std::lround(0.8 * total_steps)),
                   static_cast<int>(std::lround(0.9 * total_steps))};
  s.decay_factor = 0.01;
  return s;
}

void TrainConfig::validate() const {
  if (t1_steps < 0 || t2_steps < 0) throw std::invalid_argument("step counts must be >= 0");
  if (t1_steps > t2_steps) throw std::invalid_argument("t1_steps must be <= t2_steps");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(lr.base_lr >= 0.0) || !std::isfinite(lr.base_lr)) throw std::invalid_argument("lr must be >= 0");
  if (lr.warmup_steps < 0) throw std::invalid_argument("warmup_steps must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must be in [0, 1)");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("weight_decay must be >= 0");
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("hidden widths must be >= 1");
  }
  mix.validate();
}

TrainResult train_alg1(const Dataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  std::vector<int> dims{static_cast<int>(ds.dims())};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(ds.num_classes());
  return train_alg1(ds, cfg, init_params(dims, cfg.seed));
}

TrainResult train_alg1(const Dataset& ds, const TrainConfig& cfg, Mlp init) {
  cfg.validate();
  if (ds.size() == 0) throw std::invalid_argument("empty training set");
  if (init.input_dim() != ds.dims() || init.output_dim() != ds.num_classes()) {
    throw std::invalid_argument("network shape does not match the dataset");
  }
  // Margins and class tables are fixed once, before the first step.
  const ClassPrior prior = empirical_prior(ds);
  const LossSpec loss = make_loss_spec(cfg.loss, cfg.loss_params, ds.class_counts(), cfg.target_prior);

  const ClassSampler random_sampler(ds, prior);
  const ClassSampler partner_sampler(
      ds, cfg.mix.mode == MixMode::unimix_full ? inverse_prior(prior, cfg.mix.tau) : prior);

  Rng sampler_rng = make_stream(cfg.seed, "sampler");
  Rng mix_rng = make_stream(cfg.seed, "mix");

  TrainResult result{std::move(init), {}};
  Mlp& params = result.params;
  SgdState<double> sgd;
  ForwardCache<double> cache;

  const int n = cfg.batch_size;
  const Eigen::MatrixXd& features = ds.features();
  const auto& labels = ds.labels();
  Eigen::MatrixXd batch(ds.dims(), n);
  Eigen::MatrixXd logit_grad(ds.num_classes(), n);
  Eigen::VectorXd grad(ds.num_classes());
  std::vector<int> y_i(n);
  std::vector<int> y_j(n);
  std::vector<double> xi(n);

  for (int step = 0; step < cfg.t2_steps; ++step) {
    const bool mixed = step < cfg.t1_steps;
    const std::vector<int> rows = random_sampler.draw(n, sampler_rng);
    if (mixed) {
      const std::vector<int> partners = partner_sampler.draw(n, sampler_rng);
      for (int k = 0; k < n; ++k) {
        y_i[k] = labels[rows[k]];
        y_j[k] = labels[partners[k]];
        xi[k] = draw_mixing_factor(cfg.mix, prior[y_i[k]], prior[y_j[k]], mix_rng);
        batch.col(k) = xi[k] * features.row(rows[k]).transpose() +
                       (1.0 - xi[k]) * features.row(partners[k]).transpose();
      }
    } else {
      for (int k = 0; k < n; ++k) {
        y_i[k] = labels[rows[k]];
        batch.col(k) = features.row(rows[k]).transpose();
      }
    }

    const Eigen::MatrixXd logits = forward_batch(params, batch, &cache);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      if (mixed) {
        const double a = loss_value_grad(loss, logits.col(k), y_i[k], grad);
        logit_grad.col(k) = xi[k] * grad;
        const double b = loss_value_grad(loss, logits.col(k), y_j[k], grad);
        logit_grad.col(k) += (1.0 - xi[k]) * grad;
        total += xi[k] * a + (1.0 - xi[k]) * b;
      } else {
        total += loss_value_grad(loss, logits.col(k), y_i[k], grad);
        logit_grad.col(k) = grad;
      }
    }
    const double mean_loss = total / n;
    if (!std::isfinite(mean_loss)) {
      throw InvariantViolation("non-finite training loss at step " + std::to_string(step));
    }
    logit_grad /= static_cast<double>(n);

    const MlpParams<double> grads = backward(params, cache, logit_grad);
    const double lr = cfg.lr.at(step);
    sgd_step(params, grads, sgd, lr, cfg.momentum, cfg.weight_decay);
    result.log.push_back({step, mixed ? 1 : 2, mean_loss, lr});
  }
  if (!params.all_finite()) throw InvariantViolation("non-finite parameters after training");
  return result;
}

}  // namespace unimix
