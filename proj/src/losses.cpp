#include "unimix/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unimix {

Eigen::VectorXd bayias_margin(const ClassPrior& train_prior) {
  if (!train_prior.all_positive()) throw std::invalid_argument("Bayias needs every train prior > 0");
  const double log_c = std::log(static_cast<double>(train_prior.num_classes()));
  return (train_prior.probs().array().log() + log_c).matrix();
}

Eigen::VectorXd bayias_margin(const ClassPrior& train_prior, const ClassPrior& target_prior) {
  if (train_prior.num_classes() != target_prior.num_classes()) {
    throw std::invalid_argument("train and target priors differ in class count");
  }
  if (!train_prior.all_positive() || !target_prior.all_positive()) {
    throw std::invalid_argument("Bayias needs every prior entry > 0");
  }
  return (train_prior.probs().array().log() - target_prior.probs().array().log()).matrix();
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::ce: return "ce";
    case LossKind::bayias_ce: return "bayias_ce";
    case LossKind::focal: return "focal";
    case LossKind::cb: return "cb";
    case LossKind::cdt: return "cdt";
    case LossKind::ldam: return "ldam";
    case LossKind::la: return "la";
  }
  return "unknown";
}

LossKind parse_loss_kind(const std::string& name) {
  for (LossKind k : {LossKind::ce, LossKind::bayias_ce, LossKind::focal, LossKind::cb, LossKind::cdt,
                     LossKind::ldam, LossKind::la}) {
    if (to_string(k) == name) return k;
  }
  if (name == "bayias") return LossKind::bayias_ce;
  throw std::invalid_argument("unknown loss '" + name + "'");
}

LossSpec make_loss_spec(LossKind kind, const LossParams& params, const std::vector<int>& class_counts,
                        const std::optional<ClassPrior>& target_prior) {
  const int num_classes = static_cast<int>(class_counts.size());
  if (num_classes < 2) throw std::invalid_argument("loss needs at least two classes");
  for (int n : class_counts) {
    if (n < 1) throw std::invalid_argument("every class needs at least one training sample");
  }

  LossSpec spec;
  spec.kind = kind;
  spec.params = params;
  spec.class_counts = class_counts;
  spec.scale = Eigen::VectorXd::Ones(num_classes);
  spec.offset = Eigen::VectorXd::Zero(num_classes);
  spec.true_margin = Eigen::VectorXd::Zero(num_classes);
  spec.weight = Eigen::VectorXd::Ones(num_classes);

  Eigen::VectorXd counts(num_classes);
  for (int c = 0; c < num_classes; ++c) counts[c] = class_counts[c];
  const ClassPrior train_prior = ClassPrior::from_weights(counts);

  switch (kind) {
    case LossKind::ce: break;
    case LossKind::bayias_ce:
      spec.offset = target_prior ? bayias_margin(train_prior, *target_prior) : bayias_margin(train_prior);
      break;
    case LossKind::focal:
      if (!(params.gamma >= 0.0)) throw std::invalid_argument("focal gamma must be >= 0");
      spec.focal_gamma = params.gamma;
      break;
    case LossKind::cb:
      if (!(params.beta >= 0.0 && params.beta < 1.0)) throw std::invalid_argument("CB beta must be in [0, 1)");
      for (int c = 0; c < num_classes; ++c) {
        spec.weight[c] = (1.0 - params.beta) / (1.0 - std::pow(params.beta, counts[c]));
      }
      break;
    case LossKind::cdt: {
      if (!(params.gamma >= 0.0)) throw std::invalid_argument("CDT gamma must be >= 0");
      const double n_max = counts.maxCoeff();
      for (int c = 0; c < num_classes; ++c) spec.scale[c] = 1.0 / std::pow(n_max / counts[c], params.gamma);
      break;
    }
    case LossKind::ldam:
      if (!(params.ldam_c >= 0.0) || !std::isfinite(params.ldam_c)) {
        throw std::invalid_argument("LDAM constant must be finite and >= 0");
      }
      for (int c = 0; c < num_classes; ++c) spec.true_margin[c] = params.ldam_c / std::pow(counts[c], 0.25);
      break;
    case LossKind::la:
      if (!std::isfinite(params.la_tau)) throw std::invalid_argument("LA tau must be finite");
      spec.offset = params.la_tau * train_prior.probs().array().log().matrix();
      break;
  }
  return spec;
}

namespace {

void check_inputs(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y) {
  if (z.size() != spec.num_classes()) throw std::invalid_argument("logit count does not match loss");
  if (y < 0 || y >= spec.num_classes()) throw std::invalid_argument("label out of range");
}

}  // namespace

double loss_value_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y,
                       Eigen::Ref<Eigen::VectorXd> grad) {
  check_inputs(spec, z, y);
  Eigen::VectorXd adjusted = spec.scale.cwiseProduct(z) + spec.offset;
  adjusted[y] -= spec.true_margin[y];

  const double lse = log_sum_exp(adjusted);
  const double ce = lse - adjusted[y];
  Eigen::VectorXd p = (adjusted.array() - lse).exp().matrix();
  const double w = spec.weight[y];

  double value = 0.0;
  if (spec.focal_gamma == 0.0) {
    value = w * ce;
    grad = w * p;
    grad[y] -= w;
  } else {
    double rest = 0.0;  // 1 - p_y without cancellation
    for (int k = 0; k < p.size(); ++k) {
      if (k != y) rest += p[k];
    }
    const double g = spec.focal_gamma;
    const double modulator = std::pow(rest, g);
    value = w * modulator * ce;
    // dL/dz'_k = w (delta_yk - p_k) [g rest^{g-1} p_y log p_y - rest^g]
    const double bracket = rest > 0.0 ? g * std::pow(rest, g - 1.0) * p[y] * (-ce) - modulator : 0.0;
    grad = -w * bracket * p;
    grad[y] += w * bracket;
  }
  grad = grad.cwiseProduct(spec.scale);
  return value;
}

double loss_value(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y) {
  Eigen::VectorXd grad(z.size());
  return loss_value_grad(spec, z, y, grad);
}

Eigen::VectorXd loss_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y) {
  Eigen::VectorXd grad(z.size());
  loss_value_grad(spec, z, y, grad);
  return grad;
}

double mixed_vrm_loss(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y_i,
                      int y_j, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("mixing weight outside [0, 1]");
  return xi * loss_value(spec, z, y_i) + (1.0 - xi) * loss_value(spec, z, y_j);
}

Eigen::VectorXd mixed_vrm_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z,
                               int y_i, int y_j, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("mixing weight outside [0, 1]");
  return xi * loss_grad(spec, z, y_i) + (1.0 - xi) * loss_grad(spec, z, y_j);
}

}  // namespace unimix
