#pragma once

// Softmax cross-entropy family: plain CE, Bayias-compensated CE (softmax and
// pairwise forms), and the comparison losses Focal, CB, CDT, LDAM and LA.
// All logs are natural.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "unimix/prior.hpp"

namespace unimix {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// log sum_k exp(z_k), max-shifted.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& z) {
  using std::exp;
  using std::log;
  const auto top = z.maxCoeff();
  return top + log((z.array() - top).exp().sum());
}

template <typename Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& z) {
  const auto top = z.maxCoeff();
  Vector<typename Derived::Scalar> e = (z.array() - top).exp().matrix();
  return e / e.sum();
}

/// -log softmax(z)_y
template <typename Derived>
typename Derived::Scalar cross_entropy(const Eigen::MatrixBase<Derived>& z, int y) {
  return log_sum_exp(z) - z(y);
}

/// Per-class logit offset. Balanced target: ln pi_y + ln C.
Eigen::VectorXd bayias_margin(const ClassPrior& train_prior);
/// General target prior: ln pi_y - ln pi'_y.
Eigen::VectorXd bayias_margin(const ClassPrior& train_prior, const ClassPrior& target_prior);

/// -log softmax(z + m)_y
template <typename DerivedZ, typename DerivedM>
typename DerivedZ::Scalar bayias_ce(const Eigen::MatrixBase<DerivedZ>& z, int y,
                                    const Eigen::MatrixBase<DerivedM>& margin) {
  return cross_entropy((z + margin).eval(), y);
}

/// log[1 + sum_{k != y} e^{(m_k - m_y)} e^{(z_k - z_y)}]
template <typename DerivedZ, typename DerivedM>
typename DerivedZ::Scalar bayias_ce_pairwise(const Eigen::MatrixBase<DerivedZ>& z, int y,
                                             const Eigen::MatrixBase<DerivedM>& margin) {
  using Scalar = typename DerivedZ::Scalar;
  using std::exp;
  using std::log;
  using std::log1p;
  Scalar top(0);
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    if (k == y) continue;
    const Scalar a = (margin(k) - margin(y)) + (z(k) - z(y));
    if (a > top) top = a;
  }
  Scalar sum(0);
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    if (k == y) continue;
    sum += exp((margin(k) - margin(y)) + (z(k) - z(y)) - top);
  }
  if (top == Scalar(0)) return log1p(sum);
  return top + log(exp(-top) + sum);
}

enum class LossKind { ce, bayias_ce, focal, cb, cdt, ldam, la };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& name);

/// Scalar hyperparameters; config keys `gamma`, `beta`, `ldam_c`, `la_tau`.
/// `gamma` is the focal exponent for focal and the temperature exponent for CDT.
struct LossParams {
  double gamma = 1.0;
  double beta = 0.9999;
  double ldam_c = 0.5;
  double la_tau = 1.0;
};

/// A loss with its per-class tables resolved from the train class counts.
/// Evaluated as
///   z' = scale .* z + offset,  z'_y -= true_margin_y,
///   L  = weight_y * (1 - p_y)^focal_gamma * (-log p_y),  p = softmax(z').
struct LossSpec {
  LossKind kind = LossKind::ce;
  LossParams params;
  std::vector<int> class_counts;
  Eigen::VectorXd scale;        // CDT: 1 / (n_max / n_y)^gamma
  Eigen::VectorXd offset;       // Bayias margin or LA tau * ln pi
  Eigen::VectorXd true_margin;  // LDAM: ldam_c / n_y^{1/4}
  Eigen::VectorXd weight;       // CB: (1 - beta) / (1 - beta^{n_y})
  double focal_gamma = 0.0;

  int num_classes() const { return static_cast<int>(class_counts.size()); }
};

/// Resolves the per-class tables. `target_prior` only affects bayias_ce and
/// defaults to the balanced test prior.
LossSpec make_loss_spec(LossKind kind, const LossParams& params, const std::vector<int>& class_counts,
                        const std::optional<ClassPrior>& target_prior = std::nullopt);

double loss_value(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y);

/// Analytic gradient with respect to the logits.
Eigen::VectorXd loss_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y);

/// Value and gradient in one pass.
double loss_value_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y,
                       Eigen::Ref<Eigen::VectorXd> grad);

/// xi * L(z, y_i) + (1 - xi) * L(z, y_j)
double mixed_vrm_loss(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z, int y_i,
                      int y_j, double xi);
Eigen::VectorXd mixed_vrm_grad(const LossSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& z,
                               int y_i, int y_j, double xi);

}  // namespace unimix
