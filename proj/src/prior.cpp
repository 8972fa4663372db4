#include "unimix/prior.hpp"

#include <cmath>
#include <stdexcept>

namespace unimix {

ClassPrior::ClassPrior(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() < 1) throw std::invalid_argument("class prior must have at least one entry");
  if (!probs_.allFinite() || (probs_.array() < 0.0).any()) {
    throw std::invalid_argument("class prior entries must be finite and nonnegative");
  }
  if (std::abs(probs_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("class prior must sum to 1");
  }
}

ClassPrior ClassPrior::from_weights(const Eigen::VectorXd& weights) {
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw std::invalid_argument("prior weights must be finite and nonnegative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw std::invalid_argument("prior weights sum to zero");
  return ClassPrior(weights / total);
}

ClassPrior ClassPrior::uniform(int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("uniform prior needs at least one class");
  return ClassPrior(Eigen::VectorXd::Constant(num_classes, 1.0 / num_classes));
}

}  // namespace unimix
