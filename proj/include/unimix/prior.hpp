#pragma once

#include <Eigen/Core>

namespace unimix {

/// Normalized per-class probability vector. Entries are nonnegative and sum
/// to one within 1e-12; both are checked on construction.
class ClassPrior {
 public:
  explicit ClassPrior(Eigen::VectorXd probs);

  /// Normalizes nonnegative weights.
  static ClassPrior from_weights(const Eigen::VectorXd& weights);
  static ClassPrior uniform(int num_classes);

  const Eigen::VectorXd& probs() const { return probs_; }
  int num_classes() const { return static_cast<int>(probs_.size()); }
  double operator[](int c) const { return probs_[c]; }

  bool all_positive() const { return (probs_.array() > 0.0).all(); }

 private:
  Eigen::VectorXd probs_;
};

}  // namespace unimix
