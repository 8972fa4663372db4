#pragma once

#include <vector>

#include <Eigen/Core>

#include "unimix/dataset.hpp"
#include "unimix/prior.hpp"
#include "unimix/rng.hpp"

namespace unimix {

/// pi_i^tau / sum_j pi_j^tau. tau = 1 returns the prior, tau = 0 the uniform
/// prior. A zero entry with tau < 0 is an error.
ClassPrior inverse_prior(const ClassPrior& prior, double tau);

/// Categorical draw by inverse CDF.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const ClassPrior& prior);
  int operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

int draw_class(const ClassPrior& prior, Rng& rng);

/// Two-stage sampler: class from the prior, then an instance uniformly within
/// the class, with replacement.
class ClassSampler {
 public:
  ClassSampler(const Dataset& ds, const ClassPrior& prior);

  int draw_row(Rng& rng) const;
  std::vector<int> draw(int batch_size, Rng& rng) const;

 private:
  CategoricalSampler classes_;
  std::vector<std::vector<int>> rows_by_class_;
};

/// Row indices into `ds` of a batch drawn by ClassSampler.
std::vector<int> draw_batch(const Dataset& ds, const ClassPrior& prior, int batch_size, Rng& rng);

}  // namespace unimix
