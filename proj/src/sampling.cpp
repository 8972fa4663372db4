#include "unimix/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace unimix {

ClassPrior inverse_prior(const ClassPrior& prior, double tau) {
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
  if (tau == 1.0) return prior;
  const int num_classes = prior.num_classes();
  if (tau == 0.0) return ClassPrior::uniform(num_classes);
  if (tau < 0.0 && !prior.all_positive()) {
    throw std::invalid_argument("inverse sampler with tau < 0 needs every prior entry > 0");
  }
  // Log domain, shifted by the max exponent, so extreme priors do not overflow.
  Eigen::VectorXd logw(num_classes);
  for (int c = 0; c < num_classes; ++c) {
    logw[c] = prior[c] > 0.0 ? tau * std::log(prior[c]) : -std::numeric_limits<double>::infinity();
  }
  const double top = logw.maxCoeff();
  return ClassPrior::from_weights((logw.array() - top).exp().matrix());
}

CategoricalSampler::CategoricalSampler(const ClassPrior& prior) : cdf_(prior.num_classes()) {
  double acc = 0.0;
  for (int c = 0; c < prior.num_classes(); ++c) {
    acc += prior[c];
    cdf_[c] = acc;
  }
  // Pin the tail at exactly 1 while keeping trailing zero-mass classes at
  // their predecessor's value.
  for (int c = prior.num_classes() - 1; c >= 0 && cdf_[c] >= acc; --c) cdf_[c] = 1.0;
}

int CategoricalSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

int draw_class(const ClassPrior& prior, Rng& rng) { return CategoricalSampler(prior)(rng); }

ClassSampler::ClassSampler(const Dataset& ds, const ClassPrior& prior)
    : classes_(prior), rows_by_class_(ds.num_classes()) {
  if (prior.num_classes() != ds.num_classes()) {
    throw std::invalid_argument("prior and dataset disagree on the number of classes");
  }
  for (int i = 0; i < static_cast<int>(ds.size()); ++i) rows_by_class_[ds.labels()[i]].push_back(i);
  for (int c = 0; c < ds.num_classes(); ++c) {
    if (prior[c] > 0.0 && rows_by_class_[c].empty()) {
      throw std::invalid_argument("sampler puts mass on empty class " + std::to_string(c));
    }
  }
}

int ClassSampler::draw_row(Rng& rng) const {
  const auto& rows = rows_by_class_[classes_(rng)];
  const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(rows.size()));
  return rows[std::min(k, rows.size() - 1)];
}

std::vector<int> ClassSampler::draw(int batch_size, Rng& rng) const {
  if (batch_size < 0) throw std::invalid_argument("negative batch size");
  std::vector<int> rows(batch_size);
  for (int& r : rows) r = draw_row(rng);
  return rows;
}

std::vector<int> draw_batch(const Dataset& ds, const ClassPrior& prior, int batch_size, Rng& rng) {
  return ClassSampler(ds, prior).draw(batch_size, rng);
}

}  // namespace unimix
