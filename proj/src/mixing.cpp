#include "unimix/mixing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "unimix/sampling.hpp"

namespace unimix {

std::string to_string(MixMode mode) {
  switch (mode) {
    case MixMode::vanilla_mixup: return "mixup";
    case MixMode::unimix_factor_only: return "factor";
    case MixMode::unimix_full: return "full";
  }
  return "unknown";
}

MixMode parse_mix_mode(const std::string& name) {
  if (name == "mixup" || name == "vanilla_mixup") return MixMode::vanilla_mixup;
  if (name == "factor" || name == "unimix_factor_only") return MixMode::unimix_factor_only;
  if (name == "full" || name == "unimix_full") return MixMode::unimix_full;
  throw std::invalid_argument("unknown mix mode '" + name + "' (expected mixup|factor|full)");
}

void MixConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
}

double sample_beta(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw std::invalid_argument("Beta parameter must be > 0");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  const double a = gamma(rng);
  const double b = gamma(rng);
  const double sum = a + b;
  // Both draws can underflow for tiny alpha; the limit is a fair coin on {0, 1}.
  if (!(sum > 0.0)) return uniform01(rng) < 0.5 ? 0.0 : 1.0;
  return a / sum;
}

double shift_mixing_factor(double xi, double center) {
  const double shifted = xi + center;
  return shifted > 1.0 ? shifted - 1.0 : shifted;
}

double unimix_factor(double pi_i, double pi_j, double alpha, Rng& rng) {
  if (!(pi_i > 0.0 && pi_j > 0.0)) throw std::invalid_argument("UniMix factor needs positive priors");
  const double center = pi_j / (pi_i + pi_j);
  return shift_mixing_factor(sample_beta(alpha, rng), center);
}

MixedSample mix_pair(const Eigen::Ref<const Eigen::VectorXd>& x_i, int y_i,
                     const Eigen::Ref<const Eigen::VectorXd>& x_j, int y_j, double xi) {
  if (x_i.size() != x_j.size()) throw std::invalid_argument("mix_pair: feature dimension mismatch");
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("mixing weight outside [0, 1]");
  MixedSample s;
  s.x_mixed = xi * x_i + (1.0 - xi) * x_j;
  s.y_i = y_i;
  s.y_j = y_j;
  s.xi = xi;
  return s;
}

int xi_aug_class(int y_i, int y_j, double xi) { return xi >= 0.5 ? y_i : y_j; }

int xi_aug_class(const MixedSample& sample) { return xi_aug_class(sample.y_i, sample.y_j, sample.xi); }

double draw_mixing_factor(const MixConfig& config, double pi_i, double pi_j, Rng& rng) {
  if (config.mode == MixMode::vanilla_mixup) return sample_beta(config.alpha, rng);
  return unimix_factor(pi_i, pi_j, config.alpha, rng);
}

ClassPrior mc_xi_aug_histogram(const ClassPrior& prior, const MixConfig& config,
                               std::int64_t trials, std::uint64_t seed) {
  config.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const int num_classes = prior.num_classes();
  const ClassPrior partner =
      config.mode == MixMode::unimix_full ? inverse_prior(prior, config.tau) : prior;
  const CategoricalSampler first(prior);
  const CategoricalSampler second(partner);

  constexpr int kStreams = 64;
  std::vector<std::vector<std::int64_t>> partial(kStreams, std::vector<std::int64_t>(num_classes, 0));

  auto run_stream = [&](int s) {
    const std::int64_t begin = trials * s / kStreams;
    const std::int64_t end = trials * (s + 1) / kStreams;
    Rng rng = make_stream(seed, "mc/" + std::to_string(s));
    auto& counts = partial[s];
    for (std::int64_t t = begin; t < end; ++t) {
      const int y_i = first(rng);
      const int y_j = second(rng);
      const double xi = draw_mixing_factor(config, prior[y_i], prior[y_j], rng);
      ++counts[xi_aug_class(y_i, y_j, xi)];
    }
  };

  const unsigned workers = std::min<unsigned>(thread_budget(), kStreams);
  if (workers <= 1) {
    for (int s = 0; s < kStreams; ++s) run_stream(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int s = next++; s < kStreams; s = next++) run_stream(s);
      });
    }
  }

  Eigen::VectorXd hist = Eigen::VectorXd::Zero(num_classes);
  for (const auto& counts : partial) {
    for (int c = 0; c < num_classes; ++c) hist[c] += static_cast<double>(counts[c]);
  }
  return ClassPrior::from_weights(hist);
}

}  // namespace unimix
