#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "unimix/prior.hpp"
#include "unimix/rng.hpp"

namespace unimix {

enum class MixMode { vanilla_mixup, unimix_factor_only, unimix_full };

/// CLI / config spelling: "mixup", "factor", "full".
std::string to_string(MixMode mode);
MixMode parse_mix_mode(const std::string& name);

struct MixConfig {
  double alpha = 0.5;
  MixMode mode = MixMode::unimix_full;
  double tau = -1.0;

  void validate() const;
};

/// Beta(alpha, alpha) via the ratio of two Gamma(alpha) draws.
double sample_beta(double alpha, Rng& rng);

/// Cyclic shift of a Beta(alpha, alpha) draw: frac(xi + c) with
/// c = pi_j / (pi_i + pi_j). The shifted value stays at xi + c when that is
/// <= 1, so c = 0 reproduces xi exactly.
double shift_mixing_factor(double xi, double center);

/// UniMix factor for a pair with train priors pi_i (first) and pi_j (second).
double unimix_factor(double pi_i, double pi_j, double alpha, Rng& rng);

struct MixedSample {
  Eigen::VectorXd x_mixed;
  int y_i = 0;
  int y_j = 0;
  double xi = 0.0;
};

/// xi * x_i + (1 - xi) * x_j.
MixedSample mix_pair(const Eigen::Ref<const Eigen::VectorXd>& x_i, int y_i,
                     const Eigen::Ref<const Eigen::VectorXd>& x_j, int y_j, double xi);

/// Class that a mixed sample counts for: y_i when xi >= 0.5, else y_j.
int xi_aug_class(const MixedSample& sample);
int xi_aug_class(int y_i, int y_j, double xi);

/// Mixing factor for one pair under the given mode.
double draw_mixing_factor(const MixConfig& config, double pi_i, double pi_j, Rng& rng);

/// Empirical distribution of the xi-Aug class over `trials` label pairs. The
/// first label follows `prior`; the second follows `prior` (mixup, factor) or
/// inverse_prior(prior, tau) (full). Work is split into a fixed number of
/// seeded streams, so the result does not depend on the thread count.
ClassPrior mc_xi_aug_histogram(const ClassPrior& prior, const MixConfig& config,
                               std::int64_t trials, std::uint64_t seed);

}  // namespace unimix
