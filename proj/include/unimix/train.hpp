#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "unimix/dataset.hpp"
#include "unimix/losses.hpp"
#include "unimix/mixing.hpp"
#include "unimix/mlp.hpp"

namespace unimix {

/// Linear warmup to `base_lr` over `warmup_steps`, then multiplied by
/// `decay_factor` at each step in `decay_steps`.
struct LrSchedule {
  double base_lr = 0.1;
  int warmup_steps = 0;
  std::vector<int> decay_steps;
  double decay_factor = 0.01;

  double at(int step) const;

  /// 2.5% warmup, decay x0.01 at 80% and 90% of `total_steps`.
  static LrSchedule scaled_default(double base_lr, int total_steps);
};

struct TrainConfig {
  int t1_steps = 0;  // steps [0, t1) mix pairs
  int t2_steps = 0;  // steps [t1, t2) train on plain batches
  int batch_size = 128;
  LrSchedule lr;
  double momentum = 0.9;
  double weight_decay = 2e-4;
  MixConfig mix;
  LossKind loss = LossKind::bayias_ce;
  LossParams loss_params;
  /// Bayias target prior; balanced when empty.
  std::optional<ClassPrior> target_prior;
  std::vector<int> hidden = {64, 64};
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainLogEntry {
  int step;
  int phase;  // 1 = mixed, 2 = plain
  double loss;
  double lr;
};

struct TrainResult {
  Mlp params;
  std::vector<TrainLogEntry> log;
};

/// Two-phase training: mixed pairs from a random and a UniMix/mixup partner
/// sampler, then plain random batches; Bayias (or the chosen loss) in both.
/// Throws InvariantViolation if the loss becomes non-finite.
TrainResult train_alg1(const Dataset& ds, const TrainConfig& cfg);

/// Training starting from given parameters (used by tests and the boundary
/// study, where the architecture is fixed by the caller).
TrainResult train_alg1(const Dataset& ds, const TrainConfig& cfg, Mlp init);

/// Thrown when a run detects a broken numeric invariant (exit code 2 in the CLI).
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace unimix
