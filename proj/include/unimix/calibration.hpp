#pragma once

// Calibration metrics over a prediction matrix (N x C, row = probability
// vector) and integer labels.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace unimix {

using Predictions = Eigen::MatrixXd;

struct ReliabilityBin {
  double lo;
  double hi;
  int count;
  double acc;   // 0 for empty bins
  double conf;  // 0 for empty bins
};

/// Equal-width bins of the winning confidence on [0, 1]; [lo, hi) except
/// the last, which is closed at 1.
std::vector<ReliabilityBin> reliability_bins(const Predictions& preds, std::span<const int> labels,
                                             int num_bins = 15);

double accuracy(const Predictions& preds, std::span<const int> labels);
double ece(const Predictions& preds, std::span<const int> labels, int num_bins = 15);
double mce(const Predictions& preds, std::span<const int> labels, int num_bins = 15);

/// Per-class equal-count ranges over probabilities >= threshold. threshold 0
/// is ACE, 1e-3 the usual TACE. Ties are ordered by sample index; when N is
/// not divisible by R the first (N mod R) ranges get one extra sample.
double adaptive_calibration_error(const Predictions& preds, std::span<const int> labels,
                                  int num_ranges = 15, double threshold = 0.0);

double sce(const Predictions& preds, std::span<const int> labels, int num_bins = 15);
double brier(const Predictions& preds, std::span<const int> labels);

/// counts(true, pred).
Eigen::MatrixXi confusion_matrix(const Predictions& preds, std::span<const int> labels);
/// ln(1 + count), for plotting.
Eigen::MatrixXd log_confusion(const Eigen::MatrixXi& counts);

struct EvalBatchStats {
  double accuracy;
  double confidence;
};

/// Sequential chunks of `batch_size`; the last chunk may be shorter.
std::vector<EvalBatchStats> batch_density(const Predictions& preds, std::span<const int> labels,
                                          int batch_size);

struct CalibrationOptions {
  int num_bins = 15;
  int num_ranges = 15;
  double tace_threshold = 1e-3;
  int density_batch = 100;
};

struct CalibrationReport {
  double accuracy = 0.0;
  double ece = 0.0;
  double mce = 0.0;
  double ace = 0.0;
  double tace = 0.0;
  double sce = 0.0;
  double brier = 0.0;
  std::vector<ReliabilityBin> reliability;
  Eigen::MatrixXi confusion;
  std::vector<EvalBatchStats> density;
};

CalibrationReport evaluate_calibration(const Predictions& preds, std::span<const int> labels,
                                       const CalibrationOptions& options = {});

}  // namespace unimix
