#include "unimix/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace unimix {

namespace {

void check(const Predictions& preds, std::span<const int> labels) {
  if (preds.rows() == 0) throw std::invalid_argument("no predictions");
  if (static_cast<Eigen::Index>(labels.size()) != preds.rows()) {
    throw std::invalid_argument("prediction and label counts differ");
  }
  for (int y : labels) {
    if (y < 0 || y >= preds.cols()) throw std::invalid_argument("label out of range");
  }
}

int bin_of(double p, int num_bins) {
  const int b = static_cast<int>(std::floor(p * num_bins));
  return std::clamp(b, 0, num_bins - 1);
}

int argmax_row(const Predictions& preds, Eigen::Index i) {
  Eigen::Index best = 0;
  preds.row(i).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

std::vector<ReliabilityBin> reliability_bins(const Predictions& preds, std::span<const int> labels,
                                             int num_bins) {
  check(preds, labels);
  if (num_bins < 1) throw std::invalid_argument("need at least one bin");
  std::vector<ReliabilityBin> bins(num_bins);
  std::vector<double> hits(num_bins, 0.0);
  std::vector<double> conf(num_bins, 0.0);
  for (int b = 0; b < num_bins; ++b) {
    bins[b] = {static_cast<double>(b) / num_bins, static_cast<double>(b + 1) / num_bins, 0, 0.0, 0.0};
  }
  for (Eigen::Index i = 0; i < preds.rows(); ++i) {
    const int pred = argmax_row(preds, i);
    const double p = preds(i, pred);
    const int b = bin_of(p, num_bins);
    ++bins[b].count;
    hits[b] += pred == labels[i] ? 1.0 : 0.0;
    conf[b] += p;
  }
  for (int b = 0; b < num_bins; ++b) {
    if (bins[b].count > 0) {
      bins[b].acc = hits[b] / bins[b].count;
      bins[b].conf = conf[b] / bins[b].count;
    }
  }
  return bins;
}

double accuracy(const Predictions& preds, std::span<const int> labels) {
  check(preds, labels);
  double hits = 0.0;
  for (Eigen::Index i = 0; i < preds.rows(); ++i) hits += argmax_row(preds, i) == labels[i] ? 1.0 : 0.0;
  return hits / static_cast<double>(preds.rows());
}

double ece(const Predictions& preds, std::span<const int> labels, int num_bins) {
  const auto bins = reliability_bins(preds, labels, num_bins);
  double total = 0.0;
  for (const auto& b : bins) total += b.count * std::abs(b.acc - b.conf);
  return total / static_cast<double>(preds.rows());
}

double mce(const Predictions& preds, std::span<const int> labels, int num_bins) {
  const auto bins = reliability_bins(preds, labels, num_bins);
  double worst = 0.0;
  for (const auto& b : bins) {
    if (b.count > 0) worst = std::max(worst, std::abs(b.acc - b.conf));
  }
  return worst;
}

double adaptive_calibration_error(const Predictions& preds, std::span<const int> labels,
                                  int num_ranges, double threshold) {
  check(preds, labels);
  if (num_ranges < 1) throw std::invalid_argument("need at least one range");
  const Eigen::Index n = preds.rows();
  const Eigen::Index num_classes = preds.cols();
  double total = 0.0;
  bool any = false;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index c = 0; c < num_classes; ++c) {
    kept.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (preds(i, c) >= threshold) kept.push_back(i);
    }
    if (kept.empty()) continue;
    any = true;
    std::stable_sort(kept.begin(), kept.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return preds(a, c) < preds(b, c); });
    const std::size_t m = kept.size();
    const std::size_t base = m / num_ranges;
    const std::size_t extra = m % num_ranges;
    std::size_t pos = 0;
    for (int r = 0; r < num_ranges; ++r) {
      const std::size_t len = base + (static_cast<std::size_t>(r) < extra ? 1 : 0);
      if (len == 0) continue;
      double hits = 0.0;
      double conf = 0.0;
      for (std::size_t k = pos; k < pos + len; ++k) {
        hits += labels[kept[k]] == c ? 1.0 : 0.0;
        conf += preds(kept[k], c);
      }
      total += std::abs(hits / len - conf / len);
      pos += len;
    }
  }
  if (!any) throw std::invalid_argument("every probability fell below the threshold");
  return total / (static_cast<double>(num_classes) * num_ranges);
}

double sce(const Predictions& preds, std::span<const int> labels, int num_bins) {
  check(preds, labels);
  if (num_bins < 1) throw std::invalid_argument("need at least one bin");
  const Eigen::Index n = preds.rows();
  const Eigen::Index num_classes = preds.cols();
  double total = 0.0;
  std::vector<double> hits(num_bins);
  std::vector<double> conf(num_bins);
  std::vector<int> count(num_bins);
  for (Eigen::Index c = 0; c < num_classes; ++c) {
    std::fill(hits.begin(), hits.end(), 0.0);
    std::fill(conf.begin(), conf.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int b = bin_of(preds(i, c), num_bins);
      ++count[b];
      hits[b] += labels[i] == c ? 1.0 : 0.0;
      conf[b] += preds(i, c);
    }
    for (int b = 0; b < num_bins; ++b) {
      if (count[b] == 0) continue;
      total += (static_cast<double>(count[b]) / n) * std::abs(hits[b] / count[b] - conf[b] / count[b]);
    }
  }
  return total / static_cast<double>(num_classes);
}

double brier(const Predictions& preds, std::span<const int> labels) {
  check(preds, labels);
  double total = 0.0;
  for (Eigen::Index i = 0; i < preds.rows(); ++i) {
    for (Eigen::Index c = 0; c < preds.cols(); ++c) {
      const double diff = (labels[i] == c ? 1.0 : 0.0) - preds(i, c);
      total += diff * diff;
    }
  }
  return total / (static_cast<double>(preds.rows()) * static_cast<double>(preds.cols()));
}

Eigen::MatrixXi confusion_matrix(const Predictions& preds, std::span<const int> labels) {
  check(preds, labels);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(preds.cols(), preds.cols());
  for (Eigen::Index i = 0; i < preds.rows(); ++i) ++counts(labels[i], argmax_row(preds, i));
  return counts;
}

Eigen::MatrixXd log_confusion(const Eigen::MatrixXi& counts) {
  return counts.cast<double>().array().log1p().matrix();
}

std::vector<EvalBatchStats> batch_density(const Predictions& preds, std::span<const int> labels,
                                          int batch_size) {
  check(preds, labels);
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  std::vector<EvalBatchStats> out;
  for (Eigen::Index start = 0; start < preds.rows(); start += batch_size) {
    const Eigen::Index end = std::min<Eigen::Index>(start + batch_size, preds.rows());
    double hits = 0.0;
    double conf = 0.0;
    for (Eigen::Index i = start; i < end; ++i) {
      const int pred = argmax_row(preds, i);
      hits += pred == labels[i] ? 1.0 : 0.0;
      conf += preds(i, pred);
    }
    const double m = static_cast<double>(end - start);
    out.push_back({hits / m, conf / m});
  }
  return out;
}

CalibrationReport evaluate_calibration(const Predictions& preds, std::span<const int> labels,
                                       const CalibrationOptions& options) {
  CalibrationReport r;
  r.accuracy = accuracy(preds, labels);
  r.reliability = reliability_bins(preds, labels, options.num_bins);
  r.ece = ece(preds, labels, options.num_bins);
  r.mce = mce(preds, labels, options.num_bins);
  r.ace = adaptive_calibration_error(preds, labels, options.num_ranges, 0.0);
  r.tace = adaptive_calibration_error(preds, labels, options.num_ranges, options.tace_threshold);
  r.sce = sce(preds, labels, options.num_bins);
  r.brier = brier(preds, labels);
  r.confusion = confusion_matrix(preds, labels);
  r.density = batch_density(preds, labels, options.density_batch);
  return r;
}

}  // namespace unimix
