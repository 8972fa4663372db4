#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "unimix/prior.hpp"

namespace unimix {

/// Labeled feature rows. Rows of `features` are samples.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, std::vector<int> labels, int num_classes);

  const Eigen::MatrixXd& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& class_counts() const { return class_counts_; }
  int num_classes() const { return static_cast<int>(class_counts_.size()); }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dims() const { return features_.cols(); }

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  std::vector<int> class_counts_;
};

/// n_i = max(1, round(n_max * rho^{-(i-1)/(C-1)})) for i = 1..C.
std::vector<int> lt_class_counts(int num_classes, double rho, int n_max);

/// Deterministic class means: vertices of nested cross-polytopes with a
/// minimum pairwise distance of 4.
Eigen::MatrixXd gaussian_class_means(int num_classes, int dims);

/// Isotropic Gaussian clusters with the given per-class counts. Rows are
/// grouped by class in index order. Requires cluster_spread <= 1 so that the
/// mean separation is at least four standard deviations.
Dataset gen_gaussians(const std::vector<int>& counts, int dims, double cluster_spread,
                      std::uint64_t seed);

Dataset gen_lt_gaussians(int num_classes, double rho, int n_max, int dims,
                         double cluster_spread, std::uint64_t seed);

struct TwoCircleSpec {
  double x0 = 2.0;
  double y0 = 2.0;
  double radius = 1.5;
  int n_pos = 500;
  int n_neg = 10;
  std::uint64_t seed = 0;
};

/// Uniform points in the disk around (x0, y0) (label 0) and around
/// (-x0, -y0) (label 1).
Dataset gen_two_circles(const TwoCircleSpec& spec);

/// Header `f0,...,f{d-1},label`. C = max label + 1.
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

/// class_counts / N. Throws if any class is empty.
ClassPrior empirical_prior(const Dataset& ds);

}  // namespace unimix
