#include "unimix/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "unimix/io.hpp"
#include "unimix/rng.hpp"

namespace unimix {

Dataset::Dataset(Eigen::MatrixXd features, std::vector<int> labels, int num_classes)
    : features_(std::move(features)), labels_(std::move(labels)), class_counts_(num_classes, 0) {
  if (num_classes < 1) throw std::invalid_argument("dataset needs at least one class");
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    throw std::invalid_argument("label count does not match feature rows");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes) throw std::invalid_argument("label out of range [0, C)");
    ++class_counts_[y];
  }
}

std::vector<int> lt_class_counts(int num_classes, double rho, int n_max) {
  if (num_classes < 2) throw std::invalid_argument("need at least two classes");
  if (!(rho >= 1.0)) throw std::invalid_argument("imbalance factor must be >= 1");
  if (n_max < num_classes) {
    throw std::invalid_argument("n_max must be >= num_classes so every class gets a sample");
  }
  std::vector<int> counts(num_classes);
  for (int i = 0; i < num_classes; ++i) {
    const double n = n_max * std::pow(rho, -static_cast<double>(i) / (num_classes - 1));
    counts[i] = std::max(1, static_cast<int>(std::lround(n)));
  }
  return counts;
}

Eigen::MatrixXd gaussian_class_means(int num_classes, int dims) {
  if (dims < 2) throw std::invalid_argument("dims must be >= 2");
  constexpr double kMinSeparation = 4.0;
  const double base_radius = kMinSeparation / std::numbers::sqrt2;
  const int per_shell = 2 * dims;
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(num_classes, dims);
  for (int k = 0; k < num_classes; ++k) {
    const int shell = k / per_shell;
    const int slot = k % per_shell;
    const double radius = base_radius + kMinSeparation * shell;
    means(k, slot / 2) = (slot % 2 == 0) ? radius : -radius;
  }
  return means;
}

Dataset gen_gaussians(const std::vector<int>& counts, int dims, double cluster_spread,
                      std::uint64_t seed) {
  if (counts.size() < 2) throw std::invalid_argument("need at least two classes");
  if (!(cluster_spread > 0.0 && cluster_spread <= 1.0)) {
    throw std::invalid_argument("cluster_spread must be in (0, 1]");
  }
  const int num_classes = static_cast<int>(counts.size());
  const Eigen::MatrixXd means = gaussian_class_means(num_classes, dims);
  Eigen::Index total = 0;
  for (int n : counts) {
    if (n < 0) throw std::invalid_argument("negative class count");
    total += n;
  }

  Rng rng = make_stream(seed, "data");
  std::normal_distribution<double> normal(0.0, cluster_spread);
  Eigen::MatrixXd features(total, dims);
  std::vector<int> labels;
  labels.reserve(total);
  Eigen::Index row = 0;
  for (int c = 0; c < num_classes; ++c) {
    for (int k = 0; k < counts[c]; ++k, ++row) {
      for (int j = 0; j < dims; ++j) features(row, j) = means(c, j) + normal(rng);
      labels.push_back(c);
    }
  }
  return Dataset(std::move(features), std::move(labels), num_classes);
}

Dataset gen_lt_gaussians(int num_classes, double rho, int n_max, int dims, double cluster_spread,
                         std::uint64_t seed) {
  return gen_gaussians(lt_class_counts(num_classes, rho, n_max), dims, cluster_spread, seed);
}

Dataset gen_two_circles(const TwoCircleSpec& spec) {
  if (!(spec.radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  if (!(spec.x0 * spec.x0 + spec.y0 * spec.y0 > spec.radius * spec.radius)) {
    throw std::invalid_argument("circles overlap: need x0^2 + y0^2 > r^2");
  }
  if (spec.n_pos < 0 || spec.n_neg < 0) throw std::invalid_argument("negative sample count");

  Rng rng = make_stream(spec.seed, "data");
  const double r = spec.radius;
  const double r2 = r * r;
  Eigen::MatrixXd features(spec.n_pos + spec.n_neg, 2);
  std::vector<int> labels;
  labels.reserve(features.rows());

  auto fill = [&](int count, double cx, double cy, int label) {
    for (int k = 0; k < count; ++k) {
      // Rejection sampling in the bounding square; the accepted offset
      // satisfies the disk inequality by construction.
      double dx = 0.0;
      double dy = 0.0;
      do {
        dx = (2.0 * uniform01(rng) - 1.0) * r;
        dy = (2.0 * uniform01(rng) - 1.0) * r;
      } while (dx * dx + dy * dy > r2);
      const Eigen::Index row = static_cast<Eigen::Index>(labels.size());
      features(row, 0) = cx + dx;
      features(row, 1) = cy + dy;
      labels.push_back(label);
    }
  };
  fill(spec.n_pos, spec.x0, spec.y0, 0);
  fill(spec.n_neg, -spec.x0, -spec.y0, 1);
  return Dataset(std::move(features), std::move(labels), 2);
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string where = path.string() + ":";

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(where + "1: empty file, expected header");
  std::vector<std::string> header = split_commas(line);
  for (auto& h : header) h = trim(h);
  if (header.empty() || header.back() != "label") {
    throw std::runtime_error(where + "1: missing column 'label' (expected as last column)");
  }
  const int dims = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < dims; ++j) {
    if (header[j] != "f" + std::to_string(j)) {
      throw std::runtime_error(where + "1: expected column 'f" + std::to_string(j) + "', got '" +
                               header[j] + "'");
    }
  }

  std::vector<double> values;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_commas(line);
    if (static_cast<int>(fields.size()) != dims + 1) {
      throw std::runtime_error(where + std::to_string(line_no) + ": expected " +
                               std::to_string(dims + 1) + " fields, got " +
                               std::to_string(fields.size()));
    }
    for (int j = 0; j <= dims; ++j) {
      const std::string f = trim(fields[j]);
      if (j < dims) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
          throw std::runtime_error(where + std::to_string(line_no) + ": bad number '" + f + "'");
        }
        values.push_back(v);
      } else {
        long v = 0;
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || ptr != f.data() + f.size()) {
          throw std::runtime_error(where + std::to_string(line_no) + ": bad label '" + f + "'");
        }
        if (v < 0) {
          throw std::runtime_error(where + std::to_string(line_no) + ": negative label " +
                                   std::to_string(v));
        }
        labels.push_back(static_cast<int>(v));
      }
    }
  }
  if (labels.empty()) throw std::runtime_error(where + " no data rows");

  const Eigen::Index n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd features =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          values.data(), n, dims);
  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  return Dataset(std::move(features), std::move(labels), num_classes);
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::string out;
  for (Eigen::Index j = 0; j < ds.dims(); ++j) out += "f" + std::to_string(j) + ",";
  out += "label\n";
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    for (Eigen::Index j = 0; j < ds.dims(); ++j) {
      out += format_double(ds.features()(i, j));
      out += ',';
    }
    out += std::to_string(ds.labels()[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

ClassPrior empirical_prior(const Dataset& ds) {
  Eigen::VectorXd probs(ds.num_classes());
  for (int c = 0; c < ds.num_classes(); ++c) {
    if (ds.class_counts()[c] == 0) {
      throw std::invalid_argument("class " + std::to_string(c) + " has no samples");
    }
    probs[c] = static_cast<double>(ds.class_counts()[c]) / static_cast<double>(ds.size());
  }
  return ClassPrior(std::move(probs));
}

}  // namespace unimix
