#include "unimix/mlp.hpp"

#include <cmath>
#include <random>

#include "unimix/losses.hpp"
#include "unimix/rng.hpp"

namespace unimix {

Mlp init_params(const std::vector<int>& layer_dims, std::uint64_t seed) {
  if (layer_dims.size() < 2) throw std::invalid_argument("need input and output widths");
  for (int d : layer_dims) {
    if (d < 1) throw std::invalid_argument("zero-width layer");
  }
  Rng rng = make_stream(seed, "init");
  Mlp params;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const int fan_in = layer_dims[l];
    const int fan_out = layer_dims[l + 1];
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
    DenseLayer<double> layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) layer.weight(i, j) = normal(rng);
    }
    params.layers.push_back(std::move(layer));
  }
  return params;
}

Eigen::VectorXd predict_proba_one(const Mlp& params, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return softmax(forward<double>(params, x));
}

Eigen::MatrixXd predict_proba(const Mlp& params, const Eigen::MatrixXd& features) {
  Eigen::MatrixXd probs(features.rows(), params.output_dim());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const Eigen::VectorXd x = features.row(i).transpose();
    probs.row(i) = predict_proba_one(params, x).transpose();
  }
  return probs;
}

}  // namespace unimix
