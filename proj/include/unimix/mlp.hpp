#pragma once

// Fully connected rectifier network emitting C logits, with hand-written
// backpropagation and SGD with momentum. Batches are column-major: one sample
// per column.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace unimix {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct DenseLayer {
  MatrixX<Scalar> weight;  // out x in
  VectorX<Scalar> bias;    // out
};

template <typename Scalar>
struct MlpParams {
  std::vector<DenseLayer<Scalar>> layers;

  Eigen::Index input_dim() const { return layers.front().weight.cols(); }
  Eigen::Index output_dim() const { return layers.back().weight.rows(); }

  std::vector<int> layer_dims() const {
    std::vector<int> dims{static_cast<int>(input_dim())};
    for (const auto& l : layers) dims.push_back(static_cast<int>(l.weight.rows()));
    return dims;
  }

  /// Same shapes, all zeros.
  MlpParams zeros_like() const {
    MlpParams z;
    for (const auto& l : layers) {
      z.layers.push_back({MatrixX<Scalar>::Zero(l.weight.rows(), l.weight.cols()),
                          VectorX<Scalar>::Zero(l.bias.size())});
    }
    return z;
  }

  bool all_finite() const {
    for (const auto& l : layers) {
      if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
  }
};

using Mlp = MlpParams<double>;

/// He-normal weights (variance 2 / fan_in), zero biases.
Mlp init_params(const std::vector<int>& layer_dims, std::uint64_t seed);

template <typename Scalar>
struct ForwardCache {
  std::vector<MatrixX<Scalar>> inputs;  // input to each layer
};

/// Logits (C x N) for a batch X (d x N); records layer inputs for backward.
template <typename Scalar>
MatrixX<Scalar> forward_batch(const MlpParams<Scalar>& params, const MatrixX<Scalar>& x,
                              ForwardCache<Scalar>* cache = nullptr) {
  if (params.layers.empty()) throw std::invalid_argument("network has no layers");
  if (x.rows() != params.input_dim()) throw std::invalid_argument("input dimension mismatch");
  if (cache) cache->inputs.clear();
  MatrixX<Scalar> h = x;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    MatrixX<Scalar> z = layer.weight * h;
    z.colwise() += layer.bias;
    if (cache) cache->inputs.push_back(std::move(h));
    if (l + 1 < params.layers.size()) {
      h = z.cwiseMax(Scalar(0));
    } else {
      return z;
    }
  }
  return h;
}

/// Logits for one sample.
template <typename Scalar>
VectorX<Scalar> forward(const MlpParams<Scalar>& params, const Eigen::Ref<const VectorX<Scalar>>& x) {
  if (params.layers.empty()) throw std::invalid_argument("network has no layers");
  if (x.size() != params.input_dim()) throw std::invalid_argument("input dimension mismatch");
  VectorX<Scalar> h = x;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    VectorX<Scalar> z = layer.weight * h + layer.bias;
    h = (l + 1 < params.layers.size()) ? VectorX<Scalar>(z.cwiseMax(Scalar(0))) : z;
  }
  return h;
}

/// Parameter gradients given dL/dlogits (C x N) and the cache of the
/// forward pass that produced those logits. Gradients are summed over the
/// batch columns.
template <typename Scalar>
MlpParams<Scalar> backward(const MlpParams<Scalar>& params, const ForwardCache<Scalar>& cache,
                           const MatrixX<Scalar>& logit_grad) {
  if (cache.inputs.size() != params.layers.size()) throw std::invalid_argument("stale forward cache");
  MlpParams<Scalar> grads = params.zeros_like();
  MatrixX<Scalar> delta = logit_grad;
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const MatrixX<Scalar>& input = cache.inputs[l];
    grads.layers[l].weight.noalias() = delta * input.transpose();
    grads.layers[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    MatrixX<Scalar> upstream = params.layers[l].weight.transpose() * delta;
    // input of layer l is relu(z_{l-1}); its derivative is 1 where positive.
    delta = upstream.cwiseProduct((input.array() > Scalar(0)).template cast<Scalar>().matrix());
  }
  return grads;
}

/// Single-sample convenience wrapper.
template <typename Scalar>
MlpParams<Scalar> backward(const MlpParams<Scalar>& params, const Eigen::Ref<const VectorX<Scalar>>& x,
                           const Eigen::Ref<const VectorX<Scalar>>& logit_grad) {
  ForwardCache<Scalar> cache;
  forward_batch(params, MatrixX<Scalar>(x), &cache);
  return backward(params, cache, MatrixX<Scalar>(logit_grad));
}

/// Momentum buffers, one per parameter tensor.
template <typename Scalar>
struct SgdState {
  MlpParams<Scalar> velocity;
};

/// v <- momentum v + grad + weight_decay param;  param <- param - lr v.
template <typename Scalar>
void sgd_step(MlpParams<Scalar>& params, const MlpParams<Scalar>& grads, SgdState<Scalar>& state,
              Scalar lr, Scalar momentum, Scalar weight_decay) {
  if (state.velocity.layers.empty()) state.velocity = params.zeros_like();
  if (grads.layers.size() != params.layers.size()) throw std::invalid_argument("gradient shape mismatch");
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& p = params.layers[l];
    auto& v = state.velocity.layers[l];
    const auto& g = grads.layers[l];
    v.weight = momentum * v.weight + g.weight + weight_decay * p.weight;
    v.bias = momentum * v.bias + g.bias + weight_decay * p.bias;
    p.weight -= lr * v.weight;
    p.bias -= lr * v.bias;
  }
}

/// softmax(forward(x)); no training-time margins.
Eigen::VectorXd predict_proba_one(const Mlp& params, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Row i is predict_proba_one of row i of `features` (N x d), evaluated through
/// the single-sample path.
Eigen::MatrixXd predict_proba(const Mlp& params, const Eigen::MatrixXd& features);

}  // namespace unimix
