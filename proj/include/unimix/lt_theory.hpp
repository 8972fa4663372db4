#pragma once

// Exponential long-tailed label model and the closed-form class densities of
// the xi-Aug samples produced by mixup, the UniMix factor, and the full UniMix
// pipeline. Class index y is 1-based and continuous on [1, C].

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "unimix/prior.hpp"

namespace unimix {

double lambda_from_rho(double rho, int num_classes);

struct LTSpec {
  int num_classes = 10;
  double rho = 100.0;
  double lambda = 0.0;
  double tau = -1.0;

  /// Validating constructor; lambda is always derived from (rho, C).
  static LTSpec make(int num_classes, double rho, double tau = -1.0);
};

ClassPrior discrete_lt_prior(const LTSpec& spec);

namespace detail {

template <typename Scalar>
void check_class_domain(Scalar y, int num_classes) {
  if (!(y >= Scalar(1) && y <= Scalar(num_classes))) {
    throw std::domain_error("class coordinate outside [1, C]");
  }
}

template <typename Scalar>
void check_positive_lambda(Scalar lambda) {
  if (!(lambda > Scalar(0))) throw std::domain_error("closed form requires lambda > 0");
}

/// e^{-lambda} - e^{-lambda C}
template <typename Scalar>
Scalar lt_norm(Scalar lambda, int num_classes) {
  using std::exp;
  return exp(-lambda) - exp(-lambda * Scalar(num_classes));
}

}  // namespace detail

/// lambda / (e^{-lambda} - e^{-lambda C}) * e^{-lambda y}; 1/(C-1) at lambda = 0.
template <typename Scalar>
Scalar continuous_lt_density(Scalar y, int num_classes, Scalar lambda) {
  using std::exp;
  detail::check_class_domain(y, num_classes);
  if (lambda == Scalar(0)) return Scalar(1) / Scalar(num_classes - 1);
  return lambda / detail::lt_norm(lambda, num_classes) * exp(-lambda * y);
}

/// Mixup with symmetric Beta keeps the original long-tailed density.
template <typename Scalar>
Scalar corollary1_density(Scalar y, int num_classes, Scalar lambda) {
  return continuous_lt_density(y, num_classes, lambda);
}

/// UniMix factor with both partners drawn at random (middle-majority).
template <typename Scalar>
Scalar corollary2_density(Scalar y, int num_classes, Scalar lambda) {
  using std::exp;
  detail::check_class_domain(y, num_classes);
  detail::check_positive_lambda(lambda);
  const Scalar norm = detail::lt_norm(lambda, num_classes);
  return lambda / (norm * norm) * (exp(-lambda * (y + Scalar(1))) - exp(Scalar(-2) * lambda * y));
}

/// UniMix factor with the second partner drawn by the tau inverse sampler
/// (tail-majority for tau < 1). Singular at tau = 0.
template <typename Scalar>
Scalar corollary3_density(Scalar y, int num_classes, Scalar lambda, Scalar tau) {
  using std::exp;
  detail::check_class_domain(y, num_classes);
  detail::check_positive_lambda(lambda);
  if (tau == Scalar(0)) throw std::domain_error("corollary3_density is undefined at tau = 0");
  const Scalar c = Scalar(num_classes);
  const Scalar denom =
      detail::lt_norm(lambda, num_classes) * (exp(-lambda * tau * c) - exp(-lambda * tau));
  return lambda / denom * (exp(-lambda * y * (tau + Scalar(1))) - exp(-lambda * (tau + y)));
}

double continuous_lt_density(double y, const LTSpec& spec);
double corollary1_density(double y, const LTSpec& spec);
double corollary2_density(double y, const LTSpec& spec);
double corollary3_density(double y, const LTSpec& spec);

/// Interior stationary point of corollary2_density, ln 2 / lambda + 1.
double corollary2_mode(const LTSpec& spec);

enum class CurveKind { original, mixup, unimix_factor, unimix_full };

std::string to_string(CurveKind kind);

struct DensityPoint {
  double y;
  double density;
};

struct DensityCurve {
  CurveKind kind;
  std::vector<DensityPoint> points;
};

/// Four curves sampled on a uniform grid of `resolution` points over [1, C].
std::vector<DensityCurve> emit_density_curves(const LTSpec& spec, int resolution);

/// Trapezoidal integral of a curve over its grid.
double trapezoid(const DensityCurve& curve);

}  // namespace unimix
