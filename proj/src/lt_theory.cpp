#include "unimix/lt_theory.hpp"

#include <cmath>
#include <numbers>

namespace unimix {

double lambda_from_rho(double rho, int num_classes) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw std::domain_error("imbalance factor must be >= 1");
  if (num_classes < 2) throw std::domain_error("need at least two classes");
  if (rho == 1.0) return 0.0;
  return std::log(rho) / (num_classes - 1);
}

LTSpec LTSpec::make(int num_classes, double rho, double tau) {
  if (!std::isfinite(tau)) throw std::domain_error("tau must be finite");
  LTSpec spec;
  spec.num_classes = num_classes;
  spec.rho = rho;
  spec.lambda = lambda_from_rho(rho, num_classes);
  spec.tau = tau;
  return spec;
}

ClassPrior discrete_lt_prior(const LTSpec& spec) {
  if (spec.lambda == 0.0) return ClassPrior::uniform(spec.num_classes);
  Eigen::VectorXd w(spec.num_classes);
  // Relative to class 1 so the head weight is exactly 1.
  for (int i = 0; i < spec.num_classes; ++i) w[i] = std::exp(-spec.lambda * i);
  return ClassPrior::from_weights(w);
}

double continuous_lt_density(double y, const LTSpec& spec) {
  return continuous_lt_density<double>(y, spec.num_classes, spec.lambda);
}

double corollary1_density(double y, const LTSpec& spec) {
  return corollary1_density<double>(y, spec.num_classes, spec.lambda);
}

double corollary2_density(double y, const LTSpec& spec) {
  return corollary2_density<double>(y, spec.num_classes, spec.lambda);
}

double corollary3_density(double y, const LTSpec& spec) {
  return corollary3_density<double>(y, spec.num_classes, spec.lambda, spec.tau);
}

double corollary2_mode(const LTSpec& spec) {
  detail::check_positive_lambda(spec.lambda);
  return std::numbers::ln2 / spec.lambda + 1.0;
}

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::original: return "original";
    case CurveKind::mixup: return "mixup";
    case CurveKind::unimix_factor: return "unimix_factor";
    case CurveKind::unimix_full: return "unimix_full";
  }
  return "unknown";
}

std::vector<DensityCurve> emit_density_curves(const LTSpec& spec, int resolution) {
  if (resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  const double lo = 1.0;
  const double hi = spec.num_classes;
  const double step = (hi - lo) / (resolution - 1);

  const CurveKind kinds[] = {CurveKind::original, CurveKind::mixup, CurveKind::unimix_factor,
                             CurveKind::unimix_full};
  std::vector<DensityCurve> curves;
  for (CurveKind kind : kinds) {
    DensityCurve curve{kind, {}};
    curve.points.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      const double y = (k == resolution - 1) ? hi : lo + step * k;
      double value = 0.0;
      switch (kind) {
        case CurveKind::original: value = continuous_lt_density(y, spec); break;
        case CurveKind::mixup: value = corollary1_density(y, spec); break;
        case CurveKind::unimix_factor: value = corollary2_density(y, spec); break;
        case CurveKind::unimix_full: value = corollary3_density(y, spec); break;
      }
      curve.points.push_back({y, value});
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double trapezoid(const DensityCurve& curve) {
  double total = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    total += 0.5 * (b.y - a.y) * (a.density + b.density);
  }
  return total;
}

}  // namespace unimix
