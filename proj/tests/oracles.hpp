#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library's numeric code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

namespace oracle {

inline double beta_cdf(double x, double alpha) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(alpha, alpha, x);
}

// Beta(1/2, 1/2) is the arcsine law.
inline double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

// P(frac(xi + c) >= 1/2) for xi ~ Beta(alpha, alpha), c in [0, 1).
inline double prob_shifted_at_least_half(double c, double alpha) {
  const auto F = [alpha](double x) { return beta_cdf(x, alpha); };
  if (c <= 0.5) return F(1.0 - c) - F(0.5 - c);
  return F(1.0 - c) + (1.0 - F(1.5 - c));
}

enum class Mode { mixup, factor, full };

// Exact class distribution of the xi-Aug label, enumerating all class pairs.
inline std::vector<double> exact_xi_aug(const std::vector<double>& prior, Mode mode, double alpha,
                                        double tau) {
  const std::size_t C = prior.size();
  std::vector<double> partner = prior;
  if (mode == Mode::full) {
    long double z = 0;
    for (std::size_t j = 0; j < C; ++j) z += std::pow(static_cast<long double>(prior[j]), tau);
    for (std::size_t j = 0; j < C; ++j) partner[j] = static_cast<double>(std::pow((long double)prior[j], tau) / z);
  }
  std::vector<double> out(C, 0.0);
  for (std::size_t i = 0; i < C; ++i) {
    for (std::size_t j = 0; j < C; ++j) {
      const double w = prior[i] * partner[j];
      const double c = mode == Mode::mixup ? 0.0 : prior[j] / (prior[i] + prior[j]);
      const double keep_i = prob_shifted_at_least_half(c, alpha);
      out[i] += w * keep_i;
      out[j] += w * (1.0 - keep_i);
    }
  }
  return out;
}

inline std::vector<double> lt_prior(int C, double rho) {
  std::vector<double> p(C);
  long double total = 0;
  for (int i = 0; i < C; ++i) {
    p[i] = std::pow(rho, -static_cast<double>(i) / (C - 1));
    total += p[i];
  }
  for (auto& v : p) v = static_cast<double>(v / total);
  return p;
}

inline double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                        int depth = 50) {
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

// Two-sided one-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

// Asymptotic KS critical value at significance 0.001.
inline double ks_critical_001(std::size_t n) { return 1.9495 / std::sqrt(static_cast<double>(n)); }

inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// Closed forms in long double, written out from the formulas directly.
inline long double lt_density_ld(long double y, int C, long double lam) {
  return lam / (std::exp(-lam) - std::exp(-lam * C)) * std::exp(-lam * y);
}
inline long double cor2_ld(long double y, int C, long double lam) {
  const long double D = std::exp(-lam) - std::exp(-lam * C);
  return lam / (D * D) * (std::exp(-lam * (y + 1)) - std::exp(-2 * lam * y));
}
inline long double cor3_ld(long double y, int C, long double lam, long double tau) {
  const long double D = std::exp(-lam) - std::exp(-lam * C);
  const long double E = std::exp(-lam * tau * C) - std::exp(-lam * tau);
  return lam / (D * E) * (std::exp(-lam * y * (tau + 1)) - std::exp(-lam * (tau + y)));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace oracle
