// Copyright 2026 The REaaS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reaas/smoothing.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace reaas {

namespace {

// Lentz continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double clopper_pearson_lower(std::int64_t successes, std::int64_t total,
                             double alpha) {
  if (total < 1) throw InvalidInput("clopper_pearson_lower: total must be >= 1");
  if (successes < 0 || successes > total) {
    throw InvalidInput("clopper_pearson_lower: successes out of range");
  }
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw InvalidInput("clopper_pearson_lower: alpha must be in (0, 1)");
  }
  if (successes == 0) return 0.0;
  const double a = static_cast<double>(successes);
  const double b = static_cast<double>(total - successes) + 1.0;
  // Invert I_x(a, b) = alpha by bisection; I_x is increasing in x.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_incomplete_beta(a, b, mid) < alpha) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double std_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("std_normal_quantile: p must be in (0, 1)");
  }
  // Acklam's rational approximation, then one Newton step on the CDF.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double z;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  if (pdf > 0.0) z -= (std_normal_cdf(z) - p) / pdf;
  return z;
}

SmoothingEvidence certify_smoothed(const Predictor& predict, const Vector& x,
                                   const SmoothingConfig& cfg) {
  if (cfg.n_samples < 1) {
    throw InvalidInput("certify_smoothed: n_samples must be >= 1");
  }
  if (cfg.sigma <= 0.0) {
    throw InvalidInput("certify_smoothed: sigma must be > 0");
  }
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0) {
    throw InvalidInput("certify_smoothed: alpha must be in (0, 1)");
  }
  SmoothingEvidence ev;
  for (std::int64_t j = 0; j < cfg.n_samples; ++j) {
    Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(j) + 1);
    const Vector noisy = x + gaussian_vector(rng, x.size(), cfg.sigma);
    ++ev.label_frequencies[predict(noisy)];
  }
  std::int64_t best = -1;
  for (const auto& [label, count] : ev.label_frequencies) {
    if (count > best) {  // map order breaks ties toward the smaller label
      best = count;
      ev.predicted = label;
    }
  }
  ev.p_lower = clopper_pearson_lower(best, cfg.n_samples, cfg.alpha);
  if (ev.p_lower > 0.5) {
    ev.radius = cfg.sigma * std_normal_quantile(ev.p_lower);
  }
  return ev;
}

}  // namespace reaas
