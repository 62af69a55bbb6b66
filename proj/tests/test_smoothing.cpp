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

#include <doctest.h>

#include "reaas/smoothing.hpp"
#include "support.hpp"

using namespace reaas;

TEST_CASE("Clopper-Pearson: all-successes case has the closed form "
          "alpha^(1/N)") {
  // Beta(N, 1) has CDF x^N, so the alpha-quantile is alpha^(1/N).
  CHECK(clopper_pearson_lower(100, 100, 0.001) ==
        doctest::Approx(std::pow(0.001, 0.01)).epsilon(1e-9));
  CHECK(clopper_pearson_lower(100, 100, 0.001) ==
        doctest::Approx(0.9332543).epsilon(1e-6));
  CHECK(clopper_pearson_lower(10, 10, 0.05) ==
        doctest::Approx(std::pow(0.05, 0.1)).epsilon(1e-9));
}

TEST_CASE("Clopper-Pearson: zero successes give a zero bound") {
  CHECK(clopper_pearson_lower(0, 100, 0.001) == 0.0);
  CHECK(clopper_pearson_lower(0, 1, 0.5) == 0.0);
}

TEST_CASE("Clopper-Pearson: one-of-one equals alpha") {
  // Beta(1, 1) is uniform, so the alpha-quantile is alpha itself.
  CHECK(clopper_pearson_lower(1, 1, 0.001) ==
        doctest::Approx(0.001).epsilon(1e-9));
}

TEST_CASE("Clopper-Pearson bound is monotone in the success count") {
  double prev = -1.0;
  for (std::int64_t s = 0; s <= 100; s += 5) {
    const double b = clopper_pearson_lower(s, 100, 0.01);
    CHECK(b >= prev);
    CHECK(b <= 1.0);
    prev = b;
  }
}

TEST_CASE("Clopper-Pearson bound sits below the empirical fraction") {
  for (std::int64_t s : {1, 25, 50, 75, 99}) {
    CHECK(clopper_pearson_lower(s, 100, 0.01) <
          static_cast<double>(s) / 100.0);
  }
}

TEST_CASE("Clopper-Pearson coverage: simulated violations stay within slack") {
  // p = 0.6, N = 200, alpha = 0.05: the bound exceeds the true p in at most
  // an alpha fraction of runs (3x slack for simulation noise).
  const double p = 0.6, alpha = 0.05;
  const int runs = 2000, N = 200;
  Rng rng(99);
  std::binomial_distribution<int> binom(N, p);
  int violations = 0;
  for (int r = 0; r < runs; ++r) {
    if (clopper_pearson_lower(binom(rng), N, alpha) > p) ++violations;
  }
  CHECK(violations <= static_cast<int>(3 * alpha * runs));
}

TEST_CASE("regularized incomplete beta: known values") {
  CHECK(regularized_incomplete_beta(1, 1, 0.3) ==
        doctest::Approx(0.3).epsilon(1e-12));
  // I_x(2, 2) = x^2 (3 - 2x)
  CHECK(regularized_incomplete_beta(2, 2, 0.25) ==
        doctest::Approx(0.25 * 0.25 * 2.5).epsilon(1e-10));
  CHECK(regularized_incomplete_beta(5, 3, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(5, 3, 1.0) == 1.0);
}

TEST_CASE("standard normal quantile: known points and CDF round trip") {
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
  CHECK(std_normal_quantile(0.9332543) ==
        doctest::Approx(1.5004750).epsilon(1e-5));
  for (double p = 0.01; p < 1.0; p += 0.007) {
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-7);
  }
  CHECK(std_normal_quantile(0.2) == doctest::Approx(-std_normal_quantile(0.8))
                                        .epsilon(1e-9));
}

TEST_CASE("a constant predictor certifies the all-successes radius") {
  SmoothingConfig cfg;
  cfg.n_samples = 100;
  cfg.sigma = 0.5;
  cfg.alpha = 0.001;
  cfg.seed = 42;
  const Predictor always_one = [](const Vector&) { return 1; };
  const SmoothingEvidence e =
      certify_smoothed(always_one, Vector::Zero(4), cfg);
  CHECK(e.predicted == 1);
  CHECK(e.label_frequencies.at(1) == 100);
  CHECK(e.p_lower == doctest::Approx(0.9332543).epsilon(1e-6));
  REQUIRE_FALSE(e.abstained());
  // radius = sigma * quantile(p_lower) = 0.5 * 1.5004750 = 0.7502375
  CHECK(*e.radius == doctest::Approx(0.7502375).epsilon(1e-4));
}

TEST_CASE("radius scales linearly with sigma for a constant predictor") {
  const Predictor always_zero = [](const Vector&) { return 0; };
  SmoothingConfig cfg;
  cfg.n_samples = 50;
  cfg.alpha = 0.01;
  cfg.sigma = 0.25;
  const double r1 = *certify_smoothed(always_zero, Vector::Zero(2), cfg).radius;
  cfg.sigma = 1.0;
  const double r2 = *certify_smoothed(always_zero, Vector::Zero(2), cfg).radius;
  CHECK(r2 == doctest::Approx(4.0 * r1).epsilon(1e-10));
}

TEST_CASE("a coin-flip predictor abstains") {
  // Predicting the sign of the first noise coordinate at x = 0 is a fair coin.
  const Predictor coin = [](const Vector& v) { return v[0] > 0.0 ? 1 : 0; };
  SmoothingConfig cfg;
  cfg.n_samples = 2000;
  cfg.sigma = 0.5;
  cfg.alpha = 0.01;
  cfg.seed = 7;
  const SmoothingEvidence e = certify_smoothed(coin, Vector::Zero(3), cfg);
  CHECK(e.abstained());
  CHECK(e.p_lower <= 0.5);
  CHECK(e.label_frequencies.at(0) + e.label_frequencies.at(1) == 2000);
}

TEST_CASE("a single sample can never beat 1/2 and abstains") {
  const Predictor always_one = [](const Vector&) { return 1; };
  SmoothingConfig cfg;
  cfg.n_samples = 1;
  cfg.alpha = 0.001;
  const SmoothingEvidence e =
      certify_smoothed(always_one, Vector::Zero(1), cfg);
  CHECK(e.p_lower == doctest::Approx(0.001).epsilon(1e-9));
  CHECK(e.abstained());
}

TEST_CASE("certification is deterministic in the seed") {
  Rng net_rng(5);
  const AffineNetwork clf = test::random_network({4, 8, 3}, net_rng);
  const Predictor predict = [&](const Vector& v) {
    return test::argmax_label(clf, v);
  };
  const Vector x = test::random_vector(net_rng, 4);
  SmoothingConfig cfg;
  cfg.n_samples = 500;
  cfg.sigma = 0.3;
  cfg.seed = 123;
  const SmoothingEvidence a = certify_smoothed(predict, x, cfg);
  const SmoothingEvidence b = certify_smoothed(predict, x, cfg);
  CHECK(a.predicted == b.predicted);
  CHECK(a.p_lower == b.p_lower);
  CHECK(a.label_frequencies == b.label_frequencies);
  cfg.seed = 124;
  const SmoothingEvidence c = certify_smoothed(predict, x, cfg);
  CHECK(a.label_frequencies != c.label_frequencies);
}

TEST_CASE("the certified probability bound rarely exceeds the true "
          "success probability") {
  // A predictor whose success probability under the noise is exactly p:
  // label 1 iff the first noise coordinate is below sigma * quantile(p).
  const double p = 0.8, sigma = 0.5, alpha = 0.05;
  const double threshold = sigma * std_normal_quantile(p);
  const Predictor bern = [&](const Vector& v) {
    return v[0] < threshold ? 1 : 0;
  };
  int violations = 0;
  const int runs = 500;
  for (int r = 0; r < runs; ++r) {
    SmoothingConfig cfg;
    cfg.n_samples = 200;
    cfg.sigma = sigma;
    cfg.alpha = alpha;
    cfg.seed = static_cast<std::uint64_t>(r) * 977 + 1;
    const SmoothingEvidence e = certify_smoothed(bern, Vector::Zero(2), cfg);
    if (e.predicted == 1 && e.p_lower > p) ++violations;
  }
  CHECK(violations <= static_cast<int>(3 * alpha * runs));
}

TEST_CASE("frequencies always sum to the sample count") {
  const Predictor mod3 = [](const Vector& v) {
    return static_cast<int>(std::abs(v[0] * 100)) % 3;
  };
  SmoothingConfig cfg;
  cfg.n_samples = 777;
  const SmoothingEvidence e = certify_smoothed(mod3, Vector::Zero(2), cfg);
  std::int64_t total = 0;
  for (const auto& [label, count] : e.label_frequencies) total += count;
  CHECK(total == 777);
}
