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

// End-to-end acceptance gate. Each check prints one PASS/FAIL line; the
// process exit code is the number of failed checks.

#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "reaas/client.hpp"
#include "reaas/f2i.hpp"
#include "reaas/smoothing.hpp"
#include "reaas/spectral.hpp"
#include "support.hpp"

#include <httplib.h>
#include <json.hpp>

using namespace reaas;
using nlohmann::json;

namespace {

std::vector<RobustnessReport> g_reports;  // collected for the area identity

ServiceConfig grid_config(int h, int w) {
  ServiceConfig cfg;
  cfg.expected_input = ImageShape{h, w, 1};
  return cfg;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data) {
  LabeledDataset train, test;
  train.num_classes = test.num_classes = data.num_classes;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& part = i % 2 == 0 ? train : test;
    part.inputs.push_back(data.inputs[i]);
    part.labels.push_back(data.labels[i]);
  }
  return {train, test};
}

// Shared toy pipeline: spectral-regularized encoder pre-training on blobs,
// downstream training over the service, then deterministic certification.
struct ToyPipeline {
  AffineNetwork encoder;
  AffineNetwork classifier;
  LabeledDataset test;
  RobustnessReport report;
};

ToyPipeline run_toy_pipeline(double lambda, int pretrain_epochs = 80) {
  const LabeledDataset data = make_blob_dataset(60, 3, 16, 0.06, 17);
  const auto [train, test] = split(data);

  Rng rng(17);
  SpectralConfig spectral;
  spectral.lambda = lambda;
  AffineNetwork encoder =
      pretrain_encoder(make_network({16, 20, 10, 3}, rng), train, spectral,
                       pretrain_epochs, 0.1, 32, 17);

  FeatureService service(encoder, grid_config(4, 4));
  LocalServiceClient client(service, "toy");
  DownstreamConfig down;
  down.hidden = {16};
  down.epochs = 60;
  down.lr = 0.15;
  down.batch = 32;
  down.seed = 18;
  AffineNetwork classifier = train_downstream(client, {4, 4, 1}, train, down);
  RobustnessReport report =
      certify_bc(client, {4, 4, 1}, test, classifier, 1e-3);
  return {std::move(encoder), std::move(classifier), test, std::move(report)};
}

bool check_linear_exactness() {
  Rng rng(101);
  const SearchConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index in = 4 + trial % 5, out = 3 + trial % 4;
    const AffineNetwork enc = test::random_network({in, out}, rng);
    const Vector x = test::random_vector(rng, in);
    const double R_F = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    const double expected = R_F / enc.layer(0).weight.norm();
    const double got = f2i_radius(enc, x, R_F, cfg);
    if (std::abs(got - expected) > cfg.beta + 1e-6) return false;
  }
  return true;
}

bool check_containment() {
  Rng rng(102);
  std::uniform_int_distribution<int> depth_dist(2, 4);
  std::uniform_int_distribution<Eigen::Index> width_dist(8, 64);
  for (int net_i = 0; net_i < 50; ++net_i) {
    std::vector<Eigen::Index> dims;
    const int depth = depth_dist(rng);
    for (int k = 0; k <= depth; ++k) dims.push_back(width_dist(rng));
    const AffineNetwork net = test::random_network(dims, rng, 1.3, 0.2);
    const Vector x = test::random_vector(rng, dims.front());
    for (const double rho : {0.01, 0.1, 0.5}) {
      const BoundingLines lines = propagate_bounds(net, x, rho);
      for (int s = 0; s < 10000; ++s) {
        const Vector xp = x + test::ball_point(rng, dims.front(), rho);
        const Vector y = net.forward(xp);
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          const double lo =
              lines.lower_coeffs.row(i).dot(xp) + lines.lower_offset[i];
          const double hi =
              lines.upper_coeffs.row(i).dot(xp) + lines.upper_offset[i];
          if (y[i] < lo - 1e-9 || y[i] > hi + 1e-9) return false;
        }
      }
    }
  }
  return true;
}

bool check_end_to_end_soundness() {
  const ToyPipeline pipe = run_toy_pipeline(0.00075);
  g_reports.push_back(pipe.report);
  Rng rng(103);
  int attacked = 0;
  for (const auto& cert : pipe.report.certificates) {
    if (!cert.input_radius || *cert.input_radius <= 0.0) continue;
    if (attacked >= 50) break;
    ++attacked;
    const Vector& x = pipe.test.inputs[cert.input_id];
    if (test::pgd_flips_pipeline(pipe.encoder, pipe.classifier, x,
                                 0.99 * *cert.input_radius, 200, rng)) {
      return false;
    }
  }
  return attacked >= 30;  // the toy task must actually certify most inputs
}

bool check_smoothing_constants() {
  SmoothingConfig cfg;
  cfg.n_samples = 100;
  cfg.sigma = 0.5;
  cfg.alpha = 0.001;
  cfg.seed = 104;
  const SmoothingEvidence e = certify_smoothed(
      [](const Vector&) { return 1; }, Vector::Zero(4), cfg);
  if (std::abs(e.p_lower - 0.933254) > 1e-5) return false;
  if (!e.radius || std::abs(*e.radius - 0.75031) > 1e-4) return false;

  // Coverage: the lower bound exceeds the true p in at most a ~alpha
  // fraction of trials (3x slack), checked at p = 0.5.
  Rng rng(105);
  std::binomial_distribution<int> binom(100, 0.5);
  int violations = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    if (clopper_pearson_lower(binom(rng), 100, 0.001) > 0.5) ++violations;
  }
  return violations <= static_cast<int>(3 * 0.001 * trials) + 1;
}

bool check_query_accounting() {
  // Feature-reuse mode: 1 Feature call per training input, 2 per test input.
  const LabeledDataset data = make_blob_dataset(20, 2, 4, 0.02, 19);
  const auto [train_all, test_all] = split(data);
  LabeledDataset train = train_all, test = test_all;
  train.inputs.resize(20);
  train.labels.resize(20);
  test.inputs.resize(10);
  test.labels.resize(10);

  Rng rng(106);
  FeatureService service(test::random_network({4, 8, 4}, rng),
                         grid_config(2, 2));
  LocalServiceClient client(service, "reuse");
  DownstreamConfig down;
  down.hidden = {8};
  down.epochs = 25;
  down.lr = 0.25;
  down.batch = 8;
  const AffineNetwork classifier =
      train_downstream(client, {2, 2, 1}, train, down);
  const LedgerSnapshot after_train = client.ledger();
  if (after_train.feature_calls != 20 || after_train.f2i_calls != 0)
    return false;

  const RobustnessReport report =
      certify_bc(client, {2, 2, 1}, test, classifier);
  g_reports.push_back(report);
  const LedgerSnapshot after_cert = client.ledger();
  if (after_cert.feature_calls - after_train.feature_calls != 10) return false;
  if (after_cert.f2i_calls != 10) return false;  // every input certified

  // Baseline mode: e Feature calls per training input, N per test input.
  FeatureService baseline(test::random_network({4, 8, 4}, rng),
                          grid_config(2, 2));
  LocalServiceClient base_client(baseline, "baseline");
  DownstreamConfig base_down;
  base_down.hidden = {8};
  base_down.epochs = 25;
  base_down.batch = 8;
  LabeledDataset base_train = train;
  base_train.inputs.resize(10);
  base_train.labels.resize(10);
  const AffineNetwork base_classifier =
      train_downstream_seaas(base_client, {2, 2, 1}, base_train, base_down, 0.2);
  const LedgerSnapshot base_after_train = base_client.ledger();
  if (base_after_train.feature_calls != 25 * 10) return false;

  LabeledDataset base_test = test;
  base_test.inputs.resize(2);
  base_test.labels.resize(2);
  SmoothingConfig smoothing;
  smoothing.n_samples = 10000;
  smoothing.sigma = 0.25;
  certify_sc_seaas(base_client, {2, 2, 1}, base_test, base_classifier,
                   smoothing);
  const LedgerSnapshot base_after_cert = base_client.ledger();
  const std::int64_t base_test_calls =
      base_after_cert.feature_calls - base_after_train.feature_calls;
  if (base_test_calls != 10000 * 2) return false;

  // Per-input reduction factors: 25 / 1 for training, 10^4 / 2 for testing.
  const std::int64_t train_reduction = (base_after_train.feature_calls / 10) /
                                       (after_train.feature_calls / 20);
  const std::int64_t test_reduction =
      (base_test_calls / 2) /
      ((after_cert.feature_calls - after_train.feature_calls +
        after_cert.f2i_calls) /
       10);
  return train_reduction == 25 && test_reduction == 5000;
}

bool check_spectral_machinery() {
  Rng rng(407);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix w(20 + trial, 15 + trial % 9);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = normal(rng);
    const AffineLayer layer{w, Vector::Zero(w.rows())};
    const auto [est, state] = spectral_norm_power(
        layer, std::nullopt, 100, static_cast<std::uint64_t>(trial));
    const double truth = test::svd_spectral_norm(w);
    if (std::abs(est - truth) > 1e-4 * std::max(1.0, truth)) return false;
  }

  // Product of layer norms bounds feature movement for a trained encoder.
  const ToyPipeline pipe = run_toy_pipeline(0.00075, 30);
  double lipschitz = 1.0;
  for (const auto& layer : pipe.encoder.layers()) {
    lipschitz *= test::svd_spectral_norm(layer.weight);
  }
  for (int pair = 0; pair < 1000; ++pair) {
    const Vector x = test::random_vector(rng, 16);
    const Vector delta = test::ball_point(rng, 16, 1.0);
    const double moved =
        (pipe.encoder.forward(x + delta) - pipe.encoder.forward(x)).norm();
    if (moved > lipschitz * delta.norm() + 1e-9) return false;
  }
  return true;
}

bool check_regularizer_direction() {
  double products[3];
  double acrs[3];
  const double lambdas[3] = {0.0, 0.00075, 0.0075};
  for (int i = 0; i < 3; ++i) {
    const ToyPipeline pipe = run_toy_pipeline(lambdas[i]);
    g_reports.push_back(pipe.report);
    double product = 1.0;
    for (const auto& layer : pipe.encoder.layers()) {
      product *= test::svd_spectral_norm(layer.weight);
    }
    products[i] = product;
    acrs[i] = pipe.report.acr;
  }
  std::printf("       spectral products: %.4f / %.4f / %.4f; "
              "certified-radius means: %.4f / %.4f / %.4f\n",
              products[0], products[1], products[2], acrs[0], acrs[1],
              acrs[2]);
  if (!(products[1] < products[0] && products[2] < products[1])) return false;
  return acrs[1] > acrs[0];
}

bool check_area_identity() {
  int checked = 0;
  for (const auto& report : g_reports) {
    if (report.acr <= 0.0) continue;
    ++checked;
    const double area = trapezoid_area(report.curve);
    if (std::abs(area - report.acr) > 0.01 * report.acr) return false;
  }
  return checked >= 3;
}

bool check_rescaling_direction() {
  const int native = 8;
  const LabeledDataset native_data =
      make_image_dataset(30, 3, native, native, 1, 0.04, 23);
  const auto [train, test_native] = split(native_data);
  const auto [train_half_unused, test_half] =
      split(make_image_dataset(30, 3, native / 2, native / 2, 1, 0.04, 23));
  const auto [train_double_unused, test_double] =
      split(make_image_dataset(30, 3, native * 2, native * 2, 1, 0.04, 23));

  Rng rng(108);
  SpectralConfig spectral;
  spectral.lambda = 0.00075;
  const AffineNetwork encoder =
      pretrain_encoder(make_network({64, 32, 12, 3}, rng), train, spectral, 60,
                       0.1, 32, 23);
  FeatureService service(encoder, grid_config(native, native));
  LocalServiceClient client(service, "rescale");

  DownstreamConfig down;
  down.hidden = {16};
  down.epochs = 60;
  down.lr = 0.15;
  down.batch = 32;
  const AffineNetwork classifier =
      train_downstream(client, {native, native, 1}, train, down);

  const RobustnessReport at_half = certify_bc(
      client, {native / 2, native / 2, 1}, test_half, classifier, 1e-3);
  const RobustnessReport at_native =
      certify_bc(client, {native, native, 1}, test_native, classifier, 1e-3);
  const RobustnessReport at_double = certify_bc(
      client, {native * 2, native * 2, 1}, test_double, classifier, 1e-3);
  g_reports.push_back(at_native);
  std::printf("       certified-radius means at half/native/double "
              "resolution: %.4f / %.4f / %.4f\n",
              at_half.acr, at_native.acr, at_double.acr);
  return at_half.acr < at_native.acr && at_native.acr < at_double.acr;
}

bool check_transport_fidelity() {
  Rng rng(109);
  const AffineNetwork enc = test::random_network({16, 20, 8}, rng);
  FeatureService service(enc, grid_config(4, 4));
  const int port = service.start();
  if (port <= 0) return false;
  HttpServiceClient client("127.0.0.1", port, "fidelity");

  for (int i = 0; i < 100; ++i) {
    const Vector x = test::random_vector(rng, 16);
    const Vector over_wire = client.feature({4, 4, 1}, x);
    const Vector local = enc.forward(x);
    if ((over_wire - local).cwiseAbs().maxCoeff() != 0.0) return false;
  }

  httplib::Client raw("127.0.0.1", port);
  json body;
  body["shape"] = {4, 4, 1};
  const Vector x = test::random_vector(rng, 16);
  body["pixels"] = std::vector<double>(x.data(), x.data() + x.size());
  body["feature_radius"] = 0.5;
  const auto first = raw.Post("/f2iperturb", body.dump(), "application/json");
  if (!first || first->status != 200) return false;
  for (int i = 0; i < 5; ++i) {
    const auto again = raw.Post("/f2iperturb", body.dump(), "application/json");
    if (!again || again->body != first->body) return false;
  }
  service.stop();
  return true;
}

int run(int index, const char* description, const std::function<bool()>& fn) {
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    std::printf("       exception: %s\n", e.what());
  }
  std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", index, description);
  std::fflush(stdout);
  return ok ? 0 : 1;
}

}  // namespace

int main() {
  int failures = 0;
  failures += run(1,
                  "linear encoders: converted radius equals the feature "
                  "radius over the Frobenius norm within search precision",
                  check_linear_exactness);
  failures += run(2,
                  "bound propagation: zero containment violations over 50 "
                  "random ReLU networks x 10^4 sampled perturbations",
                  check_containment);
  failures += run(3,
                  "end-to-end soundness: gradient + random attacks at 0.99x "
                  "the certified radius never flip the prediction",
                  check_end_to_end_soundness);
  failures += run(4,
                  "smoothing constants: all-successes bound 0.933254 +- 1e-5, "
                  "radius 0.75031 +- 1e-4, coverage within 3x alpha",
                  check_smoothing_constants);
  failures += run(5,
                  "query accounting: 1 Feature call per training and 2 per "
                  "testing input vs 25 and 10^4 in baseline mode (25x / "
                  "5000x reductions)",
                  check_query_accounting);
  failures += run(6,
                  "spectral machinery: power iteration within 1e-4 of the SVD "
                  "oracle; Lipschitz product bounds 10^3 sampled feature "
                  "movements",
                  check_spectral_machinery);
  failures += run(7,
                  "regularizer direction: increasing penalty strictly shrinks "
                  "the layer-norm product and improves the certified-radius "
                  "mean",
                  check_regularizer_direction);
  failures += run(8,
                  "area identity: trapezoid area under every certified-"
                  "accuracy curve matches its report mean radius within 1%",
                  check_area_identity);
  failures += run(9,
                  "rescaling direction: mean certified radius is strictly "
                  "smaller at half and larger at double the native "
                  "resolution",
                  check_rescaling_direction);
  failures += run(10,
                  "transport fidelity: features bit-for-bit over HTTP for 100 "
                  "inputs; repeated conversion requests byte-identical",
                  check_transport_fidelity);
  if (failures == 0) {
    std::printf("all acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check(s) failed\n", failures);
  }
  return failures;
}
