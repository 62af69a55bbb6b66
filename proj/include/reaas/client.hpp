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

#ifndef REAAS_CLIENT_HPP
#define REAAS_CLIENT_HPP

#include <memory>
#include <string>

#include "reaas/dataset.hpp"
#include "reaas/metrics.hpp"
#include "reaas/service.hpp"
#include "reaas/smoothing.hpp"
#include "reaas/train.hpp"

namespace reaas {

/// Raised when the service stays unreachable after the retry budget.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transport-agnostic view of the two APIs plus the ledger endpoint.
class ServiceHandle {
 public:
  virtual ~ServiceHandle() = default;
  virtual Vector feature(const ImageShape& shape, const Vector& pixels) = 0;
  virtual double f2i(const ImageShape& shape, const Vector& pixels,
                     double feature_radius) = 0;
  virtual LedgerSnapshot ledger() = 0;
};

/// HTTP client with a small retry budget for transient transport failures.
class HttpServiceClient : public ServiceHandle {
 public:
  HttpServiceClient(const std::string& host, int port,
                    std::string client_id = "anonymous", int retries = 3);
  ~HttpServiceClient() override;

  Vector feature(const ImageShape& shape, const Vector& pixels) override;
  double f2i(const ImageShape& shape, const Vector& pixels,
             double feature_radius) override;
  LedgerSnapshot ledger() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// In-process handle over a FeatureService; same handlers, same ledger, no
/// socket. Used by tests and by the single-binary demo path.
class LocalServiceClient : public ServiceHandle {
 public:
  explicit LocalServiceClient(FeatureService& service,
                              std::string client_id = "anonymous")
      : service_(service), client_id_(std::move(client_id)) {}

  Vector feature(const ImageShape& shape, const Vector& pixels) override {
    return service_.serve_feature(shape, pixels, client_id_);
  }
  double f2i(const ImageShape& shape, const Vector& pixels,
             double feature_radius) override {
    return service_.serve_f2i(shape, pixels, feature_radius, client_id_).radius;
  }
  LedgerSnapshot ledger() override { return service_.ledger().snapshot(); }

 private:
  FeatureService& service_;
  std::string client_id_;
};

struct DownstreamConfig {
  std::vector<Eigen::Index> hidden = {256, 256};
  int epochs = 25;
  double lr = 0.06;
  int batch = 512;
  std::uint64_t seed = 0;
  // SC training noise added to the served feature vectors, fresh per epoch.
  std::optional<double> noise_sigma;
};

/// Trains a downstream classifier on served features: exactly one Feature-API
/// call per training input, regardless of epochs or noise.
AffineNetwork train_downstream(ServiceHandle& service, const ImageShape& shape,
                               const LabeledDataset& images,
                               const DownstreamConfig& cfg);

/// SEaaS baseline SC training: noise goes on the images, so every epoch
/// re-queries the Feature-API for each noisy training input (e calls per
/// training input).
AffineNetwork train_downstream_seaas(ServiceHandle& service,
                                     const ImageShape& shape,
                                     const LabeledDataset& images,
                                     const DownstreamConfig& cfg,
                                     double noise_sigma);

/// Deterministic CROWN certification of the downstream classifier: per test
/// input one Feature-API call, a local feature-space radius, and (when that
/// radius is positive) one F2IPerturb-API call.
RobustnessReport certify_bc(ServiceHandle& service, const ImageShape& shape,
                            const LabeledDataset& test,
                            const AffineNetwork& classifier,
                            double precision = 0.001, int curve_points = 100);

/// Randomized-smoothing certification in feature space: one Feature-API call,
/// local smoothing over the feature vector, one F2IPerturb-API call unless
/// the smoothing abstains.
RobustnessReport certify_sc_reaas(ServiceHandle& service,
                                  const ImageShape& shape,
                                  const LabeledDataset& test,
                                  const AffineNetwork& classifier,
                                  const SmoothingConfig& cfg,
                                  int curve_points = 100);

/// SEaaS baseline: smoothing over images, every noisy image costs one
/// Feature-API call (N per test input); radius is already input-space.
RobustnessReport certify_sc_seaas(ServiceHandle& service,
                                  const ImageShape& shape,
                                  const LabeledDataset& test,
                                  const AffineNetwork& classifier,
                                  const SmoothingConfig& cfg,
                                  int curve_points = 100);

}  // namespace reaas

#endif  // REAAS_CLIENT_HPP
