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

#ifndef REAAS_SERVICE_HPP
#define REAAS_SERVICE_HPP

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "reaas/f2i.hpp"
#include "reaas/metrics.hpp"
#include "reaas/network.hpp"

namespace httplib {
class Server;
}

namespace reaas {

struct ImageShape {
  int h = 0;
  int w = 0;
  int channels = 1;
  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(h) * w * channels;
  }
  bool operator==(const ImageShape&) const = default;
};

struct ServiceConfig {
  std::string model_path;
  std::string listen_address = "127.0.0.1";
  int port = 0;  // 0 = pick an ephemeral port
  SearchConfig search;
  ImageShape expected_input;  // resolution the loaded encoder expects
};

/// Monotone request counters, total and per client id.
class QueryLedger {
 public:
  void record_feature(const std::string& client);
  void record_f2i(const std::string& client);
  LedgerSnapshot snapshot() const;

 private:
  std::atomic<std::int64_t> feature_calls_{0};
  std::atomic<std::int64_t> f2i_calls_{0};
  mutable std::mutex mutex_;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_client_;
};

/// One encoder per process. Core handlers are pure functions of the loaded
/// model and the request; the ledger is the only mutable state, so requests
/// run concurrently.
class FeatureService {
 public:
  FeatureService(AffineNetwork encoder, ServiceConfig cfg);
  ~FeatureService();

  // Returns forward(encoder', x) where encoder' has a bilinear rescale layer
  // folded in front when the request resolution differs from the expected one.
  Vector serve_feature(const ImageShape& shape, const Vector& pixels,
                       const std::string& client = "anonymous");

  F2IResult serve_f2i(const ImageShape& shape, const Vector& pixels,
                      double feature_radius,
                      const std::string& client = "anonymous");

  const QueryLedger& ledger() const { return ledger_; }
  const AffineNetwork& encoder() const { return encoder_; }
  const ServiceConfig& config() const { return config_; }

  /// Binds the HTTP endpoints (/feature, /f2iperturb, /ledger) and serves on
  /// a background thread. Returns the bound port.
  int start();
  void stop();
  /// Blocks until stop() is called (from another thread or a signal handler).
  void wait();

  /// Structured request log ("endpoint client status latency_us"), off by
  /// default.
  void set_log(std::ostream* log) { log_ = log; }

 private:
  AffineNetwork view_for(const ImageShape& shape) const;

  AffineNetwork encoder_;
  ServiceConfig config_;
  QueryLedger ledger_;
  std::ostream* log_ = nullptr;
  std::unique_ptr<httplib::Server> http_;
  std::thread serve_thread_;
};

}  // namespace reaas

#endif  // REAAS_SERVICE_HPP
