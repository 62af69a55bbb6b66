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

#include "reaas/service.hpp"

#include <chrono>
#include <ostream>

#include <httplib.h>
#include <json.hpp>

#include "reaas/rescale.hpp"

namespace reaas {

namespace {

using nlohmann::json;

ImageShape shape_from_json(const json& j) {
  const auto& arr = j.at("shape");
  if (!arr.is_array() || arr.size() != 3) {
    throw InvalidInput("shape must be [h, w, channels]");
  }
  ImageShape shape{arr[0].get<int>(), arr[1].get<int>(), arr[2].get<int>()};
  if (shape.h < 1 || shape.w < 1 || shape.channels < 1) {
    throw InvalidInput("shape entries must be >= 1");
  }
  return shape;
}

Vector pixels_from_json(const json& j, const ImageShape& shape) {
  const auto& arr = j.at("pixels");
  if (!arr.is_array() ||
      static_cast<Eigen::Index>(arr.size()) != shape.dim()) {
    throw InvalidInput("pixels length does not match shape");
  }
  Vector x(shape.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = arr[static_cast<std::size_t>(i)].get<double>();
    if (!std::isfinite(x[i])) throw InvalidInput("non-finite pixel value");
  }
  return x;
}

std::string client_of(const httplib::Request& req) {
  const auto it = req.headers.find("X-Client-Id");
  return it == req.headers.end() || it->second.empty() ? "anonymous"
                                                       : it->second;
}

}  // namespace

void QueryLedger::record_feature(const std::string& client) {
  feature_calls_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard lock(mutex_);
  ++per_client_[client].first;
}

void QueryLedger::record_f2i(const std::string& client) {
  f2i_calls_.fetch_add(1, std::memory_order_relaxed);
  std::lock_guard lock(mutex_);
  ++per_client_[client].second;
}

LedgerSnapshot QueryLedger::snapshot() const {
  LedgerSnapshot snap;
  std::lock_guard lock(mutex_);
  snap.feature_calls = feature_calls_.load(std::memory_order_relaxed);
  snap.f2i_calls = f2i_calls_.load(std::memory_order_relaxed);
  snap.per_client = per_client_;
  return snap;
}

FeatureService::FeatureService(AffineNetwork encoder, ServiceConfig cfg)
    : encoder_(std::move(encoder)), config_(std::move(cfg)) {
  if (config_.expected_input.h > 0 &&
      config_.expected_input.dim() != encoder_.input_dim()) {
    throw InvalidInput("expected_input does not match encoder input dim");
  }
}

FeatureService::~FeatureService() {
  stop();
  wait();
}

AffineNetwork FeatureService::view_for(const ImageShape& shape) const {
  if (config_.expected_input.h <= 0 || shape == config_.expected_input) {
    if (shape.dim() != encoder_.input_dim()) {
      throw InvalidInput("input dim does not match encoder");
    }
    return encoder_;
  }
  if (shape.channels != config_.expected_input.channels) {
    throw InvalidInput("wrong channel count");
  }
  const AffineLayer rescale = bilinear_rescale_matrix(
      shape.h, shape.w, config_.expected_input.h, config_.expected_input.w,
      shape.channels);
  return encoder_.with_prepended_affine(rescale);
}

Vector FeatureService::serve_feature(const ImageShape& shape,
                                     const Vector& pixels,
                                     const std::string& client) {
  if (pixels.size() != shape.dim() || !pixels.allFinite()) {
    throw InvalidInput("malformed image payload");
  }
  const AffineNetwork view = view_for(shape);
  Vector feature = view.forward(pixels);
  ledger_.record_feature(client);
  return feature;
}

F2IResult FeatureService::serve_f2i(const ImageShape& shape,
                                    const Vector& pixels, double feature_radius,
                                    const std::string& client) {
  if (pixels.size() != shape.dim() || !pixels.allFinite()) {
    throw InvalidInput("malformed image payload");
  }
  if (feature_radius <= 0.0) {
    throw InvalidInput("feature_radius must be > 0");
  }
  const AffineNetwork view = view_for(shape);
  F2IResult result = f2i_search(view, pixels, feature_radius, config_.search);
  ledger_.record_f2i(client);
  return result;
}

int FeatureService::start() {
  http_ = std::make_unique<httplib::Server>();

  const auto timed = [this](const char* endpoint, const httplib::Request& req,
                            httplib::Response& res, auto&& handler) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      json body = json::parse(req.body);
      json reply = handler(body, client_of(req));
      res.set_content(reply.dump(), "application/json");
    } catch (const InvalidInput& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}, {"code", "bad_request"}}.dump(),
                      "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", e.what()}, {"code", "bad_request"}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(
          json{{"error", e.what()}, {"code", "server_error"}}.dump(),
          "application/json");
    }
    if (log_) {
      const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      *log_ << endpoint << " client=" << client_of(req)
            << " status=" << res.status << " latency_us=" << us << "\n";
    }
  };

  http_->Post("/feature", [this, timed](const httplib::Request& req,
                                        httplib::Response& res) {
    timed("feature", req, res, [this](const json& body,
                                      const std::string& client) {
      const ImageShape shape = shape_from_json(body);
      const Vector feature =
          serve_feature(shape, pixels_from_json(body, shape), client);
      json reply;
      reply["feature"] = std::vector<double>(
          feature.data(), feature.data() + feature.size());
      return reply;
    });
  });

  http_->Post("/f2iperturb", [this, timed](const httplib::Request& req,
                                           httplib::Response& res) {
    timed("f2iperturb", req, res, [this](const json& body,
                                         const std::string& client) {
      const ImageShape shape = shape_from_json(body);
      const F2IResult result =
          serve_f2i(shape, pixels_from_json(body, shape),
                    body.at("feature_radius").get<double>(), client);
      return json{{"input_radius", result.radius},
                  {"at_floor", result.at_floor}};
    });
  });

  http_->Get("/ledger", [this](const httplib::Request&, httplib::Response& res) {
    const LedgerSnapshot snap = ledger_.snapshot();
    json j{{"feature_calls", snap.feature_calls},
           {"f2i_calls", snap.f2i_calls}};
    for (const auto& [client, counts] : snap.per_client) {
      j["clients"][client] = {{"feature_calls", counts.first},
                              {"f2i_calls", counts.second}};
    }
    res.set_content(j.dump(), "application/json");
  });

  int port = config_.port;
  if (port == 0) {
    port = http_->bind_to_any_port(config_.listen_address);
  } else if (!http_->bind_to_port(config_.listen_address, port)) {
    throw std::runtime_error("cannot bind " + config_.listen_address + ":" +
                             std::to_string(port));
  }
  serve_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port;
}

void FeatureService::wait() {
  if (serve_thread_.joinable()) serve_thread_.join();
}

void FeatureService::stop() {
  if (http_) http_->stop();
}

}  // namespace reaas
