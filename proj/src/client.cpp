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

#include "reaas/client.hpp"

#include <httplib.h>
#include <json.hpp>

#include "reaas/crown.hpp"

namespace reaas {

namespace {

using nlohmann::json;

json image_body(const ImageShape& shape, const Vector& pixels) {
  json j;
  j["shape"] = {shape.h, shape.w, shape.channels};
  j["pixels"] = std::vector<double>(pixels.data(), pixels.data() + pixels.size());
  return j;
}

LabeledDataset features_of(ServiceHandle& service, const ImageShape& shape,
                           const LabeledDataset& images,
                           const std::vector<Vector>* override_inputs = nullptr) {
  LabeledDataset features;
  features.num_classes = images.num_classes;
  features.labels = images.labels;
  const auto& inputs = override_inputs ? *override_inputs : images.inputs;
  for (const auto& x : inputs) {
    features.inputs.push_back(service.feature(shape, x));
  }
  return features;
}

std::uint64_t per_input_seed(std::uint64_t base, std::size_t input_id) {
  return base + 0x9e3779b97f4a7c15ull * (input_id + 1);
}

Predictor argmax_predictor(const AffineNetwork& classifier) {
  return [&classifier](const Vector& v) {
    Eigen::Index best;
    classifier.forward(v).maxCoeff(&best);
    return static_cast<int>(best);
  };
}

}  // namespace

struct HttpServiceClient::Impl {
  httplib::Client http;
  std::string client_id;
  int retries;

  Impl(const std::string& host, int port, std::string id, int r)
      : http(host, port), client_id(std::move(id)), retries(r) {
    http.set_connection_timeout(10);
    http.set_read_timeout(300);
  }

  json roundtrip(const std::string& path, const json& body) {
    httplib::Headers headers{{"X-Client-Id", client_id}};
    for (int attempt = 0;; ++attempt) {
      auto res = http.Post(path, headers, body.dump(), "application/json");
      if (res) {
        if (res->status != 200) {
          const json err = json::parse(res->body, nullptr, false);
          throw std::runtime_error(
              "service error on " + path + ": " +
              (err.is_object() && err.contains("error")
                   ? err["error"].get<std::string>()
                   : res->body));
        }
        return json::parse(res->body);
      }
      if (attempt >= retries) {
        throw TransportError("service unreachable on " + path + " after " +
                             std::to_string(retries + 1) + " attempts");
      }
    }
  }
};

HttpServiceClient::HttpServiceClient(const std::string& host, int port,
                                     std::string client_id, int retries)
    : impl_(std::make_unique<Impl>(host, port, std::move(client_id), retries)) {}

HttpServiceClient::~HttpServiceClient() = default;

Vector HttpServiceClient::feature(const ImageShape& shape,
                                  const Vector& pixels) {
  const json reply = impl_->roundtrip("/feature", image_body(shape, pixels));
  const auto& arr = reply.at("feature");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

double HttpServiceClient::f2i(const ImageShape& shape, const Vector& pixels,
                              double feature_radius) {
  json body = image_body(shape, pixels);
  body["feature_radius"] = feature_radius;
  return impl_->roundtrip("/f2iperturb", body).at("input_radius").get<double>();
}

LedgerSnapshot HttpServiceClient::ledger() {
  for (int attempt = 0;; ++attempt) {
    auto res = impl_->http.Get("/ledger");
    if (res && res->status == 200) {
      const json j = json::parse(res->body);
      LedgerSnapshot snap;
      snap.feature_calls = j.at("feature_calls").get<std::int64_t>();
      snap.f2i_calls = j.at("f2i_calls").get<std::int64_t>();
      if (j.contains("clients")) {
        for (const auto& [client, counts] : j.at("clients").items()) {
          snap.per_client[client] = {
              counts.at("feature_calls").get<std::int64_t>(),
              counts.at("f2i_calls").get<std::int64_t>()};
        }
      }
      return snap;
    }
    if (attempt >= impl_->retries) {
      throw TransportError("ledger endpoint unreachable");
    }
  }
}

AffineNetwork train_downstream(ServiceHandle& service, const ImageShape& shape,
                               const LabeledDataset& images,
                               const DownstreamConfig& cfg) {
  images.validate();
  const LabeledDataset features = features_of(service, shape, images);
  std::vector<Eigen::Index> dims{features.dim()};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(features.num_classes);
  Rng init_rng(cfg.seed);
  AffineNetwork net = make_network(dims, init_rng);
  TrainOptions opts;
  opts.epochs = cfg.epochs;
  opts.lr = cfg.lr;
  opts.batch = cfg.batch;
  opts.seed = cfg.seed;
  opts.noise_sigma = cfg.noise_sigma;
  return train_classifier(std::move(net), features, opts);
}

AffineNetwork train_downstream_seaas(ServiceHandle& service,
                                     const ImageShape& shape,
                                     const LabeledDataset& images,
                                     const DownstreamConfig& cfg,
                                     double noise_sigma) {
  images.validate();
  std::optional<AffineNetwork> net;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fresh image noise each epoch; each noisy input costs one Feature call.
    Rng noise_rng = substream(cfg.seed, static_cast<std::uint64_t>(epoch));
    std::vector<Vector> noisy;
    noisy.reserve(images.size());
    for (const auto& x : images.inputs) {
      noisy.push_back(x + gaussian_vector(noise_rng, x.size(), noise_sigma));
    }
    const LabeledDataset features = features_of(service, shape, images, &noisy);
    if (!net) {
      std::vector<Eigen::Index> dims{features.dim()};
      dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
      dims.push_back(features.num_classes);
      Rng init_rng(cfg.seed);
      net = make_network(dims, init_rng);
    }
    TrainOptions opts;
    opts.epochs = 1;
    opts.lr = cfg.lr;
    opts.batch = cfg.batch;
    opts.seed = per_input_seed(cfg.seed, static_cast<std::size_t>(epoch));
    net = train_classifier(std::move(*net), features, opts);
  }
  return *net;
}

RobustnessReport certify_bc(ServiceHandle& service, const ImageShape& shape,
                            const LabeledDataset& test,
                            const AffineNetwork& classifier, double precision,
                            int curve_points) {
  test.validate();
  RobustnessReport report;
  report.input_dim = shape.dim();
  for (std::size_t i = 0; i < test.size(); ++i) {
    RadiusCertificate cert;
    cert.input_id = i;
    cert.method = CertMethod::BC;
    cert.mode = ServiceMode::REaaS;
    try {
      const Vector v = service.feature(shape, test.inputs[i]);
      const BcCertificate bc = bc_feature_radius(classifier, v, precision);
      cert.predicted = bc.label;
      cert.feature_radius = bc.feature_radius;
      if (bc.feature_radius > 0.0) {
        cert.input_radius =
            service.f2i(shape, test.inputs[i], bc.feature_radius);
      } else {
        cert.input_radius = 0.0;  // nothing to convert
      }
      cert.correct = cert.predicted == test.labels[i];
    } catch (const TransportError&) {
      cert.failed = true;
    }
    report.certificates.push_back(std::move(cert));
  }
  report.ledger = service.ledger();
  finalize_report(report, curve_points);
  return report;
}

RobustnessReport certify_sc_reaas(ServiceHandle& service,
                                  const ImageShape& shape,
                                  const LabeledDataset& test,
                                  const AffineNetwork& classifier,
                                  const SmoothingConfig& cfg,
                                  int curve_points) {
  test.validate();
  const Predictor predict = argmax_predictor(classifier);
  RobustnessReport report;
  report.input_dim = shape.dim();
  for (std::size_t i = 0; i < test.size(); ++i) {
    RadiusCertificate cert;
    cert.input_id = i;
    cert.method = CertMethod::SC;
    cert.mode = ServiceMode::REaaS;
    cert.alpha = cfg.alpha;
    try {
      const Vector v = service.feature(shape, test.inputs[i]);
      SmoothingConfig per_input = cfg;
      per_input.seed = per_input_seed(cfg.seed, i);
      const SmoothingEvidence ev = certify_smoothed(predict, v, per_input);
      cert.predicted = ev.predicted;
      if (ev.radius) {
        cert.feature_radius = *ev.radius;
        cert.input_radius = service.f2i(shape, test.inputs[i], *ev.radius);
      } else {
        cert.abstained = true;  // no F2IPerturb call for abstentions
      }
      cert.correct = !cert.abstained && cert.predicted == test.labels[i];
    } catch (const TransportError&) {
      cert.failed = true;
    }
    report.certificates.push_back(std::move(cert));
  }
  report.ledger = service.ledger();
  finalize_report(report, curve_points);
  return report;
}

RobustnessReport certify_sc_seaas(ServiceHandle& service,
                                  const ImageShape& shape,
                                  const LabeledDataset& test,
                                  const AffineNetwork& classifier,
                                  const SmoothingConfig& cfg,
                                  int curve_points) {
  test.validate();
  const Predictor local = argmax_predictor(classifier);
  RobustnessReport report;
  report.input_dim = shape.dim();
  for (std::size_t i = 0; i < test.size(); ++i) {
    RadiusCertificate cert;
    cert.input_id = i;
    cert.method = CertMethod::SC;
    cert.mode = ServiceMode::SEaaS;
    cert.alpha = cfg.alpha;
    try {
      // The composed predictor costs one Feature call per noisy image.
      const Predictor composed = [&](const Vector& noisy_image) {
        return local(service.feature(shape, noisy_image));
      };
      SmoothingConfig per_input = cfg;
      per_input.seed = per_input_seed(cfg.seed, i);
      const SmoothingEvidence ev =
          certify_smoothed(composed, test.inputs[i], per_input);
      cert.predicted = ev.predicted;
      if (ev.radius) {
        cert.input_radius = *ev.radius;
      } else {
        cert.abstained = true;
      }
      cert.correct = !cert.abstained && cert.predicted == test.labels[i];
    } catch (const TransportError&) {
      cert.failed = true;
    }
    report.certificates.push_back(std::move(cert));
  }
  report.ledger = service.ledger();
  finalize_report(report, curve_points);
  return report;
}

}  // namespace reaas
