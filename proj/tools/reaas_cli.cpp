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

// Client-side workflows:
//
//   reaas gen-data         seeded synthetic dataset generator
//   reaas pretrain         spectral-norm-regularized encoder pre-training
//   reaas train-downstream train a classifier on served features
//   reaas certify          BC/SC certification (REaaS or SEaaS mode)
//   reaas report           render ACR / curve / ledger from a report file

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "reaas/client.hpp"
#include "reaas/spectral.hpp"

namespace {

using namespace reaas;

struct ServerOpts {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string client_id = "anonymous";
};

void add_server_opts(CLI::App* cmd, ServerOpts& opts) {
  cmd->add_option("--host", opts.host, "Service host");
  cmd->add_option("--port", opts.port, "Service port")->required();
  cmd->add_option("--client-id", opts.client_id, "Ledger client id");
}

void add_shape_opts(CLI::App* cmd, ImageShape& shape) {
  cmd->add_option("--height", shape.h, "Image height")->required();
  cmd->add_option("--width", shape.w, "Image width")->required();
  cmd->add_option("--channels", shape.channels, "Image channels");
}

int run_gen_data(std::size_t per_class, int classes, int h, int w, int channels,
                 Eigen::Index dim, double noise, std::uint64_t seed,
                 const std::string& out) {
  const LabeledDataset data =
      h > 0 ? make_image_dataset(per_class, classes, h, w, channels, noise, seed)
            : make_blob_dataset(per_class, classes, dim, noise, seed);
  save_dataset(data, out);
  std::cout << "wrote " << data.size() << " inputs of dim " << data.dim()
            << " to " << out << "\n";
  return 0;
}

int run_report(const std::string& in, const std::string& out_dir) {
  const RobustnessReport report = load_report(in);
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  {
    std::ofstream acr(path("acr.txt"));
    acr << std::setprecision(10) << "acr " << report.acr << "\n"
        << "curve_area " << trapezoid_area(report.curve) << "\n";
  }
  {
    std::ofstream curve(path("curve.tsv"));
    curve << "perturbation_size\tcertified_accuracy\n" << std::setprecision(10);
    for (const auto& [size, ca] : report.curve) {
      curve << size << "\t" << ca << "\n";
    }
  }
  {
    std::ofstream ledger(path("ledger.txt"));
    ledger << "feature_calls " << report.ledger.feature_calls << "\n"
           << "f2i_calls " << report.ledger.f2i_calls << "\n";
    for (const auto& [client, counts] : report.ledger.per_client) {
      ledger << "client " << client << " feature_calls " << counts.first
             << " f2i_calls " << counts.second << "\n";
    }
  }
  {
    std::ofstream lp(path("lp_radii.tsv"));
    lp << "input_id\tl1\tl2\tlinf\n" << std::setprecision(10);
    for (const auto& c : report.certificates) {
      if (!c.input_radius || c.abstained || c.failed) continue;
      const LpRadii r = lp_radii(*c.input_radius, report.input_dim);
      lp << c.input_id << "\t" << r.l1 << "\t" << r.l2 << "\t" << r.linf
         << "\n";
    }
  }
  std::cout << "acr " << report.acr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"REaaS client toolkit"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  std::size_t per_class = 100;
  int classes = 2, g_h = 0, g_w = 0, g_channels = 1;
  Eigen::Index g_dim = 16;
  double g_noise = 0.1;
  std::uint64_t seed = 0;
  std::string out_path = "data.bin";
  gen->add_option("--per-class", per_class, "Samples per class");
  gen->add_option("--classes", classes, "Number of classes");
  gen->add_option("--height", g_h, "Image height (0 = flat blob data)");
  gen->add_option("--width", g_w, "Image width");
  gen->add_option("--channels", g_channels, "Image channels");
  gen->add_option("--dim", g_dim, "Blob dimension (when height = 0)");
  gen->add_option("--noise", g_noise, "Sample spread");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", out_path, "Output file")->required();

  // pretrain
  auto* pre = app.add_subcommand(
      "pretrain", "Pre-train an encoder with spectral-norm regularization");
  std::string pre_data, pre_out = "encoder.bin";
  std::vector<Eigen::Index> pre_hidden = {64, 32};
  Eigen::Index feature_dim = 16;
  SpectralConfig spectral;
  int pre_epochs = 25, pre_batch = 512;
  double pre_lr = 0.06;
  pre->add_option("--data", pre_data, "Training dataset")->required();
  pre->add_option("--hidden", pre_hidden, "Hidden layer widths");
  pre->add_option("--feature-dim", feature_dim, "Encoder output dimension");
  pre->add_option("--lambda", spectral.lambda, "Regularization weight");
  pre->add_option("--power-iters", spectral.power_iters,
                  "Power iterations per mini-batch");
  pre->add_option("--epochs", pre_epochs, "Training epochs");
  pre->add_option("--lr", pre_lr, "Learning rate");
  pre->add_option("--batch", pre_batch, "Batch size");
  pre->add_option("--seed", seed, "RNG seed");
  pre->add_option("--out", pre_out, "Output model file");
  bool pre_text = false;
  pre->add_flag("--text", pre_text, "Also write a text export next to --out");

  // train-downstream
  auto* train = app.add_subcommand("train-downstream",
                                   "Train a classifier on served features");
  ServerOpts train_server;
  ImageShape train_shape;
  std::string train_data, train_out = "classifier.bin", train_method = "bc";
  std::string train_mode = "reaas";
  DownstreamConfig down;
  double train_sigma = 0.5;
  add_server_opts(train, train_server);
  add_shape_opts(train, train_shape);
  train->add_option("--data", train_data, "Training dataset")->required();
  train->add_option("--method", train_method, "bc or sc")
      ->check(CLI::IsMember({"bc", "sc"}));
  train->add_option("--mode", train_mode, "reaas or seaas (sc only)")
      ->check(CLI::IsMember({"reaas", "seaas"}));
  train->add_option("--sigma", train_sigma, "SC training noise sigma");
  train->add_option("--hidden", down.hidden, "Hidden layer widths");
  train->add_option("--epochs", down.epochs, "Training epochs");
  train->add_option("--lr", down.lr, "Learning rate");
  train->add_option("--batch", down.batch, "Batch size");
  train->add_option("--seed", seed, "RNG seed");
  train->add_option("--out", train_out, "Output classifier file");

  // certify
  auto* certify = app.add_subcommand("certify", "Certify a test set");
  ServerOpts cert_server;
  ImageShape cert_shape;
  std::string cert_data, cert_classifier, cert_method = "bc";
  std::string cert_mode = "reaas", cert_out = "report.json";
  SmoothingConfig smoothing;
  std::vector<double> sigmas;
  double precision = 0.001;
  int curve_points = 100;
  add_server_opts(certify, cert_server);
  add_shape_opts(certify, cert_shape);
  certify->add_option("--data", cert_data, "Test dataset")->required();
  certify->add_option("--classifier", cert_classifier, "Classifier model")
      ->required();
  certify->add_option("--method", cert_method, "bc or sc")
      ->check(CLI::IsMember({"bc", "sc"}));
  certify->add_option("--mode", cert_mode, "reaas or seaas")
      ->check(CLI::IsMember({"reaas", "seaas"}));
  certify->add_option("--n", smoothing.n_samples, "SC noise samples");
  certify->add_option("--sigma", sigmas,
                      "SC noise sigma; repeat to sweep and keep the best ACR");
  certify->add_option("--alpha", smoothing.alpha, "SC error probability");
  certify->add_option("--precision", precision, "BC radius search precision");
  certify->add_option("--curve-points", curve_points, "Curve grid size");
  certify->add_option("--seed", seed, "RNG seed");
  certify->add_option("--out", cert_out, "Output report file");

  // report
  auto* rep = app.add_subcommand("report", "Render a certification report");
  std::string rep_in, rep_out = "report";
  rep->add_option("--in", rep_in, "Report file from `certify`")->required();
  rep->add_option("--out-dir", rep_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen_data(per_class, classes, g_h, g_w, g_channels, g_dim,
                          g_noise, seed, out_path);
    }
    if (pre->parsed()) {
      const LabeledDataset data = load_dataset(pre_data);
      std::vector<Eigen::Index> dims{data.dim()};
      dims.insert(dims.end(), pre_hidden.begin(), pre_hidden.end());
      dims.push_back(feature_dim);
      dims.push_back(data.num_classes);
      Rng rng(seed);
      AffineNetwork encoder =
          pretrain_encoder(make_network(dims, rng), data, spectral, pre_epochs,
                           pre_lr, pre_batch, seed);
      save_model(encoder, pre_out);
      if (pre_text) save_model_text(encoder, pre_out + ".txt");
      const SpectralProfile profile = spectral_profile(encoder, 100, true, seed);
      std::cout << "encoder saved to " << pre_out
                << " (spectral product " << profile.product << ")\n";
      return 0;
    }
    if (train->parsed()) {
      const LabeledDataset data = load_dataset(train_data);
      HttpServiceClient service(train_server.host, train_server.port,
                                train_server.client_id);
      down.seed = seed;
      AffineNetwork classifier = [&] {
        if (train_method == "sc" && train_mode == "seaas") {
          return train_downstream_seaas(service, train_shape, data, down,
                                        train_sigma);
        }
        if (train_method == "sc") down.noise_sigma = train_sigma;
        return train_downstream(service, train_shape, data, down);
      }();
      save_model(classifier, train_out);
      std::cout << "classifier saved to " << train_out << "\n";
      return 0;
    }
    if (certify->parsed()) {
      const LabeledDataset data = load_dataset(cert_data);
      const AffineNetwork classifier = load_model(cert_classifier);
      HttpServiceClient service(cert_server.host, cert_server.port,
                                cert_server.client_id);
      smoothing.seed = seed;
      RobustnessReport best;
      bool have = false;
      if (cert_method == "bc") {
        best = certify_bc(service, cert_shape, data, classifier, precision,
                          curve_points);
      } else {
        if (sigmas.empty()) sigmas.push_back(smoothing.sigma);
        for (double sigma : sigmas) {
          SmoothingConfig cfg = smoothing;
          cfg.sigma = sigma;
          RobustnessReport r =
              cert_mode == "seaas"
                  ? certify_sc_seaas(service, cert_shape, data, classifier, cfg,
                                     curve_points)
                  : certify_sc_reaas(service, cert_shape, data, classifier, cfg,
                                     curve_points);
          std::cout << "sigma " << sigma << " acr " << r.acr << "\n";
          if (!have || r.acr > best.acr) {
            best = std::move(r);
            have = true;
          }
        }
      }
      save_report(best, cert_out);
      std::cout << "acr " << best.acr << ", report saved to " << cert_out
                << "\n";
      return 0;
    }
    if (rep->parsed()) return run_report(rep_in, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
