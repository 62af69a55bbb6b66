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

// Serves one encoder over the Feature / F2IPerturb wire protocol.
//
//   reaas-server --config server.json
//   reaas-server --model encoder.bin --port 8080 --height 8 --width 8
//
// Environment overrides: REAAS_MODEL_PATH, REAAS_LISTEN_ADDRESS.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reaas/service.hpp"

namespace {

reaas::FeatureService* g_service = nullptr;

void handle_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"REaaS encoder service"};
  std::string config_path, model_path;
  reaas::ServiceConfig cfg;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--model", model_path, "Model file (REAAS1 format)");
  app.add_option("--listen", cfg.listen_address, "Listen address");
  app.add_option("--port", cfg.port, "Port (0 = ephemeral)");
  app.add_option("--height", cfg.expected_input.h, "Encoder input height");
  app.add_option("--width", cfg.expected_input.w, "Encoder input width");
  app.add_option("--channels", cfg.expected_input.channels, "Input channels");
  app.add_option("--rho-high", cfg.search.rho_high_init, "Search upper bracket");
  app.add_option("--beta", cfg.search.beta, "Binary-search precision");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Disable the request log");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open " + config_path);
      nlohmann::json j;
      in >> j;
      if (j.contains("model_path")) model_path = j["model_path"];
      if (j.contains("listen_address")) cfg.listen_address = j["listen_address"];
      if (j.contains("port")) cfg.port = j["port"];
      if (j.contains("expected_input")) {
        cfg.expected_input.h = j["expected_input"].value("h", 0);
        cfg.expected_input.w = j["expected_input"].value("w", 0);
        cfg.expected_input.channels = j["expected_input"].value("channels", 1);
      }
      if (j.contains("search")) {
        cfg.search.rho_low_init = j["search"].value("rho_low_init", 0.0);
        cfg.search.rho_high_init = j["search"].value("rho_high_init", 10.0);
        cfg.search.beta = j["search"].value("beta", 0.001);
      }
    }
    if (const char* env = std::getenv("REAAS_MODEL_PATH")) model_path = env;
    if (const char* env = std::getenv("REAAS_LISTEN_ADDRESS")) {
      cfg.listen_address = env;
    }
    if (model_path.empty()) {
      std::cerr << "error: no model given (--model, --config, or "
                   "REAAS_MODEL_PATH)\n";
      return 2;
    }
    cfg.model_path = model_path;

    reaas::FeatureService service(reaas::load_model(model_path), cfg);
    if (!quiet) service.set_log(&std::cerr);
    g_service = &service;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    const int port = service.start();
    std::cout << "listening on " << cfg.listen_address << ":" << port
              << std::endl;
    service.wait();  // returns after stop() from the signal handler
    g_service = nullptr;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
