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

#include "reaas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace reaas {

namespace {

bool counts_at(const RadiusCertificate& c, double size) {
  return c.correct && !c.abstained && !c.failed && c.input_radius &&
         *c.input_radius >= size;
}

}  // namespace

double average_certified_radius(const std::vector<RadiusCertificate>& certs) {
  if (certs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& c : certs) {
    if (c.correct && !c.abstained && !c.failed && c.input_radius) {
      sum += *c.input_radius;
    }
  }
  return sum / static_cast<double>(certs.size());
}

std::vector<std::pair<double, double>> certified_accuracy_curve(
    const std::vector<RadiusCertificate>& certs, int points) {
  if (points < 2) throw std::invalid_argument("curve needs >= 2 grid points");
  double max_radius = 0.0;
  for (const auto& c : certs) {
    if (c.input_radius && !c.abstained && !c.failed) {
      max_radius = std::max(max_radius, *c.input_radius);
    }
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(static_cast<std::size_t>(points));
  const double total = static_cast<double>(std::max<std::size_t>(certs.size(), 1));
  for (int k = 0; k < points; ++k) {
    const double size = max_radius * k / (points - 1);
    std::size_t hits = 0;
    for (const auto& c : certs) {
      if (counts_at(c, size)) ++hits;
    }
    curve.emplace_back(size, static_cast<double>(hits) / total);
  }
  return curve;
}

LpRadii lp_radii(double l2_radius, std::int64_t dim) {
  if (dim < 1) throw std::invalid_argument("lp_radii: dim must be >= 1");
  return {l2_radius, l2_radius,
          l2_radius / std::sqrt(static_cast<double>(dim))};
}

void finalize_report(RobustnessReport& report, int curve_points) {
  report.acr = average_certified_radius(report.certificates);
  report.curve = certified_accuracy_curve(report.certificates, curve_points);
}

double trapezoid_area(const std::vector<std::pair<double, double>>& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    area += 0.5 * (curve[k].second + curve[k - 1].second) *
            (curve[k].first - curve[k - 1].first);
  }
  return area;
}

void save_report(const RobustnessReport& report, const std::string& path) {
  nlohmann::json j;
  j["acr"] = report.acr;
  j["input_dim"] = report.input_dim;
  j["ledger"]["feature_calls"] = report.ledger.feature_calls;
  j["ledger"]["f2i_calls"] = report.ledger.f2i_calls;
  for (const auto& [client, counts] : report.ledger.per_client) {
    j["ledger"]["clients"][client] = {{"feature_calls", counts.first},
                                      {"f2i_calls", counts.second}};
  }
  j["curve"] = nlohmann::json::array();
  for (const auto& [size, ca] : report.curve) {
    j["curve"].push_back({{"size", size}, {"certified_accuracy", ca}});
  }
  j["certificates"] = nlohmann::json::array();
  for (const auto& c : report.certificates) {
    nlohmann::json cj;
    cj["input_id"] = c.input_id;
    cj["predicted"] = c.predicted;
    cj["method"] = c.method == CertMethod::BC ? "bc" : "sc";
    cj["mode"] = c.mode == ServiceMode::REaaS ? "reaas" : "seaas";
    if (c.feature_radius) cj["feature_radius"] = *c.feature_radius;
    if (c.input_radius) cj["input_radius"] = *c.input_radius;
    if (c.alpha) cj["alpha"] = *c.alpha;
    cj["abstained"] = c.abstained;
    cj["failed"] = c.failed;
    cj["correct"] = c.correct;
    j["certificates"].push_back(std::move(cj));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

RobustnessReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  RobustnessReport report;
  report.acr = j.at("acr").get<double>();
  report.input_dim = j.at("input_dim").get<std::int64_t>();
  report.ledger.feature_calls = j.at("ledger").at("feature_calls").get<std::int64_t>();
  report.ledger.f2i_calls = j.at("ledger").at("f2i_calls").get<std::int64_t>();
  if (j.at("ledger").contains("clients")) {
    for (const auto& [client, counts] : j.at("ledger").at("clients").items()) {
      report.ledger.per_client[client] = {
          counts.at("feature_calls").get<std::int64_t>(),
          counts.at("f2i_calls").get<std::int64_t>()};
    }
  }
  for (const auto& p : j.at("curve")) {
    report.curve.emplace_back(p.at("size").get<double>(),
                              p.at("certified_accuracy").get<double>());
  }
  for (const auto& cj : j.at("certificates")) {
    RadiusCertificate c;
    c.input_id = cj.at("input_id").get<std::size_t>();
    c.predicted = cj.at("predicted").get<int>();
    c.method = cj.at("method").get<std::string>() == "bc" ? CertMethod::BC
                                                          : CertMethod::SC;
    c.mode = cj.at("mode").get<std::string>() == "reaas" ? ServiceMode::REaaS
                                                         : ServiceMode::SEaaS;
    if (cj.contains("feature_radius"))
      c.feature_radius = cj.at("feature_radius").get<double>();
    if (cj.contains("input_radius"))
      c.input_radius = cj.at("input_radius").get<double>();
    if (cj.contains("alpha")) c.alpha = cj.at("alpha").get<double>();
    c.abstained = cj.at("abstained").get<bool>();
    c.failed = cj.at("failed").get<bool>();
    c.correct = cj.at("correct").get<bool>();
    report.certificates.push_back(std::move(c));
  }
  return report;
}

}  // namespace reaas
