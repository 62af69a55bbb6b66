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

#ifndef REAAS_METRICS_HPP
#define REAAS_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace reaas {

enum class CertMethod { BC, SC };
enum class ServiceMode { REaaS, SEaaS };

struct RadiusCertificate {
  std::size_t input_id = 0;
  int predicted = -1;
  CertMethod method = CertMethod::BC;
  ServiceMode mode = ServiceMode::REaaS;
  std::optional<double> feature_radius;  // REaaS only
  std::optional<double> input_radius;
  std::optional<double> alpha;  // SC only
  bool abstained = false;
  bool failed = false;  // transport failure after retry budget
  bool correct = false;
};

struct LedgerSnapshot {
  std::int64_t feature_calls = 0;
  std::int64_t f2i_calls = 0;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> per_client;
};

struct RobustnessReport {
  std::vector<RadiusCertificate> certificates;
  double acr = 0.0;
  std::vector<std::pair<double, double>> curve;  // (perturbation size, CA)
  LedgerSnapshot ledger;
  std::int64_t input_dim = 0;
};

/// Sum of certified radii of correctly classified, non-abstaining inputs
/// divided by the total number of test inputs; abstentions and
/// misclassifications contribute 0, which makes the value the area under the
/// certified-accuracy curve.
double average_certified_radius(const std::vector<RadiusCertificate>& certs);

/// Certified accuracy at each grid point: fraction of all inputs that are
/// correct, non-abstaining, and have radius >= the perturbation size. Grid is
/// `points` evenly spaced sizes from 0 to the largest observed radius.
std::vector<std::pair<double, double>> certified_accuracy_curve(
    const std::vector<RadiusCertificate>& certs, int points = 100);

struct LpRadii {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// l2 radius R converts to l1 radius R and linf radius R / sqrt(dim).
LpRadii lp_radii(double l2_radius, std::int64_t dim);

/// Fills acr and curve from the certificates.
void finalize_report(RobustnessReport& report, int curve_points = 100);

double trapezoid_area(const std::vector<std::pair<double, double>>& curve);

void save_report(const RobustnessReport& report, const std::string& path);
RobustnessReport load_report(const std::string& path);

}  // namespace reaas

#endif  // REAAS_METRICS_HPP
