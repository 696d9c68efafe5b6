// Copyright 2026 The jrsp Authors
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

#pragma once

// Data products behind the command-line tool: run configuration, sweep rows,
// the fig2 surface and their CSV / JSON renderings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jrsp/noise.hpp"
#include "jrsp/protocol.hpp"

namespace jrsp {

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_output_format(const std::string& text);

struct RunConfig {
  std::optional<Coefficients> alphas;
  std::optional<Coefficients> phis;
  std::optional<NoiseKind> model;
  double eta_start = 0.0;
  double eta_end = 1.0;
  double eta_step = 0.05;
  bool allow_unnormalized = false;
  std::string output_path;  // empty: stdout
  OutputFormat output_format = OutputFormat::kCsv;
  std::optional<std::uint64_t> seed;
  bool random_target = false;
  std::optional<int> table1_r;

  // Field names mirror the members above. Throws ValidationError on unknown
  // keys or wrongly typed values.
  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig load(const std::string& path);

  // step > 0, start <= end, eta range.
  void validate() const;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

// Flag value if set, else config, else JRSP_SEED, else 42.
std::uint64_t resolve_seed(const RunConfig& config);

// Explicit alphas win, then a seeded random target, then equal amplitudes;
// table1_r (when set) constrains the result.
TargetState resolve_target(const RunConfig& config);

// printf("%.12g")
std::string format_real(double value);

struct SweepRow {
  std::string model;
  double eta = 0.0;
  double f_analytic = 0.0;
  double f_numeric = 0.0;
  double abs_err = 0.0;
};

std::vector<SweepRow> sweep(const TargetState& target, NoiseKind kind, const std::vector<double>& grid);

inline constexpr const char* kSweepCsvHeader = "model,eta,f_analytic,f_numeric,abs_err";

// abs_err is recomputed from the rendered f_analytic / f_numeric so that the
// emitted columns satisfy abs_err = |f_analytic - f_numeric| as written.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, const TargetState& target);

struct SurfaceRow {
  double alpha1 = 0.0;
  double eta = 0.0;
  double f_analytic = 0.0;
};

// alpha1 sweeps the grid with alpha2..alpha8 = 1/(2 sqrt 2) (unnormalized),
// phases zero; alpha1-major order. Throws ValidationError for depolarizing.
std::vector<SurfaceRow> fig2_surface(NoiseKind kind, const std::vector<double>& alpha_grid,
                                     const std::vector<double>& eta_grid);
// The equal-amplitude column (alpha1 = 1/(2 sqrt 2)) at eta = 0 and eta = 1.
std::vector<SurfaceRow> fig2_anchors(NoiseKind kind);

inline constexpr const char* kSurfaceCsvHeader = "alpha1,eta,f_analytic";
std::string surface_to_csv(const std::vector<SurfaceRow>& rows);
nlohmann::json surface_to_json(NoiseKind kind, const std::vector<SurfaceRow>& rows,
                               const std::vector<SurfaceRow>& anchors);

nlohmann::json target_to_json(const TargetState& target);
nlohmann::json outcomes_to_json(const std::vector<OutcomeRecord>& records, const TargetState& target);
nlohmann::json report_to_json(const FidelityReport& report);

}  // namespace jrsp
