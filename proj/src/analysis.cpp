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

#include "jrsp/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "jrsp/errors.hpp"

namespace jrsp {
namespace {

using nlohmann::json;

const double kEqualAlpha = 1.0 / (2.0 * std::numbers::sqrt2);

Coefficients coefficients_from_json(const json& value, const char* key) {
  if (!value.is_array() || value.size() != kBasisSize) {
    throw ValidationError(std::string("config field '") + key + "' must be an array of 8 numbers");
  }
  Coefficients out{};
  for (std::size_t i = 0; i < kBasisSize; ++i) {
    if (!value[i].is_number()) throw ValidationError(std::string("config field '") + key + "' must hold numbers");
    out[i] = value[i].get<double>();
  }
  return out;
}

double number_field(const json& value, const char* key) {
  if (!value.is_number()) throw ValidationError(std::string("config field '") + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw ValidationError("output format must be csv or json, got '" + text + "'");
}

RunConfig RunConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a single JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "alphas") {
      cfg.alphas = coefficients_from_json(value, "alphas");
    } else if (key == "phis") {
      cfg.phis = coefficients_from_json(value, "phis");
    } else if (key == "model") {
      if (value.is_null()) continue;
      if (!value.is_string()) throw ValidationError("config field 'model' must be a string");
      try {
        cfg.model = parse_noise_kind(value.get<std::string>());
      } catch (const ArgumentError& e) {
        throw ValidationError(e.what());
      }
    } else if (key == "eta_start") {
      cfg.eta_start = number_field(value, "eta_start");
    } else if (key == "eta_end") {
      cfg.eta_end = number_field(value, "eta_end");
    } else if (key == "eta_step") {
      cfg.eta_step = number_field(value, "eta_step");
    } else if (key == "allow_unnormalized") {
      if (!value.is_boolean()) throw ValidationError("config field 'allow_unnormalized' must be a boolean");
      cfg.allow_unnormalized = value.get<bool>();
    } else if (key == "output_path") {
      if (!value.is_string()) throw ValidationError("config field 'output_path' must be a string");
      cfg.output_path = value.get<std::string>();
    } else if (key == "output_format") {
      if (!value.is_string()) throw ValidationError("config field 'output_format' must be a string");
      cfg.output_format = parse_output_format(value.get<std::string>());
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ValidationError("config field 'seed' must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "random_target") {
      if (!value.is_boolean()) throw ValidationError("config field 'random_target' must be a boolean");
      cfg.random_target = value.get<bool>();
    } else if (key == "table1_r") {
      if (!value.is_number_integer()) throw ValidationError("config field 'table1_r' must be an integer");
      cfg.table1_r = value.get<int>();
    } else {
      throw ValidationError("unknown config field '" + key + "'");
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

void RunConfig::validate() const {
  if (!(eta_step > 0.0)) throw ValidationError("eta_step must be positive");
  if (eta_start > eta_end) throw ValidationError("eta_start must not exceed eta_end");
  if (eta_start < 0.0 || eta_end > 1.0) throw ValidationError("eta range must lie within [0, 1]");
  if (table1_r && (*table1_r < 2 || *table1_r > kBasisSize)) {
    throw ValidationError("table1 case must be in 2..8");
  }
}

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("JRSP_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ValidationError(std::string("JRSP_SEED is not an integer: '") + env + "'");
    return v;
  }
  return kDefaultSeed;
}

TargetState resolve_target(const RunConfig& config) {
  const Normalization norm =
      config.allow_unnormalized ? Normalization::kAllowUnnormalized : Normalization::kRequired;
  const Coefficients phis = config.phis.value_or(Coefficients{});
  TargetState target = TargetState::equal_amplitude();
  if (config.alphas) {
    target = TargetState::make(*config.alphas, phis, norm);
  } else if (config.random_target) {
    std::mt19937_64 rng(resolve_seed(config));
    target = TargetState::random(rng);
    if (config.phis) target = TargetState::make(target.alphas(), *config.phis);
  } else {
    target = TargetState::make(TargetState::equal_amplitude().alphas(), phis);
  }
  if (config.table1_r) target = apply_special_case(*config.table1_r, target).first;
  return target;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::vector<SweepRow> sweep(const TargetState& target, NoiseKind kind, const std::vector<double>& grid) {
  const FidelityReport report = compare(target, kind, grid);
  std::vector<SweepRow> rows;
  rows.reserve(report.points.size());
  for (const FidelityPoint& p : report.points) {
    rows.push_back(SweepRow{std::string(short_name(kind)), p.eta, p.f_analytic, p.f_numeric, p.abs_err});
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) {
    const std::string fa = format_real(row.f_analytic);
    const std::string fn = format_real(row.f_numeric);
    const double emitted_err = std::abs(std::strtod(fa.c_str(), nullptr) - std::strtod(fn.c_str(), nullptr));
    out += row.model + ',' + format_real(row.eta) + ',' + fa + ',' + fn + ',' + format_real(emitted_err) + '\n';
  }
  return out;
}

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, const TargetState& target) {
  json doc;
  doc["model"] = rows.empty() ? "" : rows.front().model;
  doc["target"] = target_to_json(target);
  doc["rows"] = json::array();
  for (const SweepRow& row : rows) {
    doc["rows"].push_back(
        {{"eta", row.eta}, {"f_analytic", row.f_analytic}, {"f_numeric", row.f_numeric}, {"abs_err", row.abs_err}});
  }
  return doc;
}

namespace {
TargetState fig2_target(double alpha1) {
  Coefficients alphas;
  alphas.fill(kEqualAlpha);
  alphas[0] = alpha1;
  return TargetState::make(alphas, Coefficients{}, Normalization::kAllowUnnormalized);
}

void require_fig2_model(NoiseKind kind) {
  if (kind == NoiseKind::kDepolarizing) {
    throw ValidationError("fig2 surfaces exist only for amplitude and phase damping");
  }
}
}  // namespace

std::vector<SurfaceRow> fig2_surface(NoiseKind kind, const std::vector<double>& alpha_grid,
                                     const std::vector<double>& eta_grid) {
  require_fig2_model(kind);
  std::vector<SurfaceRow> rows;
  rows.reserve(alpha_grid.size() * eta_grid.size());
  for (double a1 : alpha_grid) {
    const TargetState t = fig2_target(a1);
    for (double eta : eta_grid) rows.push_back(SurfaceRow{a1, eta, fidelity_analytic_printed(t, kind, eta)});
  }
  return rows;
}

std::vector<SurfaceRow> fig2_anchors(NoiseKind kind) {
  require_fig2_model(kind);
  const TargetState t = fig2_target(kEqualAlpha);
  return {SurfaceRow{kEqualAlpha, 0.0, fidelity_analytic_printed(t, kind, 0.0)},
          SurfaceRow{kEqualAlpha, 1.0, fidelity_analytic_printed(t, kind, 1.0)}};
}

std::string surface_to_csv(const std::vector<SurfaceRow>& rows) {
  std::string out = kSurfaceCsvHeader;
  out += '\n';
  for (const SurfaceRow& row : rows) {
    out += format_real(row.alpha1) + ',' + format_real(row.eta) + ',' + format_real(row.f_analytic) + '\n';
  }
  return out;
}

nlohmann::json surface_to_json(NoiseKind kind, const std::vector<SurfaceRow>& rows,
                               const std::vector<SurfaceRow>& anchors) {
  auto encode = [](const std::vector<SurfaceRow>& rs) {
    json arr = json::array();
    for (const SurfaceRow& r : rs) arr.push_back({{"alpha1", r.alpha1}, {"eta", r.eta}, {"f_analytic", r.f_analytic}});
    return arr;
  };
  return json{{"model", std::string(short_name(kind))},
              {"mode", "unnormalized_alpha1_surface"},
              {"rows", encode(rows)},
              {"anchors", encode(anchors)}};
}

nlohmann::json target_to_json(const TargetState& target) {
  return json{{"alphas", target.alphas()},
              {"phis", target.phis()},
              {"normalized", target.normalization() == Normalization::kRequired}};
}

nlohmann::json outcomes_to_json(const std::vector<OutcomeRecord>& records, const TargetState& target) {
  json doc;
  doc["target"] = target_to_json(target);
  doc["outcomes"] = json::array();
  for (const OutcomeRecord& rec : records) {
    json collapsed = json::array();
    for (Eigen::Index k = 0; k < rec.collapsed.dim(); ++k) {
      const Complex c = rec.collapsed.amplitudes()(k);
      collapsed.push_back({c.real(), c.imag()});
    }
    doc["outcomes"].push_back({{"r", rec.r},
                               {"n", rec.n},
                               {"probability", rec.probability},
                               {"correction", rec.correction ? json(rec.correction->to_string()) : json(nullptr)},
                               {"recovery_fidelity", rec.recovery_fidelity},
                               {"collapsed", collapsed}});
  }
  doc["success_probability"] = success_probability(records);
  return doc;
}

nlohmann::json report_to_json(const FidelityReport& report) {
  json points = json::array();
  for (const FidelityPoint& p : report.points) {
    points.push_back(
        {{"eta", p.eta}, {"f_numeric", p.f_numeric}, {"f_analytic_printed", p.f_analytic}, {"abs_err", p.abs_err}});
  }
  auto endpoint = [](const FidelityPoint& p) {
    return json{{"eta", p.eta}, {"f_numeric", p.f_numeric}, {"f_analytic_printed", p.f_analytic}, {"abs_err", p.abs_err}};
  };
  return json{{"model", std::string(short_name(report.kind))},
              {"points", points},
              {"max_abs_err", report.max_abs_err},
              {"mid_grid_max_deviation", report.mid_grid_max_deviation},
              {"endpoints", {endpoint(report.first()), endpoint(report.last())}},
              {"endpoints_match", report.endpoints_match},
              {"within_tolerance", report.within_tolerance},
              {"tolerance", kAgreementTol},
              {"flagged_etas", report.flagged_etas}};
}

}  // namespace jrsp
