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

// Kraus noise on the senders' qubits, post-selected output and fidelity.
//
// The channel shares one Kraus index across all three qubits of a sender:
//   rho -> sum_{i,j} (E_i^{(x)3})_A (E_j^{(x)3})_B rho (...)^dagger
// with Alice on (1,4,7), Bob on (2,5,8) and Chika's (3,6,9) noiseless.
// Mixed-index terms are absent, so for 0 < eta the map loses trace; see
// trio_trace_deficit().

#include <string>
#include <string_view>
#include <vector>

#include "jrsp/protocol.hpp"
#include "jrsp/tensor.hpp"

namespace jrsp {

enum class NoiseKind { kAmplitudeDamping, kPhaseDamping, kDepolarizing };

// "ad" / "pd" / "dp" (also the long snake_case names).
NoiseKind parse_noise_kind(std::string_view text);
std::string_view short_name(NoiseKind kind);
std::string_view long_name(NoiseKind kind);

struct NoiseModelSpec {
  NoiseKind kind = NoiseKind::kAmplitudeDamping;
  double eta = 0.0;

  // Throws ValidationError unless 0 <= eta <= 1.
  static NoiseModelSpec make(NoiseKind kind, double eta);
};

struct KrausSet {
  NoiseKind kind;
  double eta;
  std::vector<LinearOperator> terms;  // single-qubit, 2x2

  double completeness_residual() const;
};

// AD: {diag(1, sqrt(1-eta)), sqrt(eta)|0><1|}
// PD: {sqrt(1-eta) I, sqrt(eta)|0><0|, sqrt(eta)|1><1|}
// DP: {sqrt(1-eta) I, sqrt(eta/3) X, sqrt(eta/3) Y, sqrt(eta/3) Z}
KrausSet kraus_set(NoiseKind kind, double eta);
KrausSet kraus_set(const NoiseModelSpec& model);

// Requires a 9-qubit rho; throws ArgumentError otherwise.
DensityMatrix apply_trio_correlated(const DensityMatrix& rho, const KrausSet& set);

// 1 - trace of the correlated channel applied to |F><F|.
double trio_trace_deficit(const KrausSet& set);

struct PostSelectedOutput {
  static constexpr double kScale = 64.0;

  int n = 1;
  DensityMatrix rho_out;
};

// rho_out = 64 * Tr_{senders}[U0 rho U0^dagger], U0 projecting Alice onto her
// first basis vector, Bob onto vector n, then applying `correction` on
// Chika's qubits. The factor 64 undoes the 1/64 outcome weight so the
// noiseless output has unit trace.
PostSelectedOutput postselect_output(const DensityMatrix& rho_noisy, const TargetState& target, int n,
                                     const PauliString& correction);

// <Omega|rho_out|Omega> for Alice outcome 1, Bob outcome n, with the r = 1
// correction for n.
double fidelity_numeric(const TargetState& target, const NoiseModelSpec& model, int n = 1);
// Same quantity for n = 1..8 from one channel application.
std::vector<double> fidelity_numeric_all_outcomes(const TargetState& target, const NoiseModelSpec& model);

// Reference closed forms, one per channel, evaluated term by term. Unnormalized
// targets are accepted (alpha1 x eta surfaces).
double fidelity_analytic_printed(const TargetState& target, NoiseKind kind, double eta);

inline constexpr double kAgreementTol = 1e-9;

struct FidelityPoint {
  double eta = 0.0;
  double f_numeric = 0.0;
  double f_analytic = 0.0;
  double abs_err = 0.0;
};

struct FidelityReport {
  NoiseKind kind = NoiseKind::kAmplitudeDamping;
  std::vector<FidelityPoint> points;  // ascending eta
  double max_abs_err = 0.0;
  // Largest |numeric - analytic| strictly inside the grid.
  double mid_grid_max_deviation = 0.0;
  bool endpoints_match = false;  // both ends within kAgreementTol
  bool within_tolerance = false;  // every point within kAgreementTol
  std::vector<double> flagged_etas;  // points with abs_err > kAgreementTol

  const FidelityPoint& first() const { return points.front(); }
  const FidelityPoint& last() const { return points.back(); }
};

FidelityReport compare(const TargetState& target, NoiseKind kind, const std::vector<double>& eta_grid);

// start, start+step, ..., end (end included when the step divides the span
// within 1e-9). Throws ValidationError for step <= 0, start > end or values
// outside [0, 1].
std::vector<double> eta_grid(double start, double end, double step);

struct OrderingCheck {
  double lo = 0.55;
  double hi = 1.0;
  bool holds = true;
  std::vector<double> violations;  // grid etas in [lo, hi] with F_dp > F_pd
};

// Printed-formula comparison F_dp(eta) <= F_pd(eta) on grid points in [lo, hi].
OrderingCheck depolarizing_below_phase_damping(const TargetState& target, const std::vector<double>& grid,
                                               double lo = 0.55, double hi = 1.0);

}  // namespace jrsp
