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

#include "jrsp/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jrsp/errors.hpp"

namespace jrsp {
namespace {

const QubitSelection kAliceQubits{1, 4, 7};
const QubitSelection kBobQubits{2, 5, 8};
const QubitSelection kChikaQubits{3, 6, 9};
const QubitSelection kSenderQubits{1, 4, 7, 2, 5, 8};

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream msg;
    msg << "decoherence rate must lie in [0, 1], got " << eta;
    throw ValidationError(msg.str());
  }
}

LinearOperator cube(const LinearOperator& e) { return tensor_product(tensor_product(e, e), e); }

}  // namespace

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "ad" || text == "amplitude_damping") return NoiseKind::kAmplitudeDamping;
  if (text == "pd" || text == "phase_damping") return NoiseKind::kPhaseDamping;
  if (text == "dp" || text == "depolarizing") return NoiseKind::kDepolarizing;
  throw ArgumentError("unknown noise model '" + std::string(text) + "' (expected ad, pd or dp)");
}

std::string_view short_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kAmplitudeDamping: return "ad";
    case NoiseKind::kPhaseDamping: return "pd";
    case NoiseKind::kDepolarizing: return "dp";
  }
  return "?";
}

std::string_view long_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kAmplitudeDamping: return "amplitude_damping";
    case NoiseKind::kPhaseDamping: return "phase_damping";
    case NoiseKind::kDepolarizing: return "depolarizing";
  }
  return "?";
}

NoiseModelSpec NoiseModelSpec::make(NoiseKind kind, double eta) {
  require_eta(eta);
  return NoiseModelSpec{kind, eta};
}

double KrausSet::completeness_residual() const { return jrsp::completeness_residual(terms); }

KrausSet kraus_set(NoiseKind kind, double eta) {
  require_eta(eta);
  KrausSet set{kind, eta, {}};
  Matrix m = Matrix::Zero(2, 2);
  switch (kind) {
    case NoiseKind::kAmplitudeDamping:
      m << 1, 0, 0, std::sqrt(1.0 - eta);
      set.terms.emplace_back(m);
      m << 0, std::sqrt(eta), 0, 0;
      set.terms.emplace_back(m);
      break;
    case NoiseKind::kPhaseDamping:
      set.terms.emplace_back(std::sqrt(1.0 - eta) * gates::identity().matrix());
      m << std::sqrt(eta), 0, 0, 0;
      set.terms.emplace_back(m);
      m << 0, 0, 0, std::sqrt(eta);
      set.terms.emplace_back(m);
      break;
    case NoiseKind::kDepolarizing: {
      const double w = std::sqrt(eta / 3.0);
      set.terms.emplace_back(std::sqrt(1.0 - eta) * gates::identity().matrix());
      set.terms.emplace_back(w * gates::pauli_x().matrix());
      set.terms.emplace_back(w * gates::pauli_y().matrix());
      set.terms.emplace_back(w * gates::pauli_z().matrix());
      break;
    }
  }
  return set;
}

KrausSet kraus_set(const NoiseModelSpec& model) { return kraus_set(model.kind, model.eta); }

DensityMatrix apply_trio_correlated(const DensityMatrix& rho, const KrausSet& set) {
  if (rho.num_qubits() != kResourceQubits) {
    throw ArgumentError("trio-correlated noise needs a 9-qubit register, got " +
                        std::to_string(rho.num_qubits()));
  }
  std::vector<LinearOperator> cubes;
  for (const LinearOperator& e : set.terms) {
    if (!e.matrix().isZero(0.0)) cubes.push_back(cube(e));
  }
  std::vector<KrausProduct> terms;
  terms.reserve(cubes.size() * cubes.size());
  for (const LinearOperator& a : cubes) {
    for (const LinearOperator& b : cubes) {
      terms.push_back({LocalFactor{a, kAliceQubits}, LocalFactor{b, kBobQubits}});
    }
  }
  return apply_kraus(rho, terms, KrausCheck::kNone);
}

double trio_trace_deficit(const KrausSet& set) {
  const DensityMatrix f = DensityMatrix::from_pure(build_resource().state);
  return 1.0 - apply_trio_correlated(f, set).trace();
}

PostSelectedOutput postselect_output(const DensityMatrix& rho_noisy, const TargetState& target, int n,
                                     const PauliString& correction) {
  if (rho_noisy.num_qubits() != kResourceQubits) throw ArgumentError("post-selection needs the 9-qubit state");
  if (n < 1 || n > kBasisSize) throw ArgumentError("Bob outcome must be in 1..8");
  const MeasurementBasisPair bases = build_bases(target);
  const PureState bra = tensor_product(bases.alice[0], bases.bob[n - 1]);
  const DensityMatrix reduced = project_out(rho_noisy, bra, kSenderQubits);
  const DensityMatrix corrected = conjugate(reduced, correction.to_operator(), QubitSelection{1, 2, 3});
  return PostSelectedOutput{n, DensityMatrix(kPartyQubits, PostSelectedOutput::kScale * corrected.matrix())};
}

namespace {
DensityMatrix noisy_resource(const NoiseModelSpec& model) {
  return apply_trio_correlated(DensityMatrix::from_pure(build_resource().state), kraus_set(model));
}
}  // namespace

double fidelity_numeric(const TargetState& target, const NoiseModelSpec& model, int n) {
  const DensityMatrix noisy = noisy_resource(model);
  const PostSelectedOutput out = postselect_output(noisy, target, n, correction_for_r1(n));
  return fidelity_pure_vs_mixed(target.state(), out.rho_out);
}

std::vector<double> fidelity_numeric_all_outcomes(const TargetState& target, const NoiseModelSpec& model) {
  const DensityMatrix noisy = noisy_resource(model);
  const PureState omega = target.state();
  std::vector<double> out;
  out.reserve(kBasisSize);
  for (int n = 1; n <= kBasisSize; ++n) {
    out.push_back(fidelity_pure_vs_mixed(omega, postselect_output(noisy, target, n, correction_for_r1(n)).rho_out));
  }
  return out;
}

double fidelity_analytic_printed(const TargetState& target, NoiseKind kind, double eta) {
  require_eta(eta);
  const Coefficients& a = target.alphas();
  auto sq = [](double x) { return x * x; };
  const double keep = 1.0 - eta;
  const double keep3 = keep * keep * keep;
  const double eta3 = eta * eta * eta;
  const double eta6 = eta3 * eta3;
  switch (kind) {
    case NoiseKind::kAmplitudeDamping: {
      const double bracket = sq(a[0]) + keep * (sq(a[1]) + sq(a[2]) + sq(a[4])) +
                             keep * keep * (sq(a[3]) + sq(a[5]) + sq(a[6])) + keep3 * sq(a[7]);
      return sq(bracket) + sq(sq(a[7])) * keep3 * eta3 + sq(a[7]) * sq(a[0]) * keep3 * eta3 +
             sq(a[0]) * sq(a[7]) * eta6;
    }
    case NoiseKind::kPhaseDamping:
      return keep3 * keep3 + (sq(sq(a[0])) + sq(sq(a[7]))) * (2.0 * eta3 * keep3 + eta6);
    case NoiseKind::kDepolarizing: {
      const double third = eta / 3.0;
      return keep3 * keep3 + 2.0 * keep3 * third * third * third + eta6 / 243.0;
    }
  }
  return 0.0;
}

std::vector<double> eta_grid(double start, double end, double step) {
  if (!(step > 0.0)) throw ValidationError("eta step must be positive");
  if (start > end) throw ValidationError("eta start must not exceed eta end");
  require_eta(start);
  require_eta(end);
  std::vector<double> grid;
  const double span = (end - start) / step;
  const double rounded = std::round(span);
  if (std::abs(span - rounded) <= 1e-9) {
    const auto count = static_cast<long>(rounded);
    for (long i = 0; i <= count; ++i) {
      grid.push_back(count == 0 ? start : start + (end - start) * static_cast<double>(i) / static_cast<double>(count));
    }
  } else {
    for (long i = 0;; ++i) {
      const double v = start + static_cast<double>(i) * step;
      if (v > end) break;
      grid.push_back(v);
    }
  }
  return grid;
}

FidelityReport compare(const TargetState& target, NoiseKind kind, const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("empty eta grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_eta(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("eta grid must be strictly increasing");
  }
  FidelityReport report;
  report.kind = kind;
  report.points.reserve(grid.size());
  for (double eta : grid) {
    FidelityPoint p;
    p.eta = eta;
    p.f_numeric = fidelity_numeric(target, NoiseModelSpec::make(kind, eta));
    p.f_analytic = fidelity_analytic_printed(target, kind, eta);
    p.abs_err = std::abs(p.f_numeric - p.f_analytic);
    report.max_abs_err = std::max(report.max_abs_err, p.abs_err);
    if (p.abs_err > kAgreementTol) report.flagged_etas.push_back(eta);
    report.points.push_back(p);
  }
  for (std::size_t i = 1; i + 1 < report.points.size(); ++i) {
    report.mid_grid_max_deviation = std::max(report.mid_grid_max_deviation, report.points[i].abs_err);
  }
  report.endpoints_match = report.first().abs_err <= kAgreementTol && report.last().abs_err <= kAgreementTol;
  report.within_tolerance = report.flagged_etas.empty();
  return report;
}

OrderingCheck depolarizing_below_phase_damping(const TargetState& target, const std::vector<double>& grid,
                                               double lo, double hi) {
  OrderingCheck check{lo, hi, true, {}};
  for (double eta : grid) {
    if (eta < lo - 1e-12 || eta > hi + 1e-12) continue;
    const double dp = fidelity_analytic_printed(target, NoiseKind::kDepolarizing, eta);
    const double pd = fidelity_analytic_printed(target, NoiseKind::kPhaseDamping, eta);
    if (dp > pd) {
      check.holds = false;
      check.violations.push_back(eta);
    }
  }
  return check;
}

}  // namespace jrsp
