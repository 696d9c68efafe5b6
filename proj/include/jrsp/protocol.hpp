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

// Noiseless joint remote preparation of a three-qubit state over three GHZ
// triples. Alice knows the amplitudes, Bob the phases, Chika receives.
//
// Register layout (labels 1..9): GHZ triples occupy (1,2,3), (4,5,6),
// (7,8,9). Alice holds (1,4,7), Bob (2,5,8), Chika (3,6,9). Within each party
// the 3-bit basis index k = 0..7 reads its qubits in that listed order.

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jrsp/tensor.hpp"

namespace jrsp {

inline constexpr int kPartyQubits = 3;
inline constexpr int kBasisSize = 8;
inline constexpr int kResourceQubits = 9;
inline constexpr int kOutcomeCount = kBasisSize * kBasisSize;
inline constexpr double kCorrectionTol = 1e-9;

using Coefficients = std::array<double, kBasisSize>;

enum class Normalization { kRequired, kAllowUnnormalized };

// |Omega> = sum_k alpha_k e^{i phi_k} |k>.
class TargetState {
 public:
  // Throws ValidationError when the amplitudes are non-finite, a phase leaves
  // [0, 2pi], or (kRequired) sum alpha^2 misses 1 by more than kExactTol.
  static TargetState make(const Coefficients& alphas, const Coefficients& phis,
                          Normalization normalization = Normalization::kRequired);
  static TargetState equal_amplitude(const Coefficients& phis = {});
  // |N(0,1)| amplitudes normalised; phases uniform on [0, 2pi).
  static TargetState random(std::mt19937_64& rng);

  const Coefficients& alphas() const { return alphas_; }
  const Coefficients& phis() const { return phis_; }
  Normalization normalization() const { return normalization_; }
  // |sum alpha^2 - 1|
  double norm_residual() const;

  PureState state() const;

 private:
  TargetState(const Coefficients& alphas, const Coefficients& phis, Normalization normalization)
      : alphas_(alphas), phis_(phis), normalization_(normalization) {}

  Coefficients alphas_;
  Coefficients phis_;
  Normalization normalization_;
};

struct EntangledResource {
  PureState state;
  QubitSelection alice{1, 4, 7};
  QubitSelection bob{2, 5, 8};
  QubitSelection chika{3, 6, 9};
};

// (1/(2 sqrt 2)) (|000>+|111>)^{(x)3} on labels 1..9.
EntangledResource build_resource();

// Row r of Alice's basis: coefficient on ket k is signs[k] * alpha[perm[k]].
struct SignedPermutationRow {
  int index = 0;                      // 1..8
  std::array<int, kBasisSize> perm{};  // 0-based amplitude index per ket
  std::array<int, kBasisSize> signs{};
};

class SignedPermutationTable {
 public:
  static SignedPermutationTable canonical();

  const SignedPermutationRow& row(int r) const;
  // Copy with the sign of ket `ket` (0-based) in row r negated. Used by the
  // mutation checks that exercise expansion_verify as a detector.
  SignedPermutationTable with_flipped_sign(int r, int ket) const;
  Vector realize(int r, const Coefficients& alphas) const;

 private:
  explicit SignedPermutationTable(std::array<SignedPermutationRow, kBasisSize> rows);
  std::array<SignedPermutationRow, kBasisSize> rows_;
};

// The +-1 matrix multiplying Bob's phase vectors, rows n = 1..8.
const std::array<std::array<int, kBasisSize>, kBasisSize>& bob_sign_matrix();

struct MeasurementBasisPair {
  TargetState target;
  std::vector<PureState> alice;  // alice[r-1]
  std::vector<PureState> bob;    // bob[n-1]
};

MeasurementBasisPair build_bases(const TargetState& target,
                                 const SignedPermutationTable& table = SignedPermutationTable::canonical());

enum class PauliSymbol : int { kI = 0, kX = 1, kZ = 2, kXZ = 3 };

// Correction on Chika's qubits (3, 6, 9), first symbol on qubit 3.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::array<PauliSymbol, kPartyQubits> symbols) : symbols_(symbols) {}

  // Bit 2 of the mask is qubit 3, bit 0 is qubit 9; set bits become Z.
  static PauliString from_z_mask(unsigned mask);
  // Accepts "Z⊗Z⊗I", "Z*Z*I", "Z,Z,I" or "ZZI"; XZ must be separated.
  static PauliString parse(const std::string& text);
  // All 64 strings in lexicographic (I < X < Z < XZ) order.
  static std::vector<PauliString> all();

  const std::array<PauliSymbol, kPartyQubits>& symbols() const { return symbols_; }
  bool is_z_only() const;
  LinearOperator to_operator() const;
  std::string to_string() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::array<PauliSymbol, kPartyQubits> symbols_{};
};

struct OutcomeRecord {
  int r = 0;
  int n = 0;
  double probability = 0.0;
  PureState collapsed = PureState::basis(kPartyQubits, 0);
  std::optional<PauliString> correction;
  // |<Omega|U|collapsed>|^2 for the found correction; without one, the best
  // value over the whole search group.
  double recovery_fidelity = 0.0;
};

// All 64 (r, n) outcomes in r-major, n-minor order.
std::vector<OutcomeRecord> joint_measure(const EntangledResource& resource, const MeasurementBasisPair& bases);

// max |sum_{r,n} |rho_r>|s_n>|c_rn> - |F>| after reordering to labels 1..9.
double expansion_verify(const EntangledResource& resource, const MeasurementBasisPair& bases);

// Z mask whose diagonal reproduces Bob's sign row n.
PauliString correction_for_r1(int n);

struct SpecialCase {
  int r = 0;
  std::vector<std::pair<int, int>> constraints;  // 1-based alpha index pairs
  PauliString correction;
};

// Special-case equalities and correction for Alice outcome r in 2..8.
SpecialCase special_case(int r);
std::vector<std::pair<int, int>> special_case_constraints(int r);
// Symmetrises each constrained pair (root mean square, keeps the norm).
std::pair<TargetState, PauliString> apply_special_case(int r, const TargetState& target);
// Throws ValidationError naming the worst pair when target breaks the r-constraints.
void check_special_case(int r, const TargetState& target);

// Exhaustive search over the 64 strings; first match in lexicographic order.
std::optional<PauliString> find_correction(const PureState& collapsed, const PureState& target);

struct SuccessMode {
  enum class Kind { kGeneric, kTable1, kEqualAmplitude, kZeroPhase };
  Kind kind = Kind::kGeneric;
  int r = 0;  // only for kTable1

  static SuccessMode generic() { return {Kind::kGeneric, 0}; }
  static SuccessMode table1(int r) { return {Kind::kTable1, r}; }
  static SuccessMode equal_amplitude() { return {Kind::kEqualAmplitude, 0}; }
  static SuccessMode zero_phase() { return {Kind::kZeroPhase, 0}; }
};

// Probability-weighted fraction of outcomes with a perfect correction.
double success_probability(const TargetState& target, SuccessMode mode);
double success_probability(const std::vector<OutcomeRecord>& records);

// Two readings of the r = 2 equalities: a5 = a6 = a7 with a8 free, and the
// pairing a5 = a6, a7 = a8. Each is exercised on a target satisfying only that
// reading; reports the outcome (2,1) recovery fidelity under I(x)I(x)Z.
struct ReadingCheck {
  double chained_reading_fidelity = 0.0;
  double paired_reading_fidelity = 0.0;
};
ReadingCheck check_r2_readings(std::mt19937_64& rng);

}  // namespace jrsp
