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

#include "jrsp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jrsp/errors.hpp"

namespace jrsp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvTwoRootTwo = 1.0 / (2.0 * std::numbers::sqrt2);

// Alice's rows as they appear in the r-th block of the joint expansion with
// Bob outcome 1: amplitude index (1-based) and sign for kets |000>..|111>.
constexpr std::array<std::array<int, kBasisSize>, kBasisSize> kAliceAmplitudeIndex = {{
    {1, 2, 3, 4, 5, 6, 7, 8},
    {2, 1, 4, 3, 6, 5, 8, 7},
    {3, 4, 1, 2, 7, 8, 5, 6},
    {4, 3, 2, 1, 8, 7, 6, 5},
    {5, 6, 7, 8, 1, 2, 3, 4},
    {6, 5, 8, 7, 2, 1, 4, 3},
    {7, 8, 5, 6, 3, 4, 1, 2},
    {8, 7, 6, 5, 4, 3, 2, 1},
}};
constexpr std::array<std::array<int, kBasisSize>, kBasisSize> kAliceSigns = {{
    {+1, +1, +1, +1, +1, +1, +1, +1},
    {+1, -1, +1, -1, +1, -1, +1, -1},
    {+1, -1, -1, +1, -1, +1, +1, -1},
    {+1, +1, -1, -1, +1, +1, -1, -1},
    {+1, -1, +1, -1, -1, +1, -1, +1},
    {+1, +1, -1, -1, -1, -1, +1, +1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {+1, +1, +1, +1, -1, -1, -1, -1},
}};

constexpr std::array<std::array<int, kBasisSize>, kBasisSize> kBobSigns = {{
    {+1, +1, +1, +1, +1, +1, +1, +1},
    {+1, -1, +1, -1, +1, -1, +1, -1},
    {+1, -1, -1, +1, -1, +1, +1, -1},
    {+1, +1, -1, -1, +1, +1, -1, -1},
    {+1, -1, +1, -1, -1, +1, -1, +1},
    {+1, +1, -1, -1, -1, -1, +1, +1},
    {+1, -1, -1, +1, +1, -1, -1, +1},
    {+1, +1, +1, +1, -1, -1, -1, -1},
}};

// Chika's correction per Alice outcome r = 2..8 under the Table-1 equalities.
const std::array<const char*, kBasisSize> kTable1Correction = {
    "", "I*I*Z", "Z*Z*Z", "I*Z*I", "Z*I*Z", "Z*Z*I", "I*Z*Z", "Z*I*I",
};

void require_index(int v, const char* what) {
  if (v < 1 || v > kBasisSize) {
    throw ArgumentError(std::string(what) + " must be in 1..8, got " + std::to_string(v));
  }
}

int popcount3(unsigned v) { return static_cast<int>((v & 1U) + ((v >> 1) & 1U) + ((v >> 2) & 1U)); }

}  // namespace

// ---------------------------------------------------------------------------
// TargetState

TargetState TargetState::make(const Coefficients& alphas, const Coefficients& phis, Normalization normalization) {
  for (int k = 0; k < kBasisSize; ++k) {
    if (!std::isfinite(alphas[k])) throw ValidationError("alpha_" + std::to_string(k + 1) + " is not finite");
    if (!std::isfinite(phis[k]) || phis[k] < 0.0 || phis[k] > kTwoPi) {
      throw ValidationError("phi_" + std::to_string(k + 1) + " must lie in [0, 2pi]");
    }
  }
  TargetState t(alphas, phis, normalization);
  if (normalization == Normalization::kRequired && t.norm_residual() > kExactTol) {
    std::ostringstream msg;
    msg << "amplitudes are not normalized: |sum alpha^2 - 1| = " << t.norm_residual();
    throw ValidationError(msg.str());
  }
  return t;
}

TargetState TargetState::equal_amplitude(const Coefficients& phis) {
  Coefficients alphas;
  alphas.fill(kInvTwoRootTwo);
  return make(alphas, phis);
}

TargetState TargetState::random(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  Coefficients alphas;
  Coefficients phis;
  double sum = 0.0;
  for (double& a : alphas) {
    a = std::abs(normal(rng));
    sum += a * a;
  }
  const double norm = std::sqrt(sum);
  for (double& a : alphas) a /= norm;
  for (double& p : phis) p = phase(rng);
  return TargetState(alphas, phis, Normalization::kRequired);
}

double TargetState::norm_residual() const {
  double sum = 0.0;
  for (double a : alphas_) sum += a * a;
  return std::abs(sum - 1.0);
}

PureState TargetState::state() const {
  Vector v(kBasisSize);
  // alpha may be negative, so no std::polar here.
  for (int k = 0; k < kBasisSize; ++k) v(k) = alphas_[k] * Complex(std::cos(phis_[k]), std::sin(phis_[k]));
  return PureState(kPartyQubits, std::move(v));
}

// ---------------------------------------------------------------------------
// Resource

EntangledResource build_resource() {
  Vector ghz = Vector::Zero(kBasisSize);
  ghz(0) = 1.0;
  ghz(7) = 1.0;
  const PureState triple(kPartyQubits, ghz);
  PureState f = tensor_product(tensor_product(triple, triple), triple);
  return EntangledResource{PureState(kResourceQubits, f.amplitudes() * kInvTwoRootTwo)};
}

// ---------------------------------------------------------------------------
// Bases

SignedPermutationTable::SignedPermutationTable(std::array<SignedPermutationRow, kBasisSize> rows)
    : rows_(rows) {}

SignedPermutationTable SignedPermutationTable::canonical() {
  std::array<SignedPermutationRow, kBasisSize> rows;
  for (int r = 0; r < kBasisSize; ++r) {
    rows[r].index = r + 1;
    for (int k = 0; k < kBasisSize; ++k) {
      rows[r].perm[k] = kAliceAmplitudeIndex[r][k] - 1;
      rows[r].signs[k] = kAliceSigns[r][k];
    }
  }
  return SignedPermutationTable(rows);
}

const SignedPermutationRow& SignedPermutationTable::row(int r) const {
  require_index(r, "row index");
  return rows_[r - 1];
}

SignedPermutationTable SignedPermutationTable::with_flipped_sign(int r, int ket) const {
  require_index(r, "row index");
  if (ket < 0 || ket >= kBasisSize) throw ArgumentError("ket index must be in 0..7");
  SignedPermutationTable copy = *this;
  copy.rows_[r - 1].signs[ket] = -copy.rows_[r - 1].signs[ket];
  return copy;
}

Vector SignedPermutationTable::realize(int r, const Coefficients& alphas) const {
  const SignedPermutationRow& rw = row(r);
  Vector v(kBasisSize);
  for (int k = 0; k < kBasisSize; ++k) v(k) = rw.signs[k] * alphas[rw.perm[k]];
  return v;
}

const std::array<std::array<int, kBasisSize>, kBasisSize>& bob_sign_matrix() { return kBobSigns; }

MeasurementBasisPair build_bases(const TargetState& target, const SignedPermutationTable& table) {
  if (target.normalization() != Normalization::kRequired) {
    throw ValidationError("measurement bases need a normalized target");
  }
  MeasurementBasisPair out{target, {}, {}};
  out.alice.reserve(kBasisSize);
  out.bob.reserve(kBasisSize);
  for (int r = 1; r <= kBasisSize; ++r) out.alice.emplace_back(kPartyQubits, table.realize(r, target.alphas()));
  for (int n = 0; n < kBasisSize; ++n) {
    Vector v(kBasisSize);
    for (int k = 0; k < kBasisSize; ++k) {
      v(k) = kInvTwoRootTwo * kBobSigns[n][k] * std::polar(1.0, -target.phis()[k]);
    }
    out.bob.emplace_back(kPartyQubits, std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PauliString

PauliString PauliString::from_z_mask(unsigned mask) {
  std::array<PauliSymbol, kPartyQubits> s{};
  for (int q = 0; q < kPartyQubits; ++q) {
    s[q] = ((mask >> (kPartyQubits - 1 - q)) & 1U) ? PauliSymbol::kZ : PauliSymbol::kI;
  }
  return PauliString(s);
}

PauliString PauliString::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '*' || c == ',' || c == ' ' || c == 'x') {
      flush();
    } else if (text.compare(i, 3, "\xE2\x8A\x97") == 0) {  // U+2297
      flush();
      i += 2;
    } else {
      cur.push_back(c);
    }
  }
  flush();
  if (tokens.size() == 1 && tokens[0].size() == kPartyQubits) {
    const std::string compact = tokens[0];
    tokens = {std::string(1, compact[0]), std::string(1, compact[1]), std::string(1, compact[2])};
  }
  if (tokens.size() != kPartyQubits) throw ArgumentError("Pauli string needs 3 symbols: '" + text + "'");
  std::array<PauliSymbol, kPartyQubits> s{};
  for (int q = 0; q < kPartyQubits; ++q) {
    const std::string& t = tokens[q];
    if (t == "I") s[q] = PauliSymbol::kI;
    else if (t == "X") s[q] = PauliSymbol::kX;
    else if (t == "Z") s[q] = PauliSymbol::kZ;
    else if (t == "XZ") s[q] = PauliSymbol::kXZ;
    else throw ArgumentError("unknown Pauli symbol '" + t + "'");
  }
  return PauliString(s);
}

std::vector<PauliString> PauliString::all() {
  std::vector<PauliString> out;
  out.reserve(64);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        out.emplace_back(std::array<PauliSymbol, kPartyQubits>{
            static_cast<PauliSymbol>(a), static_cast<PauliSymbol>(b), static_cast<PauliSymbol>(c)});
      }
    }
  }
  return out;
}

bool PauliString::is_z_only() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](PauliSymbol s) { return s == PauliSymbol::kI || s == PauliSymbol::kZ; });
}

LinearOperator PauliString::to_operator() const {
  auto single = [](PauliSymbol s) {
    switch (s) {
      case PauliSymbol::kI: return gates::identity();
      case PauliSymbol::kX: return gates::pauli_x();
      case PauliSymbol::kZ: return gates::pauli_z();
      case PauliSymbol::kXZ: return gates::pauli_x() * gates::pauli_z();
    }
    return gates::identity();
  };
  return tensor_product(tensor_product(single(symbols_[0]), single(symbols_[1])), single(symbols_[2]));
}

std::string PauliString::to_string() const {
  static constexpr std::array<const char*, 4> kNames = {"I", "X", "Z", "XZ"};
  std::string out;
  for (int q = 0; q < kPartyQubits; ++q) {
    if (q) out += "\xE2\x8A\x97";
    out += kNames[static_cast<int>(symbols_[q])];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measurement

namespace {

double overlap_abs(const PureState& target, const PureState& state) {
  return std::abs(target.amplitudes().dot(state.amplitudes()));
}

QubitSelection sender_qubits(const EntangledResource& res) {
  std::vector<int> labels = res.alice.labels();
  labels.insert(labels.end(), res.bob.labels().begin(), res.bob.labels().end());
  return QubitSelection(std::move(labels));
}

}  // namespace

std::optional<PauliString> find_correction(const PureState& collapsed, const PureState& target) {
  if (collapsed.num_qubits() != kPartyQubits || target.num_qubits() != kPartyQubits) {
    throw ArgumentError("find_correction works on 3-qubit states");
  }
  for (const PauliString& p : PauliString::all()) {
    if (overlap_abs(target, p.to_operator().apply(collapsed)) >= 1.0 - kCorrectionTol) return p;
  }
  return std::nullopt;
}

std::vector<OutcomeRecord> joint_measure(const EntangledResource& resource, const MeasurementBasisPair& bases) {
  const QubitSelection senders = sender_qubits(resource);
  const PureState omega = bases.target.state();
  std::vector<PauliString> group = PauliString::all();
  std::vector<LinearOperator> group_ops;
  group_ops.reserve(group.size());
  for (const PauliString& p : group) group_ops.push_back(p.to_operator());

  std::vector<OutcomeRecord> out;
  out.reserve(kOutcomeCount);
  for (int r = 1; r <= kBasisSize; ++r) {
    for (int n = 1; n <= kBasisSize; ++n) {
      const PureState bra = tensor_product(bases.alice[r - 1], bases.bob[n - 1]);
      const PureState chika = project_out(resource.state, bra, senders);
      OutcomeRecord rec;
      rec.r = r;
      rec.n = n;
      rec.probability = chika.amplitudes().squaredNorm();
      if (rec.probability > 0.0) {
        rec.collapsed = chika.normalized();
        double best = 0.0;
        for (std::size_t i = 0; i < group.size(); ++i) {
          const double ov = overlap_abs(omega, group_ops[i].apply(rec.collapsed));
          if (!rec.correction && ov >= 1.0 - kCorrectionTol) {
            rec.correction = group[i];
            rec.recovery_fidelity = ov * ov;
          }
          best = std::max(best, ov * ov);
        }
        if (!rec.correction) rec.recovery_fidelity = best;
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

double expansion_verify(const EntangledResource& resource, const MeasurementBasisPair& bases) {
  const QubitSelection senders = sender_qubits(resource);
  std::vector<int> order = senders.labels();
  order.insert(order.end(), resource.chika.labels().begin(), resource.chika.labels().end());
  const QubitSelection placement(order);

  Vector sum = Vector::Zero(resource.state.dim());
  for (int r = 1; r <= kBasisSize; ++r) {
    for (int n = 1; n <= kBasisSize; ++n) {
      const PureState bra = tensor_product(bases.alice[r - 1], bases.bob[n - 1]);
      const PureState chika = project_out(resource.state, bra, senders);
      sum += place_qubits(tensor_product(bra, chika), placement).amplitudes();
    }
  }
  return (sum - resource.state.amplitudes()).cwiseAbs().maxCoeff();
}

PauliString correction_for_r1(int n) {
  require_index(n, "Bob outcome");
  const auto& row = kBobSigns[n - 1];
  for (unsigned mask = 0; mask < kBasisSize; ++mask) {
    bool match = true;
    for (unsigned k = 0; k < kBasisSize && match; ++k) {
      const int sign = (popcount3(k & mask) % 2 == 0) ? 1 : -1;
      match = sign == row[k];
    }
    if (match) return PauliString::from_z_mask(mask);
  }
  throw InvariantError("Bob sign row " + std::to_string(n) + " is not a Z mask");
}

// ---------------------------------------------------------------------------
// Special cases

std::vector<std::pair<int, int>> special_case_constraints(int r) {
  if (r < 2 || r > kBasisSize) throw ArgumentError("special cases exist for r = 2..8");
  const SignedPermutationRow& row = SignedPermutationTable::canonical().row(r);
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < kBasisSize; ++k) {
    if (k < row.perm[k]) pairs.emplace_back(k + 1, row.perm[k] + 1);
  }
  return pairs;
}

SpecialCase special_case(int r) {
  return SpecialCase{r, special_case_constraints(r), PauliString::parse(kTable1Correction[r - 1])};
}

std::pair<TargetState, PauliString> apply_special_case(int r, const TargetState& target) {
  const SpecialCase sc = special_case(r);
  Coefficients alphas = target.alphas();
  for (const auto& [i, j] : sc.constraints) {
    const double a = alphas[i - 1];
    const double b = alphas[j - 1];
    const double v = std::copysign(std::sqrt(0.5 * (a * a + b * b)), a);
    alphas[i - 1] = v;
    alphas[j - 1] = v;
  }
  return {TargetState::make(alphas, target.phis(), target.normalization()), sc.correction};
}

void check_special_case(int r, const TargetState& target) {
  double worst = 0.0;
  std::pair<int, int> worst_pair{0, 0};
  for (const auto& [i, j] : special_case_constraints(r)) {
    const double d = std::abs(target.alphas()[i - 1] - target.alphas()[j - 1]);
    if (d > worst) {
      worst = d;
      worst_pair = {i, j};
    }
  }
  if (worst > kExactTol) {
    std::ostringstream msg;
    msg << "target violates the r=" << r << " special case: |alpha_" << worst_pair.first << " - alpha_"
        << worst_pair.second << "| = " << worst;
    throw ValidationError(msg.str());
  }
}

double success_probability(const std::vector<OutcomeRecord>& records) {
  double p = 0.0;
  for (const OutcomeRecord& rec : records) {
    if (rec.correction) p += rec.probability;
  }
  return p;
}

double success_probability(const TargetState& target, SuccessMode mode) {
  switch (mode.kind) {
    case SuccessMode::Kind::kGeneric:
      break;
    case SuccessMode::Kind::kTable1:
      check_special_case(mode.r, target);
      break;
    case SuccessMode::Kind::kEqualAmplitude:
      for (double a : target.alphas()) {
        if (std::abs(a - kInvTwoRootTwo) > kExactTol) {
          throw ValidationError("equal-amplitude mode needs every alpha = 1/(2 sqrt 2)");
        }
      }
      break;
    case SuccessMode::Kind::kZeroPhase:
      for (double p : target.phis()) {
        if (std::abs(p) > kExactTol && std::abs(p - kTwoPi) > kExactTol) {
          throw ValidationError("zero-phase mode needs every phi = 0");
        }
      }
      break;
  }
  return success_probability(joint_measure(build_resource(), build_bases(target)));
}

ReadingCheck check_r2_readings(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  Coefficients phis;
  for (double& p : phis) p = phase(rng);

  auto normalized = [](Coefficients a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    for (double& v : a) v /= std::sqrt(s);
    return a;
  };
  // a1=a2, a3=a4, a5=a6=a7, a8 free
  const double p12 = u(rng), p34 = u(rng), p567 = u(rng), p8 = p567 + 0.3;
  const Coefficients chained = normalized({p12, p12, p34, p34, p567, p567, p567, p8});
  // a1=a2, a3=a4, a5=a6, a7=a8 with a6 != a7
  const double q56 = u(rng), q78 = q56 + 0.25;
  const Coefficients paired = normalized({p12, p12, p34, p34, q56, q56, q78, q78});

  const PauliString ut = special_case(2).correction;
  const EntangledResource res = build_resource();
  auto fidelity = [&](const Coefficients& alphas) {
    const TargetState t = TargetState::make(alphas, phis);
    const MeasurementBasisPair bases = build_bases(t);
    const PureState bra = tensor_product(bases.alice[1], bases.bob[0]);
    const PureState chika = project_out(res.state, bra, sender_qubits(res)).normalized();
    const double ov = overlap_abs(t.state(), ut.to_operator().apply(chika));
    return ov * ov;
  };
  return ReadingCheck{fidelity(chained), fidelity(paired)};
}

}  // namespace jrsp
