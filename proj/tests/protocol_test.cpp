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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jrsp/errors.hpp"
#include "jrsp/protocol.hpp"
#include "support.hpp"

using namespace jrsp;
using testing_support::max_diff;
using testing_support::to_oracle;

namespace {

double gram_error(const std::vector<PureState>& family) {
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      const Complex g = family[i].amplitudes().dot(family[j].amplitudes());
      worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

TargetState generic_target(std::mt19937_64& rng) { return TargetState::random(rng); }

}  // namespace

TEST_CASE("target validation") {
  Coefficients a{};
  a.fill(0.5);
  CHECK_THROWS_AS(TargetState::make(a, {}), ValidationError);
  CHECK_NOTHROW(TargetState::make(a, {}, Normalization::kAllowUnnormalized));
  Coefficients phis{};
  phis[3] = 7.0;
  CHECK_THROWS_AS(TargetState::equal_amplitude(phis), ValidationError);
  a.fill(oracle::kAmp);
  a[2] = std::nan("");
  CHECK_THROWS_AS(TargetState::make(a, {}, Normalization::kAllowUnnormalized), ValidationError);
}

TEST_CASE("random targets are normalized with non-negative amplitudes") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const TargetState t = TargetState::random(rng);
    CHECK(t.norm_residual() < 1e-12);
    CHECK(std::all_of(t.alphas().begin(), t.alphas().end(), [](double v) { return v >= 0.0; }));
    CHECK(std::all_of(t.phis().begin(), t.phis().end(), [](double v) { return v >= 0.0 && v <= 2 * M_PI; }));
  }
}

TEST_CASE("resource equals three GHZ triples") {
  const EntangledResource res = build_resource();
  CHECK(max_diff(to_oracle(res.state.amplitudes()), oracle::ghz_resource()) < 1e-15);
  CHECK(res.alice == QubitSelection({1, 4, 7}));
  CHECK(res.bob == QubitSelection({2, 5, 8}));
  CHECK(res.chika == QubitSelection({3, 6, 9}));
}

TEST_CASE("sign matrix rows are Z-mask characters") {
  const auto& s = bob_sign_matrix();
  for (int n = 1; n <= 8; ++n)
    for (int k = 0; k < 8; ++k) CHECK(s[n - 1][k] == oracle::sign(n, k));
}

TEST_CASE("bases match the closed-form rows") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const TargetState t = generic_target(rng);
    const MeasurementBasisPair b = build_bases(t);
    for (int r = 1; r <= 8; ++r) {
      CHECK(max_diff(to_oracle(b.alice[r - 1].amplitudes()), oracle::alice_row(r, t.alphas())) < 1e-15);
      CHECK(max_diff(to_oracle(b.bob[r - 1].amplitudes()), oracle::bob_row(r, t.phis())) < 1e-15);
    }
  }
}

TEST_CASE("property: both measurement families are orthonormal") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const MeasurementBasisPair b = build_bases(generic_target(rng));
    CHECK(gram_error(b.alice) < 1e-12);
    CHECK(gram_error(b.bob) < 1e-12);
  }
}

TEST_CASE("property: 64 equiprobable outcomes and an exact expansion") {
  std::mt19937_64 rng(14);
  const EntangledResource res = build_resource();
  for (int trial = 0; trial < 200; ++trial) {
    const TargetState t = generic_target(rng);
    const MeasurementBasisPair b = build_bases(t);
    CHECK(expansion_verify(res, b) < 1e-12);
    const std::vector<OutcomeRecord> records = joint_measure(res, b);
    REQUIRE(records.size() == 64);
    double total = 0.0;
    for (const OutcomeRecord& rec : records) {
      CHECK(std::abs(rec.probability - 1.0 / 64.0) < 1e-12);
      total += rec.probability;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("outcome records are r-major and match the brute-force collapse") {
  std::mt19937_64 rng(15);
  const TargetState t = generic_target(rng);
  const std::vector<OutcomeRecord> records = joint_measure(build_resource(), build_bases(t));
  const oracle::Vec f = oracle::ghz_resource();
  for (int i = 0; i < 64; ++i) {
    const OutcomeRecord& rec = records[i];
    CHECK(rec.r == i / 8 + 1);
    CHECK(rec.n == i % 8 + 1);
    oracle::Vec c = oracle::chika_after(f, oracle::alice_row(rec.r, t.alphas()), oracle::bob_row(rec.n, t.phis()));
    CHECK(std::abs(oracle::norm2(c) - rec.probability) < 1e-14);
    const double scale = 1.0 / std::sqrt(oracle::norm2(c));
    for (auto& v : c) v *= scale;
    CHECK(std::abs(std::abs(oracle::inner(c, to_oracle(rec.collapsed.amplitudes()))) - 1.0) < 1e-12);
  }
}

TEST_CASE("sign corruption is caught by the expansion check") {
  std::mt19937_64 rng(16);
  const TargetState t = generic_target(rng);
  const SignedPermutationTable bad = SignedPermutationTable::canonical().with_flipped_sign(2, 3);
  CHECK(expansion_verify(build_resource(), build_bases(t, bad)) > 1e-3);
}

TEST_CASE("r = 1 corrections") {
  const std::array<const char*, 8> expected = {"I⊗I⊗I", "I⊗I⊗Z", "Z⊗Z⊗Z", "I⊗Z⊗I",
                                               "Z⊗I⊗Z", "Z⊗Z⊗I", "I⊗Z⊗Z", "Z⊗I⊗I"};
  for (int n = 1; n <= 8; ++n) CHECK(correction_for_r1(n).to_string() == expected[n - 1]);
  CHECK(correction_for_r1(6) == PauliString::parse("Z⊗Z⊗I"));
  CHECK(correction_for_r1(2) == PauliString::parse("IIZ"));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const TargetState t = generic_target(rng);
    const std::vector<OutcomeRecord> records = joint_measure(build_resource(), build_bases(t));
    for (int n = 1; n <= 8; ++n) {
      const OutcomeRecord& rec = records[n - 1];
      REQUIRE(rec.correction.has_value());
      CHECK(*rec.correction == correction_for_r1(n));
      CHECK(rec.recovery_fidelity >= 1.0 - 1e-12);
      // Oracle: Z mask on the raw collapsed vector reproduces the target up to phase.
      oracle::Vec c = oracle::chika_after(oracle::ghz_resource(), oracle::alice_row(1, t.alphas()),
                                          oracle::bob_row(n, t.phis()));
      const oracle::Vec fixed = oracle::apply_z_mask(c, oracle::kRowMask[n - 1]);
      const double ov = std::norm(oracle::inner(oracle::target(t.alphas(), t.phis()), fixed)) * 64.0;
      CHECK(std::abs(ov - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("Pauli strings") {
  CHECK(PauliString::all().size() == 64);
  CHECK(PauliString::parse("Z*I*XZ").to_string() == "Z⊗I⊗XZ");
  CHECK(PauliString::parse("Z x I x Z") == PauliString::parse("ZIZ"));
  CHECK(PauliString::from_z_mask(0b110) == PauliString::parse("ZZI"));
  CHECK(PauliString::parse("ZIZ").is_z_only());
  CHECK_FALSE(PauliString::parse("XIZ").is_z_only());
  CHECK_THROWS_AS(PauliString::parse("ZY"), ArgumentError);
  CHECK_THROWS_AS(PauliString::parse("Q I Z"), ArgumentError);
  // XZ is X applied after Z.
  const Matrix xz = PauliString::parse("XZ I I").to_operator().matrix();
  const Matrix expected = (gates::pauli_x().matrix() * gates::pauli_z().matrix()).eval();
  const LinearOperator single = tensor_product(tensor_product(LinearOperator(expected), gates::identity()),
                                               gates::identity());
  CHECK((xz - single.matrix()).norm() == 0.0);
}

TEST_CASE("special-case corrections and equalities") {
  const std::array<const char*, 8> ut = {"", "I⊗I⊗Z", "Z⊗Z⊗Z", "I⊗Z⊗I", "Z⊗I⊗Z", "Z⊗Z⊗I", "I⊗Z⊗Z", "Z⊗I⊗I"};
  for (int r = 2; r <= 8; ++r) {
    const SpecialCase sc = special_case(r);
    CHECK(sc.correction.to_string() == ut[r - 1]);
    REQUIRE(sc.constraints.size() == 4);
    for (const auto& [i, j] : sc.constraints) CHECK(((i - 1) ^ (r - 1)) == j - 1);
  }
  const std::vector<std::pair<int, int>> r2 = {{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  CHECK(special_case_constraints(2) == r2);
  const std::vector<std::pair<int, int>> r5 = {{1, 5}, {2, 6}, {3, 7}, {4, 8}};
  CHECK(special_case_constraints(5) == r5);
  CHECK_THROWS_AS(special_case(1), ArgumentError);
}

TEST_CASE("success probabilities") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const TargetState t = generic_target(rng);
    CHECK(std::abs(success_probability(t, SuccessMode::generic()) - 0.125) < 1e-12);
    for (int r = 2; r <= 8; ++r) {
      const auto [constrained, ut] = apply_special_case(r, t);
      CHECK(constrained.norm_residual() < 1e-12);
      CHECK(std::abs(success_probability(constrained, SuccessMode::table1(r)) - 0.25) < 1e-12);
      const std::vector<OutcomeRecord> records = joint_measure(build_resource(), build_bases(constrained));
      for (int n = 1; n <= 8; ++n) {
        const OutcomeRecord& rec = records[(r - 1) * 8 + (n - 1)];
        if (n == 1) {
          REQUIRE(rec.correction.has_value());
          CHECK(*rec.correction == ut);
        }
      }
    }
    CHECK(std::abs(success_probability(TargetState::equal_amplitude(t.phis()), SuccessMode::equal_amplitude()) -
                   1.0) < 1e-12);
    const TargetState zero = TargetState::make(t.alphas(), {});
    CHECK(std::abs(success_probability(zero, SuccessMode::zero_phase()) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(success_probability(generic_target(rng), SuccessMode::table1(3)), ValidationError);
  CHECK_THROWS_AS(success_probability(generic_target(rng), SuccessMode::equal_amplitude()), ValidationError);
}

TEST_CASE("only the paired reading of the r = 2 equalities recovers the target") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    const ReadingCheck c = check_r2_readings(rng);
    CHECK(c.paired_reading_fidelity >= 1.0 - 1e-12);
    CHECK(c.chained_reading_fidelity < 1.0 - 1e-6);
  }
}

TEST_CASE("find_correction reports a miss for generic r > 1 outcomes") {
  std::mt19937_64 rng(20);
  const TargetState t = generic_target(rng);
  const std::vector<OutcomeRecord> records = joint_measure(build_resource(), build_bases(t));
  int found = 0;
  for (const OutcomeRecord& rec : records) {
    if (rec.correction) ++found;
    CHECK(find_correction(rec.collapsed, t.state()).has_value() == rec.correction.has_value());
  }
  CHECK(found == 8);
}
