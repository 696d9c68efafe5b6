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

// Acceptance gate. One line per criterion:
//   criterion N PASS|FAIL: <title> | <measurements>
// Usage: acceptance_test [--criterion N]...   (default: all ten)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jrsp/analysis.hpp"
#include "jrsp/noise.hpp"
#include "jrsp/protocol.hpp"

#ifndef JRSP_CLI_PATH
#error "JRSP_CLI_PATH must point at the jrsp executable"
#endif

using namespace jrsp;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<TargetState> random_targets(int count, std::uint64_t seed = kSeed) {
  std::mt19937_64 rng(seed);
  std::vector<TargetState> out;
  for (int i = 0; i < count; ++i) out.push_back(TargetState::random(rng));
  return out;
}

double gram_error(const std::vector<PureState>& family) {
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      const Complex g = family[i].amplitudes().dot(family[j].amplitudes());
      worst = std::max(worst, std::abs(g - Complex(i == j ? 1.0 : 0.0)));
    }
  return worst;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void basis_validity(Outcome& o) {
  const Stopwatch clock;
  double alice = 0.0, bob = 0.0;
  for (const TargetState& t : random_targets(200)) {
    const MeasurementBasisPair b = build_bases(t);
    alice = std::max(alice, gram_error(b.alice));
    bob = std::max(bob, gram_error(b.bob));
  }
  const double s = clock.seconds();
  o.detail << "200 targets, max |G_alice - I| = " << sci(alice) << ", max |G_bob - I| = " << sci(bob)
           << ", " << sci(s) << " s";
  o.require(alice <= 1e-12 && bob <= 1e-12, "Gram tolerance 1e-12");
  o.require(s < 5.0, "runtime < 5 s");
}

void completeness(Outcome& o) {
  const Stopwatch clock;
  const EntangledResource res = build_resource();
  double worst = 0.0;
  for (const TargetState& t : random_targets(100)) worst = std::max(worst, expansion_verify(res, build_bases(t)));
  const double s = clock.seconds();
  o.detail << "100 targets, max residual = " << sci(worst) << ", " << sci(s) << " s";
  o.require(worst < 1e-12, "residual < 1e-12");
  o.require(s < 30.0, "runtime < 30 s");
}

void outcome_law(Outcome& o) {
  const EntangledResource res = build_resource();
  double prob_err = 0.0, generic_err = 0.0, table_err = 0.0, equal_err = 0.0, zero_err = 0.0;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (const TargetState& t : random_targets(20)) {
    const std::vector<OutcomeRecord> records = joint_measure(res, build_bases(t));
    for (const OutcomeRecord& rec : records) prob_err = std::max(prob_err, std::abs(rec.probability - 1.0 / 64));
    generic_err = std::max(generic_err, std::abs(success_probability(records) - 0.125));
    for (int r = 2; r <= kBasisSize; ++r) {
      const TargetState c = apply_special_case(r, t).first;
      table_err = std::max(table_err, std::abs(success_probability(c, SuccessMode::table1(r)) - 0.25));
    }
    Coefficients phis;
    for (double& p : phis) p = phase(rng);
    equal_err = std::max(
        equal_err, std::abs(success_probability(TargetState::equal_amplitude(phis), SuccessMode::equal_amplitude()) - 1));
    zero_err = std::max(zero_err,
                        std::abs(success_probability(TargetState::make(t.alphas(), {}), SuccessMode::zero_phase()) - 1));
  }
  o.detail << "max |p - 1/64| = " << sci(prob_err) << "; |P - 1/8| = " << sci(generic_err)
           << "; special cases |P - 1/4| = " << sci(table_err) << "; equal-amplitude |P - 1| = " << sci(equal_err)
           << "; zero-phase |P - 1| = " << sci(zero_err);
  o.require(prob_err <= 1e-12, "outcome probability 1/64");
  o.require(generic_err <= 1e-12, "generic success 1/8");
  o.require(table_err <= 1e-12, "special-case success 1/4 for r = 2..8");
  o.require(equal_err <= 1e-12 && zero_err <= 1e-12, "success 1 for equal amplitudes and zero phases");
}

void correction_correctness(Outcome& o) {
  const EntangledResource res = build_resource();
  double worst = 1.0;
  for (const TargetState& t : random_targets(20)) {
    const MeasurementBasisPair b = build_bases(t);
    const PureState omega = t.state();
    for (int n = 1; n <= kBasisSize; ++n) {
      const PureState bra = tensor_product(b.alice[0], b.bob[n - 1]);
      const PureState chika = project_out(res.state, bra, QubitSelection({1, 4, 7, 2, 5, 8})).normalized();
      const PureState fixed = correction_for_r1(n).to_operator().apply(chika);
      worst = std::min(worst, std::norm(omega.amplitudes().dot(fixed.amplitudes())));
    }
  }
  const std::string n6 = correction_for_r1(6).to_string();
  o.detail << "min recovery fidelity over 20 targets x 8 outcomes = " << format_real(worst) << "; n = 6 mask " << n6;
  o.require(worst >= 1.0 - 1e-12, "recovery fidelity >= 1 - 1e-12");
  o.require(n6 == "Z⊗Z⊗I", "n = 6 mask Z(x)Z(x)I");
}

void noise_endpoints(Outcome& o) {
  const TargetState eq = TargetState::equal_amplitude();
  double zero_err = 0.0;
  for (NoiseKind k : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping, NoiseKind::kDepolarizing}) {
    zero_err = std::max(zero_err, std::abs(fidelity_numeric(eq, NoiseModelSpec::make(k, 0.0)) - 1.0));
  }
  const double ad1 = fidelity_numeric(eq, NoiseModelSpec::make(NoiseKind::kAmplitudeDamping, 1.0));
  const double pd1 = fidelity_numeric(eq, NoiseModelSpec::make(NoiseKind::kPhaseDamping, 1.0));
  const double dp1 = fidelity_analytic_printed(eq, NoiseKind::kDepolarizing, 1.0);
  o.detail << "max |F(0) - 1| = " << sci(zero_err) << "; F_AD(1) = " << format_real(ad1)
           << "; F_PD(1) = " << format_real(pd1) << "; closed-form F_DP(1) = " << format_real(dp1);
  o.require(zero_err <= 1e-9, "F(0) = 1");
  o.require(std::abs(ad1 - 1.0 / 32) <= 1e-9 && std::abs(pd1 - 1.0 / 32) <= 1e-9, "F_AD(1) = F_PD(1) = 1/32");
  o.require(std::abs(dp1 - 1.0 / 243) <= 1e-15, "closed-form F_DP(1) = 1/243");
}

void oracle_agreement(Outcome& o) {
  const Stopwatch clock;
  std::vector<TargetState> targets{TargetState::equal_amplitude()};
  for (const TargetState& t : random_targets(20)) targets.push_back(t);
  const std::vector<double> grid = eta_grid(0.0, 1.0, 0.05);
  double worst = 0.0;
  for (const TargetState& t : targets) {
    for (NoiseKind k : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping}) {
      worst = std::max(worst, compare(t, k, grid).max_abs_err);
    }
  }
  const double s = clock.seconds();
  o.detail << targets.size() << " targets x 21 points x {AD, PD}, max abs err = " << sci(worst) << ", " << sci(s)
           << " s";
  o.require(worst <= 1e-9, "abs err <= 1e-9");
  o.require(s < 120.0, "runtime < 2 min");
}

void phase_independence(Outcome& o) {
  const TargetState base = random_targets(1, kSeed + 1).front();
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::vector<Coefficients> phase_sets(20);
  for (Coefficients& ps : phase_sets)
    for (double& p : ps) p = phase(rng);
  double spread = 0.0;
  for (NoiseKind k : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping}) {
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      double lo = 2.0, hi = -1.0;
      for (const Coefficients& ps : phase_sets) {
        const double f = fidelity_numeric(TargetState::make(base.alphas(), ps), NoiseModelSpec::make(k, eta));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
      spread = std::max(spread, hi - lo);
    }
  }
  o.detail << "20 phase vectors x eta in {0.1, 0.3, 0.5, 0.7, 0.9}, max spread = " << sci(spread);
  o.require(spread < 1e-12, "spread < 1e-12");
}

void ordering(Outcome& o) {
  const TargetState eq = TargetState::equal_amplitude();
  const std::vector<double> grid = eta_grid(0.0, 1.0, 0.05);
  const OrderingCheck check = depolarizing_below_phase_damping(eq, grid);
  const FidelityReport dp = compare(eq, NoiseKind::kDepolarizing, grid);
  const bool populated = dp.points.size() > 2 && std::isfinite(dp.mid_grid_max_deviation);
  o.detail << "F_DP <= F_PD on [0.55, 1]: " << (check.holds ? "holds" : "violated") << "; DP mid-grid deviation = "
           << sci(dp.mid_grid_max_deviation) << "; DP endpoints numeric/closed-form: eta=0 " << format_real(dp.first().f_numeric)
           << "/" << format_real(dp.first().f_analytic) << ", eta=1 " << format_real(dp.last().f_numeric) << "/"
           << format_real(dp.last().f_analytic);
  o.require(check.holds, "ordering on [0.55, 1]");
  o.require(populated, "deviation field populated");
  o.require(dp.endpoints_match, "DP endpoints match within 1e-9");
}

void cptp_sanity(Outcome& o) {
  double completeness = 0.0, trace_err = 0.0, worst_eta = 0.0;
  std::string worst_kind;
  for (NoiseKind k : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping, NoiseKind::kDepolarizing}) {
    for (int i = 0; i <= 10; ++i) {
      const KrausSet set = kraus_set(k, i / 10.0);
      completeness = std::max(completeness, set.completeness_residual());
      const double d = std::abs(trio_trace_deficit(set));
      if (d > trace_err) {
        trace_err = d;
        worst_eta = i / 10.0;
        worst_kind = std::string(short_name(k));
      }
    }
  }
  o.detail << "max completeness residual = " << sci(completeness) << "; max |1 - Tr| of the trio map on |F><F| = "
           << format_real(trace_err);
  if (!worst_kind.empty()) o.detail << " (" << worst_kind << ", eta = " << format_real(worst_eta) << ")";
  o.require(completeness <= 1e-12, "completeness within 1e-12");
  o.require(trace_err <= 1e-12, "trio map trace-preserving within 1e-12");
}

int run_cli_binary(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + JRSP_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void reproducibility(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / ("jrsp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path a = dir / "a.csv", b = dir / "b.csv", log = dir / "log.txt";
  const std::string sweep = "sweep --model ad --random --seed 42 --out ";
  const int ca = run_cli_binary(sweep + "\"" + a.string() + "\"", log);
  const int cb = run_cli_binary(sweep + "\"" + b.string() + "\"", log);
  const bool identical = ca == 0 && cb == 0 && !slurp(a).empty() && slurp(a) == slurp(b);

  const fs::path csv = dir / "fig2.csv", js = dir / "fig2.json";
  const int cc = run_cli_binary("fig2 --model ad --out \"" + csv.string() + "\"", log);
  const int cj = run_cli_binary("fig2 --model ad --format json --out \"" + js.string() + "\"", log);
  std::size_t csv_rows = 0;
  {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) ++csv_rows;
  }
  std::size_t json_rows = 0;
  double at0 = -1.0, at1 = -1.0;
  if (cj == 0) {
    const nlohmann::json doc = nlohmann::json::parse(slurp(js));
    json_rows = doc["rows"].size();
    for (const auto& anchor : doc["anchors"]) {
      if (anchor["eta"].get<double>() == 0.0) at0 = anchor["f_analytic"].get<double>();
      if (anchor["eta"].get<double>() == 1.0) at1 = anchor["f_analytic"].get<double>();
    }
  }
  fs::remove_all(dir);
  o.detail << "sweep twice: " << (identical ? "byte-identical" : "differs") << "; fig2 csv rows = " << csv_rows
           << ", json rows = " << json_rows << ", anchors F(eta=0) = " << format_real(at0)
           << ", F(eta=1) = " << format_real(at1);
  o.require(identical, "byte-identical sweep");
  o.require(cc == 0 && csv_rows == 441 && json_rows == 441, "441 fig2 rows");
  o.require(std::abs(at0 - 1.0) <= 1e-9 && std::abs(at1 - 1.0 / 32) <= 1e-9, "anchors 1 and 1/32");
}

struct Criterion {
  const char* title;
  std::function<void(Outcome&)> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"basis validity", basis_validity},
      {"resource expansion completeness", completeness},
      {"outcome law and success probabilities", outcome_law},
      {"r = 1 correction correctness", correction_correctness},
      {"noise endpoints (equal amplitudes)", noise_endpoints},
      {"AD/PD numeric vs closed-form agreement", oracle_agreement},
      {"AD/PD phase independence", phase_independence},
      {"DP <= PD ordering and DP report", ordering},
      {"CPTP sanity", cptp_sanity},
      {"CLI reproducibility and fig2 output", reproducibility},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance_test [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) selected.push_back(i);

  bool all_pass = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria().size())) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const Criterion& c = criteria()[id - 1];
    Outcome o;
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::cout << "criterion " << id << (o.pass ? " PASS" : " FAIL") << ": " << c.title << " | " << o.detail.str()
              << std::endl;
    all_pass &= o.pass;
  }
  return all_pass ? 0 : 1;
}
