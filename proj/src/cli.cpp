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

#include "jrsp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "jrsp/analysis.hpp"
#include "jrsp/errors.hpp"

namespace jrsp {
namespace {

using nlohmann::json;

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw ValidationError("failed writing '" + path + "'");
}

std::string dump(const json& doc) { return doc.dump(2) + '\n'; }

Coefficients to_coefficients(const std::vector<double>& values, const char* flag) {
  if (values.size() != kBasisSize) {
    throw ValidationError(std::string(flag) + " needs 8 comma-separated values, got " + std::to_string(values.size()));
  }
  Coefficients out{};
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

// Flags shared by run / sweep / compare. Values land here first and are
// merged over the config file afterwards, so that flags win.
struct TargetFlags {
  std::string config_path;
  std::vector<double> alphas;
  std::vector<double> phis;
  std::uint64_t seed = 0;
  int table1 = 0;
  std::string out_path;
  std::string format;

  CLI::Option* alphas_opt = nullptr;
  CLI::Option* phis_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* random_opt = nullptr;
  CLI::Option* table1_opt = nullptr;
  CLI::Option* unnormalized_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;

  void attach(CLI::App* cmd, bool with_format) {
    cmd->add_option("--config", config_path, "JSON file with RunConfig fields");
    alphas_opt = cmd->add_option("--alphas", alphas, "8 comma-separated amplitudes")->delimiter(',');
    phis_opt = cmd->add_option("--phis", phis, "8 comma-separated phases in [0, 2pi]")->delimiter(',');
    random_opt = cmd->add_flag("--random", "draw a seeded random target");
    seed_opt = cmd->add_option("--seed", seed, "seed for --random (default: JRSP_SEED, then 42)");
    table1_opt = cmd->add_option("--table1", table1, "impose the special-case amplitude equalities for Alice outcome r")
                     ->check(CLI::Range(2, kBasisSize));
    unnormalized_opt = cmd->add_flag("--allow-unnormalized", "skip the sum alpha^2 = 1 check");
    out_opt = cmd->add_option("--out", out_path, "output file (default stdout)");
    if (with_format) {
      format_opt = cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }
  }

  RunConfig merged() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    if (alphas_opt->count()) cfg.alphas = to_coefficients(alphas, "--alphas");
    if (phis_opt->count()) cfg.phis = to_coefficients(phis, "--phis");
    if (random_opt->count()) cfg.random_target = true;
    if (seed_opt->count()) cfg.seed = seed;
    if (table1_opt->count()) cfg.table1_r = table1;
    if (unnormalized_opt->count()) cfg.allow_unnormalized = true;
    if (out_opt->count()) cfg.output_path = out_path;
    if (format_opt && format_opt->count()) cfg.output_format = parse_output_format(format);
    return cfg;
  }
};

struct GridFlags {
  double start = 0.0;
  double end = 1.0;
  double step = 0.05;
  CLI::Option* start_opt = nullptr;
  CLI::Option* end_opt = nullptr;
  CLI::Option* step_opt = nullptr;

  void attach(CLI::App* cmd) {
    start_opt = cmd->add_option("--eta-start", start, "first decoherence rate");
    end_opt = cmd->add_option("--eta-end", end, "last decoherence rate");
    step_opt = cmd->add_option("--eta-step", step, "grid step");
  }

  void apply(RunConfig& cfg) const {
    if (start_opt->count()) cfg.eta_start = start;
    if (end_opt->count()) cfg.eta_end = end;
    if (step_opt->count()) cfg.eta_step = step;
  }
};

// ---- verify ----------------------------------------------------------------

struct InvariantTally {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;

  void observe(double value) {
    worst = std::max(worst, value);
    if (!(value <= tolerance)) passed = false;
  }
};

double gram_error(const std::vector<PureState>& family) {
  Matrix vectors(family.front().dim(), static_cast<Eigen::Index>(family.size()));
  for (std::size_t i = 0; i < family.size(); ++i) vectors.col(static_cast<Eigen::Index>(i)) = family[i].amplitudes();
  const Matrix gram = vectors.adjoint() * vectors;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

// Choi matrix of a single-qubit Kraus set: PSD and partial trace = I.
double single_qubit_cptp_error(const KrausSet& set) {
  Vector phi = Vector::Zero(4);
  phi(0) = 1.0;
  phi(3) = 1.0;
  Matrix choi = Matrix::Zero(4, 4);
  for (const LinearOperator& k : set.terms) {
    const Vector v = Eigen::kroneckerProduct(k.matrix(), Matrix::Identity(2, 2)).eval() * phi;
    choi += v * v.adjoint();
  }
  const DensityMatrix c(2, choi);
  const double psd = std::max(0.0, -c.min_eigenvalue());
  const Matrix reduced = partial_trace(c, QubitSelection{2}).matrix();
  return std::max(psd, (reduced - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff());
}

int cmd_verify(int trials, const RunConfig& cfg, bool corrupt, std::ostream& out, std::ostream& err) {
  if (trials < 0) throw ValidationError("--trials must be non-negative");
  const std::uint64_t seed = resolve_seed(cfg);
  const SignedPermutationTable table =
      corrupt ? SignedPermutationTable::canonical().with_flipped_sign(2, 3) : SignedPermutationTable::canonical();

  std::vector<TargetState> targets{TargetState::equal_amplitude()};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i) targets.push_back(TargetState::random(rng));

  InvariantTally alice{"alice_basis_orthonormal", 0.0, kExactTol};
  InvariantTally bob{"bob_basis_orthonormal", 0.0, kExactTol};
  InvariantTally expansion{"resource_expansion", 0.0, kExactTol};
  InvariantTally probabilities{"outcome_probability_1_64", 0.0, kExactTol};
  InvariantTally corrections{"r1_corrections", 0.0, kExactTol};
  const EntangledResource resource = build_resource();
  for (const TargetState& t : targets) {
    const MeasurementBasisPair bases = build_bases(t, table);
    alice.observe(gram_error(bases.alice));
    bob.observe(gram_error(bases.bob));
    expansion.observe(expansion_verify(resource, bases));
    for (const OutcomeRecord& rec : joint_measure(resource, bases)) {
      probabilities.observe(std::abs(rec.probability - 1.0 / kOutcomeCount));
      if (rec.r == 1) {
        const PureState fixed = correction_for_r1(rec.n).to_operator().apply(rec.collapsed);
        corrections.observe(1.0 - std::norm(t.state().amplitudes().dot(fixed.amplitudes())));
      }
    }
  }

  InvariantTally completeness{"kraus_completeness", 0.0, kExactTol};
  InvariantTally cptp{"single_qubit_cptp", 0.0, kExactTol};
  for (NoiseKind kind : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping, NoiseKind::kDepolarizing}) {
    for (int i = 0; i <= 10; ++i) {
      const KrausSet set = kraus_set(kind, i / 10.0);
      completeness.observe(set.completeness_residual());
      cptp.observe(single_qubit_cptp_error(set));
    }
  }

  const std::vector<InvariantTally*> tallies{&alice, &bob, &expansion, &probabilities, &corrections, &completeness,
                                             &cptp};
  out << "targets: " << targets.size() << " (default + " << trials << " random, seed " << seed << ")\n";
  const InvariantTally* first_failure = nullptr;
  for (const InvariantTally* t : tallies) {
    out << (t->passed ? "PASS " : "FAIL ") << t->name << " worst=" << format_real(t->worst)
        << " tol=" << format_real(t->tolerance) << '\n';
    if (!t->passed && !first_failure) first_failure = t;
  }
  // Reported only: the correlated trio map keeps a sender's three qubits on a
  // common Kraus index, which drops weight for eta > 0.
  for (NoiseKind kind : {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping, NoiseKind::kDepolarizing}) {
    out << "INFO trio_trace_deficit " << short_name(kind)
        << " eta=0.5: " << format_real(trio_trace_deficit(kraus_set(kind, 0.5))) << '\n';
  }
  if (first_failure) {
    err << "invariant violated: " << first_failure->name << '\n';
    return kExitInvariantViolation;
  }
  return kExitOk;
}

// ---- run / sweep / compare / fig2 ------------------------------------------

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.model) throw ValidationError("run simulates the noiseless protocol; drop the model field");
  const TargetState target = resolve_target(cfg);
  const std::vector<OutcomeRecord> records = joint_measure(build_resource(), build_bases(target));
  json doc = outcomes_to_json(records, target);
  if (cfg.table1_r) doc["table1_r"] = *cfg.table1_r;
  emit(dump(doc), cfg.output_path, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (!cfg.model) throw ValidationError("sweep needs --model ad|pd|dp");
  const TargetState target = resolve_target(cfg);
  const std::vector<SweepRow> rows = sweep(target, *cfg.model, eta_grid(cfg.eta_start, cfg.eta_end, cfg.eta_step));
  emit(cfg.output_format == OutputFormat::kCsv ? sweep_to_csv(rows) : dump(sweep_to_json(rows, target)),
       cfg.output_path, out);
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, bool all, std::ostream& out, std::ostream& err) {
  cfg.validate();
  if (!all && !cfg.model) throw ValidationError("compare needs --model ad|pd|dp or --all");
  const TargetState target = resolve_target(cfg);
  const std::vector<double> grid = eta_grid(cfg.eta_start, cfg.eta_end, cfg.eta_step);
  std::vector<NoiseKind> kinds;
  if (all) {
    kinds = {NoiseKind::kAmplitudeDamping, NoiseKind::kPhaseDamping, NoiseKind::kDepolarizing};
  } else {
    kinds = {*cfg.model};
  }

  json doc;
  doc["target"] = target_to_json(target);
  doc["reports"] = json::array();
  std::string violation;
  for (NoiseKind kind : kinds) {
    const FidelityReport report = compare(target, kind, grid);
    doc["reports"].push_back(report_to_json(report));
    if (kind != NoiseKind::kDepolarizing && !report.within_tolerance && violation.empty()) {
      violation = std::string(short_name(kind)) + " max_abs_err " + format_real(report.max_abs_err) +
                  " exceeds " + format_real(kAgreementTol);
    }
  }
  if (all) {
    const OrderingCheck ordering = depolarizing_below_phase_damping(target, grid);
    doc["ordering"] = {{"relation", "f_dp <= f_pd"},
                       {"lo", ordering.lo},
                       {"hi", ordering.hi},
                       {"holds", ordering.holds},
                       {"violations", ordering.violations}};
  }
  emit(dump(doc), cfg.output_path, out);
  if (!violation.empty()) {
    err << "tolerance violated: " << violation << '\n';
    return kExitInvariantViolation;
  }
  return kExitOk;
}

int cmd_fig2(NoiseKind kind, const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> grid = eta_grid(0.0, 1.0, 0.05);
  const std::vector<SurfaceRow> rows = fig2_surface(kind, grid, grid);
  if (cfg.output_format == OutputFormat::kCsv) {
    emit(surface_to_csv(rows), cfg.output_path, out);
  } else {
    emit(dump(surface_to_json(kind, rows, fig2_anchors(kind))), cfg.output_path, out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint remote preparation of three-qubit states over GHZ resources", "jrsp"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "check basis, expansion, outcome and channel invariants");
  int trials = 200;
  std::uint64_t verify_seed = 0;
  verify->add_option("--trials", trials, "number of random targets besides the default one");
  auto* verify_seed_opt = verify->add_option("--seed", verify_seed, "seed (default: JRSP_SEED, then 42)");
  auto* corrupt_opt = verify->add_flag("--inject-sign-corruption", "flip one sign in Alice's row 2")->group("");

  auto* run = app.add_subcommand("run", "simulate all 64 outcomes of the noiseless protocol");
  TargetFlags run_flags;
  run_flags.attach(run, false);

  auto* sweep_cmd = app.add_subcommand("sweep", "numeric and closed-form fidelity over an eta grid");
  TargetFlags sweep_flags;
  GridFlags sweep_grid;
  std::string sweep_model;
  sweep_flags.attach(sweep_cmd, true);
  sweep_grid.attach(sweep_cmd);
  auto* sweep_model_opt = sweep_cmd->add_option("--model", sweep_model, "ad, pd or dp");

  auto* compare_cmd = app.add_subcommand("compare", "numeric vs closed-form fidelity report");
  TargetFlags compare_flags;
  GridFlags compare_grid;
  std::string compare_model;
  compare_flags.attach(compare_cmd, false);
  compare_grid.attach(compare_cmd);
  auto* compare_model_opt = compare_cmd->add_option("--model", compare_model, "ad, pd or dp");
  auto* compare_all_opt = compare_cmd->add_flag("--all", "all three channels plus the dp <= pd ordering check");
  compare_all_opt->excludes(compare_model_opt);

  auto* fig2 = app.add_subcommand("fig2", "closed-form fidelity surface over alpha1 x eta");
  std::string fig2_model;
  std::string fig2_out;
  std::string fig2_format = "csv";
  fig2->add_option("--model", fig2_model, "ad or pd")->required();
  fig2->add_option("--out", fig2_out, "output file (default stdout)");
  fig2->add_option("--format", fig2_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  auto model_from = [](const std::string& text) {
    try {
      return parse_noise_kind(text);
    } catch (const ArgumentError& e) {
      throw ValidationError(e.what());
    }
  };

  try {
    if (verify->parsed()) {
      RunConfig cfg;
      if (verify_seed_opt->count()) cfg.seed = verify_seed;
      return cmd_verify(trials, cfg, corrupt_opt->count() > 0, out, err);
    }
    if (run->parsed()) return cmd_run(run_flags.merged(), out);
    if (sweep_cmd->parsed()) {
      RunConfig cfg = sweep_flags.merged();
      sweep_grid.apply(cfg);
      if (sweep_model_opt->count()) cfg.model = model_from(sweep_model);
      return cmd_sweep(cfg, out);
    }
    if (compare_cmd->parsed()) {
      RunConfig cfg = compare_flags.merged();
      compare_grid.apply(cfg);
      if (compare_model_opt->count()) cfg.model = model_from(compare_model);
      return cmd_compare(cfg, compare_all_opt->count() > 0, out, err);
    }
    if (fig2->parsed()) {
      RunConfig cfg;
      cfg.allow_unnormalized = true;
      cfg.output_path = fig2_out;
      cfg.output_format = parse_output_format(fig2_format);
      return cmd_fig2(model_from(fig2_model), cfg, out);
    }
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitInvariantViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace jrsp
