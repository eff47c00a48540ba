// Copyright 2026 The mulmin Authors.
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

// mulmin <solve|verify|scale|nashmap|gen|ensemble> [flags]
//
// Exit codes: 0 success, 1 invariant violation (verify), 2 unreadable or
// malformed input, 3 solver failure. See docs/cli.md.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mulmin/lp.h"
#include "mulmin/minimax.h"
#include "mulmin/multilinear.h"
#include "mulmin/nashmap.h"
#include "mulmin/oracle.h"
#include "mulmin/report.h"
#include "mulmin/scaling.h"
#include "mulmin/tensor.h"

namespace mulmin {
namespace {

constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PayoffTensor ReadGame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return LoadGame(buf.str());
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// Writes to `path`, or stdout when path is empty or "-".
void Emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

std::vector<double> ParseReals(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<int> ParseShape(const std::string& text) {
  std::vector<int> out;
  for (double v : ParseReals(text, ',')) {
    if (v != static_cast<int>(v) || v < 1) {
      throw InputError("shape entries must be positive integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// "p1;p2;..." with comma-separated probabilities per player.
MixedProfile ParseProfile(const std::string& text, const GameShape& shape) {
  std::vector<MixedStrategy> strategies;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    try {
      strategies.emplace_back(ParseReals(part, ','));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("bad start profile: ") + e.what());
    }
  }
  MixedProfile p(std::move(strategies));
  if (!p.Matches(shape)) {
    throw InputError("start profile does not match the game shape");
  }
  return p;
}

std::string Fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string FmtVector(const std::vector<double>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    out += (k ? ", " : "") + Fmt(v[k]);
  }
  return out + ")";
}

std::string FmtProfile(const MixedProfile& p) {
  std::string out;
  for (int i = 0; i < p.num_players(); ++i) {
    out += (i ? " " : "") + FmtVector(p[i].probs());
  }
  return out;
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string game;
  std::string format = "human";
  std::string output;
  std::string lp_dump;
  std::uint64_t oracle_budget = 4096;
};

int RunSolve(const SolveArgs& args) {
  const PayoffTensor t = ReadGame(args.game);
  if (!args.lp_dump.empty()) {
    Emit(args.lp_dump + ".primal.lp", WriteLpFormat(BuildPrimal(t)));
    Emit(args.lp_dump + ".dual.lp", WriteLpFormat(BuildDual(t)));
  }
  const MinimaxSolution s = SolveMinimax(t);
  const QualityReport quality = Quality(t, s.p_star);
  const BoundsReport bounds = ComputeBounds(t, s);

  std::vector<EquilibriumCertificate> certs;
  bool oracle_ran = false;
  if (SupportCombinationCount(t.shape()) <= args.oracle_budget) {
    certs = OracleEquilibria(t, args.oracle_budget);
    oracle_ran = true;
  }

  if (args.format == "machine") {
    Json refs = Json::array();
    for (const auto& c : certs) {
      refs.push_back(Json{{"certificate", ToJson(c)},
                          {"bounds", ToJson(ComputeBounds(t, s, c.profile))}});
    }
    Json report{{"schema", kReportSchema},
                {"command", "solve"},
                {"shape", t.shape().strategy_counts()},
                {"solution", ToJson(s)},
                {"quality", ToJson(quality)},
                {"bounds", ToJson(bounds)},
                {"oracle_ran", oracle_ran},
                {"oracle_references", refs}};
    Emit(args.output, Dump(report));
    return 0;
  }

  std::ostringstream out;
  out << "game            " << args.game << "\n"
      << "minimax value   " << Fmt(s.value) << "  (primal "
      << Fmt(s.primal_value) << ", gap " << Fmt(s.duality_gap) << ")\n"
      << "x*              " << FmtVector(s.x_star.weights()) << "\n"
      << "p* (derived)    " << FmtProfile(s.p_star) << "\n"
      << "support of q*   " << s.support_size << " (bound "
      << t.num_players() + 1 << ")\n"
      << "A_i[p*]         " << FmtVector(bounds.value_at_pstar) << "\n"
      << "A_0[x*,p*]      " << Fmt(bounds.selector_at_pstar) << "\n"
      << "value - min_i   " << Fmt(s.value - bounds.min_expected)
      << (bounds.equality_holds ? "" : "  ** equality violated **") << "\n"
      << "quality of p*   eps " << Fmt(quality.epsilon) << ", t "
      << (quality.t ? Fmt(*quality.t) : std::string("undefined")) << "\n";
  if (bounds.sigma_bound) {
    out << "sigma_n bound   " << Fmt(*bounds.sigma_bound) << "\n";
  }
  if (!oracle_ran) {
    out << "oracle          skipped (over budget)\n";
  }
  for (const auto& c : certs) {
    const BoundsReport b = ComputeBounds(t, s, c.profile);
    out << "equilibrium     " << FmtProfile(c.profile) << " ["
        << CertificateKindName(c.kind) << "]\n"
        << "  A_0[x*,p_eq]  " << Fmt(b.reference->selector_value)
        << " <= " << Fmt(s.value)
        << (b.reference->bound1_holds ? "  ok" : "  VIOLATED") << "\n";
    if (b.reference->bound2_slack) {
      out << "  sigma_n       " << Fmt(b.reference->sigma)
          << " <= " << Fmt(*b.sigma_bound)
          << (*b.reference->bound2_holds ? "  ok" : "  VIOLATED") << "\n";
    }
  }
  Emit(args.output, out.str());
  return 0;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string game;
  std::string format = "human";
  std::string output;
  int samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t oracle_budget = 4096;
};

int RunVerify(const VerifyArgs& args) {
  const PayoffTensor t = ReadGame(args.game);
  const MinimaxSolution s = SolveMinimax(t);
  const int n = t.num_players();

  struct Check {
    std::string name;
    bool passed;
    double measure;
  };
  std::vector<Check> checks;
  checks.push_back({"duality_gap", s.duality_gap <= kDualityGapTolerance,
                    s.duality_gap});
  const SaddleCheck saddle = VerifySaddle(t, s, args.samples, args.seed);
  checks.push_back({"saddle", saddle.passed, saddle.worst_violation});
  const BoundsReport bounds = ComputeBounds(t, s);
  checks.push_back(
      {"value_equals_min_payoff", bounds.equality_holds,
       bounds.equality_residual});
  checks.push_back({"support_size", s.support_size <= n + 1,
                    static_cast<double>(s.support_size)});
  double worst_marginal = 0.0;
  for (const auto& st : s.p_star.strategies()) {
    double sum = 0.0;
    for (double v : st.probs()) {
      sum += v;
      worst_marginal = std::max(worst_marginal, -v);
    }
    worst_marginal = std::max(worst_marginal, std::abs(sum - 1.0));
  }
  checks.push_back({"derived_point", worst_marginal <= 1e-12, worst_marginal});

  if (SupportCombinationCount(t.shape()) <= args.oracle_budget) {
    double worst_bound1 = 0.0;
    double worst_bound2 = 0.0;
    double worst_fixed = 0.0;
    bool bound1 = true;
    bool bound2 = true;
    bool fixed = true;
    for (const auto& c : OracleEquilibria(t, args.oracle_budget)) {
      const BoundsReport b = ComputeBounds(t, s, c.profile);
      bound1 = bound1 && b.reference->bound1_holds;
      worst_bound1 = std::min(worst_bound1, b.reference->bound1_slack);
      if (b.reference->bound2_holds) {
        bound2 = bound2 && *b.reference->bound2_holds;
        worst_bound2 = std::min(worst_bound2, *b.reference->bound2_slack);
      }
      const MixedProfile next = NashMapStep(t, c.profile);
      const double moved = internal::MaxDifference(next, c.profile);
      const double residual = NashResidual(t, c.profile);
      fixed = fixed && moved <= kCertificateResidual &&
              residual <= kCertificateResidual;
      worst_fixed = std::max({worst_fixed, moved, residual});
    }
    checks.push_back({"bound1", bound1, worst_bound1});
    checks.push_back({"bound2", bound2, worst_bound2});
    checks.push_back({"nash_map_fixed_point", fixed, worst_fixed});
  }

  bool all = true;
  for (const auto& c : checks) all = all && c.passed;
  if (args.format == "machine") {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back(
          Json{{"name", c.name}, {"passed", c.passed}, {"measure", c.measure}});
    }
    Emit(args.output, Dump(Json{{"schema", kReportSchema},
                                {"command", "verify"},
                                {"passed", all},
                                {"checks", arr},
                                {"saddle", ToJson(saddle)}}));
  } else {
    std::ostringstream out;
    for (const auto& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(26)
          << c.name << Fmt(c.measure) << "\n";
    }
    out << (all ? "all checks passed\n" : "some checks FAILED\n");
    Emit(args.output, out.str());
  }
  return all ? 0 : kExitViolation;
}

// ---------------------------------------------------------------- scale

struct ScaleArgs {
  std::string game;
  std::string d0;
  std::optional<std::uint64_t> random_d;
  int traces = 1;
  int iters = 100;
  double conv_tol = 1e-9;
  double pos_tol = 1e-9;
  std::string output;
};

int RunScale(const ScaleArgs& args) {
  const PayoffTensor t = ReadGame(args.game);
  const int n = t.num_players();
  ScalingOptions options;
  options.max_iters = args.iters;
  options.conv_tol = args.conv_tol;
  options.pos_tol = args.pos_tol;

  std::vector<SelectorWeights> starts;
  if (args.random_d) {
    Rng rng(*args.random_d);
    for (int k = 0; k < args.traces; ++k) {
      starts.push_back(RandomInteriorWeights(rng, n, args.pos_tol));
    }
  } else if (!args.d0.empty()) {
    try {
      starts.emplace_back(ParseReals(args.d0, ','));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("bad --d0: ") + e.what());
    }
    if (starts.back().size() != n || !starts.back().strictly_positive()) {
      throw InputError("--d0 needs " + std::to_string(n) +
                       " strictly positive weights");
    }
  } else {
    starts.push_back(SelectorWeights::Uniform(n));
  }

  std::ostringstream csv;
  std::ostringstream summary;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const ScalingTrace trace = ScalingIterate(t, starts[k], options);
    std::ostringstream one;
    WriteScalingCsv(trace, n, one);
    std::istringstream lines(one.str());
    std::string line;
    bool header = true;
    while (std::getline(lines, line)) {
      if (starts.size() > 1) {
        if (header && k > 0) {
          header = false;
          continue;
        }
        csv << (header ? std::string("trace") : std::to_string(k)) << ',';
      }
      csv << line << '\n';
      header = false;
    }
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      const ScalingStep& step = trace.steps[s];
      summary << "trace " << k << " step " << s << ": value "
              << Fmt(step.solution.value) << ", t "
              << (step.quality.t ? Fmt(*step.quality.t) : "undefined")
              << ", eps " << Fmt(step.quality.epsilon);
      if (step.d_next) {
        summary << ", d' " << FmtVector(step.d_next->weights())
                << ", bound rhs " << Fmt(step.bound_rhs);
      }
      summary << "\n";
    }
    summary << "trace " << k << " stop: "
            << ScalingStopName(trace.stop_reason) << "\n";
  }
  Emit(args.output, csv.str());
  std::cerr << summary.str();
  return 0;
}

// -------------------------------------------------------------- nashmap

struct NashMapArgs {
  std::string game;
  std::string start;
  int iters = 10000;
  double tol = 1e-9;
  std::string output;
};

int RunNashMap(const NashMapArgs& args) {
  const PayoffTensor t = ReadGame(args.game);
  MixedProfile p0 = args.start.empty() ? MixedProfile::Uniform(t.shape())
                                       : ParseProfile(args.start, t.shape());
  const NashMapTrace trace = IterateNashMap(t, std::move(p0), args.iters,
                                            args.tol);
  std::ostringstream csv;
  WriteNashMapCsv(trace, csv);
  Emit(args.output, csv.str());
  std::cerr << (trace.converged ? "converged" : "not converged") << " after "
            << trace.iterations << " steps, residual "
            << Fmt(trace.final_state.residual) << ", profile "
            << FmtProfile(trace.final_state.profile) << "\n";
  return 0;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string shape;
  std::uint64_t seed = 0;
  double lo = -1.0;
  double hi = 1.0;
  std::string output;
};

int RunGen(const GenArgs& args) {
  PayoffTensor t = [&] {
    try {
      return RandomGame(GameShape(ParseShape(args.shape)), args.seed, args.lo,
                        args.hi);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  Emit(args.output, SaveGame(t));
  return 0;
}

// ------------------------------------------------------------- ensemble

struct EnsembleArgs {
  std::string shape;
  int count = 100;
  std::uint64_t seed = 0;
  std::string mode = "solve";
  double lo = -1.0;
  double hi = 1.0;
  std::string output;
};

int RunEnsemble(const EnsembleArgs& args) {
  GameShape shape = [&] {
    try {
      return GameShape(ParseShape(args.shape));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  if (!(args.lo < args.hi)) throw InputError("need --lo < --hi");
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatReal17(*v) : std::string();
  };
  std::ostringstream csv;
  if (args.mode == "solve") {
    csv << "game,seed,value,t,t_defined,eps,support_size,duality_gap\n";
  } else {
    csv << "game,seed,steps,stop_reason,value,t,t_defined,eps,support_size,"
           "duality_gap\n";
  }
  for (int k = 0; k < args.count; ++k) {
    const std::uint64_t game_seed = DeriveSeed(args.seed, k);
    const PayoffTensor t = RandomGame(shape, game_seed, args.lo, args.hi);
    csv << k << ',' << game_seed << ',';
    if (args.mode == "solve") {
      const MinimaxSolution s = SolveMinimax(t);
      const QualityReport q = Quality(t, s.p_star);
      csv << FormatReal17(s.value) << ',' << opt(q.t) << ','
          << (q.all_t_defined ? 1 : 0) << ',' << FormatReal17(q.epsilon)
          << ',' << s.support_size << ',' << FormatReal17(s.duality_gap)
          << '\n';
    } else {
      const ScalingTrace trace =
          ScalingIterate(t, SelectorWeights::Uniform(t.num_players()));
      const ScalingStep& last = trace.steps.back();
      csv << trace.steps.size() << ',' << ScalingStopName(trace.stop_reason)
          << ',' << FormatReal17(last.solution.value) << ','
          << opt(last.quality.t) << ',' << (last.quality.all_t_defined ? 1 : 0)
          << ',' << FormatReal17(last.quality.epsilon) << ','
          << last.solution.support_size << ','
          << FormatReal17(last.solution.duality_gap) << '\n';
    }
  }
  Emit(args.output, csv.str());
  return 0;
}

}  // namespace
}  // namespace mulmin

int main(int argc, char** argv) {
  using namespace mulmin;
  CLI::App app{"mulmin: approximate Nash equilibria via multilinear minimax"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve the minimax LP pair");
  solve_cmd->add_option("game", solve.game, ".mmg game file")->required();
  solve_cmd->add_option("--format", solve.format, "human | machine")
      ->check(CLI::IsMember({"human", "machine"}));
  solve_cmd->add_option("-o,--output", solve.output, "output file");
  solve_cmd->add_option("--lp-dump", solve.lp_dump,
                        "write PREFIX.primal.lp and PREFIX.dual.lp");
  solve_cmd->add_option("--oracle-budget", solve.oracle_budget,
                        "max support combinations for the oracle");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "check all invariants");
  verify_cmd->add_option("game", verify.game, ".mmg game file")->required();
  verify_cmd->add_option("--format", verify.format, "human | machine")
      ->check(CLI::IsMember({"human", "machine"}));
  verify_cmd->add_option("-o,--output", verify.output, "output file");
  verify_cmd->add_option("--samples", verify.samples, "random saddle samples")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", verify.seed, "sampling seed");
  verify_cmd->add_option("--oracle-budget", verify.oracle_budget,
                         "max support combinations for the oracle");

  ScaleArgs scale;
  std::uint64_t random_d = 0;
  auto* scale_cmd = app.add_subcommand("scale", "diagonal scaling iteration");
  scale_cmd->add_option("game", scale.game, ".mmg game file")->required();
  auto* d0_opt =
      scale_cmd->add_option("--d0", scale.d0, "comma-separated start weights");
  auto* rd_opt = scale_cmd->add_option("--random-d", random_d,
                                       "seed for random start weights");
  d0_opt->excludes(rd_opt);
  scale_cmd->add_option("--traces", scale.traces,
                        "number of random starts (with --random-d)")
      ->check(CLI::PositiveNumber);
  scale_cmd->add_option("--iters", scale.iters, "max iterations")
      ->check(CLI::PositiveNumber);
  scale_cmd->add_option("--conv-tol", scale.conv_tol)
      ->check(CLI::PositiveNumber);
  scale_cmd->add_option("--pos-tol", scale.pos_tol)->check(CLI::PositiveNumber);
  scale_cmd->add_option("-o,--output", scale.output, "CSV output file");

  NashMapArgs nashmap;
  auto* nm_cmd = app.add_subcommand("nashmap", "iterate the gain map");
  nm_cmd->add_option("game", nashmap.game, ".mmg game file")->required();
  nm_cmd->add_option("--start", nashmap.start,
                     "start profile, e.g. \"1,0;0.5,0.5\" (default uniform)");
  nm_cmd->add_option("--iters", nashmap.iters, "max iterations")
      ->check(CLI::NonNegativeNumber);
  nm_cmd->add_option("--tol", nashmap.tol, "residual tolerance")
      ->check(CLI::PositiveNumber);
  nm_cmd->add_option("-o,--output", nashmap.output, "CSV output file");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random game");
  gen_cmd->add_option("--shape", gen.shape, "e.g. 2,3,2")->required();
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--lo", gen.lo);
  gen_cmd->add_option("--hi", gen.hi);
  gen_cmd->add_option("-o,--output", gen.output, "output .mmg file");

  EnsembleArgs ensemble;
  auto* ens_cmd = app.add_subcommand("ensemble", "solve many random games");
  ens_cmd->add_option("--shape", ensemble.shape, "e.g. 2,2")->required();
  ens_cmd->add_option("--count", ensemble.count)->check(CLI::PositiveNumber);
  ens_cmd->add_option("--seed", ensemble.seed);
  ens_cmd->add_option("--mode", ensemble.mode, "solve | scale")
      ->check(CLI::IsMember({"solve", "scale"}));
  ens_cmd->add_option("--lo", ensemble.lo);
  ens_cmd->add_option("--hi", ensemble.hi);
  ens_cmd->add_option("-o,--output", ensemble.output, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*verify_cmd) return RunVerify(verify);
    if (*scale_cmd) {
      if (*rd_opt) scale.random_d = random_d;
      return RunScale(scale);
    }
    if (*nm_cmd) return RunNashMap(nashmap);
    if (*gen_cmd) return RunGen(gen);
    if (*ens_cmd) return RunEnsemble(ensemble);
  } catch (const InputError& e) {
    std::cerr << "mulmin: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "mulmin: solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
