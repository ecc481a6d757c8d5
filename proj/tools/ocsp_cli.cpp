// ocsp: command-line front end for the OCSP streaming-hardness toolkit.
//
//   ocsp gen --dist yes --q 4 --n 10 --alpha 1/8 --T 40 --out inst.json
//   ocsp solve --in inst.json --exact
//   ocsp experiment no-trend --seed 7 --out trend.csv --threads 4
//
// Exit status is 0 iff every invariant the verb asserts held.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocsp/coarsening.hpp"
#include "ocsp/distributions.hpp"
#include "ocsp/error.hpp"
#include "ocsp/experiments.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/io.hpp"
#include "ocsp/irmd.hpp"
#include "ocsp/solvers.hpp"

namespace {

using ocsp::io::Json;

struct Globals {
  std::uint64_t seed = 1;
  std::string out = "-";
  int threads = 0;
};

void emit_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ocsp::Error(ocsp::Errc::parse_error, "cannot write " + path);
  out << text;
}

std::optional<ocsp::Permutation> optional_pi(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return ocsp::parse_permutation(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordering-CSP streaming hardness toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--out", g.out, "Output file, '-' for stdout")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "Sample a YES or NO instance");
  std::string dist = "no", gen_predicate = "MAS", gen_alpha = "1/8", gen_pi;
  int gen_q = 4, gen_n = 10, gen_T = 40;
  gen->add_option("--dist", dist)->check(CLI::IsMember({"yes", "no"}))->capture_default_str();
  gen->add_option("--q", gen_q)->capture_default_str();
  gen->add_option("--n", gen_n)->capture_default_str();
  gen->add_option("--alpha", gen_alpha)->capture_default_str();
  gen->add_option("--T", gen_T)->capture_default_str();
  gen->add_option("--pi", gen_pi, "Planted pattern in one-line notation, e.g. \"0 1\"");
  gen->add_option("--predicate", gen_predicate, "MAS, Btwn or k:rank,rank,...")->capture_default_str();
  int gen_k = 0;
  gen->add_option("--k", gen_k, "Checked against the predicate's arity");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance exactly or its q-coarsening");
  std::string solve_in;
  bool solve_exact = false, solve_coarse = false, solve_heuristic = false;
  int solve_q = 0;
  solve->add_option("--in", solve_in)->required();
  auto* exact_flag = solve->add_flag("--exact", solve_exact, "Branch and bound over orderings");
  auto* coarse_flag = solve->add_flag("--coarse", solve_coarse, "Branch and bound over [q]^n");
  solve->add_flag("--heuristic", solve_heuristic, "Local search over orderings");
  solve->add_option("--q", solve_q, "Alphabet for --coarse");
  exact_flag->excludes(coarse_flag);

  // baseline
  auto* base = app.add_subcommand("baseline", "Value of uniformly random orderings");
  std::string base_in;
  std::size_t base_trials = 10000;
  base->add_option("--in", base_in)->required();
  base->add_option("--trials", base_trials)->capture_default_str();

  // subsample
  auto* sub = app.add_subcommand("subsample", "Reservoir-sample s constraints and solve the sample");
  std::string sub_in;
  std::size_t sub_s = 20;
  sub->add_option("--in", sub_in)->required();
  sub->add_option("--s", sub_s)->capture_default_str();

  // coarsen
  auto* coarsen = app.add_subcommand("coarsen", "Describe the q-coarsening of a predicate");
  std::string coarsen_predicate = "MAS";
  int coarsen_q = 4;
  bool coarsen_table = false;
  coarsen->add_option("--predicate", coarsen_predicate)->capture_default_str();
  coarsen->add_option("--q", coarsen_q)->capture_default_str();
  coarsen->add_flag("--table", coarsen_table, "Emit the explicit table instead of the derived form");

  // expand-check
  auto* expand = app.add_subcommand("expand-check", "Certify small-set / small-partition expansion");
  std::string expand_in, expand_gamma = "1/2", expand_mode = "exact";
  int expand_q = 0;
  std::size_t expand_trials = 1000;
  expand->add_option("--in", expand_in)->required();
  expand->add_option("--gamma", expand_gamma)->capture_default_str();
  expand->add_option("--q", expand_q, "Check SPHE with q blocks (default: SSHE)");
  expand->add_option("--mode", expand_mode)->check(CLI::IsMember({"exact", "sample"}))->capture_default_str();
  expand->add_option("--trials", expand_trials, "Samples in --mode sample")->capture_default_str();

  // irmd-sim
  auto* irmd = app.add_subcommand("irmd-sim", "Run a streaming algorithm through the reduction");
  std::string irmd_case = "both", irmd_alg = "count-threshold", irmd_alpha = "1/4", irmd_predicate = "MAS", irmd_pi;
  int irmd_q = 4, irmd_n = 10, irmd_T = 20;
  std::size_t irmd_trials = 200;
  irmd->add_option("--case", irmd_case)->check(CLI::IsMember({"yes", "no", "both"}))->capture_default_str();
  irmd->add_option("--alg", irmd_alg)->check(CLI::IsMember(ocsp::builtin_algorithm_names()))->capture_default_str();
  irmd->add_option("--trials", irmd_trials)->capture_default_str();
  irmd->add_option("--q", irmd_q)->capture_default_str();
  irmd->add_option("--n", irmd_n)->capture_default_str();
  irmd->add_option("--alpha", irmd_alpha)->capture_default_str();
  irmd->add_option("--T", irmd_T)->capture_default_str();
  irmd->add_option("--predicate", irmd_predicate)->capture_default_str();
  irmd->add_option("--pi", irmd_pi);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a named experiment and write CSV");
  std::string exp_name;
  exp->add_option("name", exp_name)->required()->check(CLI::IsMember(ocsp::experiment_names()));
  std::optional<int> exp_q, exp_n, exp_T;
  std::optional<std::size_t> exp_trials, exp_constraints;
  std::optional<std::string> exp_alpha, exp_predicate, exp_pi, exp_gamma, exp_epsilon;
  std::vector<int> exp_qs;
  exp->add_option("--q", exp_q);
  exp->add_option("--n", exp_n);
  exp->add_option("--T", exp_T);
  exp->add_option("--alpha", exp_alpha);
  exp->add_option("--trials", exp_trials);
  exp->add_option("--predicate", exp_predicate);
  exp->add_option("--pi", exp_pi);
  exp->add_option("--gamma", exp_gamma);
  exp->add_option("--epsilon", exp_epsilon);
  exp->add_option("--qs", exp_qs)->delimiter(',');
  exp->add_option("--constraints", exp_constraints);

  // defaults
  auto* defaults = app.add_subcommand("defaults", "Constants derived from epsilon");
  std::string def_epsilon = "1/2", def_alpha, def_predicate = "MAS";
  defaults->add_option("--epsilon", def_epsilon)->capture_default_str();
  defaults->add_option("--alpha", def_alpha, "Defaults to 1/(2k)");
  defaults->add_option("--predicate", def_predicate)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  if (g.threads > 0) omp_set_num_threads(g.threads);

  try {
    if (*gen) {
      auto predicate = ocsp::io::parse_predicate_arg(gen_predicate);
      if (gen_k != 0 && gen_k != predicate.arity()) {
        throw ocsp::Error(ocsp::Errc::arity_mismatch, "--k differs from the predicate's arity");
      }
      auto pi = optional_pi(gen_pi);
      if (!pi) pi = predicate.support().front();
      ocsp::DistributionParams params{gen_q, gen_n, ocsp::parse_rational(gen_alpha), gen_T, pi, predicate};
      ocsp::Rng rng(g.seed);
      if (dist == "yes") {
        const auto sample = ocsp::sample_yes(params, rng);
        ocsp::io::write_json(g.out, ocsp::io::to_json(sample.instance));
        if (g.out != "-") {
          ocsp::io::write_json(ocsp::io::secret_path(g.out),
                               Json{{"hidden_partition", ocsp::io::to_json(sample.hidden_partition)},
                                    {"pi", ocsp::io::to_json(sample.pi)}});
        }
      } else {
        ocsp::io::write_json(g.out, ocsp::io::to_json(ocsp::sample_no(params, rng).instance));
      }
      return 0;
    }

    if (*solve) {
      const auto instance = ocsp::io::instance_from_json(ocsp::io::read_json_file(solve_in));
      auto run = [&] {
        if (solve_coarse) {
          if (solve_q < 1) throw ocsp::Error(ocsp::Errc::invalid_alphabet, "--coarse needs --q >= 1");
          return ocsp::solve_csp_exact(instance, ocsp::CoarsePredicate::coarsen(instance.predicate(), solve_q));
        }
        if (solve_heuristic) {
          ocsp::Rng rng(g.seed);
          return ocsp::solve_ocsp_local_search(instance, rng);
        }
        return ocsp::solve_ocsp_exact(instance);
      };
      ocsp::io::write_json(g.out, ocsp::io::to_json(run()));
      return 0;
    }

    if (*base) {
      const auto instance = ocsp::io::instance_from_json(ocsp::io::read_json_file(base_in));
      ocsp::Rng rng(g.seed);
      const auto est = ocsp::random_ordering_baseline(instance, base_trials, rng);
      const double rho = ocsp::to_double(ocsp::rho(instance.predicate()));
      const bool ok = std::abs(est.mean - rho) <= 3 * est.std_error + 1e-12;
      ocsp::io::write_json(g.out, Json{{"mean", est.mean},
                                       {"std_error", est.std_error},
                                       {"trials", est.trials},
                                       {"rho", rho},
                                       {"within_3_se", ok}});
      return ok ? 0 : 1;
    }

    if (*sub) {
      const auto instance = ocsp::io::instance_from_json(ocsp::io::read_json_file(sub_in));
      ocsp::Rng rng(g.seed);
      const auto report = ocsp::subsample_and_solve(instance.constraints(), instance.predicate(), sub_s, rng);
      ocsp::io::write_json(g.out, Json{{"estimate", ocsp::to_string(report.estimate)},
                                       {"estimate_float", ocsp::to_double(report.estimate)},
                                       {"mode", report.mode == ocsp::SolveMode::exact ? "exact" : "heuristic"},
                                       {"sample_size", report.sample_size},
                                       {"touched_vars", report.touched_vars},
                                       {"stream_length", report.stream_length}});
      return 0;
    }

    if (*coarsen) {
      const auto predicate = ocsp::io::parse_predicate_arg(coarsen_predicate);
      const auto f = ocsp::CoarsePredicate::coarsen(predicate, coarsen_q);
      Json j = coarsen_table ? Json{{"k", f.arity()}, {"q", f.alphabet()}, {"satisfied_base_q", f.satisfied_codes()}}
                             : ocsp::io::to_json(f);
      const auto w = ocsp::width(f);
      const auto bound = ocsp::Rational(1) - ocsp::Rational(predicate.arity() - 1, coarsen_q);
      Json report{{"predicate", j},
                  {"rho", ocsp::to_string(ocsp::random_assignment_value(f))},
                  {"width", ocsp::to_string(w)},
                  {"width_bound", ocsp::to_string(bound)}};
      ocsp::io::write_json(g.out, report);
      return w >= bound ? 0 : 1;
    }

    if (*expand) {
      const auto instance = ocsp::io::instance_from_json(ocsp::io::read_json_file(expand_in));
      const auto graph = ocsp::Hypergraph::of(instance);
      const auto gamma = ocsp::parse_rational(expand_gamma);
      ocsp::Rng rng(g.seed);
      const auto cert = expand_q > 0 ? (expand_mode == "exact" ? ocsp::sphe_certify(graph, gamma, expand_q)
                                                                : ocsp::sphe_sample(graph, gamma, expand_q, expand_trials, rng))
                                     : (expand_mode == "exact" ? ocsp::sshe_certify(graph, gamma)
                                                                : ocsp::sshe_sample(graph, gamma, expand_trials, rng));
      auto j = ocsp::io::to_json(cert);
      j["kind"] = expand_q > 0 ? "SPHE" : "SSHE";
      ocsp::io::write_json(g.out, j);
      return 0;
    }

    if (*irmd) {
      const auto predicate = ocsp::io::parse_predicate_arg(irmd_predicate);
      auto pi = optional_pi(irmd_pi);
      if (!pi) pi = predicate.support().front();
      const ocsp::IrmdParams params{irmd_q, predicate.arity(), irmd_n, ocsp::parse_rational(irmd_alpha), irmd_T};
      ocsp::Rng rng(g.seed);
      auto factory = [&] { return ocsp::make_builtin_algorithm(irmd_alg, predicate); };
      const auto est = ocsp::estimate_advantage(factory, params, *pi, irmd_trials, rng);
      Json j{{"algorithm", irmd_alg}, {"trials", est.trials}, {"max_state_bits", est.max_state_bits}};
      if (irmd_case != "no") {
        j["p_yes"] = est.p_yes;
        j["yes_interval"] = {est.yes_interval.low, est.yes_interval.high};
      }
      if (irmd_case != "yes") {
        j["p_no"] = est.p_no;
        j["no_interval"] = {est.no_interval.low, est.no_interval.high};
      }
      if (irmd_case == "both") {
        j["advantage"] = est.advantage;
        j["margin"] = est.margin;
      }
      ocsp::io::write_json(g.out, j);
      return 0;
    }

    if (*exp) {
      auto config = ocsp::default_config(exp_name);
      config.seed = g.seed;
      if (exp_q) config.q = *exp_q;
      if (exp_n) config.n = *exp_n;
      if (exp_T) config.rounds = *exp_T;
      if (exp_trials) config.trials = *exp_trials;
      if (exp_constraints) config.constraints = *exp_constraints;
      if (exp_alpha) config.alpha = ocsp::parse_rational(*exp_alpha);
      if (exp_predicate) config.predicate = *exp_predicate;
      if (exp_pi) config.pi = ocsp::parse_permutation(*exp_pi);
      if (exp_gamma) config.gamma = ocsp::parse_rational(*exp_gamma);
      if (exp_epsilon) config.epsilon = ocsp::parse_rational(*exp_epsilon);
      if (!exp_qs.empty()) config.qs = exp_qs;
      const auto result = ocsp::run_experiment(config);
      emit_text(g.out, result.csv);
      for (const auto& f : result.failures) std::cerr << "FAIL: " << f << '\n';
      std::cerr << (result.passed ? "all invariants held" : "invariant violations") << '\n';
      return result.passed ? 0 : 1;
    }

    if (*defaults) {
      const auto predicate = ocsp::io::parse_predicate_arg(def_predicate);
      const int k = predicate.arity();
      const auto alpha = def_alpha.empty() ? ocsp::Rational(1, 2 * k) : ocsp::parse_rational(def_alpha);
      const auto d = ocsp::derive_defaults(ocsp::parse_rational(def_epsilon), k, alpha, predicate);
      ocsp::io::write_json(g.out, d.to_json());
      return 0;
    }
  } catch (const ocsp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
