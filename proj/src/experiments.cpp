#include "ocsp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "ocsp/coarsening.hpp"
#include "ocsp/distributions.hpp"
#include "ocsp/error.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/irmd.hpp"
#include "ocsp/solvers.hpp"

namespace ocsp {
namespace {

using Json = nlohmann::json;

// Runs fn(i) for i in [0, count) across threads; results come back in index
// order and the lowest-index exception, if any, is rethrown.
template <typename Row>
std::vector<Row> run_trials(std::size_t count, const std::function<Row(std::size_t)>& fn) {
  std::vector<Row> rows(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string fixed(double x) { return fmt::format("{:.6f}", x); }

std::string header(const ExperimentConfig& config, std::string_view columns) {
  std::string out;
  out += fmt::format("# experiment: {}\n", config.name);
  out += fmt::format("# config: {}\n", config.to_json().dump());
  out += fmt::format("# config_hash: {:016x}\n", config_hash(config));
  out += fmt::format(
      "# versions: ocsp={0} core-ocsp={0} coarsening={0} hypergraphs={0} hard-distributions={0} solvers={0} "
      "irmd-reduction={0} harness-cli={0}\n",
      kVersion);
  out += columns;
  out += '\n';
  return out;
}

std::string opt_rational(const std::optional<Rational>& r) { return r ? to_string(*r) : "NA"; }
std::string opt_float(const std::optional<Rational>& r) { return r ? fixed(to_double(*r)) : "NA"; }

DistributionParams distribution(const ExperimentConfig& config, int q, int rounds) {
  return {q, config.n, config.alpha, rounds, config.resolved_pi(), config.resolved_predicate()};
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nan("");
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------------------

ExperimentResult value_gap(const ExperimentConfig& config) {
  if (config.n > kExactOcspMaxVars) throw Error(Errc::invalid_params, "value-gap needs n <= 10");
  if (config.trials < 1) throw Error(Errc::invalid_params, "value-gap needs trials >= 1");
  const auto params = distribution(config, config.q, config.rounds);
  params.validate(true);
  const int k = params.arity();
  const Rational bound = Rational(1) - Rational(k - 1, config.q);

  struct Row {
    std::size_t yes_m = 0, no_m = 0;
    std::optional<Rational> yes_val, shift_val, no_val;
  };
  auto rows = run_trials<Row>(config.trials, [&](std::size_t t) {
    Rng rng(Rng::derive(config.seed, t));
    Row row;
    const auto yes = sample_yes(params, rng);
    row.yes_m = yes.instance.num_constraints();
    if (row.yes_m > 0) {
      row.yes_val = solve_ocsp_exact(yes.instance).optimum;
      row.shift_val = best_shifted_assignment(yes).value;
    }
    const auto no = sample_no(params, rng);
    row.no_m = no.instance.num_constraints();
    if (row.no_m > 0) row.no_val = solve_ocsp_exact(no.instance).optimum;
    return row;
  });

  ExperimentResult result;
  result.csv = header(config, "trial,case,m,value,value_float,shift_value,bound_ok");
  std::vector<double> yes_values, no_values;
  std::size_t yes_ok = 0, yes_counted = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    std::string ok = "NA";
    if (r.yes_val) {
      const bool pass = *r.yes_val >= bound && *r.shift_val >= bound;
      ok = pass ? "1" : "0";
      ++yes_counted;
      yes_ok += pass ? 1 : 0;
      yes_values.push_back(to_double(*r.yes_val));
      if (!pass) result.failures.push_back(fmt::format("trial {}: YES value below 1-(k-1)/q", t));
    }
    result.csv += fmt::format("{},yes,{},{},{},{},{}\n", t, r.yes_m, opt_rational(r.yes_val), opt_float(r.yes_val),
                              opt_rational(r.shift_val), ok);
    if (r.no_val) no_values.push_back(to_double(*r.no_val));
    result.csv += fmt::format("{},no,{},{},{},NA,NA\n", t, r.no_m, opt_rational(r.no_val), opt_float(r.no_val));
  }
  result.summary = {{"bound", to_double(bound)},
                    {"yes_mean", mean_of(yes_values)},
                    {"no_mean", mean_of(no_values)},
                    {"yes_trials_with_constraints", yes_counted},
                    {"no_trials_with_constraints", no_values.size()},
                    {"yes_bound_ok", yes_ok}};
  result.csv += fmt::format("# summary: yes_mean={} no_mean={} yes_bound_ok={}/{}\n", fixed(mean_of(yes_values)),
                            fixed(mean_of(no_values)), yes_ok, yes_counted);
  return result;
}

ExperimentResult expansion(const ExperimentConfig& config) {
  const auto params = distribution(config, config.q, config.rounds);
  params.validate(false);
  const Rational factor = Rational(2) / config.gamma + 1;

  struct Row {
    std::size_t m = 0;
    Rational sshe, sphe;
  };
  auto rows = run_trials<Row>(config.trials, [&](std::size_t t) {
    Rng rng(Rng::derive(config.seed, t));
    const auto no = sample_no(params, rng);
    Row row;
    row.m = no.instance.num_constraints();
    if (row.m > 0) {
      const auto g = Hypergraph::of(no.instance);
      row.sshe = sshe_certify(g, config.gamma).delta_min;
      row.sphe = sphe_certify(g, config.gamma, config.q).delta_min;
    }
    return row;
  });

  ExperimentResult result;
  result.csv = header(config, "trial,m,delta_sshe,delta_sphe,sphe_bound,relation_ok");
  std::size_t ok_count = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    const bool ok = r.sphe <= r.sshe * factor;
    ok_count += ok ? 1 : 0;
    if (!ok) result.failures.push_back(fmt::format("trial {}: delta_SPHE exceeds delta_SSHE(2/gamma+1)", t));
    result.csv += fmt::format("{},{},{},{},{},{}\n", t, r.m, to_string(r.sshe), to_string(r.sphe),
                              to_string(r.sshe * factor), ok ? 1 : 0);
  }
  result.summary = {{"relation_ok", ok_count}, {"trials", rows.size()}};
  return result;
}

ExperimentResult sphe_gap(const ExperimentConfig& config) {
  if (config.gamma * config.q < 2) throw Error(Errc::invalid_params, "sphe-gap needs q >= 2/gamma");
  const auto params = distribution(config, config.q, config.rounds);
  params.validate(false);
  const auto f = CoarsePredicate::coarsen(params.predicate, config.q);

  struct Row {
    std::size_t m = 0;
    Rational val, csp, delta;
  };
  auto rows = run_trials<Row>(config.trials, [&](std::size_t t) {
    Rng rng(Rng::derive(config.seed, t));
    const auto no = sample_no(params, rng);
    Row row;
    row.m = no.instance.num_constraints();
    if (row.m > 0) {
      row.val = solve_ocsp_exact(no.instance).optimum;
      row.csp = solve_csp_exact(no.instance, f).optimum;
      row.delta = sphe_certify(Hypergraph::of(no.instance), config.gamma, config.q).delta_min;
    }
    return row;
  });

  ExperimentResult result;
  result.csv = header(config, "trial,m,val,coarse_val,delta_sphe,gap_ok");
  std::size_t ok_count = 0, counted = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& r = rows[t];
    if (r.m == 0) {
      result.csv += fmt::format("{},0,NA,NA,NA,NA\n", t);
      continue;
    }
    ++counted;
    const bool ok = r.val <= r.csp + r.delta;
    ok_count += ok ? 1 : 0;
    if (!ok) result.failures.push_back(fmt::format("trial {}: val exceeds coarse value + delta_SPHE", t));
    result.csv += fmt::format("{},{},{},{},{},{}\n", t, r.m, to_string(r.val), to_string(r.csp), to_string(r.delta),
                              ok ? 1 : 0);
  }
  result.summary = {{"gap_ok", ok_count}, {"trials_with_constraints", counted}};
  return result;
}

ExperimentResult reduction_equivalence(const ExperimentConfig& config) {
  const auto predicate = config.resolved_predicate();
  const auto pi = config.resolved_pi();
  const IrmdParams params{config.q, predicate.arity(), config.n, config.alpha, config.rounds};

  ExperimentResult result;
  result.csv = header(config, "test,case,k,q,cases,failures,statistic,dof,p_value,ok");
  std::uint64_t emission_failures = 0;
  for (int k = 2; k <= 3; ++k) {
    for (int q = k; q <= 5; ++q) {
      const auto check = verify_emission_law(k, q);
      emission_failures += check.failures;
      result.csv += fmt::format("emission,both,{},{},{},{},NA,NA,NA,{}\n", k, q, check.cases, check.failures,
                                check.failures == 0 ? 1 : 0);
      if (check.failures) result.failures.push_back(fmt::format("emission law fails at k={}, q={}", k, q));
    }
  }
  constexpr double kRejectBelow = 1e-3;
  Json chi = Json::object();
  for (int side = 0; side < 2; ++side) {
    const auto which = side == 0 ? IrmdCase::yes : IrmdCase::no;
    Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(side)));
    const auto test = reduction_fingerprint_test(params, predicate, pi, which, config.trials, rng);
    const bool ok = test.p_value >= kRejectBelow;
    if (!ok) result.failures.push_back(fmt::format("fingerprint test rejects in the {} case", to_string(which)));
    result.csv += fmt::format("chi_square,{},{},{},{},NA,{},{},{},{}\n", to_string(which), params.k, params.q,
                              config.trials, fixed(test.statistic), test.dof, fixed(test.p_value), ok ? 1 : 0);
    chi[std::string(to_string(which))] = {{"statistic", test.statistic}, {"dof", test.dof}, {"p_value", test.p_value}};
  }
  result.summary = {{"emission_failures", emission_failures}, {"chi_square", chi}};
  return result;
}

ExperimentResult no_trend(const ExperimentConfig& config) {
  if (config.n > kExactOcspMaxVars) throw Error(Errc::invalid_params, "no-trend needs n <= 10");
  if (config.qs.empty()) throw Error(Errc::invalid_params, "no-trend needs at least one q");
  const auto rounds = scaled_rounds(config);
  const auto predicate = config.resolved_predicate();
  const std::size_t per_q = config.trials;

  struct Row {
    std::size_t m = 0;
    std::optional<Rational> val;
  };
  auto rows = run_trials<Row>(per_q * config.qs.size(), [&](std::size_t i) {
    const auto qi = i / per_q;
    const auto t = i % per_q;
    Rng rng(Rng::derive(Rng::derive(config.seed, qi), t));
    const DistributionParams params{config.qs[qi], config.n, config.alpha, rounds[qi], std::nullopt, predicate};
    const auto no = sample_no(params, rng);
    Row row;
    row.m = no.instance.num_constraints();
    if (row.m > 0) row.val = solve_ocsp_exact(no.instance).optimum;
    return row;
  });

  ExperimentResult result;
  result.csv = header(config, "q,T,trial,m,value,value_float");
  std::vector<double> means;
  Json per_q_json = Json::array();
  for (std::size_t qi = 0; qi < config.qs.size(); ++qi) {
    std::vector<double> values;
    for (std::size_t t = 0; t < per_q; ++t) {
      const auto& r = rows[qi * per_q + t];
      if (r.val) values.push_back(to_double(*r.val));
      result.csv += fmt::format("{},{},{},{},{},{}\n", config.qs[qi], rounds[qi], t, r.m, opt_rational(r.val),
                                opt_float(r.val));
    }
    means.push_back(mean_of(values));
    per_q_json.push_back({{"q", config.qs[qi]}, {"T", rounds[qi]}, {"mean", means.back()}, {"samples", values.size()}});
    result.csv += fmt::format("# summary: q={} T={} mean={} samples={}\n", config.qs[qi], rounds[qi],
                              fixed(means.back()), values.size());
  }
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (!(means[i] < means[i - 1])) {
      result.failures.push_back(fmt::format("mean NO value not decreasing from q={} to q={}", config.qs[i - 1],
                                            config.qs[i]));
    }
  }
  // Calibrated band for the last alphabet in the sweep.
  const double low = to_double(rho(predicate));
  const double high = low + 0.25;
  if (!(means.back() >= low && means.back() <= high)) {
    result.failures.push_back(fmt::format("mean NO value {} at q={} outside [{}, {}]", fixed(means.back()),
                                          config.qs.back(), fixed(low), fixed(high)));
  }
  result.summary = {{"per_q", per_q_json}, {"band", {low, high}}};
  return result;
}

ExperimentResult edge_count(const ExperimentConfig& config) {
  const auto params = distribution(config, config.q, config.rounds);
  params.validate(true);
  if (config.trials < 2) throw Error(Errc::invalid_params, "edge-count needs trials >= 2");
  const double N = static_cast<double>(params.edges_per_matching()) * params.rounds;
  const double p = 1.0 / std::pow(static_cast<double>(config.q), params.arity());
  const double mu = N * p;
  const double var = N * p * (1 - p);
  const double mu4 = var * (1 + 3 * (N - 2) * p * (1 - p));
  const double S = static_cast<double>(config.trials);

  auto counts = run_trials<std::pair<std::size_t, std::size_t>>(config.trials, [&](std::size_t t) {
    Rng yes_rng(Rng::derive(config.seed, 2 * t));
    Rng no_rng(Rng::derive(config.seed, 2 * t + 1));
    return std::make_pair(sample_yes(params, yes_rng).instance.num_constraints(),
                          sample_no(params, no_rng).instance.num_constraints());
  });

  ExperimentResult result;
  result.csv = header(config,
                      "case,samples,mean,variance,expected_mean,expected_variance,mean_tolerance,variance_tolerance,ok");
  Json summary = Json::object();
  for (int side = 0; side < 2; ++side) {
    double sum = 0, sum_sq = 0;
    for (const auto& c : counts) {
      const double m = static_cast<double>(side == 0 ? c.first : c.second);
      sum += m;
      sum_sq += m * m;
    }
    const double mean = sum / S;
    const double sample_var = (sum_sq - S * mean * mean) / (S - 1);
    const double mean_tol = 3 * std::sqrt(var / S);
    const double var_tol = 3 * std::sqrt((mu4 - var * var) / S);
    const bool ok = std::abs(mean - mu) <= mean_tol && std::abs(sample_var - var) <= var_tol;
    const char* name = side == 0 ? "yes" : "no";
    if (!ok) result.failures.push_back(fmt::format("{} constraint count outside 3 sigma of the binomial law", name));
    result.csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", name, config.trials, fixed(mean), fixed(sample_var),
                              fixed(mu), fixed(var), fixed(mean_tol), fixed(var_tol), ok ? 1 : 0);
    summary[name] = {{"mean", mean}, {"variance", sample_var}, {"ok", ok}};
  }
  summary["expected_mean"] = mu;
  summary["expected_variance"] = var;
  result.summary = summary;
  return result;
}

ExperimentResult width_table(const ExperimentConfig& config) {
  ExperimentResult result;
  result.csv = header(config, "predicate,k,q,width,bound,meets_bound,mas_equality");
  Json rows = Json::array();
  for (const auto& predicate : {OrderingPredicate::mas(), OrderingPredicate::betweenness()}) {
    const int k = predicate.arity();
    for (int q = 1; q <= 8; ++q) {
      const auto w = width(CoarsePredicate::coarsen(predicate, q));
      const Rational bound = Rational(1) - Rational(k - 1, q);
      const bool meets = w >= bound;
      std::string equality = "NA";
      if (k == 2) {
        const bool eq = w == bound;
        equality = eq ? "1" : "0";
        if (!eq) result.failures.push_back(fmt::format("MAS width at q={} differs from 1-1/q", q));
      }
      if (!meets) result.failures.push_back(fmt::format("{} width at q={} below bound", *predicate.name(), q));
      result.csv += fmt::format("{},{},{},{},{},{},{}\n", *predicate.name(), k, q, to_string(w), to_string(bound),
                                meets ? 1 : 0, equality);
      rows.push_back({{"predicate", *predicate.name()}, {"q", q}, {"width", to_string(w)}});
    }
  }
  result.summary = {{"rows", rows}};
  return result;
}

ExperimentResult baseline(const ExperimentConfig& config) {
  constexpr std::size_t kInstances = 4;
  const auto predicate = config.resolved_predicate();
  const double target = to_double(rho(predicate));
  ExperimentResult result;
  result.csv = header(config, "instance,m,trials,mean,std_error,rho,z,ok");
  Json rows = Json::array();
  for (std::size_t i = 0; i < kInstances; ++i) {
    Rng rng(Rng::derive(config.seed, i));
    const auto instance = random_instance(config.n, predicate, config.constraints, rng);
    const auto est = random_ordering_baseline(instance, config.trials, rng);
    const double z = est.std_error > 0 ? (est.mean - target) / est.std_error : 0.0;
    const bool ok = std::abs(est.mean - target) <= 3 * est.std_error;
    if (!ok) result.failures.push_back(fmt::format("instance {}: baseline {} not within 3 SE of rho", i, fixed(est.mean)));
    result.csv += fmt::format("{},{},{},{},{},{},{},{}\n", i, instance.num_constraints(), est.trials, fixed(est.mean),
                              fixed(est.std_error), fixed(target), fixed(z), ok ? 1 : 0);
    rows.push_back({{"mean", est.mean}, {"std_error", est.std_error}, {"ok", ok}});
  }
  result.summary = {{"rho", target}, {"instances", rows}};
  return result;
}

using Runner = ExperimentResult (*)(const ExperimentConfig&);

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> runners{
      {"value-gap", value_gap}, {"expansion", expansion}, {"sphe-gap", sphe_gap},
      {"reduction-equivalence", reduction_equivalence}, {"no-trend", no_trend}, {"edge-count", edge_count},
      {"width", width_table}, {"baseline", baseline}};
  return runners;
}

}  // namespace

OrderingPredicate ExperimentConfig::resolved_predicate() const { return named_predicate(predicate); }

Permutation ExperimentConfig::resolved_pi() const {
  if (pi) return *pi;
  return resolved_predicate().support().front();
}

Json ExperimentConfig::to_json() const {
  return Json{{"name", name},
              {"predicate", predicate},
              {"q", q},
              {"n", n},
              {"alpha", to_string(alpha)},
              {"T", rounds},
              {"pi", to_string(resolved_pi())},
              {"trials", trials},
              {"seed", seed},
              {"gamma", to_string(gamma)},
              {"epsilon", to_string(epsilon)},
              {"qs", qs},
              {"constraints", constraints}};
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> names;
  for (const auto& [name, runner] : registry()) names.push_back(name);
  return names;
}

ExperimentConfig default_config(const std::string& name) {
  if (!registry().count(name)) throw Error(Errc::invalid_params, "unknown experiment '" + name + "'");
  ExperimentConfig c;
  c.name = name;
  if (name == "expansion") {
    c.q = 3;
    c.n = 8;
    c.alpha = Rational(1, 4);
    c.rounds = 20;
  } else if (name == "sphe-gap") {
    c.q = 4;
    c.n = 8;
    c.alpha = Rational(1, 4);
    c.rounds = 80;
  } else if (name == "reduction-equivalence") {
    c.q = 3;
    c.n = 6;
    c.alpha = Rational(1, 3);
    c.rounds = 4;
    c.trials = 10000;
  } else if (name == "no-trend") {
    c.alpha = Rational(1, 4);
    // 60/480/2880 rounds: m ~ 30/60/90 at n = 10, enough for the q = 8 mean
    // to settle under rho + 1/4.
    c.rounds = 60;
  } else if (name == "edge-count") {
    c.n = 200;
    c.alpha = Rational(1, 4);
    c.rounds = 8;
    c.trials = 10000;
  } else if (name == "baseline") {
    c.trials = 10000;
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto it = registry().find(config.name);
  if (it == registry().end()) throw Error(Errc::invalid_params, "unknown experiment '" + config.name + "'");
  auto result = it->second(config);
  result.passed = result.failures.empty();
  return result;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.to_json().dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Json DefaultParams::to_json() const {
  return Json{{"epsilon", to_string(epsilon)},  {"k", k},
              {"alpha", to_string(alpha)},      {"q0", q0},
              {"alpha0", to_string(alpha0)},    {"gamma", to_string(gamma)},
              {"eta", to_string(eta)},          {"delta", to_string(delta)},
              {"delta_prime", to_string(delta_prime)}, {"T0", t0}};
}

double t0_formula(int k, double q, double gamma, double eta, double rho_value, double alpha) {
  const double qk = std::pow(q, k);
  const double first = 4 * std::log(2.0) * qk / (gamma * gamma * alpha);
  const double second = 8 * (rho_value + eta) * qk * std::log(q) / (eta * eta * alpha);
  return std::max(first, second);
}

DefaultParams derive_defaults(const Rational& epsilon, int k, const Rational& alpha, const OrderingPredicate& predicate) {
  if (epsilon <= 0 || epsilon >= 1) throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1)");
  if (k < 2) throw Error(Errc::invalid_params, "k must be >= 2");
  if (alpha <= 0 || alpha * (2 * k) > 1) throw Error(Errc::invalid_params, "alpha must lie in (0, 1/(2k)]");
  DefaultParams d;
  d.epsilon = epsilon;
  d.k = k;
  d.alpha = alpha;
  const Rational q0 = Rational(192 * k * k) / epsilon;
  d.q0 = static_cast<std::uint64_t>((q0.numerator() + q0.denominator() - 1) / q0.denominator());
  d.alpha0 = Rational(1, 2 * k);
  d.gamma = epsilon / (96 * k * k);
  d.eta = epsilon / 4;
  d.delta = Rational(8 * k * k) * d.gamma * d.gamma;
  d.delta_prime = Rational(24 * k * k) * d.gamma;
  d.t0 = t0_formula(k, static_cast<double>(d.q0), to_double(d.gamma), to_double(d.eta), to_double(rho(predicate)),
                    to_double(alpha));
  return d;
}

std::vector<int> scaled_rounds(const ExperimentConfig& config) {
  const auto predicate = config.resolved_predicate();
  const int k = predicate.arity();
  const double eta = to_double(config.epsilon) / 4;
  const double r = to_double(rho(predicate));
  const double a = to_double(config.alpha);
  auto t0 = [&](int q) { return t0_formula(k, q, 2.0 / q, eta, r, a); };
  const double base = t0(config.qs.front());
  std::vector<int> out;
  for (int q : config.qs) out.push_back(static_cast<int>(std::lround(config.rounds * t0(q) / base)));
  return out;
}

}  // namespace ocsp
