#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"

namespace ocsp {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string name;
  std::string predicate = "MAS";
  int q = 4;
  int n = 10;
  Rational alpha{1, 8};
  int rounds = 40;
  /// Planted pattern; defaults to the first element of supp(Pi).
  std::optional<Permutation> pi;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  Rational gamma{1, 2};
  Rational epsilon{1, 2};
  /// Alphabet sweep and base round count for no-trend.
  std::vector<int> qs{2, 4, 8};
  /// Constraints per random instance (baseline).
  std::size_t constraints = 50;

  OrderingPredicate resolved_predicate() const;
  Permutation resolved_pi() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> experiment_names();

/// Settings each experiment runs with unless overridden.
ExperimentConfig default_config(const std::string& name);

struct ExperimentResult {
  std::string csv;
  bool passed = true;
  std::vector<std::string> failures;
  nlohmann::json summary;
};

/// Fully determined by the config; thread count does not affect the output.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// FNV-1a over the serialized config.
std::uint64_t config_hash(const ExperimentConfig& config);

struct DefaultParams {
  Rational epsilon;
  int k = 2;
  Rational alpha;
  std::uint64_t q0 = 0;
  Rational alpha0;
  Rational gamma;
  Rational eta;
  Rational delta;
  Rational delta_prime;
  /// Evaluated at q = q0.
  double t0 = 0;

  nlohmann::json to_json() const;
};

/// Constants from the NO-value argument. InvalidEpsilon unless 0 < eps < 1;
/// InvalidParams if alpha > 1/(2k).
DefaultParams derive_defaults(const Rational& epsilon, int k, const Rational& alpha, const OrderingPredicate& predicate);

/// max{4 ln2 q^k / (gamma^2 alpha), 8 (rho + eta) q^k ln q / (eta^2 alpha)}.
double t0_formula(int k, double q, double gamma, double eta, double rho, double alpha);

/// Round counts for the no-trend sweep: rounds * T0(q) / T0(qs[0]) with
/// gamma = 2/q (the smallest gamma the alphabet supports) and eta = eps/4.
std::vector<int> scaled_rounds(const ExperimentConfig& config);

}  // namespace ocsp
