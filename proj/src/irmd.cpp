#include "ocsp/irmd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <boost/math/distributions/chi_squared.hpp>

#include "ocsp/distributions.hpp"
#include "ocsp/error.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/solvers.hpp"

namespace ocsp {
namespace {

template <typename T>
void append_raw(std::string& out, const T& value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

std::uint64_t fnv1a(const std::vector<Tuple>& constraints) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& c : constraints) {
    for (int v : c) {
      h ^= static_cast<std::uint64_t>(v) + 1;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  return h;
}

class ConstantAlgorithm final : public StreamingAlgorithm {
 public:
  std::string name() const override { return "constant"; }
  void init(int, const IrmdParams&) override {}
  void ingest(std::span<const int>) override {}
  bool finish() override { return false; }
  std::string serialize_state() const override { return {}; }
  std::optional<std::uint64_t> state_bound_bits() const override { return 0; }
};

class CountThreshold final : public StreamingAlgorithm {
 public:
  std::string name() const override { return "count-threshold"; }
  void init(int, const IrmdParams&) override { count_ = 0; }
  void ingest(std::span<const int>) override { ++count_; }
  bool finish() override { return count_ >= 1; }
  std::string serialize_state() const override {
    std::string s;
    append_raw(s, count_);
    return s;
  }
  std::optional<std::uint64_t> state_bound_bits() const override { return 64; }

 private:
  std::uint64_t count_ = 0;
};

// Adds 2p - (k-1) to the score of the vertex in slot p. Consistent orderings
// pile up signed mass; the output compares sum(score^2) with its value under
// independent signs.
class DegreeSketch final : public StreamingAlgorithm {
 public:
  std::string name() const override { return "degree-sketch"; }
  void init(int n, const IrmdParams& params) override {
    k_ = params.k;
    score_.assign(static_cast<std::size_t>(n), 0);
    count_ = 0;
  }
  void ingest(std::span<const int> constraint) override {
    for (std::size_t p = 0; p < constraint.size(); ++p) {
      score_[static_cast<std::size_t>(constraint[p])] += 2 * static_cast<int>(p) - (k_ - 1);
    }
    ++count_;
  }
  bool finish() override {
    std::int64_t energy = 0;
    for (auto s : score_) energy += static_cast<std::int64_t>(s) * s;
    std::int64_t per_constraint = 0;
    for (int p = 0; p < k_; ++p) per_constraint += static_cast<std::int64_t>(2 * p - (k_ - 1)) * (2 * p - (k_ - 1));
    return count_ > 0 && energy > static_cast<std::int64_t>(count_) * per_constraint;
  }
  std::string serialize_state() const override {
    std::string s;
    append_raw(s, count_);
    for (auto v : score_) append_raw(s, v);
    return s;
  }
  std::optional<std::uint64_t> state_bound_bits() const override { return 64 + 32 * score_.size(); }

 private:
  int k_ = 2;
  std::vector<std::int32_t> score_;
  std::uint64_t count_ = 0;
};

class ExactTracker final : public StreamingAlgorithm {
 public:
  explicit ExactTracker(OrderingPredicate predicate) : predicate_(std::move(predicate)) {}
  std::string name() const override { return "exact-tracker"; }
  void init(int n, const IrmdParams& params) override {
    n_ = n;
    params_ = params;
    stored_.clear();
  }
  void ingest(std::span<const int> constraint) override { stored_.emplace_back(constraint.begin(), constraint.end()); }
  bool finish() override {
    if (stored_.empty()) return false;
    OcspInstance instance(n_, predicate_, stored_);
    Rational v;
    if (n_ <= kExactOcspMaxVars) {
      v = solve_ocsp_exact(instance).optimum;
    } else {
      Rng rng(fnv1a(stored_));
      v = solve_ocsp_local_search(instance, rng).optimum;
    }
    const Rational threshold = (Rational(1) - Rational(params_.k - 1, params_.q) + rho(predicate_)) / 2;
    return v >= threshold;
  }
  std::string serialize_state() const override {
    std::string s;
    for (const auto& c : stored_) {
      for (int v : c) append_raw(s, static_cast<std::int32_t>(v));
    }
    return s;
  }
  std::optional<std::uint64_t> state_bound_bits() const override { return std::nullopt; }

 private:
  OrderingPredicate predicate_;
  int n_ = 0;
  IrmdParams params_;
  std::vector<Tuple> stored_;
};

std::size_t fingerprint(std::vector<Tuple> constraints) {
  constexpr std::size_t kCountCap = 3;
  constexpr std::size_t kHashBuckets = 4;
  const auto m = std::min(constraints.size(), kCountCap);
  if (m == 0) return 0;
  std::sort(constraints.begin(), constraints.end());
  return 1 + (m - 1) * kHashBuckets + static_cast<std::size_t>(fnv1a(constraints) % kHashBuckets);
}

constexpr std::size_t kFingerprintCategories = 1 + 3 * 4;

}  // namespace

std::string_view to_string(IrmdCase c) noexcept { return c == IrmdCase::yes ? "yes" : "no"; }

std::size_t IrmdParams::edges_per_player() const { return matching_edge_count(n, alpha); }

void IrmdParams::validate() const {
  if (q < 1) throw Error(Errc::invalid_params, "q must be >= 1");
  if (k < 2 || k > kMaxArity) throw Error(Errc::invalid_params, "k must lie in [2, 10]");
  if (n < 0) throw Error(Errc::invalid_params, "n must be >= 0");
  if (players < 1) throw Error(Errc::invalid_params, "need at least one player");
  if (alpha <= 0 || alpha * k >= 1) throw Error(Errc::invalid_params, "alpha must lie in (0, 1/k)");
}

Tuple masked_block(std::span<const int> b_edge, std::span<const int> y, int q) {
  if (b_edge.size() != y.size()) throw Error(Errc::length_mismatch, "mask and block lengths differ");
  Tuple z(b_edge.size());
  for (std::size_t p = 0; p < z.size(); ++p) z[p] = (b_edge[p] + y[p]) % q;
  return z;
}

IrmdInstance sample_irmd(const IrmdParams& params, IrmdCase which, Rng& rng) {
  params.validate();
  const auto base = rng.next();
  const auto q = static_cast<std::uint64_t>(params.q);
  Rng partition_rng(Rng::derive(base, 0));
  std::vector<int> labels(static_cast<std::size_t>(params.n));
  for (auto& l : labels) l = static_cast<int>(partition_rng.uniform(q));
  Partition b(params.q, std::move(labels));

  std::vector<PlayerInput> players;
  players.reserve(static_cast<std::size_t>(params.players));
  Tuple b_edge(static_cast<std::size_t>(params.k));
  Tuple y(static_cast<std::size_t>(params.k));
  for (int t = 0; t < params.players; ++t) {
    Rng player_rng(Rng::derive(base, static_cast<std::uint64_t>(t) + 1));
    auto g = sample_hypermatching(params.n, params.k, params.edges_per_player(), player_rng);
    std::vector<Tuple> z;
    z.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
      for (int p = 0; p < params.k; ++p) b_edge[static_cast<std::size_t>(p)] = b[e[static_cast<std::size_t>(p)]];
      if (which == IrmdCase::yes) {
        std::fill(y.begin(), y.end(), static_cast<int>(player_rng.uniform(q)));
      } else {
        for (auto& v : y) v = static_cast<int>(player_rng.uniform(q));
      }
      z.push_back(masked_block(b_edge, y, params.q));
    }
    players.push_back({std::move(g), std::move(z)});
  }
  return {params, std::move(b), std::move(players), which};
}

std::vector<Tuple> reduction_emit(const PlayerInput& input, const Permutation& pi, int q) {
  const int k = input.matching.arity();
  if (pi.size() != k) throw Error(Errc::arity_mismatch, "pi arity differs from the matching");
  if (k > q) throw Error(Errc::invalid_params, "reduction needs k <= q");
  const auto pattern = permute_tuple(contiguous_tuple(q, k, 0), pi);
  std::vector<Tuple> emitted;
  for (std::size_t i = 0; i < input.z.size(); ++i) {
    if (static_cast<int>(input.z[i].size()) != k) throw Error(Errc::arity_mismatch, "z block has the wrong length");
    if (input.z[i] == pattern) emitted.push_back(input.matching.edges()[i]);
  }
  return emitted;
}

std::unique_ptr<StreamingAlgorithm> make_builtin_algorithm(std::string_view name, const OrderingPredicate& predicate) {
  if (name == "constant") return std::make_unique<ConstantAlgorithm>();
  if (name == "count-threshold") return std::make_unique<CountThreshold>();
  if (name == "degree-sketch") return std::make_unique<DegreeSketch>();
  if (name == "exact-tracker") return std::make_unique<ExactTracker>(predicate);
  throw Error(Errc::invalid_params, "unknown algorithm '" + std::string(name) + "'");
}

std::vector<std::string> builtin_algorithm_names() {
  return {"constant", "count-threshold", "degree-sketch", "exact-tracker"};
}

ReductionOutcome run_reduction(StreamingAlgorithm& alg, const IrmdInstance& instance, const Permutation& pi) {
  const auto& params = instance.params;
  alg.init(params.n, params);
  ReductionOutcome outcome;
  auto probe = [&] {
    const auto bits = static_cast<std::uint64_t>(alg.serialize_state().size()) * 8;
    outcome.max_state_bits = std::max(outcome.max_state_bits, bits);
    const auto bound = alg.state_bound_bits();
    if (bound && bits > *bound) {
      throw Error(Errc::state_bound_exceeded,
                  alg.name() + " state is " + std::to_string(bits) + " bits, bound " + std::to_string(*bound));
    }
  };
  probe();
  for (const auto& player : instance.players) {
    for (const auto& c : reduction_emit(player, pi, params.q)) {
      alg.ingest(c);
      ++outcome.constraints;
      probe();
    }
  }
  outcome.output = alg.finish();
  return outcome;
}

Interval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw Error(Errc::invalid_params, "Wilson interval needs trials >= 1");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

AdvantageEstimate estimate_advantage(const AlgorithmFactory& factory, const IrmdParams& params,
                                     const Permutation& pi, std::size_t trials, Rng& rng) {
  if (trials < 2) throw Error(Errc::invalid_params, "advantage estimation needs trials >= 2");
  params.validate();
  const auto base = rng.next();
  std::uint64_t yes_ones = 0;
  std::uint64_t no_ones = 0;
  std::uint64_t max_bits = 0;
  const auto count = static_cast<std::int64_t>(trials);

#pragma omp parallel for schedule(dynamic, 4) reduction(+ : yes_ones, no_ones) reduction(max : max_bits)
  for (std::int64_t t = 0; t < count; ++t) {
    auto alg = factory();
    for (int side = 0; side < 2; ++side) {
      const auto which = side == 0 ? IrmdCase::yes : IrmdCase::no;
      Rng trial_rng(Rng::derive(base, 2 * static_cast<std::uint64_t>(t) + static_cast<std::uint64_t>(side)));
      const auto instance = sample_irmd(params, which, trial_rng);
      const auto outcome = run_reduction(*alg, instance, pi);
      max_bits = std::max(max_bits, outcome.max_state_bits);
      if (outcome.output) (side == 0 ? yes_ones : no_ones) += 1;
    }
  }

  AdvantageEstimate est;
  est.trials = trials;
  est.p_yes = static_cast<double>(yes_ones) / static_cast<double>(trials);
  est.p_no = static_cast<double>(no_ones) / static_cast<double>(trials);
  est.advantage = std::abs(est.p_yes - est.p_no);
  est.yes_interval = wilson_interval(yes_ones, trials);
  est.no_interval = wilson_interval(no_ones, trials);
  est.margin = (est.yes_interval.high - est.yes_interval.low) / 2 + (est.no_interval.high - est.no_interval.low) / 2;
  est.max_state_bits = max_bits;
  return est;
}

Rational emission_probability(IrmdCase which, std::span<const int> b_edge, const Permutation& pi, int q) {
  const int k = pi.size();
  if (static_cast<int>(b_edge.size()) != k) throw Error(Errc::arity_mismatch, "block and pi arity differ");
  Tuple vertices(static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) vertices[static_cast<std::size_t>(p)] = p;
  PlayerInput input{Hypergraph(k, k, {vertices}), {Tuple{}}};

  std::uint64_t masks = 1;
  if (which == IrmdCase::no) {
    for (int p = 0; p < k; ++p) masks *= static_cast<std::uint64_t>(q);
  } else {
    masks = static_cast<std::uint64_t>(q);
  }
  std::uint64_t emitted = 0;
  Tuple y(static_cast<std::size_t>(k));
  for (std::uint64_t code = 0; code < masks; ++code) {
    if (which == IrmdCase::no) {
      y = decode_base_q(code, k, q);
    } else {
      std::fill(y.begin(), y.end(), static_cast<int>(code));
    }
    input.z[0] = masked_block(b_edge, y, q);
    emitted += reduction_emit(input, pi, q).size();
  }
  return make_ratio(emitted, masks);
}

EmissionCheck verify_emission_law(int k, int q) {
  if (k < 2 || k > 3 || q < k || q > 5) throw Error(Errc::invalid_params, "emission check needs 2 <= k <= 3, k <= q <= 5");
  EmissionCheck check;
  std::uint64_t qk = 1;
  for (int p = 0; p < k; ++p) qk *= static_cast<std::uint64_t>(q);
  Tuple vertices(static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) vertices[static_cast<std::size_t>(p)] = p;
  for (std::uint64_t r = 0; r < factorial(k); ++r) {
    const auto pi = Permutation::unrank(k, r);
    for (std::uint64_t code = 0; code < qk; ++code) {
      const auto b_edge = decode_base_q(code, k, q);
      const Partition b(q, b_edge);
      const Rational yes_expected = identifier(b, vertices, pi) ? Rational(1, q) : Rational(0);
      check.cases += 2;
      if (emission_probability(IrmdCase::yes, b_edge, pi, q) != yes_expected) ++check.failures;
      if (emission_probability(IrmdCase::no, b_edge, pi, q) != make_ratio(1, qk)) ++check.failures;
    }
  }
  return check;
}

ChiSquareResult two_sample_chi_square(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                      std::uint64_t min_pooled) {
  if (a.size() != b.size()) throw Error(Errc::length_mismatch, "category vectors differ in length");
  std::vector<std::pair<double, double>> cells;
  std::pair<double, double> pooled{0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] + b[i] >= min_pooled) {
      cells.emplace_back(static_cast<double>(a[i]), static_cast<double>(b[i]));
    } else {
      pooled.first += static_cast<double>(a[i]);
      pooled.second += static_cast<double>(b[i]);
    }
  }
  if (pooled.first + pooled.second > 0) cells.push_back(pooled);
  double na = 0;
  double nb = 0;
  for (auto [x, y] : cells) {
    na += x;
    nb += y;
  }
  ChiSquareResult result;
  result.categories = cells.size();
  if (na == 0 || nb == 0 || cells.size() < 2) return result;
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  for (auto [x, y] : cells) {
    const double d = ka * x - kb * y;
    result.statistic += d * d / (x + y);
  }
  result.dof = static_cast<int>(cells.size()) - 1;
  const boost::math::chi_squared_distribution<double> dist(result.dof);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

ChiSquareResult reduction_fingerprint_test(const IrmdParams& params, const OrderingPredicate& predicate,
                                           const Permutation& pi, IrmdCase which, std::size_t trials, Rng& rng) {
  params.validate();
  if (predicate.arity() != params.k) throw Error(Errc::arity_mismatch, "predicate arity differs from k");
  if (trials == 0) throw Error(Errc::invalid_params, "need at least one trial");
  DistributionParams dist{params.q, params.n, params.alpha, params.players, pi, predicate};
  dist.validate(which == IrmdCase::yes);

  const auto base = rng.next();
  std::vector<std::size_t> reduced(trials);
  std::vector<std::size_t> direct(trials);
  const auto count = static_cast<std::int64_t>(trials);

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < count; ++t) {
    const auto i = static_cast<std::size_t>(t);
    Rng irmd_rng(Rng::derive(base, 2 * i));
    const auto instance = sample_irmd(params, which, irmd_rng);
    std::vector<Tuple> emitted;
    for (const auto& player : instance.players) {
      for (auto& c : reduction_emit(player, pi, params.q)) emitted.push_back(std::move(c));
    }
    reduced[i] = fingerprint(std::move(emitted));

    Rng direct_rng(Rng::derive(base, 2 * i + 1));
    auto constraints = which == IrmdCase::yes ? sample_yes(dist, direct_rng).instance.constraints()
                                              : sample_no(dist, direct_rng).instance.constraints();
    direct[i] = fingerprint(std::move(constraints));
  }

  std::vector<std::uint64_t> a(kFingerprintCategories, 0);
  std::vector<std::uint64_t> b(kFingerprintCategories, 0);
  for (auto f : reduced) ++a[f];
  for (auto f : direct) ++b[f];
  return two_sample_chi_square(a, b);
}

}  // namespace ocsp
