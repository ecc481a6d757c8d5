#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocsp/coarsening.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"
#include "ocsp/rng.hpp"

namespace ocsp {

enum class IrmdCase { yes, no };

std::string_view to_string(IrmdCase c) noexcept;

struct IrmdParams {
  int q = 2;
  int k = 2;
  int n = 0;
  Rational alpha{1, 4};
  int players = 1;

  std::size_t edges_per_player() const;
  /// InvalidParams unless q >= 1, k >= 2, n >= 0, players >= 1 and
  /// 0 < alpha < 1/k.
  void validate() const;
};

/// What player t sees. z[i] is the masked image of b on edge i of the
/// matching: z[i][p] = b[edge[p]] + y[i][p] (mod q). Row r of the implicit
/// matrix M_t selects vertex edges[r / k][r % k].
struct PlayerInput {
  Hypergraph matching;
  std::vector<Tuple> z;
};

struct IrmdInstance {
  IrmdParams params;
  Partition hidden_partition;
  std::vector<PlayerInput> players;
  IrmdCase which = IrmdCase::yes;
};

/// b|_edge + y (mod q).
Tuple masked_block(std::span<const int> b_edge, std::span<const int> y, int q);

IrmdInstance sample_irmd(const IrmdParams& params, IrmdCase which, Rng& rng);

/// Edges i with z[i] = (v^(0))_pi, in matching order.
std::vector<Tuple> reduction_emit(const PlayerInput& input, const Permutation& pi, int q);

/// A one-pass streaming algorithm. The state must serialize to at most
/// state_bound_bits() bits at every point between constraints; nullopt
/// declares an unbounded reference algorithm.
class StreamingAlgorithm {
 public:
  virtual ~StreamingAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual void init(int n, const IrmdParams& params) = 0;
  virtual void ingest(std::span<const int> constraint) = 0;
  virtual bool finish() = 0;
  virtual std::string serialize_state() const = 0;
  virtual std::optional<std::uint64_t> state_bound_bits() const = 0;
};

using AlgorithmFactory = std::function<std::unique_ptr<StreamingAlgorithm>()>;

/// "constant" (always 0), "count-threshold" (1 iff a constraint arrived),
/// "degree-sketch" (signed per-vertex position counts), "exact-tracker"
/// (stores everything, thresholds the exact value).
std::unique_ptr<StreamingAlgorithm> make_builtin_algorithm(std::string_view name, const OrderingPredicate& predicate);
std::vector<std::string> builtin_algorithm_names();

struct ReductionOutcome {
  bool output = false;
  std::size_t constraints = 0;
  std::uint64_t max_state_bits = 0;
};

/// Players 0..T-1 in turn emit their constraints into the algorithm; the
/// state is serialized after init and after every constraint.
ReductionOutcome run_reduction(StreamingAlgorithm& alg, const IrmdInstance& instance, const Permutation& pi);

struct Interval {
  double low = 0;
  double high = 0;
};

/// Wilson score interval at 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials);

struct AdvantageEstimate {
  double advantage = 0;
  double p_yes = 0;
  double p_no = 0;
  Interval yes_interval;
  Interval no_interval;
  /// Sum of the two interval half-widths.
  double margin = 0;
  std::size_t trials = 0;
  std::uint64_t max_state_bits = 0;
};

AdvantageEstimate estimate_advantage(const AlgorithmFactory& factory, const IrmdParams& params,
                                     const Permutation& pi, std::size_t trials, Rng& rng);

/// Exact probability, over the mask, that an edge whose hidden labels are
/// b_edge is emitted.
Rational emission_probability(IrmdCase which, std::span<const int> b_edge, const Permutation& pi, int q);

struct EmissionCheck {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
};

/// All b_edge in [q]^k and pi in S_k against 1/q, 0 and 1/q^k.
/// Guarded to 2 <= k <= 3, k <= q <= 5.
EmissionCheck verify_emission_law(int k, int q);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  std::size_t categories = 0;
};

/// Pearson two-sample test on category counts. Categories with fewer than
/// `min_pooled` observations in total are merged.
ChiSquareResult two_sample_chi_square(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                      std::uint64_t min_pooled = 10);

/// Compares reduction outputs on IRMD draws with sample_yes / sample_no
/// draws through a coarse fingerprint (constraint count, hash of the sorted
/// constraint list). pi must lie in supp(predicate).
ChiSquareResult reduction_fingerprint_test(const IrmdParams& params, const OrderingPredicate& predicate,
                                           const Permutation& pi, IrmdCase which, std::size_t trials, Rng& rng);

}  // namespace ocsp
