#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ocsp/coarsening.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/rational.hpp"
#include "ocsp/rng.hpp"

namespace ocsp {

enum class SolveMode { exact, heuristic };

struct SolveReport {
  Rational optimum;
  /// Ordering for OCSP solves, assignment for coarsened-CSP solves.
  std::variant<Permutation, Partition> witness;
  /// Search nodes (B&B) or candidate solutions (brute force) visited.
  std::uint64_t explored = 0;
  SolveMode mode = SolveMode::exact;
};

inline constexpr int kExactOcspMaxVars = 10;
inline constexpr std::uint64_t kExactCspLimit = 10'000'000;

/// Exact val over S_n by branch and bound. Variables are placed left to
/// right; a constraint dies as soon as its placed slots cannot be extended
/// to an accepted pattern. The first two placement levels are sharded across
/// OpenMP threads. Ties go to the ordering whose left-to-right variable list
/// is lexicographically smallest, independent of thread count.
SolveReport solve_ocsp_exact(const OcspInstance& instance);

/// Exact max over b in [q]^n of csp_value, branch and bound over variables
/// in index order, sharded on the first two labels. Ties go to the
/// lexicographically smallest b.
SolveReport solve_csp_exact(const OcspInstance& instance, const CoarsePredicate& f);

/// Adjacent-transposition hill climbing from `restarts` random orderings.
SolveReport solve_ocsp_local_search(const OcspInstance& instance, Rng& rng, int restarts = 20);

struct Estimate {
  double mean = 0;
  double std_error = 0;
  std::size_t trials = 0;
};

/// Monte-Carlo value of a uniformly random ordering.
Estimate random_ordering_baseline(const OcspInstance& instance, std::size_t trials, Rng& rng);

/// Uniform sample without replacement of fixed size from a stream of unknown
/// length (reservoir sampling).
class ConstraintReservoir {
 public:
  ConstraintReservoir(std::size_t capacity, Rng& rng);

  void offer(std::span<const int> constraint);

  const std::vector<Tuple>& sample() const noexcept { return reservoir_; }
  std::size_t seen() const noexcept { return seen_; }

 private:
  std::size_t capacity_;
  Rng& rng_;
  std::size_t seen_ = 0;
  std::vector<Tuple> reservoir_;
};

struct SubsampleReport {
  Rational estimate;
  SolveMode mode = SolveMode::exact;
  std::size_t sample_size = 0;
  std::size_t touched_vars = 0;
  std::size_t stream_length = 0;
};

/// Reservoir-samples s constraints, restricts to the variables they touch and
/// solves that instance: exactly when at most kExactOcspMaxVars variables are
/// touched, else by local search (reported as heuristic).
SubsampleReport subsample_and_solve(std::span<const Tuple> stream, const OrderingPredicate& predicate,
                                    std::size_t sample_size, Rng& rng);

}  // namespace ocsp
