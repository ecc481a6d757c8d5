#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ocsp/coarsening.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"
#include "ocsp/rng.hpp"

namespace ocsp {

/// Parameters of the planted (YES) and uniform (NO) instance distributions.
struct DistributionParams {
  int q = 2;
  int n = 0;
  Rational alpha{1, 2};
  int rounds = 1;
  /// Planted pattern; required for YES sampling, ignored for NO.
  std::optional<Permutation> pi;
  OrderingPredicate predicate = OrderingPredicate::mas();

  int arity() const noexcept { return predicate.arity(); }
  /// floor(alpha * n)
  std::size_t edges_per_matching() const;

  /// InvalidParams unless alpha in (0, 1/k], q >= 1, rounds >= 1, and (for
  /// YES) pi is present, lies in supp(Pi) and k <= q.
  void validate(bool planted) const;
};

/// A YES draw together with everything hidden from a streaming algorithm.
struct YesSample {
  OcspInstance instance;
  Partition hidden_partition;
  std::vector<Hypergraph> matchings;
  /// kept[t][i]: edge i of matching t made it into the instance.
  std::vector<std::vector<bool>> kept;
  Permutation pi;
};

struct NoSample {
  OcspInstance instance;
  std::vector<Hypergraph> matchings;
  std::vector<std::vector<bool>> kept;
};

/// (l, l+1, ..., l+k-1) mod q.
Tuple contiguous_tuple(int q, int k, int ell);

/// result[i] = a[pi^{-1}(i)].
Tuple permute_tuple(std::span<const int> a, const Permutation& pi);

/// The unique l with b|_j = (v^(l))_pi, if any.
std::optional<int> identifier(const Partition& b, std::span<const int> j, const Permutation& pi);

/// Uniform b; T independent hypermatchings; each edge whose labels match a
/// permuted contiguous pattern is kept with probability 1/q. Constraints are
/// streamed matching by matching, edges in sampled order.
YesSample sample_yes(const DistributionParams& params, Rng& rng);

/// Same skeleton, b discarded; every edge kept with probability 1/q^k.
NoSample sample_no(const DistributionParams& params, Rng& rng);

/// m constraints, each a uniformly random k-tuple of distinct variables.
OcspInstance random_instance(int n, const OrderingPredicate& predicate, std::size_t m, Rng& rng);

struct ShiftResult {
  int shift = 0;
  Rational value;
};

/// Best of the q shifted hidden partitions b + t under the q-coarsening of
/// Pi; smallest t wins ties. EmptyInstance when the sample has no constraints.
ShiftResult best_shifted_assignment(const YesSample& sample);

}  // namespace ocsp
