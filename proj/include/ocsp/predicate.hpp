#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocsp/permutation.hpp"
#include "ocsp/rational.hpp"

namespace ocsp {

/// Pi: S_k -> {0,1}, stored as a membership table over lexicographic ranks.
class OrderingPredicate {
 public:
  OrderingPredicate(int k, std::vector<std::uint64_t> satisfied_ranks);

  /// [0 1] is the only accepted pattern.
  static OrderingPredicate mas();
  /// [0 1 2] and [2 1 0].
  static OrderingPredicate betweenness();
  static OrderingPredicate all(int k);
  static OrderingPredicate from_support(int k, const std::vector<Permutation>& support);

  int arity() const noexcept { return k_; }
  bool accepts_rank(std::uint64_t rank) const noexcept { return table_[rank] != 0; }
  bool accepts(const Permutation& p) const;

  /// Sorted, duplicate-free.
  const std::vector<std::uint64_t>& satisfied_ranks() const noexcept { return ranks_; }
  std::vector<Permutation> support() const;

  /// "MAS" or "Btwn" when the predicate coincides with a named one.
  std::optional<std::string> name() const;

  friend bool operator==(const OrderingPredicate& a, const OrderingPredicate& b) {
    return a.k_ == b.k_ && a.ranks_ == b.ranks_;
  }

 private:
  int k_;
  std::vector<std::uint8_t> table_;
  std::vector<std::uint64_t> ranks_;
};

/// Fraction of S_k accepted: the value of a uniformly random ordering.
Rational rho(const OrderingPredicate& predicate);

/// "MAS" / "Btwn" (case-insensitive, "betweenness" also accepted).
OrderingPredicate named_predicate(std::string_view name);

}  // namespace ocsp
