#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"

namespace ocsp {

/// Throws IndexOutOfRange / DuplicateEntries / ArityMismatch when `j` is not
/// a k-tuple of distinct indices in [n].
void validate_tuple(std::span<const int> j, int k, int n);

/// Max-OCSP instance: n variables and a multiset of constraints, each a
/// k-tuple of distinct variables, all judged by one predicate. Zero
/// constraints is a legal instance; its value is undefined.
class OcspInstance {
 public:
  OcspInstance(int n, OrderingPredicate predicate, std::vector<Tuple> constraints);

  int num_vars() const noexcept { return n_; }
  int arity() const noexcept { return predicate_.arity(); }
  const OrderingPredicate& predicate() const noexcept { return predicate_; }
  const std::vector<Tuple>& constraints() const noexcept { return constraints_; }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }

 private:
  int n_;
  OrderingPredicate predicate_;
  std::vector<Tuple> constraints_;
};

/// Pi(ord(sigma|_j)).
bool evaluate_constraint(const OrderingPredicate& predicate, const Permutation& sigma,
                         std::span<const int> j);

std::size_t count_satisfied(const OcspInstance& instance, const Permutation& sigma);

/// Fraction of constraints satisfied by sigma. EmptyInstance when m = 0.
Rational value(const OcspInstance& instance, const Permutation& sigma);

}  // namespace ocsp
