#include "ocsp/instance.hpp"

#include <array>

#include "ocsp/error.hpp"

namespace ocsp {

void validate_tuple(std::span<const int> j, int k, int n) {
  if (static_cast<int>(j.size()) != k) {
    throw Error(Errc::arity_mismatch, "tuple of length " + std::to_string(j.size()) +
                                          ", expected " + std::to_string(k));
  }
  for (std::size_t a = 0; a < j.size(); ++a) {
    if (j[a] < 0 || j[a] >= n) {
      throw Error(Errc::index_out_of_range, "variable " + std::to_string(j[a]) + " not in [" +
                                                std::to_string(n) + "]");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (j[a] == j[b]) throw Error(Errc::duplicate_entries, "repeated variable in constraint");
    }
  }
}

OcspInstance::OcspInstance(int n, OrderingPredicate predicate, std::vector<Tuple> constraints)
    : n_(n), predicate_(std::move(predicate)), constraints_(std::move(constraints)) {
  if (n < 0) throw Error(Errc::invalid_params, "negative variable count");
  for (const auto& c : constraints_) validate_tuple(c, predicate_.arity(), n_);
}

bool evaluate_constraint(const OrderingPredicate& predicate, const Permutation& sigma,
                         std::span<const int> j) {
  validate_tuple(j, predicate.arity(), sigma.size());
  std::array<int, kMaxArity> restricted{};
  for (std::size_t i = 0; i < j.size(); ++i) restricted[i] = sigma[j[i]];
  return predicate.accepts_rank(ord_rank(std::span<const int>(restricted.data(), j.size())));
}

std::size_t count_satisfied(const OcspInstance& instance, const Permutation& sigma) {
  if (sigma.size() != instance.num_vars()) {
    throw Error(Errc::length_mismatch, "ordering size differs from variable count");
  }
  std::size_t satisfied = 0;
  for (const auto& c : instance.constraints()) {
    satisfied += evaluate_constraint(instance.predicate(), sigma, c) ? 1 : 0;
  }
  return satisfied;
}

Rational value(const OcspInstance& instance, const Permutation& sigma) {
  if (instance.num_constraints() == 0) throw Error(Errc::empty_instance, "value of an instance with m = 0");
  return make_ratio(count_satisfied(instance, sigma), instance.num_constraints());
}

}  // namespace ocsp
