#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ocsp/instance.hpp"
#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"

namespace ocsp {

/// A vector b in [q]^n, read either as an assignment to a q-ary CSP or as a
/// partition of [n] into the blocks b^{-1}(0), ..., b^{-1}(q-1).
class Partition {
 public:
  Partition(int q, std::vector<int> labels);

  int alphabet() const noexcept { return q_; }
  int size() const noexcept { return static_cast<int>(labels_.size()); }
  int operator[](int i) const { return labels_[static_cast<std::size_t>(i)]; }
  std::span<const int> labels() const noexcept { return labels_; }

  /// blocks()[i] lists the members of b^{-1}(i) in ascending order.
  std::vector<std::vector<int>> blocks() const;
  std::vector<int> block_sizes() const;

  /// b + t (mod q), entrywise.
  Partition shifted(int t) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  int q_;
  std::vector<int> labels_;
};

/// f: [q]^k -> {0,1}. Tuples are indexed big-endian in base q: a[0] is the
/// most significant digit.
class CoarsePredicate {
 public:
  /// Tables are materialized up to this many entries; larger coarsenings
  /// evaluate membership from the source predicate on demand.
  static constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 24;

  /// f(a) = 1 iff the entries of a are distinct and Pi(ord(a)) = 1.
  static CoarsePredicate coarsen(const OrderingPredicate& predicate, int q);
  static CoarsePredicate from_table(int k, int q, const std::vector<std::uint64_t>& satisfied_codes);
  static CoarsePredicate constant(int k, int q, bool value);

  int arity() const noexcept { return k_; }
  int alphabet() const noexcept { return q_; }
  bool materialized() const noexcept { return table_.has_value(); }
  const std::optional<OrderingPredicate>& source() const noexcept { return source_; }

  /// q < k for a coarsening: no tuple has k distinct labels, so f is 0.
  bool degenerate() const noexcept { return source_.has_value() && q_ < k_; }

  /// q^k; TooLarge if it does not fit comfortably in 64 bits.
  std::uint64_t domain_size() const;

  bool accepts(std::span<const int> a) const;
  bool accepts_code(std::uint64_t code) const;

  /// |f^{-1}(1)|.
  std::uint64_t satisfied_count() const;

  /// Sorted codes of accepted tuples; TooLarge beyond 10^8 tuples.
  std::vector<std::uint64_t> satisfied_codes() const;

 private:
  CoarsePredicate(int k, int q) : k_(k), q_(q) {}
  bool accepts_unchecked(std::span<const int> a) const;

  int k_;
  int q_;
  std::optional<OrderingPredicate> source_;
  std::optional<std::vector<std::uint8_t>> table_;
  std::uint64_t count_ = 0;
};

std::uint64_t encode_base_q(std::span<const int> a, int q);
Tuple decode_base_q(std::uint64_t code, int k, int q);

/// rho(f) = |f^{-1}(1)| / q^k, the value of a uniformly random assignment.
Rational random_assignment_value(const CoarsePredicate& f);

/// (1/m) * sum_i f(b|_{j(i)}).
Rational csp_value(const OcspInstance& instance, const CoarsePredicate& f, const Partition& b);

/// Places the blocks b^{-1}(0), ..., b^{-1}(q-1) left to right, members of a
/// block in ascending index order.
Permutation lift_partition_to_ordering(const Partition& b);

/// b_i = floor(sigma(i) / floor(gamma * n)).
Partition interval_coarsen(const Permutation& sigma, const Rational& gamma, int q);

/// Enumeration guard for width().
inline constexpr std::uint64_t kWidthLimit = 100'000'000;

/// max over b in [q]^k of the fraction of shifts l in [q] with f(b + l) = 1.
/// Scans one representative per shift orbit (b[0] = 0) in parallel.
Rational width(const CoarsePredicate& f);

}  // namespace ocsp
