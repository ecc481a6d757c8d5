#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocsp {

/// A k-tuple of variable indices or labels.
using Tuple = std::vector<int>;

/// Largest arity for which predicates are stored as tables over ranks.
inline constexpr int kMaxArity = 10;

/// k! for 0 <= k <= 20.
std::uint64_t factorial(int k);

/// Bijection on [k] in one-line notation [p(0) p(1) ... p(k-1)].
class Permutation {
 public:
  /// Validates that `image` is a rearrangement of 0..k-1 with k >= 1.
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int k);

  /// Inverse of rank(): the rank-th permutation of [k] in lexicographic order.
  static Permutation unrank(int k, std::uint64_t rank);

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int operator[](int i) const { return image_[static_cast<std::size_t>(i)]; }
  std::span<const int> image() const noexcept { return image_; }

  /// Lexicographic rank of the one-line notation (Lehmer code).
  std::uint64_t rank() const;

  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

/// The permutation that sorts `a`: entries a[p(0)] < a[p(1)] < ... .
/// Throws DuplicateEntries on ties.
Permutation ord(std::span<const int> a);

/// i -> pi(tau(i)).
Permutation compose(const Permutation& pi, const Permutation& tau);

Permutation invert(const Permutation& pi);

/// rank(ord(a)) without allocating; `a` must hold distinct values and
/// a.size() <= kMaxArity. Used in the evaluation hot loops.
std::uint64_t ord_rank(std::span<const int> a) noexcept;

/// "[1 2 0]"
std::string to_string(const Permutation& p);

/// Accepts "1 2 0", "[1 2 0]" or "1,2,0".
Permutation parse_permutation(std::string_view text);

}  // namespace ocsp
