#include "ocsp/predicate.hpp"

#include <algorithm>
#include <cctype>

#include "ocsp/error.hpp"

namespace ocsp {

OrderingPredicate::OrderingPredicate(int k, std::vector<std::uint64_t> satisfied_ranks)
    : k_(k), ranks_(std::move(satisfied_ranks)) {
  if (k < 1 || k > kMaxArity) {
    throw Error(Errc::invalid_predicate, "arity must lie in [1, " + std::to_string(kMaxArity) + "]");
  }
  const auto total = factorial(k);
  std::sort(ranks_.begin(), ranks_.end());
  ranks_.erase(std::unique(ranks_.begin(), ranks_.end()), ranks_.end());
  table_.assign(total, 0);
  for (auto r : ranks_) {
    if (r >= total) throw Error(Errc::invalid_predicate, "rank " + std::to_string(r) + " >= k!");
    table_[r] = 1;
  }
}

OrderingPredicate OrderingPredicate::mas() { return OrderingPredicate(2, {0}); }

OrderingPredicate OrderingPredicate::betweenness() {
  return from_support(3, {Permutation({0, 1, 2}), Permutation({2, 1, 0})});
}

OrderingPredicate OrderingPredicate::all(int k) {
  std::vector<std::uint64_t> ranks(factorial(k));
  for (std::uint64_t r = 0; r < ranks.size(); ++r) ranks[r] = r;
  return OrderingPredicate(k, std::move(ranks));
}

OrderingPredicate OrderingPredicate::from_support(int k, const std::vector<Permutation>& support) {
  std::vector<std::uint64_t> ranks;
  for (const auto& p : support) {
    if (p.size() != k) throw Error(Errc::arity_mismatch, "support element of wrong arity");
    ranks.push_back(p.rank());
  }
  return OrderingPredicate(k, std::move(ranks));
}

bool OrderingPredicate::accepts(const Permutation& p) const {
  if (p.size() != k_) throw Error(Errc::arity_mismatch, "predicate arity differs from permutation");
  return accepts_rank(p.rank());
}

std::vector<Permutation> OrderingPredicate::support() const {
  std::vector<Permutation> out;
  out.reserve(ranks_.size());
  for (auto r : ranks_) out.push_back(Permutation::unrank(k_, r));
  return out;
}

std::optional<std::string> OrderingPredicate::name() const {
  if (*this == mas()) return "MAS";
  if (*this == betweenness()) return "Btwn";
  return std::nullopt;
}

Rational rho(const OrderingPredicate& predicate) {
  return make_ratio(predicate.satisfied_ranks().size(), factorial(predicate.arity()));
}

OrderingPredicate named_predicate(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mas") return OrderingPredicate::mas();
  if (lower == "btwn" || lower == "betweenness") return OrderingPredicate::betweenness();
  throw Error(Errc::parse_error, "unknown predicate '" + std::string(name) + "'");
}

}  // namespace ocsp
