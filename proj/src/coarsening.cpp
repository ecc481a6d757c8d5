#include "ocsp/coarsening.hpp"

#include <algorithm>
#include <array>

#include "ocsp/error.hpp"

namespace ocsp {
namespace {

std::uint64_t checked_power(std::uint64_t base, int exp) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > (static_cast<unsigned __int128>(1) << 62)) throw Error(Errc::too_large, "q^k overflows");
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > (static_cast<unsigned __int128>(1) << 62)) throw Error(Errc::too_large, "binomial overflows");
  }
  return static_cast<std::uint64_t>(acc);
}

bool all_distinct(std::span<const int> a) {
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < x; ++y) {
      if (a[x] == a[y]) return false;
    }
  }
  return true;
}

}  // namespace

Partition::Partition(int q, std::vector<int> labels) : q_(q), labels_(std::move(labels)) {
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  for (int v : labels_) {
    if (v < 0 || v >= q) {
      throw Error(Errc::out_of_range, "label " + std::to_string(v) + " not in [" + std::to_string(q) + "]");
    }
  }
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(q_));
  for (int i = 0; i < size(); ++i) out[static_cast<std::size_t>(labels_[i])].push_back(i);
  return out;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(q_), 0);
  for (int v : labels_) ++sizes[static_cast<std::size_t>(v)];
  return sizes;
}

Partition Partition::shifted(int t) const {
  std::vector<int> out(labels_.size());
  const int shift = ((t % q_) + q_) % q_;
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = (labels_[i] + shift) % q_;
  return Partition(q_, std::move(out));
}

std::uint64_t encode_base_q(std::span<const int> a, int q) {
  std::uint64_t code = 0;
  for (int v : a) {
    if (v < 0 || v >= q) throw Error(Errc::out_of_range, "label outside [q]");
    code = code * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(v);
  }
  return code;
}

Tuple decode_base_q(std::uint64_t code, int k, int q) {
  Tuple a(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    a[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(q));
    code /= static_cast<std::uint64_t>(q);
  }
  return a;
}

CoarsePredicate CoarsePredicate::coarsen(const OrderingPredicate& predicate, int q) {
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  CoarsePredicate f(predicate.arity(), q);
  f.source_ = predicate;
  // Each set of k distinct labels contributes exactly |supp(Pi)| accepted tuples.
  f.count_ = binomial(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(f.k_)) *
             predicate.satisfied_ranks().size();

  std::uint64_t size = 0;
  try {
    size = f.domain_size();
  } catch (const Error&) {
    return f;
  }
  if (size <= kMaterializeLimit) {
    std::vector<std::uint8_t> table(size, 0);
    for (std::uint64_t code = 0; code < size; ++code) {
      auto a = decode_base_q(code, f.k_, q);
      table[code] = f.accepts_unchecked(a) ? 1 : 0;
    }
    f.table_ = std::move(table);
  }
  return f;
}

CoarsePredicate CoarsePredicate::from_table(int k, int q, const std::vector<std::uint64_t>& satisfied_codes) {
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  if (k < 1) throw Error(Errc::invalid_predicate, "arity must be >= 1");
  CoarsePredicate f(k, q);
  const auto size = f.domain_size();
  if (size > kMaterializeLimit) throw Error(Errc::too_large, "explicit table larger than 2^24 entries");
  std::vector<std::uint8_t> table(size, 0);
  for (auto code : satisfied_codes) {
    if (code >= size) throw Error(Errc::out_of_range, "code " + std::to_string(code) + " >= q^k");
    table[code] = 1;
  }
  f.count_ = static_cast<std::uint64_t>(std::count(table.begin(), table.end(), std::uint8_t{1}));
  f.table_ = std::move(table);
  return f;
}

CoarsePredicate CoarsePredicate::constant(int k, int q, bool value) {
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  CoarsePredicate f(k, q);
  const auto size = f.domain_size();
  if (size > kMaterializeLimit) throw Error(Errc::too_large, "explicit table larger than 2^24 entries");
  f.table_ = std::vector<std::uint8_t>(size, value ? 1 : 0);
  f.count_ = value ? size : 0;
  return f;
}

std::uint64_t CoarsePredicate::domain_size() const {
  return checked_power(static_cast<std::uint64_t>(q_), k_);
}

bool CoarsePredicate::accepts_unchecked(std::span<const int> a) const {
  if (table_) return (*table_)[encode_base_q(a, q_)] != 0;
  if (!all_distinct(a)) return false;
  return source_->accepts_rank(ord_rank(a));
}

bool CoarsePredicate::accepts(std::span<const int> a) const {
  if (static_cast<int>(a.size()) != k_) throw Error(Errc::arity_mismatch, "tuple arity differs from f");
  for (int v : a) {
    if (v < 0 || v >= q_) throw Error(Errc::out_of_range, "label outside [q]");
  }
  return accepts_unchecked(a);
}

bool CoarsePredicate::accepts_code(std::uint64_t code) const {
  if (table_) {
    if (code >= table_->size()) throw Error(Errc::out_of_range, "code >= q^k");
    return (*table_)[code] != 0;
  }
  return accepts(decode_base_q(code, k_, q_));
}

std::uint64_t CoarsePredicate::satisfied_count() const { return count_; }

std::vector<std::uint64_t> CoarsePredicate::satisfied_codes() const {
  const auto size = domain_size();
  if (size > kWidthLimit) throw Error(Errc::too_large, "q^k beyond enumeration guard");
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for (std::uint64_t code = 0; code < size; ++code) {
    if (accepts_code(code)) out.push_back(code);
  }
  return out;
}

Rational random_assignment_value(const CoarsePredicate& f) {
  return make_ratio(f.satisfied_count(), f.domain_size());
}

Rational csp_value(const OcspInstance& instance, const CoarsePredicate& f, const Partition& b) {
  if (f.arity() != instance.arity()) throw Error(Errc::arity_mismatch, "f arity differs from instance");
  if (b.size() != instance.num_vars()) throw Error(Errc::length_mismatch, "assignment length differs from n");
  if (b.alphabet() > f.alphabet()) throw Error(Errc::invalid_alphabet, "assignment alphabet exceeds f's");
  if (instance.num_constraints() == 0) throw Error(Errc::empty_instance, "csp value of an instance with m = 0");
  std::array<int, kMaxArity> restricted{};
  std::size_t satisfied = 0;
  for (const auto& c : instance.constraints()) {
    for (std::size_t i = 0; i < c.size(); ++i) restricted[i] = b[c[i]];
    satisfied += f.accepts(std::span<const int>(restricted.data(), c.size())) ? 1 : 0;
  }
  return make_ratio(satisfied, instance.num_constraints());
}

Permutation lift_partition_to_ordering(const Partition& b) {
  std::vector<int> start(static_cast<std::size_t>(b.alphabet()) + 1, 0);
  for (int v : b.labels()) ++start[static_cast<std::size_t>(v) + 1];
  for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
  std::vector<int> sigma(static_cast<std::size_t>(b.size()));
  for (int i = 0; i < b.size(); ++i) sigma[static_cast<std::size_t>(i)] = start[static_cast<std::size_t>(b[i])]++;
  return Permutation(std::move(sigma));
}

Partition interval_coarsen(const Permutation& sigma, const Rational& gamma, int q) {
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  const int n = sigma.size();
  const auto block = floor_times(gamma, n);
  if (block <= 0) throw Error(Errc::block_too_small, "floor(gamma * n) = 0");
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto label = sigma[i] / block;
    if (label >= q) {
      throw Error(Errc::alphabet_too_small, "label " + std::to_string(label) + " needs q > " +
                                                std::to_string(label));
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(label);
  }
  return Partition(q, std::move(labels));
}

Rational width(const CoarsePredicate& f) {
  const auto size = f.domain_size();
  if (size > kWidthLimit) throw Error(Errc::too_large, "q^k beyond width enumeration guard");
  const int k = f.arity();
  const int q = f.alphabet();
  // Shifting b does not change its count, so b[0] = 0 covers every orbit.
  const auto reps = static_cast<std::int64_t>(size / static_cast<std::uint64_t>(q));
  int best = 0;

#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::int64_t code = 0; code < reps; ++code) {
    auto base = decode_base_q(static_cast<std::uint64_t>(code), k, q);
    std::array<int, kMaxArity> shifted{};
    int hits = 0;
    for (int ell = 0; ell < q; ++ell) {
      for (int i = 0; i < k; ++i) shifted[i] = (base[static_cast<std::size_t>(i)] + ell) % q;
      hits += f.accepts_code(encode_base_q(std::span<const int>(shifted.data(), static_cast<std::size_t>(k)), q)) ? 1 : 0;
    }
    best = std::max(best, hits);
  }
  return make_ratio(static_cast<std::uint64_t>(best), static_cast<std::uint64_t>(q));
}

}  // namespace ocsp
