#include "ocsp/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "ocsp/error.hpp"

namespace ocsp {
namespace {

// Which placement prefixes of a constraint's slots can still grow into an
// accepted pattern. A prefix is encoded base k+1 with digits slot+1.
class PrefixTable {
 public:
  explicit PrefixTable(const OrderingPredicate& predicate) : k_(predicate.arity()) {
    std::uint64_t dense = 1;
    for (int i = 0; i < k_; ++i) dense *= static_cast<std::uint64_t>(k_ + 1);
    use_dense_ = dense <= (std::uint64_t{1} << 22);
    if (use_dense_) dense_.assign(dense, 0);
    for (const auto& p : predicate.support()) {
      std::uint64_t code = 0;
      insert(code);
      for (int i = 0; i < k_; ++i) {
        code = code * static_cast<std::uint64_t>(k_ + 1) + static_cast<std::uint64_t>(p[i] + 1);
        insert(code);
      }
    }
  }

  bool alive(std::uint64_t code) const {
    return use_dense_ ? dense_[code] != 0 : sparse_.count(code) != 0;
  }

 private:
  void insert(std::uint64_t code) {
    if (use_dense_) {
      dense_[code] = 1;
    } else {
      sparse_.insert(code);
    }
  }

  int k_;
  bool use_dense_ = false;
  std::vector<std::uint8_t> dense_;
  std::unordered_set<std::uint64_t> sparse_;
};

std::size_t ceil_fraction(std::uint64_t num, std::uint64_t den, std::size_t m) {
  const unsigned __int128 total = static_cast<unsigned __int128>(num) * m;
  return static_cast<std::size_t>((total + den - 1) / den);
}

// Satisfied count of the ordering that lists variables as `order`.
std::size_t count_for_order(const OcspInstance& instance, std::span<const int> order, std::vector<int>& position) {
  for (std::size_t p = 0; p < order.size(); ++p) position[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  std::array<int, kMaxArity> restricted{};
  std::size_t satisfied = 0;
  for (const auto& c : instance.constraints()) {
    for (std::size_t i = 0; i < c.size(); ++i) restricted[i] = position[static_cast<std::size_t>(c[i])];
    satisfied += instance.predicate().accepts_rank(ord_rank(std::span<const int>(restricted.data(), c.size()))) ? 1 : 0;
  }
  return satisfied;
}

std::size_t hill_climb(const OcspInstance& instance, std::vector<int>& order) {
  std::vector<int> position(order.size());
  auto current = count_for_order(instance, order, position);
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      std::swap(order[i], order[i + 1]);
      auto candidate = count_for_order(instance, order, position);
      if (candidate > current) {
        current = candidate;
        improved = true;
      } else {
        std::swap(order[i], order[i + 1]);
      }
    }
  }
  return current;
}

Permutation order_to_ordering(std::span<const int> order) {
  std::vector<int> sigma(order.size());
  for (std::size_t p = 0; p < order.size(); ++p) sigma[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
  return Permutation(std::move(sigma));
}

class OcspSearch {
 public:
  OcspSearch(const OcspInstance& instance, const PrefixTable& table,
             const std::vector<std::vector<std::pair<int, int>>>& incidence, std::size_t floor)
      : instance_(instance),
        table_(table),
        incidence_(incidence),
        n_(instance.num_vars()),
        k_(instance.arity()),
        m_(instance.num_constraints()),
        floor_(floor),
        code_(m_, 0),
        placed_(m_, 0),
        used_(static_cast<std::size_t>(n_), false) {
    for (std::size_t c = 0; c < m_; ++c) account(c, +1);
  }

  void place(int v) {
    used_[static_cast<std::size_t>(v)] = true;
    order_.push_back(v);
    for (auto [c, slot] : incidence_[static_cast<std::size_t>(v)]) {
      const auto ci = static_cast<std::size_t>(c);
      account(ci, -1);
      code_[ci] = code_[ci] * static_cast<std::uint64_t>(k_ + 1) + static_cast<std::uint64_t>(slot + 1);
      ++placed_[ci];
      account(ci, +1);
    }
  }

  void unplace(int v) {
    for (auto [c, slot] : incidence_[static_cast<std::size_t>(v)]) {
      const auto ci = static_cast<std::size_t>(c);
      account(ci, -1);
      code_[ci] /= static_cast<std::uint64_t>(k_ + 1);
      --placed_[ci];
      account(ci, +1);
    }
    order_.pop_back();
    used_[static_cast<std::size_t>(v)] = false;
  }

  void search() {
    ++explored_;
    const auto possible = m_ - dead_;
    if (found_ && possible <= best_) return;
    if (possible < floor_) return;
    if (open_ == 0) {
      best_ = satisfied_;
      found_ = true;
      best_order_ = order_;
      for (int v = 0; v < n_; ++v) {
        if (!used_[static_cast<std::size_t>(v)]) best_order_.push_back(v);
      }
      return;
    }
    for (int v = 0; v < n_; ++v) {
      if (used_[static_cast<std::size_t>(v)]) continue;
      place(v);
      search();
      unplace(v);
    }
  }

  bool found() const noexcept { return found_; }
  std::size_t best() const noexcept { return best_; }
  const std::vector<int>& best_order() const noexcept { return best_order_; }
  std::uint64_t explored() const noexcept { return explored_; }

 private:
  void account(std::size_t c, int sign) {
    if (!table_.alive(code_[c])) {
      dead_ += static_cast<std::size_t>(sign);
    } else if (placed_[c] == k_) {
      satisfied_ += static_cast<std::size_t>(sign);
    } else {
      open_ += static_cast<std::size_t>(sign);
    }
  }

  const OcspInstance& instance_;
  const PrefixTable& table_;
  const std::vector<std::vector<std::pair<int, int>>>& incidence_;
  int n_;
  int k_;
  std::size_t m_;
  std::size_t floor_;
  std::vector<std::uint64_t> code_;
  std::vector<int> placed_;
  std::vector<bool> used_;
  std::vector<int> order_;
  std::size_t dead_ = 0;
  std::size_t satisfied_ = 0;
  std::size_t open_ = 0;
  bool found_ = false;
  std::size_t best_ = 0;
  std::vector<int> best_order_;
  std::uint64_t explored_ = 0;
};

// Prefixes of length `depth` drawn without repetition from [n], in lex order.
void enumerate_prefixes(int n, int depth, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == depth) {
    out.push_back(current);
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (std::find(current.begin(), current.end(), v) != current.end()) continue;
    current.push_back(v);
    enumerate_prefixes(n, depth, current, out);
    current.pop_back();
  }
}

class CspSearch {
 public:
  CspSearch(const OcspInstance& instance, const CoarsePredicate& f,
            const std::vector<std::vector<int>>& incidence, std::size_t floor)
      : instance_(instance),
        f_(f),
        incidence_(incidence),
        n_(instance.num_vars()),
        q_(f.alphabet()),
        m_(instance.num_constraints()),
        floor_(floor),
        distinct_(f.source().has_value()),
        labels_(static_cast<std::size_t>(n_), -1),
        status_(m_, 0) {}

  void assign(int v, int label) {
    labels_[static_cast<std::size_t>(v)] = label;
    trail_marks_.push_back(trail_.size());
    std::array<int, kMaxArity> restricted{};
    for (int c : incidence_[static_cast<std::size_t>(v)]) {
      const auto ci = static_cast<std::size_t>(c);
      if (status_[ci] != 0) continue;
      const auto& j = instance_.constraints()[ci];
      bool complete = true;
      bool collide = false;
      for (std::size_t i = 0; i < j.size(); ++i) {
        const int l = labels_[static_cast<std::size_t>(j[i])];
        restricted[i] = l;
        if (l < 0) complete = false;
        if (distinct_ && l >= 0 && j[i] != v && l == label) collide = true;
      }
      std::uint8_t next = 0;
      if (complete) {
        next = f_.accepts_code(encode_base_q(std::span<const int>(restricted.data(), j.size()), q_)) ? 2 : 1;
      } else if (collide) {
        next = 1;
      }
      if (next != 0) {
        status_[ci] = next;
        trail_.push_back(ci);
        (next == 2 ? satisfied_ : dead_) += 1;
      }
    }
  }

  void unassign(int v) {
    const auto mark = trail_marks_.back();
    trail_marks_.pop_back();
    while (trail_.size() > mark) {
      const auto ci = trail_.back();
      trail_.pop_back();
      (status_[ci] == 2 ? satisfied_ : dead_) -= 1;
      status_[ci] = 0;
    }
    labels_[static_cast<std::size_t>(v)] = -1;
  }

  void search(int depth) {
    ++explored_;
    const auto possible = m_ - dead_;
    if (found_ && possible <= best_) return;
    if (possible < floor_) return;
    if (satisfied_ + dead_ == m_) {
      best_ = satisfied_;
      found_ = true;
      best_labels_ = labels_;
      for (auto& l : best_labels_) l = std::max(l, 0);
      return;
    }
    for (int label = 0; label < q_; ++label) {
      assign(depth, label);
      search(depth + 1);
      unassign(depth);
    }
  }

  bool found() const noexcept { return found_; }
  std::size_t best() const noexcept { return best_; }
  const std::vector<int>& best_labels() const noexcept { return best_labels_; }
  std::uint64_t explored() const noexcept { return explored_; }

 private:
  const OcspInstance& instance_;
  const CoarsePredicate& f_;
  const std::vector<std::vector<int>>& incidence_;
  int n_;
  int q_;
  std::size_t m_;
  std::size_t floor_;
  bool distinct_;
  std::vector<int> labels_;
  std::vector<std::uint8_t> status_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> trail_marks_;
  std::size_t satisfied_ = 0;
  std::size_t dead_ = 0;
  bool found_ = false;
  std::size_t best_ = 0;
  std::vector<int> best_labels_;
  std::uint64_t explored_ = 0;
};

}  // namespace

SolveReport solve_ocsp_exact(const OcspInstance& instance) {
  const auto m = instance.num_constraints();
  const int n = instance.num_vars();
  if (m == 0) throw Error(Errc::empty_instance, "exact solve of an instance with m = 0");
  if (n > kExactOcspMaxVars) {
    throw Error(Errc::too_large, "exact OCSP solve needs n <= " + std::to_string(kExactOcspMaxVars));
  }
  const auto& predicate = instance.predicate();
  const PrefixTable table(predicate);
  std::vector<std::vector<std::pair<int, int>>> incidence(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < m; ++c) {
    const auto& j = instance.constraints()[c];
    for (std::size_t s = 0; s < j.size(); ++s) {
      incidence[static_cast<std::size_t>(j[s])].emplace_back(static_cast<int>(c), static_cast<int>(s));
    }
  }

  // Every instance reaches at least rho(Pi)*m; a deterministic hill climb
  // from the identity often does better. Either is a valid floor.
  std::size_t floor = ceil_fraction(predicate.satisfied_ranks().size(), factorial(predicate.arity()), m);
  {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    floor = std::max(floor, hill_climb(instance, order));
  }

  std::vector<std::vector<int>> prefixes;
  {
    std::vector<int> current;
    enumerate_prefixes(n, std::min(n, 2), current, prefixes);
  }
  struct Shard {
    bool found = false;
    std::size_t best = 0;
    std::vector<int> order;
    std::uint64_t explored = 0;
  };
  std::vector<Shard> shards(prefixes.size());
  const auto count = static_cast<std::int64_t>(prefixes.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t p = 0; p < count; ++p) {
    OcspSearch search(instance, table, incidence, floor);
    for (int v : prefixes[static_cast<std::size_t>(p)]) search.place(v);
    search.search();
    shards[static_cast<std::size_t>(p)] = {search.found(), search.best(), search.best_order(), search.explored()};
  }

  SolveReport report{Rational(0), Permutation::identity(std::max(n, 1)), 0, SolveMode::exact};
  bool found = false;
  std::size_t best = 0;
  const std::vector<int>* best_order = nullptr;
  for (const auto& shard : shards) {
    report.explored += shard.explored;
    if (shard.found && (!found || shard.best > best)) {
      found = true;
      best = shard.best;
      best_order = &shard.order;
    }
  }
  if (!found) throw Error(Errc::invalid_params, "branch and bound found no solution");
  report.optimum = make_ratio(best, m);
  report.witness = order_to_ordering(*best_order);
  return report;
}

SolveReport solve_csp_exact(const OcspInstance& instance, const CoarsePredicate& f) {
  const auto m = instance.num_constraints();
  const int n = instance.num_vars();
  const int q = f.alphabet();
  if (m == 0) throw Error(Errc::empty_instance, "exact solve of an instance with m = 0");
  if (f.arity() != instance.arity()) throw Error(Errc::arity_mismatch, "f arity differs from instance");
  unsigned __int128 space = 1;
  for (int i = 0; i < n && space <= kExactCspLimit; ++i) space *= static_cast<unsigned>(q);
  if (space > kExactCspLimit) throw Error(Errc::too_large, "exact CSP solve needs q^n <= 10^7");

  std::vector<std::vector<int>> incidence(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < m; ++c) {
    for (int v : instance.constraints()[c]) incidence[static_cast<std::size_t>(v)].push_back(static_cast<int>(c));
  }
  const std::size_t floor = ceil_fraction(f.satisfied_count(), f.domain_size(), m);

  const int depth = std::min(n, 2);
  std::size_t shard_count = 1;
  for (int i = 0; i < depth; ++i) shard_count *= static_cast<std::size_t>(q);
  struct Shard {
    bool found = false;
    std::size_t best = 0;
    std::vector<int> labels;
    std::uint64_t explored = 0;
  };
  std::vector<Shard> shards(shard_count);
  const auto count = static_cast<std::int64_t>(shard_count);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t s = 0; s < count; ++s) {
    CspSearch search(instance, f, incidence, floor);
    auto prefix = decode_base_q(static_cast<std::uint64_t>(s), depth, q);
    for (int v = 0; v < depth; ++v) search.assign(v, prefix[static_cast<std::size_t>(v)]);
    search.search(depth);
    shards[static_cast<std::size_t>(s)] = {search.found(), search.best(), search.best_labels(), search.explored()};
  }

  bool found = false;
  std::size_t best = 0;
  const std::vector<int>* best_labels = nullptr;
  std::uint64_t explored = 0;
  for (const auto& shard : shards) {
    explored += shard.explored;
    if (shard.found && (!found || shard.best > best)) {
      found = true;
      best = shard.best;
      best_labels = &shard.labels;
    }
  }
  if (!found) throw Error(Errc::invalid_params, "branch and bound found no solution");
  return {make_ratio(best, m), Partition(q, *best_labels), explored, SolveMode::exact};
}

SolveReport solve_ocsp_local_search(const OcspInstance& instance, Rng& rng, int restarts) {
  const auto m = instance.num_constraints();
  if (m == 0) throw Error(Errc::empty_instance, "local search on an instance with m = 0");
  const int n = instance.num_vars();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<int> best_order;
  std::size_t best = 0;
  bool found = false;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<int>(order));
    auto value = hill_climb(instance, order);
    if (!found || value > best) {
      found = true;
      best = value;
      best_order = order;
    }
  }
  return {make_ratio(best, m), order_to_ordering(best_order), static_cast<std::uint64_t>(std::max(restarts, 1)),
          SolveMode::heuristic};
}

Estimate random_ordering_baseline(const OcspInstance& instance, std::size_t trials, Rng& rng) {
  const auto m = instance.num_constraints();
  if (m == 0) throw Error(Errc::empty_instance, "baseline on an instance with m = 0");
  if (trials == 0) throw Error(Errc::invalid_params, "baseline needs at least one trial");
  const int n = instance.num_vars();
  const auto base = rng.next();
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  const auto count = static_cast<std::int64_t>(trials);

#pragma omp parallel
  {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::vector<int> position(static_cast<std::size_t>(n));
#pragma omp for schedule(static) reduction(+ : sum, sum_sq)
    for (std::int64_t t = 0; t < count; ++t) {
      Rng trial_rng(Rng::derive(base, static_cast<std::uint64_t>(t)));
      std::iota(order.begin(), order.end(), 0);
      trial_rng.shuffle(std::span<int>(order));
      const auto c = count_for_order(instance, order, position);
      sum += c;
      sum_sq += c * c;
    }
  }

  const double md = static_cast<double>(m);
  const double td = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / (md * td);
  double variance = 0;
  if (trials > 1) {
    variance = (static_cast<double>(sum_sq) / (md * md) - td * mean * mean) / (td - 1);
    variance = std::max(variance, 0.0);
  }
  return {mean, std::sqrt(variance / td), trials};
}

ConstraintReservoir::ConstraintReservoir(std::size_t capacity, Rng& rng) : capacity_(capacity), rng_(rng) {
  if (capacity == 0) throw Error(Errc::invalid_params, "reservoir capacity must be >= 1");
  reservoir_.reserve(capacity);
}

void ConstraintReservoir::offer(std::span<const int> constraint) {
  if (seen_ < capacity_) {
    reservoir_.emplace_back(constraint.begin(), constraint.end());
  } else {
    const auto slot = rng_.uniform(seen_ + 1);
    if (slot < capacity_) reservoir_[slot].assign(constraint.begin(), constraint.end());
  }
  ++seen_;
}

SubsampleReport subsample_and_solve(std::span<const Tuple> stream, const OrderingPredicate& predicate,
                                    std::size_t sample_size, Rng& rng) {
  if (stream.empty()) throw Error(Errc::empty_stream, "no constraints to sample");
  ConstraintReservoir reservoir(sample_size, rng);
  for (const auto& c : stream) reservoir.offer(c);

  std::vector<int> touched;
  for (const auto& c : reservoir.sample()) touched.insert(touched.end(), c.begin(), c.end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  std::vector<Tuple> relabeled;
  relabeled.reserve(reservoir.sample().size());
  for (const auto& c : reservoir.sample()) {
    Tuple t(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      t[i] = static_cast<int>(std::lower_bound(touched.begin(), touched.end(), c[i]) - touched.begin());
    }
    relabeled.push_back(std::move(t));
  }
  OcspInstance sub(static_cast<int>(touched.size()), predicate, std::move(relabeled));

  SubsampleReport report;
  report.sample_size = sub.num_constraints();
  report.touched_vars = touched.size();
  report.stream_length = reservoir.seen();
  if (static_cast<int>(touched.size()) <= kExactOcspMaxVars) {
    report.estimate = solve_ocsp_exact(sub).optimum;
    report.mode = SolveMode::exact;
  } else {
    report.estimate = solve_ocsp_local_search(sub, rng).optimum;
    report.mode = SolveMode::heuristic;
  }
  return report;
}

}  // namespace ocsp
