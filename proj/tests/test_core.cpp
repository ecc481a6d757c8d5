#include <doctest.h>

#include <set>

#include "ocsp/instance.hpp"
#include "ocsp/permutation.hpp"
#include "ocsp/predicate.hpp"
#include "ocsp/rational.hpp"
#include "ocsp/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ocsp;

namespace {

Tuple random_distinct(int k, Rng& rng) {
  std::set<int> seen;
  Tuple a;
  while (static_cast<int>(a.size()) < k) {
    const int v = static_cast<int>(rng.uniform(1000)) - 500;
    if (seen.insert(v).second) a.push_back(v);
  }
  return a;
}

}  // namespace

TEST_CASE("ord sorts indices by value") {
  CHECK(ord(Tuple{7, 3, 5}) == Permutation({1, 2, 0}));
  CHECK(ord(Tuple{4, 0, 1}) == Permutation({1, 2, 0}));
  CHECK(ord(Tuple{0, 1, 2}).is_identity());
  CHECK_ERRC(ord(Tuple{1, 1}), Errc::duplicate_entries);
}

TEST_CASE("ord agrees with the oracle and ord_rank with rank") {
  Rng rng(3);
  for (int k = 1; k <= 7; ++k) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = random_distinct(k, rng);
      const auto p = ord(a);
      CHECK(std::vector<int>(p.image().begin(), p.image().end()) == oracle::ord(a));
      CHECK(ord_rank(a) == p.rank());
    }
  }
}

TEST_CASE("compose and invert") {
  CHECK(compose(Permutation({1, 0}), Permutation({1, 0})) == Permutation({0, 1}));
  CHECK(compose(Permutation({1, 2, 0}), Permutation({2, 0, 1})) == Permutation::identity(3));
  const Permutation tau({2, 0, 3, 1});
  CHECK(compose(Permutation::identity(4), tau) == tau);
  CHECK(invert(Permutation({0, 1, 2})) == Permutation({0, 1, 2}));
  CHECK(invert(Permutation({1, 2, 0})) == Permutation({2, 0, 1}));
  CHECK(invert(Permutation({1, 0})) == Permutation({1, 0}));
  CHECK_ERRC(compose(Permutation({1, 0}), Permutation::identity(3)), Errc::arity_mismatch);
  for (int k = 1; k <= 5; ++k) {
    for (std::uint64_t r = 0; r < factorial(k); ++r) {
      const auto p = Permutation::unrank(k, r);
      CHECK(compose(p, invert(p)).is_identity());
      CHECK(compose(invert(p), p).is_identity());
    }
  }
}

TEST_CASE("rank and unrank round-trip and follow lexicographic order") {
  for (int k = 1; k <= 7; ++k) {
    const auto total = factorial(k);
    for (std::uint64_t r = 0; r < total; ++r) {
      const auto p = Permutation::unrank(k, r);
      CHECK(p.rank() == r);
      if (r + 1 < total) CHECK(p < Permutation::unrank(k, r + 1));
    }
  }
  for (const auto& p : oracle::all_permutations(4)) CHECK(Permutation(p).rank() == oracle::rank(p));
  CHECK_ERRC(Permutation::unrank(3, 6), Errc::out_of_range);
}

TEST_CASE("permutation validation and text form") {
  CHECK_ERRC(Permutation({0, 0}), Errc::invalid_permutation);
  CHECK_ERRC(Permutation({1, 2}), Errc::invalid_permutation);
  CHECK_ERRC(Permutation(std::vector<int>{}), Errc::invalid_permutation);
  CHECK(to_string(Permutation({1, 2, 0})) == "[1 2 0]");
  CHECK(parse_permutation("[1 2 0]") == Permutation({1, 2, 0}));
  CHECK(parse_permutation("1,2,0") == Permutation({1, 2, 0}));
  CHECK(parse_permutation("2 0 1") == Permutation({2, 0, 1}));
  CHECK_ERRC(parse_permutation("1 x"), Errc::parse_error);
}

TEST_CASE("named predicates and rho") {
  const auto mas = OrderingPredicate::mas();
  const auto btwn = OrderingPredicate::betweenness();
  CHECK(mas.satisfied_ranks() == std::vector<std::uint64_t>{0});
  CHECK(btwn.satisfied_ranks() == std::vector<std::uint64_t>{0, 5});
  CHECK(rho(mas) == Rational(1, 2));
  CHECK(rho(btwn) == Rational(1, 3));
  CHECK(rho(OrderingPredicate::all(3)) == Rational(1));
  CHECK(btwn.accepts(Permutation({0, 1, 2})));
  CHECK(btwn.accepts(Permutation({2, 1, 0})));
  CHECK_FALSE(btwn.accepts(Permutation({1, 0, 2})));
  CHECK(mas.name() == std::optional<std::string>("MAS"));
  CHECK(named_predicate("betweenness") == btwn);
  CHECK(named_predicate("mas") == mas);
  CHECK_ERRC(named_predicate("cyclic"), Errc::parse_error);
  CHECK_ERRC(OrderingPredicate(2, {2}), Errc::invalid_predicate);
  CHECK_ERRC(OrderingPredicate(11, {}), Errc::invalid_predicate);
}

TEST_CASE("evaluate_constraint") {
  const auto id3 = Permutation::identity(3);
  CHECK(evaluate_constraint(OrderingPredicate::mas(), id3, Tuple{0, 2}));
  CHECK_FALSE(evaluate_constraint(OrderingPredicate::mas(), id3, Tuple{2, 0}));
  CHECK(evaluate_constraint(OrderingPredicate::betweenness(), id3, Tuple{0, 1, 2}));
  CHECK_ERRC(evaluate_constraint(OrderingPredicate::mas(), id3, Tuple{0, 3}), Errc::index_out_of_range);
  CHECK_ERRC(evaluate_constraint(OrderingPredicate::mas(), id3, Tuple{1, 1}), Errc::duplicate_entries);
}

TEST_CASE("instance values") {
  const auto mas = OrderingPredicate::mas();
  const auto id3 = Permutation::identity(3);
  CHECK(value(OcspInstance(3, mas, {{0, 1}, {1, 2}, {0, 2}}), id3) == Rational(1));
  // Oracle: the identity attains 2 of 3 on the directed 3-cycle, as does the best ordering.
  CHECK(value(OcspInstance(3, mas, {{0, 1}, {1, 2}, {2, 0}}), id3) == Rational(2, 3));
  // Oracle: 1 of 2 for these betweenness constraints, also the best possible.
  CHECK(value(OcspInstance(3, OrderingPredicate::betweenness(), {{0, 1, 2}, {1, 0, 2}}), id3) == Rational(1, 2));
  CHECK_ERRC(value(OcspInstance(3, mas, {}), id3), Errc::empty_instance);
  CHECK_ERRC(value(OcspInstance(3, mas, {{0, 1}}), Permutation::identity(4)), Errc::length_mismatch);
  CHECK_ERRC(OcspInstance(3, mas, {{0, 1, 2}}), Errc::arity_mismatch);
}

TEST_CASE("value matches the oracle and is invariant under relabeling") {
  Rng rng(17);
  const auto btwn = OrderingPredicate::betweenness();
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform(5));
    std::vector<Tuple> cons;
    for (int i = 0; i < 6; ++i) {
      Tuple v = oracle::iota(n);
      rng.shuffle(std::span<int>(v));
      cons.emplace_back(v.begin(), v.begin() + 3);
    }
    Tuple s = oracle::iota(n);
    rng.shuffle(std::span<int>(s));
    const Permutation sigma(s);
    const OcspInstance inst(n, btwn, cons);
    CHECK(count_satisfied(inst, sigma) == static_cast<std::size_t>(oracle::satisfied_by_ordering(oracle::kBtwn, s, cons)));

    // Rename variable v to h(v) in constraints and ordering alike.
    Tuple h = oracle::iota(n);
    rng.shuffle(std::span<int>(h));
    std::vector<Tuple> renamed = cons;
    for (auto& c : renamed) {
      for (auto& v : c) v = h[static_cast<std::size_t>(v)];
    }
    Tuple s2(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) s2[static_cast<std::size_t>(h[static_cast<std::size_t>(v)])] = s[static_cast<std::size_t>(v)];
    CHECK(value(OcspInstance(n, btwn, renamed), Permutation(s2)) == value(inst, sigma));
  }
}

TEST_CASE("rationals") {
  CHECK(parse_rational("3/10") == Rational(3, 10));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(parse_rational("-1/4") == Rational(-1, 4));
  CHECK(to_string(Rational(6, 4)) == "3/2");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(floor_times(Rational(3, 10), 10) == 3);
  CHECK(floor_times(Rational(1, 3), 10) == 3);
  CHECK(make_ratio(2, 4) == Rational(1, 2));
  CHECK_ERRC(make_ratio(1, 0), Errc::invalid_params);
  CHECK_ERRC(parse_rational("1/0"), Errc::parse_error);
  CHECK_ERRC(parse_rational("abc"), Errc::parse_error);
}

TEST_CASE("rng is reproducible and bounded draws are uniform") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(Rng::derive(1, 2) != Rng::derive(1, 3));
  CHECK(Rng::derive(1, 2) == Rng::derive(1, 2));

  Rng rng(9);
  constexpr int kBins = 7;
  constexpr int kDraws = 70000;
  std::vector<int> counts(kBins, 0);
  for (int i = 0; i < kDraws; ++i) ++counts[rng.uniform(kBins)];
  const double expected = static_cast<double>(kDraws) / kBins;
  for (int c : counts) CHECK(std::abs(c - expected) < 5 * std::sqrt(expected));

  int hits = 0;
  for (int i = 0; i < 90000; ++i) hits += rng.bernoulli(1, 9) ? 1 : 0;
  CHECK(std::abs(hits - 10000) < 5 * std::sqrt(10000.0 * 8 / 9));
}
