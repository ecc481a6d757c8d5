#include <doctest.h>

#include <omp.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "ocsp/distributions.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/reference.hpp"
#include "ocsp/solvers.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ocsp;

namespace {

const oracle::Support& support_of(const OrderingPredicate& p) {
  return p.arity() == 2 ? oracle::kMas : oracle::kBtwn;
}

OcspInstance small_random(const OrderingPredicate& p, Rng& rng, int max_n = 7, int max_m = 9) {
  const int n = p.arity() + static_cast<int>(rng.uniform(static_cast<std::uint64_t>(max_n - p.arity() + 1)));
  const auto m = 1 + rng.uniform(static_cast<std::uint64_t>(max_m));
  return random_instance(n, p, m, rng);
}

const Permutation& ordering(const SolveReport& r) { return std::get<Permutation>(r.witness); }
const Partition& assignment(const SolveReport& r) { return std::get<Partition>(r.witness); }

// Restores the thread count after a test that changes it.
struct ThreadGuard {
  int saved = omp_get_max_threads();
  ~ThreadGuard() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("exact OCSP examples") {
  const auto mas = OrderingPredicate::mas();
  const auto cycle = solve_ocsp_exact(OcspInstance(3, mas, {{0, 1}, {1, 2}, {2, 0}}));
  CHECK(cycle.optimum == Rational(2, 3));
  CHECK(cycle.mode == SolveMode::exact);
  CHECK(value(OcspInstance(3, mas, {{0, 1}, {1, 2}, {2, 0}}), ordering(cycle)) == Rational(2, 3));
  CHECK(solve_ocsp_exact(OcspInstance(3, mas, {{0, 1}, {1, 2}, {0, 2}})).optimum == Rational(1));
  CHECK(solve_ocsp_exact(OcspInstance(3, OrderingPredicate::betweenness(), {{0, 1, 2}, {1, 0, 2}})).optimum ==
        Rational(1, 2));
  CHECK_ERRC(solve_ocsp_exact(OcspInstance(3, mas, {})), Errc::empty_instance);
  CHECK_ERRC(solve_ocsp_exact(OcspInstance(11, mas, {{0, 1}})), Errc::too_large);
}

TEST_CASE("exact CSP examples") {
  const auto mas = OrderingPredicate::mas();
  const OcspInstance cycle(3, mas, {{0, 1}, {1, 2}, {2, 0}});
  CHECK(solve_csp_exact(cycle, CoarsePredicate::coarsen(mas, 2)).optimum == Rational(1, 3));
  CHECK(solve_csp_exact(cycle, CoarsePredicate::constant(2, 2, true)).optimum == Rational(1));
  const auto path = solve_csp_exact(OcspInstance(3, mas, {{0, 1}, {1, 2}}), CoarsePredicate::coarsen(mas, 3));
  CHECK(path.optimum == Rational(1));
  CHECK(assignment(path) == Partition(3, {0, 1, 2}));
  CHECK_ERRC(solve_csp_exact(OcspInstance(3, mas, {}), CoarsePredicate::coarsen(mas, 2)), Errc::empty_instance);
  CHECK_ERRC(solve_csp_exact(OcspInstance(12, mas, {{0, 1}}), CoarsePredicate::coarsen(mas, 5)), Errc::too_large);
  CHECK_ERRC(solve_csp_exact(cycle, CoarsePredicate::coarsen(OrderingPredicate::betweenness(), 3)),
             Errc::arity_mismatch);
}

TEST_CASE("branch and bound matches the oracle and the serial reference") {
  Rng rng(41);
  for (const auto& p : {OrderingPredicate::mas(), OrderingPredicate::betweenness()}) {
    for (int trial = 0; trial < 80; ++trial) {
      const auto inst = small_random(p, rng);
      const auto fast = solve_ocsp_exact(inst);
      const auto slow = reference::solve_ocsp_bruteforce(inst);
      const auto m = static_cast<std::int64_t>(inst.num_constraints());
      CHECK(fast.optimum == Rational(oracle::best_ordering_count(support_of(p), inst.num_vars(), inst.constraints()), m));
      CHECK(fast.optimum == slow.optimum);
      CHECK(ordering(fast) == ordering(slow));
      CHECK(value(inst, ordering(fast)) == fast.optimum);
      CHECK(fast.optimum >= rho(p));

      for (int q = 1; q <= 3; ++q) {
        const auto f = CoarsePredicate::coarsen(p, q);
        if (std::pow(q, inst.num_vars()) > 5000) continue;
        const auto csp = solve_csp_exact(inst, f);
        const auto csp_slow = reference::solve_csp_bruteforce(inst, f);
        CHECK(csp.optimum ==
              Rational(oracle::best_labeling_count(support_of(p), inst.num_vars(), q, inst.constraints()), m));
        CHECK(csp.optimum == csp_slow.optimum);
        CHECK(assignment(csp) == assignment(csp_slow));
        CHECK(csp_value(inst, f, assignment(csp)) == csp.optimum);
        // Coarsening never helps.
        CHECK(csp.optimum <= fast.optimum);
      }
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  ThreadGuard guard;
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(8, OrderingPredicate::betweenness(), 14, rng);
    const auto f = CoarsePredicate::coarsen(inst.predicate(), 4);
    omp_set_num_threads(1);
    const auto a = solve_ocsp_exact(inst);
    const auto ca = solve_csp_exact(inst, f);
    Rng r1(9);
    const auto ba = random_ordering_baseline(inst, 500, r1);
    omp_set_num_threads(4);
    const auto b = solve_ocsp_exact(inst);
    const auto cb = solve_csp_exact(inst, f);
    Rng r2(9);
    const auto bb = random_ordering_baseline(inst, 500, r2);
    CHECK(a.optimum == b.optimum);
    CHECK(ordering(a) == ordering(b));
    CHECK(a.explored == b.explored);
    CHECK(ca.optimum == cb.optimum);
    CHECK(assignment(ca) == assignment(cb));
    CHECK(ba.mean == bb.mean);
  }
}

TEST_CASE("n = 10 is within reach") {
  Rng rng(44);
  const auto inst = random_instance(10, OrderingPredicate::betweenness(), 30, rng);
  const auto r = solve_ocsp_exact(inst);
  CHECK(value(inst, ordering(r)) == r.optimum);
  CHECK(r.optimum >= solve_ocsp_local_search(inst, rng).optimum);
}

TEST_CASE("local search is a lower bound flagged as heuristic") {
  Rng rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = small_random(OrderingPredicate::mas(), rng, 8, 15);
    const auto h = solve_ocsp_local_search(inst, rng);
    CHECK(h.mode == SolveMode::heuristic);
    CHECK(h.optimum <= solve_ocsp_exact(inst).optimum);
    CHECK(value(inst, ordering(h)) == h.optimum);
  }
}

TEST_CASE("random ordering baseline") {
  Rng rng(46);
  const auto mas = random_instance(9, OrderingPredicate::mas(), 40, rng);
  auto e = random_ordering_baseline(mas, 20000, rng);
  CHECK(std::abs(e.mean - 0.5) <= 4 * e.std_error);
  const auto btwn = random_instance(9, OrderingPredicate::betweenness(), 40, rng);
  e = random_ordering_baseline(btwn, 20000, rng);
  CHECK(std::abs(e.mean - 1.0 / 3) <= 4 * e.std_error);
  const OcspInstance single(5, OrderingPredicate::betweenness(), {{4, 0, 2}});
  e = random_ordering_baseline(single, 20000, rng);
  CHECK(std::abs(e.mean - 1.0 / 3) <= 3 * std::sqrt((1.0 / 3) * (2.0 / 3) / 20000));
  CHECK(e.trials == 20000);
  CHECK_ERRC(random_ordering_baseline(OcspInstance(3, OrderingPredicate::mas(), {}), 10, rng), Errc::empty_instance);
}

TEST_CASE("reservoir subsets are uniform") {
  for (std::size_t m = 2; m <= 6; ++m) {
    for (std::size_t s = 1; s <= std::min<std::size_t>(3, m); ++s) {
      Rng rng(1000 + m * 10 + s);
      std::map<std::vector<int>, int> counts;
      constexpr int kDraws = 20000;
      for (int i = 0; i < kDraws; ++i) {
        ConstraintReservoir r(s, rng);
        for (std::size_t c = 0; c < m; ++c) r.offer(Tuple{static_cast<int>(c)});
        std::vector<int> ids;
        for (const auto& t : r.sample()) ids.push_back(t[0]);
        std::sort(ids.begin(), ids.end());
        ++counts[ids];
      }
      // C(m, s) cells.
      std::size_t cells = 1;
      for (std::size_t i = 0; i < s; ++i) cells = cells * (m - i) / (i + 1);
      CHECK(counts.size() == cells);
      if (cells == 1) continue;
      const double expected = static_cast<double>(kDraws) / static_cast<double>(cells);
      double stat = 0;
      for (const auto& [ids, c] : counts) stat += (c - expected) * (c - expected) / expected;
      const boost::math::chi_squared dist(static_cast<double>(cells - 1));
      CHECK(boost::math::cdf(boost::math::complement(dist, stat)) > 1e-3);
    }
  }
}

TEST_CASE("subsample and solve") {
  Rng rng(47);
  const OcspInstance cycle(3, OrderingPredicate::mas(), {{0, 1}, {1, 2}, {2, 0}});
  const auto one = subsample_and_solve(cycle.constraints(), cycle.predicate(), 1, rng);
  CHECK(one.estimate == Rational(1));
  CHECK(one.touched_vars == 2);
  CHECK(one.stream_length == 3);
  CHECK(subsample_and_solve(cycle.constraints(), cycle.predicate(), 5, rng).estimate == Rational(2, 3));
  CHECK_ERRC(subsample_and_solve(std::vector<Tuple>{}, cycle.predicate(), 2, rng), Errc::empty_stream);

  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = small_random(OrderingPredicate::betweenness(), rng);
    const auto r = subsample_and_solve(inst.constraints(), inst.predicate(), inst.num_constraints(), rng);
    CHECK(r.mode == SolveMode::exact);
    CHECK(r.estimate == solve_ocsp_exact(inst).optimum);
  }

  // Many touched variables: the fallback is labelled.
  const auto wide = random_instance(30, OrderingPredicate::mas(), 20, rng);
  const auto h = subsample_and_solve(wide.constraints(), wide.predicate(), 20, rng);
  CHECK(h.touched_vars > 10);
  CHECK(h.mode == SolveMode::heuristic);
}

TEST_CASE("subsampling tracks the optimum on uniform instances") {
  // m is about 50 here; s = 40 keeps every trial within 0.2.
  DistributionParams params;
  params.q = 2;
  params.n = 10;
  params.alpha = Rational(1, 2);
  params.rounds = 40;
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto no = sample_no(params, rng);
    if (no.instance.num_constraints() == 0) continue;
    const auto exact = solve_ocsp_exact(no.instance).optimum;
    const auto r = subsample_and_solve(no.instance.constraints(), no.instance.predicate(), 40, rng);
    CHECK(r.mode == SolveMode::exact);
    CHECK(std::abs(to_double(r.estimate) - to_double(exact)) <= 0.2);
  }
}

TEST_CASE("coarsening is nearly lossless on small-partition expanders") {
  Rng rng(48);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = small_random(trial % 2 ? OrderingPredicate::mas() : OrderingPredicate::betweenness(), rng, 8, 8);
    const auto g = Hypergraph::of(inst);
    const Rational gamma(1, 2);
    const int q = 4;
    if (std::pow(q, inst.num_vars()) > 1e6) continue;
    const auto delta = sphe_certify(g, gamma, q).delta_min;
    CHECK(solve_ocsp_exact(inst).optimum <= solve_csp_exact(inst, CoarsePredicate::coarsen(inst.predicate(), q)).optimum + delta);
    ++checked;
  }
  CHECK(checked > 20);
}
