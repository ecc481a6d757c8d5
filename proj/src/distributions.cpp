#include "ocsp/distributions.hpp"

#include <array>

#include "ocsp/error.hpp"

namespace ocsp {
namespace {

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  unsigned __int128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > (static_cast<unsigned __int128>(1) << 62)) throw Error(Errc::too_large, "q^k overflows");
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<int> uniform_labels(int n, int q, Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& v : labels) v = static_cast<int>(rng.uniform(static_cast<std::uint64_t>(q)));
  return labels;
}

}  // namespace

std::size_t DistributionParams::edges_per_matching() const { return matching_edge_count(n, alpha); }

void DistributionParams::validate(bool planted) const {
  const int k = arity();
  if (q < 1) throw Error(Errc::invalid_params, "q must be >= 1");
  if (n < 0) throw Error(Errc::invalid_params, "n must be >= 0");
  if (rounds < 1) throw Error(Errc::invalid_params, "T must be >= 1");
  if (alpha <= 0 || alpha * k > 1) throw Error(Errc::invalid_params, "alpha must lie in (0, 1/k]");
  if (!planted) return;
  if (!pi) throw Error(Errc::invalid_params, "YES sampling needs a planted permutation");
  if (pi->size() != k) throw Error(Errc::arity_mismatch, "planted permutation arity differs from k");
  if (!predicate.accepts(*pi)) throw Error(Errc::invalid_params, "planted permutation not in supp(Pi)");
  if (k > q) throw Error(Errc::invalid_params, "YES sampling needs k <= q");
}

Tuple contiguous_tuple(int q, int k, int ell) {
  if (q < 1 || k < 1 || k > q) throw Error(Errc::out_of_range, "contiguous tuple needs 1 <= k <= q");
  if (ell < 0 || ell >= q) throw Error(Errc::out_of_range, "shift outside [q]");
  Tuple v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = (ell + i) % q;
  return v;
}

Tuple permute_tuple(std::span<const int> a, const Permutation& pi) {
  if (static_cast<int>(a.size()) != pi.size()) throw Error(Errc::arity_mismatch, "tuple and permutation arity differ");
  Tuple out(a.size());
  for (int i = 0; i < pi.size(); ++i) out[static_cast<std::size_t>(pi[i])] = a[static_cast<std::size_t>(i)];
  return out;
}

std::optional<int> identifier(const Partition& b, std::span<const int> j, const Permutation& pi) {
  const int q = b.alphabet();
  const int k = pi.size();
  if (static_cast<int>(j.size()) != k || k > q) return std::nullopt;
  // (v^(l))_pi has entry pi^{-1}(i) + l at position i, so position pi(0)
  // carries l itself.
  const int ell = b[j[static_cast<std::size_t>(pi[0])]];
  for (int i = 0; i < k; ++i) {
    const int expected = (ell + i) % q;
    if (b[j[static_cast<std::size_t>(pi[i])]] != expected) return std::nullopt;
  }
  return ell;
}

YesSample sample_yes(const DistributionParams& params, Rng& rng) {
  params.validate(true);
  const int k = params.arity();
  const auto edges = params.edges_per_matching();
  const auto base = rng.next();

  Rng partition_rng(Rng::derive(base, 0));
  Partition b(params.q, uniform_labels(params.n, params.q, partition_rng));

  std::vector<Hypergraph> matchings;
  std::vector<std::vector<bool>> kept;
  std::vector<Tuple> constraints;
  for (int t = 0; t < params.rounds; ++t) {
    Rng round_rng(Rng::derive(base, static_cast<std::uint64_t>(t) + 1));
    auto g = sample_hypermatching(params.n, k, edges, round_rng);
    std::vector<bool> mask(g.num_edges(), false);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      const auto& e = g.edges()[i];
      if (identifier(b, e, *params.pi) && round_rng.bernoulli(1, static_cast<std::uint64_t>(params.q))) {
        mask[i] = true;
        constraints.push_back(e);
      }
    }
    matchings.push_back(std::move(g));
    kept.push_back(std::move(mask));
  }
  return {OcspInstance(params.n, params.predicate, std::move(constraints)), std::move(b), std::move(matchings),
          std::move(kept), *params.pi};
}

NoSample sample_no(const DistributionParams& params, Rng& rng) {
  params.validate(false);
  const int k = params.arity();
  const auto edges = params.edges_per_matching();
  const auto keep_den = pow_u64(static_cast<std::uint64_t>(params.q), k);
  const auto base = rng.next();

  // b is drawn so YES and NO consume their streams identically; it has no
  // effect on the instance.
  Rng partition_rng(Rng::derive(base, 0));
  (void)uniform_labels(params.n, params.q, partition_rng);

  std::vector<Hypergraph> matchings;
  std::vector<std::vector<bool>> kept;
  std::vector<Tuple> constraints;
  for (int t = 0; t < params.rounds; ++t) {
    Rng round_rng(Rng::derive(base, static_cast<std::uint64_t>(t) + 1));
    auto g = sample_hypermatching(params.n, k, edges, round_rng);
    std::vector<bool> mask(g.num_edges(), false);
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      if (round_rng.bernoulli(1, keep_den)) {
        mask[i] = true;
        constraints.push_back(g.edges()[i]);
      }
    }
    matchings.push_back(std::move(g));
    kept.push_back(std::move(mask));
  }
  return {OcspInstance(params.n, params.predicate, std::move(constraints)), std::move(matchings), std::move(kept)};
}

OcspInstance random_instance(int n, const OrderingPredicate& predicate, std::size_t m, Rng& rng) {
  const int k = predicate.arity();
  if (n < k) throw Error(Errc::invalid_params, "random instance needs n >= k");
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::vector<Tuple> constraints;
  constraints.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    // Partial Fisher-Yates: the first k slots end up uniform and distinct.
    for (int v = 0; v < n; ++v) vertices[static_cast<std::size_t>(v)] = v;
    for (int p = 0; p < k; ++p) {
      const auto r = static_cast<std::size_t>(p) + rng.uniform(static_cast<std::uint64_t>(n - p));
      std::swap(vertices[static_cast<std::size_t>(p)], vertices[r]);
    }
    constraints.emplace_back(vertices.begin(), vertices.begin() + k);
  }
  return OcspInstance(n, predicate, std::move(constraints));
}

ShiftResult best_shifted_assignment(const YesSample& sample) {
  const auto& instance = sample.instance;
  if (instance.num_constraints() == 0) throw Error(Errc::empty_instance, "YES sample without constraints");
  const int q = sample.hidden_partition.alphabet();
  const auto f = CoarsePredicate::coarsen(instance.predicate(), q);
  ShiftResult best{0, Rational(-1)};
  for (int t = 0; t < q; ++t) {
    auto v = csp_value(instance, f, sample.hidden_partition.shifted(t));
    if (v > best.value) best = {t, v};
  }
  return best;
}

}  // namespace ocsp
