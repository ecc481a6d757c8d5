#include "ocsp/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "ocsp/error.hpp"

namespace ocsp {
namespace {

std::size_t clamp_cap(const Rational& gamma, int n) {
  const auto cap = floor_times(gamma, n);
  if (cap <= 0) return 0;
  return static_cast<std::size_t>(std::min<std::int64_t>(cap, n));
}

void require_edges(const Hypergraph& g) {
  if (g.num_edges() == 0) throw Error(Errc::empty_instance, "expansion of a hypergraph with no edges");
}

bool congregates(std::span<const int> edge, std::span<const int> labels) {
  for (std::size_t a = 0; a < edge.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (labels[edge[a]] == labels[edge[b]]) return true;
    }
  }
  return false;
}

std::size_t congregating_unchecked(const Hypergraph& g, std::span<const int> labels) {
  std::size_t count = 0;
  for (const auto& e : g.edges()) count += congregates(e, labels) ? 1 : 0;
  return count;
}

// Depth-first enumeration of restricted-growth strings with at most
// `max_blocks` blocks, each of size <= cap, starting from a fixed prefix.
struct RgsSearch {
  const Hypergraph& g;
  int n;
  int max_blocks;
  int cap;
  std::vector<int> labels;
  std::vector<int> sizes;
  std::size_t best = 0;
  bool found = false;
  std::vector<int> witness;
  std::uint64_t explored = 0;

  void run(int pos, int used) {
    if (pos == n) {
      ++explored;
      auto c = congregating_unchecked(g, labels);
      if (!found || c > best) {
        best = c;
        found = true;
        witness = labels;
      }
      return;
    }
    const int limit = std::min(used + 1, max_blocks);
    for (int label = 0; label < limit; ++label) {
      if (sizes[static_cast<std::size_t>(label)] >= cap) continue;
      labels[static_cast<std::size_t>(pos)] = label;
      ++sizes[static_cast<std::size_t>(label)];
      run(pos + 1, std::max(used, label + 1));
      --sizes[static_cast<std::size_t>(label)];
    }
  }
};

void collect_prefixes(int pos, int depth, int used, int max_blocks, int cap, std::vector<int>& labels,
                      std::vector<int>& sizes, std::vector<std::vector<int>>& out) {
  if (pos == depth) {
    out.push_back(labels);
    return;
  }
  const int limit = std::min(used + 1, max_blocks);
  for (int label = 0; label < limit; ++label) {
    if (sizes[static_cast<std::size_t>(label)] >= cap) continue;
    labels.push_back(label);
    ++sizes[static_cast<std::size_t>(label)];
    collect_prefixes(pos + 1, depth, std::max(used, label + 1), max_blocks, cap, labels, sizes, out);
    --sizes[static_cast<std::size_t>(label)];
    labels.pop_back();
  }
}

}  // namespace

Hypergraph::Hypergraph(int n, int k, std::vector<Tuple> edges) : n_(n), k_(k), edges_(std::move(edges)) {
  if (n < 0) throw Error(Errc::invalid_params, "negative vertex count");
  if (k < 1) throw Error(Errc::invalid_params, "arity must be >= 1");
  for (const auto& e : edges_) validate_tuple(e, k_, n_);
}

Hypergraph Hypergraph::of(const OcspInstance& instance) {
  return Hypergraph(instance.num_vars(), instance.arity(), instance.constraints());
}

bool Hypergraph::is_matching() const {
  std::vector<bool> used(static_cast<std::size_t>(n_), false);
  for (const auto& e : edges_) {
    for (int v : e) {
      if (used[static_cast<std::size_t>(v)]) return false;
      used[static_cast<std::size_t>(v)] = true;
    }
  }
  return true;
}

std::size_t matching_edge_count(int n, const Rational& alpha) {
  const auto count = floor_times(alpha, n);
  return count < 0 ? 0 : static_cast<std::size_t>(count);
}

Hypergraph sample_hypermatching(int n, int k, std::size_t edge_count, Rng& rng) {
  if (k < 1 || n < 0) throw Error(Errc::invalid_params, "need k >= 1 and n >= 0");
  if (edge_count * static_cast<std::size_t>(k) > static_cast<std::size_t>(n)) {
    throw Error(Errc::too_many_edges, std::to_string(edge_count) + " disjoint " + std::to_string(k) +
                                          "-edges do not fit in " + std::to_string(n) + " vertices");
  }
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 0);
  rng.shuffle(std::span<int>(vertices));
  std::vector<Tuple> edges;
  edges.reserve(edge_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    auto first = vertices.begin() + static_cast<std::ptrdiff_t>(e * static_cast<std::size_t>(k));
    edges.emplace_back(first, first + k);
  }
  return Hypergraph(n, k, std::move(edges));
}

std::size_t lying_count(const Hypergraph& g, std::span<const int> vertex_set) {
  std::vector<bool> member(static_cast<std::size_t>(g.num_vertices()), false);
  for (int v : vertex_set) {
    if (v < 0 || v >= g.num_vertices()) throw Error(Errc::index_out_of_range, "vertex outside [n]");
    member[static_cast<std::size_t>(v)] = true;
  }
  std::size_t count = 0;
  for (const auto& e : g.edges()) {
    int inside = 0;
    for (int v : e) inside += member[static_cast<std::size_t>(v)] ? 1 : 0;
    count += inside >= 2 ? 1 : 0;
  }
  return count;
}

std::size_t congregating_count(const Hypergraph& g, const Partition& b) {
  if (b.size() != g.num_vertices()) throw Error(Errc::length_mismatch, "partition length differs from n");
  return congregating_unchecked(g, b.labels());
}

ExpansionCertificate sshe_certify(const Hypergraph& g, const Rational& gamma) {
  require_edges(g);
  const int n = g.num_vertices();
  if (n > kSsheExactMaxVertices) {
    throw Error(Errc::exact_mode_too_large, "exact SSHE scan needs n <= " + std::to_string(kSsheExactMaxVertices));
  }
  const auto cap = static_cast<int>(clamp_cap(gamma, n));
  std::vector<std::uint32_t> masks;
  masks.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    std::uint32_t m = 0;
    for (int v : e) m |= std::uint32_t{1} << v;
    masks.push_back(m);
  }

  const auto total = static_cast<std::int64_t>(std::int64_t{1} << n);
  std::size_t best = 0;
  std::int64_t best_set = 0;
  std::uint64_t explored = 0;

#pragma omp parallel
  {
    std::size_t local_best = 0;
    std::int64_t local_set = 0;
    std::uint64_t local_explored = 0;
#pragma omp for schedule(static) nowait
    for (std::int64_t s = 0; s < total; ++s) {
      const auto set = static_cast<std::uint32_t>(s);
      if (std::popcount(set) > cap) continue;
      ++local_explored;
      std::size_t lying = 0;
      for (auto m : masks) lying += std::popcount(m & set) >= 2 ? 1 : 0;
      if (lying > local_best) {
        local_best = lying;
        local_set = s;
      }
    }
#pragma omp critical
    {
      explored += local_explored;
      if (local_best > best || (local_best == best && local_best > 0 && local_set < best_set)) {
        best = local_best;
        best_set = local_set;
      }
    }
  }

  ExpansionCertificate cert{gamma, make_ratio(best, g.num_edges()), CertMode::exact, explored, {}};
  cert.witness.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) cert.witness[static_cast<std::size_t>(v)] = (best_set >> v) & 1;
  return cert;
}

ExpansionCertificate sshe_sample(const Hypergraph& g, const Rational& gamma, std::size_t trials, Rng& rng) {
  require_edges(g);
  const int n = g.num_vertices();
  const auto cap = clamp_cap(gamma, n);
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 0);
  std::size_t best = 0;
  std::vector<int> witness(static_cast<std::size_t>(n), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    rng.shuffle(std::span<int>(vertices));
    auto set = std::span<const int>(vertices.data(), cap);
    auto lying = lying_count(g, set);
    if (lying > best) {
      best = lying;
      std::fill(witness.begin(), witness.end(), 0);
      for (int v : set) witness[static_cast<std::size_t>(v)] = 1;
    }
  }
  return {gamma, make_ratio(best, g.num_edges()), CertMode::lower_bound, trials, std::move(witness)};
}

ExpansionCertificate sphe_certify(const Hypergraph& g, const Rational& gamma, int q) {
  require_edges(g);
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  const int n = g.num_vertices();
  const int blocks = std::min(q, n);
  unsigned __int128 space = 1;
  for (int i = 0; i < n && space <= kSpheExactLimit; ++i) space *= static_cast<unsigned>(blocks);
  if (space > kSpheExactLimit) {
    throw Error(Errc::exact_mode_too_large, "exact SPHE enumeration needs min(q,n)^n <= 10^7");
  }
  const auto cap = static_cast<int>(clamp_cap(gamma, n));
  ExpansionCertificate cert{gamma, Rational(0), CertMode::exact, 0, {}};
  if (cap == 0 || static_cast<std::int64_t>(cap) * blocks < n) return cert;

  std::vector<std::vector<int>> prefixes;
  {
    std::vector<int> labels;
    std::vector<int> sizes(static_cast<std::size_t>(blocks), 0);
    collect_prefixes(0, std::min(n, 6), 0, blocks, cap, labels, sizes, prefixes);
  }

  struct Shard {
    bool found = false;
    std::size_t best = 0;
    std::vector<int> witness;
    std::uint64_t explored = 0;
  };
  std::vector<Shard> shards(prefixes.size());
  const auto count = static_cast<std::int64_t>(prefixes.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t p = 0; p < count; ++p) {
    const auto& prefix = prefixes[static_cast<std::size_t>(p)];
    RgsSearch search{g, n, blocks, cap, std::vector<int>(static_cast<std::size_t>(n), 0),
                     std::vector<int>(static_cast<std::size_t>(blocks), 0), 0, false, {}, 0};
    int used = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      search.labels[i] = prefix[i];
      ++search.sizes[static_cast<std::size_t>(prefix[i])];
      used = std::max(used, prefix[i] + 1);
    }
    search.run(static_cast<int>(prefix.size()), used);
    shards[static_cast<std::size_t>(p)] = {search.found, search.best, std::move(search.witness), search.explored};
  }

  bool found = false;
  std::size_t best = 0;
  for (auto& shard : shards) {
    cert.explored += shard.explored;
    if (shard.found && (!found || shard.best > best)) {
      found = true;
      best = shard.best;
      cert.witness = std::move(shard.witness);
    }
  }
  cert.delta_min = make_ratio(best, g.num_edges());
  return cert;
}

ExpansionCertificate sphe_sample(const Hypergraph& g, const Rational& gamma, int q, std::size_t trials, Rng& rng) {
  require_edges(g);
  if (q < 1) throw Error(Errc::invalid_alphabet, "alphabet size must be >= 1");
  const int n = g.num_vertices();
  const auto cap = static_cast<int>(clamp_cap(gamma, n));
  ExpansionCertificate cert{gamma, Rational(0), CertMode::lower_bound, 0, {}};
  if (cap == 0 || static_cast<std::int64_t>(cap) * q < n) return cert;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::size_t best = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    rng.shuffle(std::span<int>(order));
    for (int pos = 0; pos < n; ++pos) labels[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos / cap;
    ++cert.explored;
    auto c = congregating_unchecked(g, labels);
    if (c > best || cert.witness.empty()) {
      best = std::max(best, c);
      cert.witness = labels;
    }
  }
  cert.delta_min = make_ratio(best, g.num_edges());
  return cert;
}

}  // namespace ocsp
