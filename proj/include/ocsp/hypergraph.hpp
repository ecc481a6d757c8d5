#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ocsp/coarsening.hpp"
#include "ocsp/instance.hpp"
#include "ocsp/rational.hpp"
#include "ocsp/rng.hpp"

namespace ocsp {

/// Ordered, self-loop-free multi k-hypergraph on [n].
class Hypergraph {
 public:
  Hypergraph(int n, int k, std::vector<Tuple> edges);

  /// The constraint hypergraph of an instance.
  static Hypergraph of(const OcspInstance& instance);

  int num_vertices() const noexcept { return n_; }
  int arity() const noexcept { return k_; }
  const std::vector<Tuple>& edges() const noexcept { return edges_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// No vertex is touched by two edges.
  bool is_matching() const;

 private:
  int n_;
  int k_;
  std::vector<Tuple> edges_;
};

/// floor(alpha * n): the edge count of an alpha-partial hypermatching.
std::size_t matching_edge_count(int n, const Rational& alpha);

/// Uniform ordered k-hypermatching with `edge_count` edges: shuffle [n], take
/// the first k*edge_count vertices, cut them into consecutive k-tuples.
Hypergraph sample_hypermatching(int n, int k, std::size_t edge_count, Rng& rng);

/// N(G, S): edges with at least two distinct vertices in S.
std::size_t lying_count(const Hypergraph& g, std::span<const int> vertex_set);

/// Edges with two vertices in a common block of b.
std::size_t congregating_count(const Hypergraph& g, const Partition& b);

enum class CertMode { exact, lower_bound };

struct ExpansionCertificate {
  Rational gamma;
  /// Exact mode: the least delta for which G is a (gamma, delta) expander.
  /// Lower-bound mode: the best violation found by sampling.
  Rational delta_min;
  CertMode mode = CertMode::exact;
  /// Sets or partitions examined.
  std::uint64_t explored = 0;
  /// Worst set (SSHE, as a 0/1 membership vector) or worst partition (SPHE).
  std::vector<int> witness;
};

/// Exact-mode guards.
inline constexpr int kSsheExactMaxVertices = 24;
inline constexpr std::uint64_t kSpheExactLimit = 10'000'000;

/// Max over |S| <= gamma*n of N(G,S)/m by a parallel scan of all 2^n sets.
ExpansionCertificate sshe_certify(const Hypergraph& g, const Rational& gamma);

/// Lower bound on the same maximum from `trials` random sets of size
/// floor(gamma*n).
ExpansionCertificate sshe_sample(const Hypergraph& g, const Rational& gamma, std::size_t trials, Rng& rng);

/// Max over partitions with at most q nonempty blocks, each of size
/// <= gamma*n, of congregating_count/m. Only block sizes and the number of
/// blocks matter; partitions are enumerated once each as restricted-growth
/// strings. Exact mode requires min(q, n)^n <= 10^7.
ExpansionCertificate sphe_certify(const Hypergraph& g, const Rational& gamma, int q);

/// Lower bound from `trials` random partitions into consecutive chunks of a
/// random ordering.
ExpansionCertificate sphe_sample(const Hypergraph& g, const Rational& gamma, int q, std::size_t trials, Rng& rng);

}  // namespace ocsp
