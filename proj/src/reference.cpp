#include "ocsp/reference.hpp"

#include <algorithm>
#include <numeric>

#include "ocsp/error.hpp"

namespace ocsp::reference {
namespace {

std::size_t cap_of(const Rational& gamma, int n) {
  const auto cap = floor_times(gamma, n);
  return cap <= 0 ? 0 : static_cast<std::size_t>(std::min<std::int64_t>(cap, n));
}

}  // namespace

SolveReport solve_ocsp_bruteforce(const OcspInstance& instance) {
  const int n = instance.num_vars();
  if (instance.num_constraints() == 0) throw Error(Errc::empty_instance, "m = 0");
  if (n > kExactOcspMaxVars) throw Error(Errc::too_large, "brute force needs n <= 10");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::size_t best = 0;
  std::vector<int> best_order = order;
  std::uint64_t explored = 0;
  bool first = true;
  do {
    ++explored;
    std::vector<int> sigma(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) sigma[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
    const auto c = count_satisfied(instance, Permutation(std::move(sigma)));
    if (first || c > best) {
      best = c;
      best_order = order;
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<int> sigma(best_order.size());
  for (std::size_t p = 0; p < best_order.size(); ++p) sigma[static_cast<std::size_t>(best_order[p])] = static_cast<int>(p);
  return {make_ratio(best, instance.num_constraints()), Permutation(std::move(sigma)), explored, SolveMode::exact};
}

SolveReport solve_csp_bruteforce(const OcspInstance& instance, const CoarsePredicate& f) {
  const int n = instance.num_vars();
  const int q = f.alphabet();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(q);
    if (total > kExactCspLimit) throw Error(Errc::too_large, "brute force needs q^n <= 10^7");
  }
  Rational best(-1);
  std::vector<int> best_labels;
  for (std::uint64_t code = 0; code < total; ++code) {
    Partition b(q, decode_base_q(code, n, q));
    auto v = csp_value(instance, f, b);
    if (v > best) {
      best = v;
      best_labels.assign(b.labels().begin(), b.labels().end());
    }
  }
  return {best, Partition(q, best_labels), total, SolveMode::exact};
}

ExpansionCertificate sshe_bruteforce(const Hypergraph& g, const Rational& gamma) {
  const int n = g.num_vertices();
  if (g.num_edges() == 0) throw Error(Errc::empty_instance, "no edges");
  if (n > kSsheExactMaxVertices) throw Error(Errc::exact_mode_too_large, "n too large");
  const auto cap = cap_of(gamma, n);
  ExpansionCertificate cert{gamma, Rational(0), CertMode::exact, 0, std::vector<int>(static_cast<std::size_t>(n), 0)};
  std::size_t best = 0;
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << n); ++set) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v) {
      if ((set >> v) & 1) members.push_back(v);
    }
    if (members.size() > cap) continue;
    ++cert.explored;
    const auto c = lying_count(g, members);
    if (c > best) {
      best = c;
      for (int v = 0; v < n; ++v) cert.witness[static_cast<std::size_t>(v)] = static_cast<int>((set >> v) & 1);
    }
  }
  cert.delta_min = make_ratio(best, g.num_edges());
  return cert;
}

ExpansionCertificate sphe_bruteforce(const Hypergraph& g, const Rational& gamma, int q) {
  const int n = g.num_vertices();
  if (g.num_edges() == 0) throw Error(Errc::empty_instance, "no edges");
  const int blocks = std::min(q, n);
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(blocks);
    if (total > kSpheExactLimit) throw Error(Errc::exact_mode_too_large, "space too large");
  }
  const auto cap = cap_of(gamma, n);
  ExpansionCertificate cert{gamma, Rational(0), CertMode::exact, 0, {}};
  std::size_t best = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    auto labels = decode_base_q(code, n, blocks);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(blocks), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    if (std::any_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s > cap; })) continue;
    ++cert.explored;
    const auto c = congregating_count(g, Partition(blocks, labels));
    if (cert.witness.empty() || c > best) {
      best = c;
      cert.witness = labels;
    }
  }
  cert.delta_min = make_ratio(best, g.num_edges());
  return cert;
}

Rational width_bruteforce(const CoarsePredicate& f) {
  const int k = f.arity();
  const int q = f.alphabet();
  const auto total = f.domain_size();
  std::uint64_t best = 0;
  Tuple shifted(static_cast<std::size_t>(k));
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto b = decode_base_q(code, k, q);
    std::uint64_t hits = 0;
    for (int l = 0; l < q; ++l) {
      for (int i = 0; i < k; ++i) shifted[static_cast<std::size_t>(i)] = (b[static_cast<std::size_t>(i)] + l) % q;
      hits += f.accepts(shifted) ? 1 : 0;
    }
    best = std::max(best, hits);
  }
  return make_ratio(best, static_cast<std::uint64_t>(q));
}

}  // namespace ocsp::reference
