#pragma once

// Brute-force oracles used to derive and freeze expected values. They work
// on plain vectors and share no code with the library: patterns are written
// out in one-line notation, orderings are enumerated with next_permutation,
// and nothing is pruned.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<int>;
using Support = std::set<Vec>;

inline const Support kMas{{0, 1}};
inline const Support kBtwn{{0, 1, 2}, {2, 1, 0}};

inline Vec iota(int n) {
  Vec v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

inline std::vector<Vec> all_permutations(int k) {
  std::vector<Vec> out;
  Vec p = iota(k);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Indices of `a` listed from smallest to largest value.
inline Vec ord(const Vec& a) {
  Vec idx = iota(static_cast<int>(a.size()));
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return a[static_cast<std::size_t>(x)] < a[static_cast<std::size_t>(y)]; });
  return idx;
}

// Position of p in the lexicographic list of all permutations.
inline std::uint64_t rank(const Vec& p) {
  const auto all = all_permutations(static_cast<int>(p.size()));
  return static_cast<std::uint64_t>(std::find(all.begin(), all.end(), p) - all.begin());
}

inline bool distinct(const Vec& a) {
  Vec s = a;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

inline Vec restrict(const Vec& x, const Vec& j) {
  Vec out;
  for (int v : j) out.push_back(x[static_cast<std::size_t>(v)]);
  return out;
}

inline int satisfied_by_ordering(const Support& s, const Vec& sigma, const std::vector<Vec>& constraints) {
  int c = 0;
  for (const auto& j : constraints) c += s.count(ord(restrict(sigma, j))) ? 1 : 0;
  return c;
}

// max over all sigma in S_n of the satisfied count.
inline int best_ordering_count(const Support& s, int n, const std::vector<Vec>& constraints) {
  int best = 0;
  Vec sigma = iota(n);
  do best = std::max(best, satisfied_by_ordering(s, sigma, constraints));
  while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

inline bool coarse_accepts(const Support& s, const Vec& a) { return distinct(a) && s.count(ord(a)) > 0; }

inline int satisfied_by_labels(const Support& s, const Vec& b, const std::vector<Vec>& constraints) {
  int c = 0;
  for (const auto& j : constraints) c += coarse_accepts(s, restrict(b, j)) ? 1 : 0;
  return c;
}

// Calls fn on every b in [q]^n in lexicographic order.
template <typename F>
void for_each_labeling(int n, int q, F&& fn) {
  Vec b(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(b);
    int i = n - 1;
    while (i >= 0 && b[static_cast<std::size_t>(i)] == q - 1) b[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
    ++b[static_cast<std::size_t>(i)];
  }
}

inline int best_labeling_count(const Support& s, int n, int q, const std::vector<Vec>& constraints) {
  int best = 0;
  for_each_labeling(n, q, [&](const Vec& b) { best = std::max(best, satisfied_by_labels(s, b, constraints)); });
  return best;
}

// (numerator, q): the best number of shifts l with f(b + l) = 1.
inline int width_numerator(const Support& s, int k, int q) {
  int best = 0;
  for_each_labeling(k, q, [&](const Vec& b) {
    int hits = 0;
    for (int l = 0; l < q; ++l) {
      Vec shifted = b;
      for (auto& v : shifted) v = (v + l) % q;
      hits += coarse_accepts(s, shifted) ? 1 : 0;
    }
    best = std::max(best, hits);
  });
  return best;
}

inline int lying(const std::vector<Vec>& edges, const std::set<int>& s) {
  int c = 0;
  for (const auto& e : edges) {
    int inside = 0;
    for (int v : e) inside += s.count(v) ? 1 : 0;
    c += inside >= 2 ? 1 : 0;
  }
  return c;
}

// max N(G,S) over |S| <= cap.
inline int sshe_numerator(int n, const std::vector<Vec>& edges, int cap) {
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<int> s;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1u) s.insert(v);
    }
    if (static_cast<int>(s.size()) <= cap) best = std::max(best, lying(edges, s));
  }
  return best;
}

inline int congregating(const std::vector<Vec>& edges, const Vec& b) {
  int c = 0;
  for (const auto& e : edges) {
    bool shared = false;
    for (std::size_t x = 0; x < e.size(); ++x) {
      for (std::size_t y = x + 1; y < e.size(); ++y) {
        shared = shared || b[static_cast<std::size_t>(e[x])] == b[static_cast<std::size_t>(e[y])];
      }
    }
    c += shared ? 1 : 0;
  }
  return c;
}

// max congregating count over b in [q]^n with every block of size <= cap.
inline int sphe_numerator(int n, const std::vector<Vec>& edges, int cap, int q) {
  int best = 0;
  for_each_labeling(n, q, [&](const Vec& b) {
    Vec sizes(static_cast<std::size_t>(q), 0);
    for (int l : b) ++sizes[static_cast<std::size_t>(l)];
    if (*std::max_element(sizes.begin(), sizes.end()) <= cap) best = std::max(best, congregating(edges, b));
  });
  return best;
}

}  // namespace oracle
