#include "ocsp/permutation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>

#include "ocsp/error.hpp"

namespace ocsp {

std::uint64_t factorial(int k) {
  if (k < 0 || k > 20) throw Error(Errc::out_of_range, "factorial argument " + std::to_string(k));
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const auto k = image_.size();
  if (k == 0) throw Error(Errc::invalid_permutation, "empty permutation");
  std::vector<bool> seen(k, false);
  for (int v : image_) {
    if (v < 0 || static_cast<std::size_t>(v) >= k || seen[static_cast<std::size_t>(v)]) {
      throw Error(Errc::invalid_permutation, "entries must be exactly 0.." + std::to_string(k - 1));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int k) {
  if (k < 1) throw Error(Errc::invalid_permutation, "arity must be >= 1");
  std::vector<int> image(static_cast<std::size_t>(k));
  std::iota(image.begin(), image.end(), 0);
  return Permutation(std::move(image));
}

Permutation Permutation::unrank(int k, std::uint64_t rank) {
  if (k < 1 || k > 20) throw Error(Errc::out_of_range, "unrank arity " + std::to_string(k));
  if (rank >= factorial(k)) throw Error(Errc::out_of_range, "rank exceeds k!");
  std::vector<int> pool(static_cast<std::size_t>(k));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> image;
  image.reserve(pool.size());
  for (int i = k; i >= 1; --i) {
    const auto block = factorial(i - 1);
    const auto digit = static_cast<std::size_t>(rank / block);
    rank %= block;
    image.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return Permutation(std::move(image));
}

std::uint64_t Permutation::rank() const {
  const int k = size();
  std::uint64_t r = 0;
  for (int i = 0; i < k; ++i) {
    std::uint64_t smaller = 0;
    for (int j = i + 1; j < k; ++j) smaller += image_[j] < image_[i] ? 1 : 0;
    r += smaller * factorial(k - 1 - i);
  }
  return r;
}

bool Permutation::is_identity() const noexcept {
  for (int i = 0; i < size(); ++i) {
    if (image_[static_cast<std::size_t>(i)] != i) return false;
  }
  return true;
}

Permutation ord(std::span<const int> a) {
  if (a.empty()) throw Error(Errc::invalid_permutation, "ord of an empty tuple");
  std::vector<int> idx(a.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return a[x] < a[y]; });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (a[idx[i - 1]] == a[idx[i]]) {
      throw Error(Errc::duplicate_entries, "ord is undefined on tuples with repeated entries");
    }
  }
  return Permutation(std::move(idx));
}

Permutation compose(const Permutation& pi, const Permutation& tau) {
  if (pi.size() != tau.size()) throw Error(Errc::arity_mismatch, "compose of different arities");
  std::vector<int> image(static_cast<std::size_t>(pi.size()));
  for (int i = 0; i < pi.size(); ++i) image[static_cast<std::size_t>(i)] = pi[tau[i]];
  return Permutation(std::move(image));
}

Permutation invert(const Permutation& pi) {
  std::vector<int> image(static_cast<std::size_t>(pi.size()));
  for (int i = 0; i < pi.size(); ++i) image[static_cast<std::size_t>(pi[i])] = i;
  return Permutation(std::move(image));
}

std::uint64_t ord_rank(std::span<const int> a) noexcept {
  static constexpr std::array<std::uint64_t, kMaxArity + 1> kFact = {
      1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800};
  const int k = static_cast<int>(a.size());
  // sorted_pos ends up as the one-line notation of ord(a).
  std::array<int, kMaxArity> sorted_pos{};
  for (int i = 0; i < k; ++i) {
    int pos = i;
    while (pos > 0 && a[sorted_pos[pos - 1]] > a[i]) {
      sorted_pos[pos] = sorted_pos[pos - 1];
      --pos;
    }
    sorted_pos[pos] = i;
  }
  std::uint64_t r = 0;
  for (int i = 0; i < k; ++i) {
    std::uint64_t smaller = 0;
    for (int j = i + 1; j < k; ++j) smaller += sorted_pos[j] < sorted_pos[i] ? 1 : 0;
    r += smaller * kFact[k - 1 - i];
  }
  return r;
}

std::string to_string(const Permutation& p) {
  std::string out = "[";
  for (int i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  return out + "]";
}

Permutation parse_permutation(std::string_view text) {
  std::vector<int> image;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '[' || c == ']' || c == ',' || c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc()) throw Error(Errc::parse_error, "bad permutation '" + std::string(text) + "'");
    image.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  return Permutation(std::move(image));
}

}  // namespace ocsp
