#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ocsp {

enum class Errc {
  duplicate_entries,
  arity_mismatch,
  index_out_of_range,
  invalid_permutation,
  invalid_predicate,
  empty_instance,
  invalid_alphabet,
  length_mismatch,
  block_too_small,
  alphabet_too_small,
  too_large,
  too_many_edges,
  exact_mode_too_large,
  out_of_range,
  empty_stream,
  state_bound_exceeded,
  invalid_epsilon,
  invalid_params,
  overflow,
  parse_error,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library surfaces as an Error carrying one of the
/// codes above; the message adds context for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ocsp
