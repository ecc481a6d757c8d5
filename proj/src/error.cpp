#include "ocsp/error.hpp"

namespace ocsp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::duplicate_entries: return "DuplicateEntries";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::invalid_permutation: return "InvalidPermutation";
    case Errc::invalid_predicate: return "InvalidPredicate";
    case Errc::empty_instance: return "EmptyInstance";
    case Errc::invalid_alphabet: return "InvalidAlphabet";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::block_too_small: return "BlockTooSmall";
    case Errc::alphabet_too_small: return "AlphabetTooSmall";
    case Errc::too_large: return "TooLarge";
    case Errc::too_many_edges: return "TooManyEdges";
    case Errc::exact_mode_too_large: return "ExactModeTooLarge";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::empty_stream: return "EmptyStream";
    case Errc::state_bound_exceeded: return "StateBoundExceeded";
    case Errc::invalid_epsilon: return "InvalidEpsilon";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::overflow: return "Overflow";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace ocsp
