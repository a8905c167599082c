#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace randstrat {

enum class ErrorKind {
  malformed_document,
  distribution_not_normalised,
  unknown_identifier,
  duplicate_id,
  invalid_arena,
  inconsistent_prefix,
  kind_violation,
  non_total_map,
  unknown_signal,
  weights_not_normalised,
  not_synchronous,
  not_observable_actions,
  unsupported_condition,
  unsupported_question,
  bad_not_absorbing,
  target_not_absorbing,
  peeling_stuck,
  vertex_signal_insufficient,
  not_simple,
  not_deterministic,
  colouring_not_total,
  precondition,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_document: return "malformed-document";
    case ErrorKind::distribution_not_normalised: return "distribution-not-normalised";
    case ErrorKind::unknown_identifier: return "unknown-identifier";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::invalid_arena: return "invalid-arena";
    case ErrorKind::inconsistent_prefix: return "inconsistent-prefix";
    case ErrorKind::kind_violation: return "kind-violation";
    case ErrorKind::non_total_map: return "non-total-map";
    case ErrorKind::unknown_signal: return "unknown-signal";
    case ErrorKind::weights_not_normalised: return "weights-not-normalised";
    case ErrorKind::not_synchronous: return "not-synchronous";
    case ErrorKind::not_observable_actions: return "not-observable-actions";
    case ErrorKind::unsupported_condition: return "unsupported-condition";
    case ErrorKind::unsupported_question: return "unsupported-question";
    case ErrorKind::bad_not_absorbing: return "bad-not-absorbing";
    case ErrorKind::target_not_absorbing: return "target-not-absorbing";
    case ErrorKind::peeling_stuck: return "peeling-stuck";
    case ErrorKind::vertex_signal_insufficient: return "vertex-signal-insufficient";
    case ErrorKind::not_simple: return "not-simple";
    case ErrorKind::not_deterministic: return "not-deterministic";
    case ErrorKind::colouring_not_total: return "colouring-not-total";
    case ErrorKind::precondition: return "precondition";
  }
  return "unknown";
}

/// Every library failure is reported through this exception; `kind()` is
/// stable and machine-checkable, `what()` carries the human detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace randstrat
