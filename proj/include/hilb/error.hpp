#ifndef HILB_ERROR_HPP
#define HILB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hilb {

enum class errc {
  unknown_point,
  duplicate_id,
  not_psd,
  extension_not_psd,
  max_rounds_exceeded,
  order_cap_exceeded,
  not_a_subgroup,
  not_invariant,
  search_budget_exceeded,
  ambiguous_eventual_value,
  not_strictly_definable,
  cycle_detected,
  not_nested,
  not_normal,
  not_closed_under_meet,
  not_closed_under_join,
  incomparable_without_join,
  validation_required,
  validation_failed,
  not_extendable,
  action_invalid,
  condition_failed,
  not_free,
  not_block_transitive,
  unknown_fixture,
  parameter_out_of_range,
  parse_error,
  internal,
};

/// Library-wide exception. `code()` identifies the failure mode, `what()`
/// carries a human-readable message including any witness data.
class Error : public std::runtime_error {
public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::unknown_point: return "UnknownPoint";
    case errc::duplicate_id: return "DuplicateId";
    case errc::not_psd: return "NotPsd";
    case errc::extension_not_psd: return "ExtensionNotPsd";
    case errc::max_rounds_exceeded: return "MaxRoundsExceeded";
    case errc::order_cap_exceeded: return "OrderCapExceeded";
    case errc::not_a_subgroup: return "NotASubgroup";
    case errc::not_invariant: return "NotInvariant";
    case errc::search_budget_exceeded: return "SearchBudgetExceeded";
    case errc::ambiguous_eventual_value: return "AmbiguousEventualValue";
    case errc::not_strictly_definable: return "NotStrictlyDefinable";
    case errc::cycle_detected: return "CycleDetected";
    case errc::not_nested: return "NotNested";
    case errc::not_normal: return "NotNormal";
    case errc::not_closed_under_meet: return "NotClosedUnderMeet";
    case errc::not_closed_under_join: return "NotClosedUnderJoin";
    case errc::incomparable_without_join: return "IncomparableWithoutJoin";
    case errc::validation_required: return "ValidationRequired";
    case errc::validation_failed: return "ValidationFailed";
    case errc::not_extendable: return "NotExtendable";
    case errc::action_invalid: return "ActionInvalid";
    case errc::condition_failed: return "ConditionFailed";
    case errc::not_free: return "NotFree";
    case errc::not_block_transitive: return "NotBlockTransitive";
    case errc::unknown_fixture: return "UnknownFixture";
    case errc::parameter_out_of_range: return "ParameterOutOfRange";
    case errc::parse_error: return "ParseError";
    case errc::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace hilb

#endif
