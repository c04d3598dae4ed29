#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subtree {

enum class ErrorCode {
  parse,
  duplicate_node_id,
  malformed_tree,
  overlapping_events,
  incomplete_partition,
  empty_scope,
  mixed_reward_kinds,
  unknown_node,
  unknown_atom,
  unknown_event,
  unknown_label,
  scope_mismatch,
  zero_probability_condition,
  missing_arc_probability,
  inconsistent_assessment,
  invalid_mass,
  partition_invalid,
  empty_input,
  mode_unsupported,
  not_a_preorder,
  instance_invalid,
  invalid_config,
  usage,
};

std::string_view error_code_name(ErrorCode code);

/// Every recoverable failure in the library is reported through this type.
/// The message names the node, arc, atom or label involved.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace subtree
