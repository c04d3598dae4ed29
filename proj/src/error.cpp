#include "subtree/error.hpp"

namespace subtree {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::duplicate_node_id: return "DuplicateNodeId";
    case ErrorCode::malformed_tree: return "MalformedTree";
    case ErrorCode::overlapping_events: return "OverlappingEvents";
    case ErrorCode::incomplete_partition: return "IncompletePartition";
    case ErrorCode::empty_scope: return "EmptyScope";
    case ErrorCode::mixed_reward_kinds: return "MixedRewardKinds";
    case ErrorCode::unknown_node: return "UnknownNode";
    case ErrorCode::unknown_atom: return "UnknownAtom";
    case ErrorCode::unknown_event: return "UnknownEvent";
    case ErrorCode::unknown_label: return "UnknownLabel";
    case ErrorCode::scope_mismatch: return "ScopeMismatch";
    case ErrorCode::zero_probability_condition: return "ZeroProbabilityCondition";
    case ErrorCode::missing_arc_probability: return "MissingArcProbability";
    case ErrorCode::inconsistent_assessment: return "InconsistentAssessment";
    case ErrorCode::invalid_mass: return "InvalidMass";
    case ErrorCode::partition_invalid: return "PartitionInvalid";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::mode_unsupported: return "ModeUnsupported";
    case ErrorCode::not_a_preorder: return "NotAPreorder";
    case ErrorCode::instance_invalid: return "InstanceInvalid";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::usage: return "UsageError";
  }
  return "Error";
}

}  // namespace subtree
