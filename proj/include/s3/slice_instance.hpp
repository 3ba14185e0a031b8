#pragma once

#include <optional>
#include <string>
#include <vector>

#include "s3/gateway_composer.hpp"
#include "s3/resource_pool.hpp"
#include "s3/slice_classifier.hpp"
#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

/// A live slice: profile, lifecycle state and everything composed for it.
struct SliceInstance {
  SliceProfile profile;
  LifecycleState state = LifecycleState::Pending;
  std::optional<Allocation> allocation;
  std::optional<NfChain> chain;
  std::vector<ClassifierRule> rules;
  std::uint64_t created_at = 0;  // logical clock ticks
  std::uint64_t updated_at = 0;
  std::optional<std::string> failure_reason;
  StitchingInfo stitching;

  bool operator==(const SliceInstance&) const = default;
};

/// Applies one lifecycle event. Pairs outside the transition table are
/// rejected with ILLEGAL_TRANSITION and leave the instance untouched.
inline Result<SliceInstance> transition(const SliceInstance& instance, LifecycleEvent event,
                                        std::uint64_t now) {
  auto next = next_state(instance.state, event);
  if (!next) return illegal_transition(instance.state, event);
  SliceInstance updated = instance;
  updated.state = *next;
  updated.updated_at = now;
  return updated;
}

/// Cross-field consistency between lifecycle state and allocations.
inline bool instance_invariants_ok(const SliceInstance& instance) {
  switch (instance.state) {
    case LifecycleState::Active:
      return instance.allocation.has_value() && instance.chain.has_value();
    case LifecycleState::Pending:
    case LifecycleState::Failed:
    case LifecycleState::Terminated:
      return !instance.allocation.has_value();
    default:
      return true;
  }
}

inline RuleSource rule_source(const SliceInstance& instance) {
  return RuleSource{instance.profile.slice_id, instance.profile.mode, instance.stitching};
}

/// Compiles the shared table from every Active slice, in creation order.
inline Result<RuleTable> compile_rules(const std::vector<SliceInstance>& instances) {
  std::vector<const SliceInstance*> active;
  for (const auto& inst : instances) {
    if (inst.state == LifecycleState::Active) active.push_back(&inst);
  }
  std::sort(active.begin(), active.end(), [](const SliceInstance* a, const SliceInstance* b) {
    if (a->created_at != b->created_at) return a->created_at < b->created_at;
    return a->profile.slice_id < b->profile.slice_id;
  });
  std::vector<RuleSource> sources;
  sources.reserve(active.size());
  for (const auto* inst : active) sources.push_back(rule_source(*inst));
  return compile_rules(sources);
}

}  // namespace s3
