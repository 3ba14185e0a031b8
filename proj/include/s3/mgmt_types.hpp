#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s3/slice_instance.hpp"
#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

/// Integrated-mode request: the satellite subnet joins an end-to-end 5G
/// slice, so the request carries the stitching identifiers from the 5G side.
struct NssiRequest {
  SliceProfile profile;  // mode must be Integrated
  std::string e2e_slice_ref;
  StitchingInfo stitching;
};

/// Standalone-mode request: a pure satellite slice with prefix-based ingress.
struct StandaloneRequest {
  SliceProfile profile;  // mode must be Standalone
  StitchingInfo stitching;  // prefix_pairs (+ optional dscp)
};

/// Partial QoS update applied by modify; absent fields keep their value.
struct QosDelta {
  std::optional<Kbps> gbr_kbps;
  std::optional<Kbps> mbr_kbps;
  std::optional<double> pdb_ms;
  std::optional<double> per;
  std::optional<int> priority;

  FiveGQos apply_to(FiveGQos qos) const {
    if (gbr_kbps) qos.gbr_kbps = *gbr_kbps;
    if (mbr_kbps) qos.mbr_kbps = *mbr_kbps;
    if (pdb_ms) qos.pdb_ms = *pdb_ms;
    if (per) qos.per = *per;
    if (priority) qos.priority = *priority;
    return qos;
  }
};

enum class EventKind { Created, StateChanged, Modified, Deleted, Alarm };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Created: return "Created";
    case EventKind::StateChanged: return "StateChanged";
    case EventKind::Modified: return "Modified";
    case EventKind::Deleted: return "Deleted";
    case EventKind::Alarm: return "Alarm";
  }
  return "Alarm";
}

template <>
inline std::optional<EventKind> enum_from_string<EventKind>(std::string_view s) {
  if (s == "Created") return EventKind::Created;
  if (s == "StateChanged") return EventKind::StateChanged;
  if (s == "Modified") return EventKind::Modified;
  if (s == "Deleted") return EventKind::Deleted;
  if (s == "Alarm") return EventKind::Alarm;
  return std::nullopt;
}

struct SliceEvent {
  std::uint64_t seq = 0;
  std::string slice_id;
  EventKind kind = EventKind::Created;
  std::optional<LifecycleState> old_state;
  std::optional<LifecycleState> new_state;
  std::uint64_t timestamp = 0;  // logical ticks, monotone per slice
  std::string detail;
};

/// HTTP-style error: status class plus machine-readable code and the
/// pipeline stage that produced it.
struct ApiError {
  int status = 500;
  std::string code;
  std::string reason;
  std::string stage;
};

struct SliceSummary {
  std::string slice_id;
  LifecycleState state = LifecycleState::Pending;
  std::optional<std::string> failure_reason;
  std::vector<StitchPoint> stitch;
};

}  // namespace s3
