#pragma once

#include <array>

#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

// ---------------------------------------------------------------------------
// Satellite-side QoS classes
// ---------------------------------------------------------------------------

enum class SatClassId { RtConversational, Streaming, Interactive, Background };

inline constexpr int kSatClassCount = 4;

inline std::string_view to_string(SatClassId c) {
  switch (c) {
    case SatClassId::RtConversational: return "RT-Conversational";
    case SatClassId::Streaming: return "Streaming";
    case SatClassId::Interactive: return "Interactive";
    case SatClassId::Background: return "Background";
  }
  return "Background";
}

template <>
inline std::optional<SatClassId> enum_from_string<SatClassId>(std::string_view s) {
  for (int i = 0; i < kSatClassCount; ++i) {
    auto c = static_cast<SatClassId>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

struct SatQosClass {
  SatClassId class_id = SatClassId::Background;
  int scheduler_weight = 1;  // > 0
  int drop_precedence = 2;   // 0..2

  bool operator==(const SatQosClass&) const = default;
};

/// Per-deployment class parameters, indexed by SatClassId. Scheduler weights
/// must be strictly decreasing from RT-Conversational down to Background.
struct QosMapTable {
  std::array<SatQosClass, kSatClassCount> classes = {{
      {SatClassId::RtConversational, 8, 0},
      {SatClassId::Streaming, 4, 1},
      {SatClassId::Interactive, 2, 1},
      {SatClassId::Background, 1, 2},
  }};

  const SatQosClass& params(SatClassId id) const { return classes[static_cast<int>(id)]; }

  bool weights_strictly_decreasing() const {
    for (int i = 1; i < kSatClassCount; ++i) {
      if (classes[i].scheduler_weight >= classes[i - 1].scheduler_weight) return false;
    }
    return true;
  }

  bool operator==(const QosMapTable&) const = default;
};

/// Deterministic total mapping from 5G QoS to the satellite class taxonomy.
inline SatClassId map_qos(const FiveGQos& qos, ServiceClass service_class) {
  if (service_class == ServiceClass::Urllc || qos.pdb_ms <= 50.0)
    return SatClassId::RtConversational;
  switch (service_class) {
    case ServiceClass::Embb:
      return qos.gbr_kbps > 0 ? SatClassId::Streaming : SatClassId::Interactive;
    case ServiceClass::Mmtc:
      return SatClassId::Background;
    case ServiceClass::Custom:
      if (qos.priority <= 32) return SatClassId::RtConversational;
      if (qos.priority <= 64) return SatClassId::Streaming;
      if (qos.priority <= 96) return SatClassId::Interactive;
      return SatClassId::Background;
    default:
      return SatClassId::Background;
  }
}

// ---------------------------------------------------------------------------
// Latency decomposition
// ---------------------------------------------------------------------------

struct OrbitAltitudes {
  double leo_km = 550.0;
  double meo_km = 8000.0;
  double geo_km = 35786.0;

  double of(OrbitClass o) const {
    switch (o) {
      case OrbitClass::Leo: return leo_km;
      case OrbitClass::Meo: return meo_km;
      case OrbitClass::Geo: return geo_km;
    }
    return geo_km;
  }

  bool operator==(const OrbitAltitudes&) const = default;
};

/// Bent-pipe one-way delay across the sub-satellite point: up + down.
inline double propagation_delay_from_altitude_ms(double altitude_km) {
  return 2.0 * altitude_km / kSpeedOfLightKmPerS * 1000.0;
}

inline double propagation_delay_ms(OrbitClass orbit, const OrbitAltitudes& altitudes = {}) {
  return propagation_delay_from_altitude_ms(altitudes.of(orbit));
}

inline constexpr double kDefaultSchedulingMs = 10.0;

struct LatencyBudget {
  double propagation_ms = 0;
  double chain_ms = 0;
  double scheduling_ms = 0;
  double slack_ms = 0;  // pdb - (propagation + chain + scheduling)
};

struct FeasibilityResult {
  LatencyBudget budget;
  bool feasible = false;
};

/// Decomposes the packet delay budget against orbit propagation, gateway
/// chain processing and the hub scheduling budget. Feasible iff slack >= 0.
inline FeasibilityResult latency_feasibility(const FiveGQos& qos, OrbitClass orbit,
                                             double chain_ms,
                                             double scheduling_ms = kDefaultSchedulingMs,
                                             const OrbitAltitudes& altitudes = {}) {
  FeasibilityResult r;
  r.budget.propagation_ms = propagation_delay_ms(orbit, altitudes);
  r.budget.chain_ms = chain_ms;
  r.budget.scheduling_ms = scheduling_ms;
  r.budget.slack_ms =
      qos.pdb_ms - (r.budget.propagation_ms + r.budget.chain_ms + r.budget.scheduling_ms);
  r.feasible = r.budget.slack_ms >= 0.0;
  return r;
}

}  // namespace s3
