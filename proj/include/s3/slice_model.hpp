#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "s3/types.hpp"

namespace s3 {

// ---------------------------------------------------------------------------
// QoS and profile types
// ---------------------------------------------------------------------------

/// 5G QoS characteristics carried by a slice request.
struct FiveGQos {
  Kbps gbr_kbps = 0;      // guaranteed bit rate
  Kbps mbr_kbps = 0;      // maximum bit rate, >= gbr
  double pdb_ms = 100.0;  // packet delay budget
  double per = 0.01;      // packet error rate target, in (0, 1]
  int priority = 64;      // 1..127, lower is more important

  bool operator==(const FiveGQos&) const = default;
};

/// Stitching identifiers attached to a slice at creation time. Integrated
/// slices carry S-NSSAI/QFI identifiers from the 5G side; standalone slices
/// carry prefix pairs for the terminal/hub edges. Optional DSCP values add
/// DSCP-tier classifier rules in either mode.
struct StitchingInfo {
  std::vector<std::string> ran_edges;
  std::vector<std::string> cn_edges;
  std::optional<Snssai> snssai;
  std::vector<int> qfis;
  std::vector<PrefixPair> prefix_pairs;
  std::vector<int> dscp;

  bool operator==(const StitchingInfo&) const = default;
};

/// Tenant-facing slice requirements.
struct SliceProfile {
  std::string slice_id;
  SliceMode mode = SliceMode::Standalone;
  ServiceClass service_class = ServiceClass::Embb;
  FiveGQos qos;
  IsolationClass isolation = IsolationClass::Soft;
  TenantControl tenant_control = TenantControl::Managed;
  OrbitPreference orbit_preference = OrbitPreference::Any;
  std::vector<std::string> coverage_beams;
  // Return-link demand override; absent means 10% of the forward demand.
  std::optional<Kbps> rtn_gbr_kbps;
  std::optional<Kbps> rtn_mbr_kbps;
  std::string notes;

  bool operator==(const SliceProfile&) const = default;
};

// ---------------------------------------------------------------------------
// Lifecycle state machine
// ---------------------------------------------------------------------------

enum class LifecycleState {
  Pending,
  Preparing,
  Instantiating,
  Active,
  Modifying,
  Deactivated,
  Terminating,
  Terminated,
  Failed,
};

enum class LifecycleEvent {
  Prepare,
  Instantiate,
  ActivateDone,
  Modify,
  ModifyDone,
  Deactivate,
  Reactivate,
  Terminate,
  TerminateDone,
  Fail,
};

inline constexpr int kLifecycleStateCount = 9;
inline constexpr int kLifecycleEventCount = 10;

inline std::string_view to_string(LifecycleState s) {
  switch (s) {
    case LifecycleState::Pending: return "Pending";
    case LifecycleState::Preparing: return "Preparing";
    case LifecycleState::Instantiating: return "Instantiating";
    case LifecycleState::Active: return "Active";
    case LifecycleState::Modifying: return "Modifying";
    case LifecycleState::Deactivated: return "Deactivated";
    case LifecycleState::Terminating: return "Terminating";
    case LifecycleState::Terminated: return "Terminated";
    case LifecycleState::Failed: return "Failed";
  }
  return "Failed";
}

inline std::string_view to_string(LifecycleEvent e) {
  switch (e) {
    case LifecycleEvent::Prepare: return "Prepare";
    case LifecycleEvent::Instantiate: return "Instantiate";
    case LifecycleEvent::ActivateDone: return "ActivateDone";
    case LifecycleEvent::Modify: return "Modify";
    case LifecycleEvent::ModifyDone: return "ModifyDone";
    case LifecycleEvent::Deactivate: return "Deactivate";
    case LifecycleEvent::Reactivate: return "Reactivate";
    case LifecycleEvent::Terminate: return "Terminate";
    case LifecycleEvent::TerminateDone: return "TerminateDone";
    case LifecycleEvent::Fail: return "Fail";
  }
  return "Fail";
}

template <>
inline std::optional<LifecycleState> enum_from_string<LifecycleState>(std::string_view s) {
  for (int i = 0; i < kLifecycleStateCount; ++i) {
    auto st = static_cast<LifecycleState>(i);
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

inline bool is_absorbing(LifecycleState s) {
  return s == LifecycleState::Terminated || s == LifecycleState::Failed;
}

/// Transition table. Returns the successor state, or nullopt when the
/// (state, event) pair is not part of the table.
inline std::optional<LifecycleState> next_state(LifecycleState s, LifecycleEvent e) {
  using S = LifecycleState;
  using E = LifecycleEvent;
  if (e == E::Fail) {
    if (is_absorbing(s)) return std::nullopt;
    return S::Failed;
  }
  switch (s) {
    case S::Pending:
      if (e == E::Prepare) return S::Preparing;
      break;
    case S::Preparing:
      if (e == E::Instantiate) return S::Instantiating;
      break;
    case S::Instantiating:
      if (e == E::ActivateDone) return S::Active;
      break;
    case S::Active:
      if (e == E::Modify) return S::Modifying;
      if (e == E::Deactivate) return S::Deactivated;
      if (e == E::Terminate) return S::Terminating;
      break;
    case S::Modifying:
      if (e == E::ModifyDone) return S::Active;
      break;
    case S::Deactivated:
      if (e == E::Reactivate) return S::Active;
      if (e == E::Terminate) return S::Terminating;
      break;
    case S::Terminating:
      if (e == E::TerminateDone) return S::Terminated;
      break;
    case S::Terminated:
    case S::Failed:
      break;
  }
  return std::nullopt;
}

inline Error illegal_transition(LifecycleState s, LifecycleEvent e) {
  return Error{"ILLEGAL_TRANSITION",
               std::string(to_string(s)) + " cannot accept " + std::string(to_string(e)),
               {std::string(to_string(s)), std::string(to_string(e))}};
}

// ---------------------------------------------------------------------------
// Profile validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.code == code; });
  }
};

/// Checks every profile invariant and reports all violations at once.
/// Validation failures are data, not errors.
inline ValidationResult validate_profile(const SliceProfile& p) {
  ValidationResult r;
  auto add = [&](std::string code, std::string msg) {
    r.violations.push_back({std::move(code), std::move(msg)});
  };
  if (p.slice_id.empty()) add("EMPTY_SLICE_ID", "slice_id must be non-empty");
  if (p.coverage_beams.empty()) add("NO_BEAMS", "coverage_beams must name at least one beam");
  {
    auto beams = p.coverage_beams;
    std::sort(beams.begin(), beams.end());
    if (std::adjacent_find(beams.begin(), beams.end()) != beams.end())
      add("DUPLICATE_BEAM", "coverage_beams contains duplicates");
  }
  if (p.qos.gbr_kbps < 0 || p.qos.mbr_kbps < 0) add("NEGATIVE_RATE", "gbr/mbr must be >= 0");
  if (p.qos.mbr_kbps < p.qos.gbr_kbps) add("MBR_LT_GBR", "mbr must be >= gbr");
  if (!(p.qos.pdb_ms > 0)) add("PDB_NOT_POSITIVE", "pdb_ms must be > 0");
  if (!(p.qos.per > 0.0 && p.qos.per <= 1.0)) add("PER_OUT_OF_RANGE", "per must be in (0,1]");
  if (p.qos.priority < 1 || p.qos.priority > 127)
    add("PRIORITY_OUT_OF_RANGE", "priority must be in 1..127");
  if (p.rtn_gbr_kbps || p.rtn_mbr_kbps) {
    Kbps rg = p.rtn_gbr_kbps.value_or(0);
    Kbps rm = p.rtn_mbr_kbps.value_or(rg);
    if (rg < 0 || rm < 0) add("NEGATIVE_RATE", "return-link rates must be >= 0");
    if (rm < rg) add("RTN_MBR_LT_GBR", "return-link mbr must be >= gbr");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Tenant control levels
// ---------------------------------------------------------------------------

/// API operations permitted at a control level. Levels nest:
/// Managed c SharedControl c FullControl.
inline std::set<std::string> allowed_operations(TenantControl level) {
  std::set<std::string> ops = {"create", "delete", "status"};
  if (level == TenantControl::SharedControl || level == TenantControl::FullControl) {
    ops.insert("modify");
    ops.insert("scenario-run");
  }
  if (level == TenantControl::FullControl) {
    ops.insert("catalog-edit");
    ops.insert("pool-inspect");
  }
  return ops;
}

}  // namespace s3
