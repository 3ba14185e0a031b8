#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

inline const std::string kDefaultSliceLabel = "default";

// ---------------------------------------------------------------------------
// Match rules
// ---------------------------------------------------------------------------

enum class Direction { ToSatellite, FromSatellite };

inline std::string_view to_string(Direction d) {
  return d == Direction::ToSatellite ? "ToSatellite" : "FromSatellite";
}

template <>
inline std::optional<Direction> enum_from_string<Direction>(std::string_view s) {
  if (s == "ToSatellite") return Direction::ToSatellite;
  if (s == "FromSatellite") return Direction::FromSatellite;
  return std::nullopt;
}

/// Flow match fields; absent fields are wildcards. At least one field must
/// be present.
struct MatchSpec {
  std::optional<Snssai> snssai;
  std::optional<int> qfi;   // 0..63
  std::optional<int> dscp;  // 0..63
  std::optional<Ipv4Prefix> src_prefix;
  std::optional<Ipv4Prefix> dst_prefix;

  bool any_present() const {
    return snssai || qfi || dscp || src_prefix || dst_prefix;
  }

  bool operator==(const MatchSpec&) const = default;
};

struct ClassifierRule {
  int rule_id = 0;    // unique within a table, assigned at compile
  int priority = 0;   // lower wins
  MatchSpec match;
  std::string slice_id;
  Direction mark = Direction::ToSatellite;

  bool operator==(const ClassifierRule&) const = default;
};

/// Immutable compiled snapshot: rules sorted by (priority, rule_id) plus a
/// best-effort default action.
struct RuleTable {
  std::vector<ClassifierRule> rules;
  std::string default_slice = kDefaultSliceLabel;

  bool operator==(const RuleTable&) const = default;
};

/// Metadata observed for one flow at a stitching point.
struct FlowMetadata {
  std::optional<Snssai> snssai;
  std::optional<int> qfi;
  std::optional<int> dscp;
  std::uint32_t src = 0;
  std::uint32_t dst = 0;

  bool operator==(const FlowMetadata&) const = default;
};

// Priority tiers: more specific match kinds win.
inline constexpr int kTierSnssaiQfi = 0;
inline constexpr int kTierSnssai = 1;
inline constexpr int kTierPrefix = 2;  // dscp and prefix rules

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

/// What the compiler needs from one slice, in slice creation order.
struct RuleSource {
  std::string slice_id;
  SliceMode mode = SliceMode::Standalone;
  StitchingInfo stitching;
};

namespace detail {

inline std::string match_key(const MatchSpec& m) {
  std::string k;
  if (m.snssai) {
    k += "sst=" + std::to_string(m.snssai->sst);
    if (m.snssai->sd) k += ",sd=" + std::to_string(*m.snssai->sd);
  }
  if (m.qfi) k += ";qfi=" + std::to_string(*m.qfi);
  if (m.dscp) k += ";dscp=" + std::to_string(*m.dscp);
  if (m.src_prefix) k += ";src=" + m.src_prefix->str();
  if (m.dst_prefix) k += ";dst=" + m.dst_prefix->str();
  return k;
}

}  // namespace detail

/// Compiles the shared rule table from the given slices. Integrated slices
/// contribute S-NSSAI(+QFI) rules in both directions; standalone slices
/// contribute prefix rules per ingress pair (reversed for the return
/// direction). Two slices producing byte-identical MatchSpecs are an error:
/// the ambiguity must be explicit, never silently priority-resolved.
inline Result<RuleTable> compile_rules(const std::vector<RuleSource>& slices) {
  RuleTable table;
  int next_id = 1;
  std::map<std::string, std::string> seen;  // canonical match -> slice_id

  auto add_rule = [&](const MatchSpec& match, const std::string& slice_id, int priority,
                      Direction mark) -> std::optional<Error> {
    auto key = detail::match_key(match);
    auto it = seen.find(key);
    if (it != seen.end() && it->second != slice_id) {
      return Error{"CONFLICTING_RULES",
                   "slices " + it->second + " and " + slice_id +
                       " produce identical match: " + key,
                   {it->second, slice_id}};
    }
    seen[key] = slice_id;
    table.rules.push_back({next_id++, priority, match, slice_id, mark});
    return std::nullopt;
  };

  for (const auto& src : slices) {
    struct Pending {
      MatchSpec match;
      int tier;
      Direction mark;
      bool mirror;  // also emit a FromSatellite twin (integrated rules)
    };
    std::vector<Pending> pending;
    if (src.mode == SliceMode::Integrated) {
      if (!src.stitching.snssai) {
        return Error{"MISSING_STITCHING", src.slice_id + ": integrated slice lacks snssai"};
      }
      auto qfis = src.stitching.qfis;
      std::sort(qfis.begin(), qfis.end());
      for (int qfi : qfis) {
        MatchSpec m;
        m.snssai = src.stitching.snssai;
        m.qfi = qfi;
        pending.push_back({m, kTierSnssaiQfi, Direction::ToSatellite, true});
      }
      MatchSpec snssai_only;
      snssai_only.snssai = src.stitching.snssai;
      pending.push_back({snssai_only, kTierSnssai, Direction::ToSatellite, true});
    } else {
      if (src.stitching.prefix_pairs.empty()) {
        return Error{"MISSING_STITCHING", src.slice_id + ": standalone slice lacks prefixes"};
      }
      for (const auto& pair : src.stitching.prefix_pairs) {
        MatchSpec fwd;
        fwd.src_prefix = pair.terminal;
        fwd.dst_prefix = pair.hub;
        pending.push_back({fwd, kTierPrefix, Direction::ToSatellite, false});
        MatchSpec rtn;
        rtn.src_prefix = pair.hub;
        rtn.dst_prefix = pair.terminal;
        pending.push_back({rtn, kTierPrefix, Direction::FromSatellite, false});
      }
    }
    for (int dscp : src.stitching.dscp) {
      MatchSpec m;
      m.dscp = dscp;
      pending.push_back({m, kTierPrefix, Direction::ToSatellite, src.mode == SliceMode::Integrated});
    }

    for (const auto& p : pending) {
      if (auto err = add_rule(p.match, src.slice_id, p.tier, p.mark)) return *err;
      if (p.mirror) {
        table.rules.push_back({next_id++, p.tier, p.match, src.slice_id,
                               Direction::FromSatellite});
      }
    }
  }

  std::sort(table.rules.begin(), table.rules.end(),
            [](const ClassifierRule& a, const ClassifierRule& b) {
              if (a.priority != b.priority) return a.priority < b.priority;
              return a.rule_id < b.rule_id;
            });
  return table;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

inline bool rule_matches(const MatchSpec& m, const FlowMetadata& meta) {
  if (m.snssai) {
    if (!meta.snssai || meta.snssai->sst != m.snssai->sst) return false;
    if (m.snssai->sd && (!meta.snssai->sd || *meta.snssai->sd != *m.snssai->sd)) return false;
  }
  if (m.qfi && (!meta.qfi || *meta.qfi != *m.qfi)) return false;
  if (m.dscp && (!meta.dscp || *meta.dscp != *m.dscp)) return false;
  if (m.src_prefix && !m.src_prefix->contains(meta.src)) return false;
  if (m.dst_prefix && !m.dst_prefix->contains(meta.dst)) return false;
  return true;
}

/// First rule in (priority, rule_id) order whose every present field matches
/// wins; no match falls through to the default label. Total by construction.
inline std::string classify(const FlowMetadata& meta, const RuleTable& table) {
  for (const auto& rule : table.rules) {
    if (rule_matches(rule.match, meta)) return rule.slice_id;
  }
  return table.default_slice;
}

// ---------------------------------------------------------------------------
// Stitch points
// ---------------------------------------------------------------------------

/// Names of the four subnet boundary locations in a deployment.
struct Topology {
  std::string ran_edge = "ran-edge";
  std::string cn_edge = "cn-edge";
  std::string terminal_edge = "terminal-edge";
  std::string hub_edge = "hub-edge";
};

struct StitchPoint {
  std::string location;
  Direction direction = Direction::ToSatellite;

  bool operator==(const StitchPoint&) const = default;
};

/// Integrated slices stitch to the 5G RAN and CN around the satellite
/// subnet; standalone slices only touch the terminal and hub edges.
inline std::vector<StitchPoint> stitch_points(SliceMode mode, const Topology& topo = {}) {
  if (mode == SliceMode::Integrated) {
    return {{topo.ran_edge, Direction::ToSatellite},
            {topo.cn_edge, Direction::FromSatellite},
            {topo.hub_edge, Direction::ToSatellite},
            {topo.hub_edge, Direction::FromSatellite}};
  }
  return {{topo.terminal_edge, Direction::ToSatellite},
          {topo.hub_edge, Direction::FromSatellite}};
}

}  // namespace s3
