#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "s3/qos_mapper.hpp"
#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

// ---------------------------------------------------------------------------
// Network function catalog
// ---------------------------------------------------------------------------

struct NfDescriptor {
  std::string nf_id;
  int stage = 0;  // 0..9, ingress-to-egress ordering position
  std::set<std::string> provides;
  std::int64_t cpu_units = 1;
  std::int64_t mem_mb = 128;
  double latency_ms = 0.0;
  std::int64_t cost = 1;

  bool operator==(const NfDescriptor&) const = default;
};

inline ValidationResult validate_descriptor(const NfDescriptor& nf) {
  ValidationResult r;
  if (nf.nf_id.empty()) r.violations.push_back({"EMPTY_NF_ID", "nf_id must be non-empty"});
  if (nf.provides.empty())
    r.violations.push_back({"NO_CAPABILITIES", nf.nf_id + ": provides must be non-empty"});
  if (nf.stage < 0 || nf.stage > 9)
    r.violations.push_back({"STAGE_OUT_OF_RANGE", nf.nf_id + ": stage must be in 0..9"});
  if (nf.latency_ms < 0)
    r.violations.push_back({"NEGATIVE_LATENCY", nf.nf_id + ": latency_ms must be >= 0"});
  if (nf.cost <= 0) r.violations.push_back({"NON_POSITIVE_COST", nf.nf_id + ": cost must be > 0"});
  if (nf.cpu_units < 0 || nf.mem_mb < 0)
    r.violations.push_back({"NEGATIVE_DEMAND", nf.nf_id + ": cpu/mem must be >= 0"});
  return r;
}

/// Ordered per-slice gateway composition. Stage values are non-decreasing
/// along the chain.
struct NfChain {
  std::vector<NfDescriptor> nfs;

  bool operator==(const NfChain&) const = default;
};

struct Placement {
  std::map<std::string, std::string> nf_to_host;

  bool operator==(const Placement&) const = default;
};

// ---------------------------------------------------------------------------
// Capability derivation
// ---------------------------------------------------------------------------

/// Capabilities every gateway needs, extended by the slice's service class,
/// mapped QoS class and isolation level.
inline std::set<std::string> required_capabilities(const SliceProfile& profile) {
  std::set<std::string> caps = {"classify", "encapsulate", "schedule"};
  if (profile.service_class == ServiceClass::Embb && profile.qos.gbr_kbps > 0)
    caps.insert("accelerate");
  if (map_qos(profile.qos, profile.service_class) == SatClassId::RtConversational)
    caps.insert("low-latency-sched");
  if (profile.isolation == IsolationClass::Hard) caps.insert("encrypt");
  return caps;
}

// ---------------------------------------------------------------------------
// Chain composition: minimum-cost capability cover
// ---------------------------------------------------------------------------

inline constexpr std::size_t kExactComposeLimit = 20;

namespace detail {

struct CoverCandidate {
  std::int64_t cost = 0;
  std::vector<int> members;  // indices into the id-sorted catalog, ascending

  // Better-than ordering: cheaper, then fewer NFs, then lexicographically
  // smaller id sequence. Catalog indices are id-sorted, so comparing index
  // sequences compares id sequences.
  bool better_than(const CoverCandidate& other) const {
    if (cost != other.cost) return cost < other.cost;
    if (members.size() != other.members.size()) return members.size() < other.members.size();
    return members < other.members;
  }
};

// Exhaustive subset search with a cost bound. `masks[i]` is the coverage of
// catalog NF i restricted to the required tags.
inline void cover_search(const std::vector<std::uint32_t>& masks,
                         const std::vector<std::int64_t>& costs,
                         const std::vector<std::uint32_t>& suffix_union, std::uint32_t full,
                         std::size_t idx, std::uint32_t covered, std::int64_t cost,
                         std::vector<int>& chosen, CoverCandidate& best, bool& found) {
  if (covered == full) {
    CoverCandidate cand{cost, chosen};
    if (!found || cand.better_than(best)) {
      best = std::move(cand);
      found = true;
    }
    return;
  }
  if (idx >= masks.size()) return;
  if ((covered | suffix_union[idx]) != full) return;  // cannot complete
  if (found && cost > best.cost) return;              // keep ties for tie-breaks
  // include idx
  chosen.push_back(static_cast<int>(idx));
  cover_search(masks, costs, suffix_union, full, idx + 1, covered | masks[idx],
               cost + costs[idx], chosen, best, found);
  chosen.pop_back();
  // skip idx
  cover_search(masks, costs, suffix_union, full, idx + 1, covered, cost, chosen, best, found);
}

}  // namespace detail

/// Selects a minimum-total-cost subset of the catalog whose capabilities
/// cover `required`, ordered by (stage, nf_id). Catalogs up to
/// kExactComposeLimit NFs are solved exactly by bounded subset search;
/// larger catalogs fall back to greedy cost-per-new-capability with the
/// same tie-breaks.
inline Result<NfChain> compose_chain(const std::set<std::string>& required,
                                     std::vector<NfDescriptor> catalog) {
  if (required.empty()) return NfChain{};

  std::sort(catalog.begin(), catalog.end(),
            [](const NfDescriptor& a, const NfDescriptor& b) { return a.nf_id < b.nf_id; });

  std::vector<std::string> tags(required.begin(), required.end());
  auto tag_bit = [&](const std::string& t) -> int {
    auto it = std::lower_bound(tags.begin(), tags.end(), t);
    if (it == tags.end() || *it != t) return -1;
    return static_cast<int>(it - tags.begin());
  };
  const std::uint32_t full = tags.size() >= 32 ? 0xffffffffu : ((1u << tags.size()) - 1u);

  std::vector<std::uint32_t> masks(catalog.size(), 0);
  std::vector<std::int64_t> costs(catalog.size(), 0);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    for (const auto& t : catalog[i].provides) {
      int b = tag_bit(t);
      if (b >= 0) masks[i] |= 1u << b;
    }
    costs[i] = catalog[i].cost;
  }

  std::uint32_t reachable = 0;
  for (auto m : masks) reachable |= m;
  if (reachable != full) {
    std::vector<std::string> missing;
    for (std::size_t b = 0; b < tags.size(); ++b) {
      if (!(reachable & (1u << b))) missing.push_back(tags[b]);
    }
    std::string msg = "no catalog subset covers:";
    for (const auto& m : missing) msg += " " + m;
    return Error{"UNCOVERABLE", msg, missing};
  }

  std::vector<int> selected;
  if (catalog.size() <= kExactComposeLimit) {
    std::vector<std::uint32_t> suffix(catalog.size() + 1, 0);
    for (std::size_t i = catalog.size(); i-- > 0;) suffix[i] = suffix[i + 1] | masks[i];
    detail::CoverCandidate best;
    bool found = false;
    std::vector<int> chosen;
    detail::cover_search(masks, costs, suffix, full, 0, 0, 0, chosen, best, found);
    selected = best.members;
  } else {
    // Greedy: repeatedly take the NF with the lowest cost per newly covered
    // capability; ties go to lower cost, then smaller nf_id.
    std::uint32_t covered = 0;
    std::vector<bool> used(catalog.size(), false);
    while (covered != full) {
      int best_idx = -1;
      std::int64_t best_cost = 0;
      int best_new = 0;
      for (std::size_t i = 0; i < catalog.size(); ++i) {
        if (used[i]) continue;
        int new_bits = std::popcount(masks[i] & ~covered);
        if (new_bits == 0) continue;
        if (best_idx < 0) {
          best_idx = static_cast<int>(i);
          best_cost = costs[i];
          best_new = new_bits;
          continue;
        }
        // cost_i / new_i < cost_b / new_b  <=>  cost_i * new_b < cost_b * new_i
        std::int64_t lhs = costs[i] * best_new;
        std::int64_t rhs = best_cost * new_bits;
        if (lhs < rhs || (lhs == rhs && costs[i] < best_cost)) {
          best_idx = static_cast<int>(i);
          best_cost = costs[i];
          best_new = new_bits;
        }
      }
      used[best_idx] = true;
      covered |= masks[best_idx];
      selected.push_back(best_idx);
    }
    std::sort(selected.begin(), selected.end());
  }

  NfChain chain;
  for (int i : selected) chain.nfs.push_back(catalog[i]);
  std::stable_sort(chain.nfs.begin(), chain.nfs.end(),
                   [](const NfDescriptor& a, const NfDescriptor& b) {
                     if (a.stage != b.stage) return a.stage < b.stage;
                     return a.nf_id < b.nf_id;
                   });
  return chain;
}

inline double chain_latency(const NfChain& chain) {
  double total = 0;
  for (const auto& nf : chain.nfs) total += nf.latency_ms;
  return total;
}

inline bool chain_stages_ordered(const NfChain& chain) {
  for (std::size_t i = 1; i < chain.nfs.size(); ++i) {
    if (chain.nfs[i].stage < chain.nfs[i - 1].stage) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Placement: first-fit-decreasing over pool hosts
// ---------------------------------------------------------------------------

/// Host capacity view used by placement; residual = capacity - allocated.
struct HostCapacity {
  std::string host_id;
  std::int64_t cpu_free = 0;
  std::int64_t mem_free = 0;
};

/// First-fit-decreasing by cpu demand (ties by nf_id) over hosts sorted by
/// host_id. Optimality is not claimed, only feasibility and determinism.
inline Result<Placement> place_chain(const NfChain& chain, std::vector<HostCapacity> hosts) {
  std::sort(hosts.begin(), hosts.end(),
            [](const HostCapacity& a, const HostCapacity& b) { return a.host_id < b.host_id; });
  auto nfs = chain.nfs;
  std::sort(nfs.begin(), nfs.end(), [](const NfDescriptor& a, const NfDescriptor& b) {
    if (a.cpu_units != b.cpu_units) return a.cpu_units > b.cpu_units;
    return a.nf_id < b.nf_id;
  });

  Placement placement;
  for (const auto& nf : nfs) {
    bool placed = false;
    for (auto& h : hosts) {
      if (h.cpu_free >= nf.cpu_units && h.mem_free >= nf.mem_mb) {
        h.cpu_free -= nf.cpu_units;
        h.mem_free -= nf.mem_mb;
        placement.nf_to_host[nf.nf_id] = h.host_id;
        placed = true;
        break;
      }
    }
    if (!placed) {
      return Error{"INSUFFICIENT_COMPUTE", "no host can fit " + nf.nf_id, {nf.nf_id}};
    }
  }
  return placement;
}

}  // namespace s3
