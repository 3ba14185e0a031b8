#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "s3/gateway_composer.hpp"
#include "s3/qos_mapper.hpp"
#include "s3/slice_model.hpp"
#include "s3/types.hpp"

namespace s3 {

// ---------------------------------------------------------------------------
// Inventory
// ---------------------------------------------------------------------------

struct HostResource {
  std::string host_id;
  std::int64_t cpu_units = 0;
  std::int64_t mem_mb = 0;
  std::int64_t allocated_cpu = 0;
  std::int64_t allocated_mem = 0;

  bool operator==(const HostResource&) const = default;
};

struct BeamResource {
  std::string beam_id;
  Kbps fwd_capacity_kbps = 0;
  Kbps rtn_capacity_kbps = 0;
  // Exclusive reservations: gbr for soft slices, mbr for hard-isolation
  // slices. Bounded by plain capacity.
  Kbps allocated_gbr_fwd = 0;
  Kbps allocated_gbr_rtn = 0;
  // Total mbr reservations, bounded by capacity * overbooking_mbr.
  Kbps allocated_mbr_fwd = 0;
  Kbps allocated_mbr_rtn = 0;

  bool operator==(const BeamResource&) const = default;
};

/// Per-beam demand of one slice as committed to the pool.
struct BeamReservation {
  Kbps gbr_fwd = 0;
  Kbps mbr_fwd = 0;
  Kbps gbr_rtn = 0;
  Kbps mbr_rtn = 0;
  bool hard = false;  // hard isolation reserves mbr exclusively

  Kbps exclusive_fwd() const { return hard ? mbr_fwd : gbr_fwd; }
  Kbps exclusive_rtn() const { return hard ? mbr_rtn : gbr_rtn; }

  bool operator==(const BeamReservation&) const = default;
};

struct NfPlacement {
  std::string nf_id;
  std::string host_id;
  std::int64_t cpu_units = 0;
  std::int64_t mem_mb = 0;

  bool operator==(const NfPlacement&) const = default;
};

struct Allocation {
  std::string slice_id;
  std::map<std::string, BeamReservation> beams;
  std::vector<NfPlacement> placements;

  bool operator==(const Allocation&) const = default;
};

/// The mutualized HUB: compute hosts plus beams/carriers with capacity.
/// Mutations go through allocate/release; the owning service serializes them.
struct ResourcePool {
  std::vector<HostResource> hosts;
  std::vector<BeamResource> beams;
  OrbitClass orbit = OrbitClass::Geo;
  double overbooking_mbr = 2.0;  // >= 1
  std::map<std::string, Allocation> live;

  BeamResource* find_beam(const std::string& id) {
    for (auto& b : beams)
      if (b.beam_id == id) return &b;
    return nullptr;
  }
  const BeamResource* find_beam(const std::string& id) const {
    for (const auto& b : beams)
      if (b.beam_id == id) return &b;
    return nullptr;
  }
  HostResource* find_host(const std::string& id) {
    for (auto& h : hosts)
      if (h.host_id == id) return &h;
    return nullptr;
  }

  Kbps mbr_headroom(Kbps capacity) const {
    return static_cast<Kbps>(std::llround(static_cast<double>(capacity) * overbooking_mbr));
  }

  std::vector<HostCapacity> host_capacities() const {
    std::vector<HostCapacity> out;
    out.reserve(hosts.size());
    for (const auto& h : hosts)
      out.push_back({h.host_id, h.cpu_units - h.allocated_cpu, h.mem_mb - h.allocated_mem});
    return out;
  }

  bool operator==(const ResourcePool&) const = default;
};

// ---------------------------------------------------------------------------
// Demand derivation
// ---------------------------------------------------------------------------

/// Forward demand comes straight from the QoS; return-link demand defaults
/// to 10% of forward unless the profile overrides it.
inline BeamReservation demand_of(const SliceProfile& profile) {
  BeamReservation d;
  d.gbr_fwd = profile.qos.gbr_kbps;
  d.mbr_fwd = profile.qos.mbr_kbps;
  d.gbr_rtn = profile.rtn_gbr_kbps.value_or(profile.qos.gbr_kbps / 10);
  d.mbr_rtn = profile.rtn_mbr_kbps.value_or(profile.qos.mbr_kbps / 10);
  d.hard = profile.isolation == IsolationClass::Hard;
  return d;
}

// ---------------------------------------------------------------------------
// Admission control
// ---------------------------------------------------------------------------

struct AdmissionDecision {
  bool admit = false;
  std::string reason;  // first failing check: GBR_CAPACITY, MBR_CAPACITY, LATENCY, COMPUTE
  std::string detail;
};

/// Checks capacity, latency and compute in that fixed order so reject
/// reasons are deterministic. The chain must already be composed for the
/// profile. Unknown beam ids are errors, not rejections.
inline Result<AdmissionDecision> check_admission(const SliceProfile& profile,
                                                 const NfChain& chain, const ResourcePool& pool,
                                                 double scheduling_ms = kDefaultSchedulingMs,
                                                 const OrbitAltitudes& altitudes = {}) {
  const BeamReservation demand = demand_of(profile);

  std::vector<std::string> beams = profile.coverage_beams;
  std::sort(beams.begin(), beams.end());
  for (const auto& beam_id : beams) {
    const BeamResource* beam = pool.find_beam(beam_id);
    if (beam == nullptr)
      return Error{"UNKNOWN_BEAM", "beam not in pool: " + beam_id, {beam_id}};
    if (beam->allocated_gbr_fwd + demand.exclusive_fwd() > beam->fwd_capacity_kbps ||
        beam->allocated_gbr_rtn + demand.exclusive_rtn() > beam->rtn_capacity_kbps)
      return AdmissionDecision{false, "GBR_CAPACITY", beam_id};
    if (beam->allocated_mbr_fwd + demand.mbr_fwd > pool.mbr_headroom(beam->fwd_capacity_kbps) ||
        beam->allocated_mbr_rtn + demand.mbr_rtn > pool.mbr_headroom(beam->rtn_capacity_kbps))
      return AdmissionDecision{false, "MBR_CAPACITY", beam_id};
  }

  auto feas = latency_feasibility(profile.qos, pool.orbit, chain_latency(chain), scheduling_ms,
                                  altitudes);
  if (!feas.feasible)
    return AdmissionDecision{false, "LATENCY", std::string(to_string(pool.orbit))};

  auto placement = place_chain(chain, pool.host_capacities());
  if (!placement.ok()) return AdmissionDecision{false, "COMPUTE", placement.error().message};

  return AdmissionDecision{true, "", ""};
}

// ---------------------------------------------------------------------------
// Allocation / release
// ---------------------------------------------------------------------------

/// Commits the slice's reservations and chain placement to the pool.
/// Revalidates admission first (compare-and-commit): callers that raced a
/// concurrent change get ADMISSION_RACE and retry. The commit itself is
/// all-or-nothing; a partially applied allocation is never observable.
inline Result<Allocation> allocate(const SliceProfile& profile, const NfChain& chain,
                                   ResourcePool& pool,
                                   double scheduling_ms = kDefaultSchedulingMs,
                                   const OrbitAltitudes& altitudes = {}) {
  if (pool.live.count(profile.slice_id) != 0)
    return Error{"DUPLICATE_ALLOCATION", "slice already holds an allocation: " + profile.slice_id};

  auto decision = check_admission(profile, chain, pool, scheduling_ms, altitudes);
  if (!decision.ok()) return decision.error();
  if (!decision.value().admit)
    return Error{"ADMISSION_RACE", "capacity changed since admission check",
                 {decision.value().reason, decision.value().detail}};

  auto placement = place_chain(chain, pool.host_capacities());
  if (!placement.ok()) return placement.error();  // unreachable after admit

  Allocation alloc;
  alloc.slice_id = profile.slice_id;
  const BeamReservation demand = demand_of(profile);
  for (const auto& beam_id : profile.coverage_beams) alloc.beams[beam_id] = demand;
  for (const auto& nf : chain.nfs) {
    alloc.placements.push_back(
        {nf.nf_id, placement.value().nf_to_host.at(nf.nf_id), nf.cpu_units, nf.mem_mb});
  }

  for (const auto& [beam_id, res] : alloc.beams) {
    BeamResource* beam = pool.find_beam(beam_id);
    beam->allocated_gbr_fwd += res.exclusive_fwd();
    beam->allocated_gbr_rtn += res.exclusive_rtn();
    beam->allocated_mbr_fwd += res.mbr_fwd;
    beam->allocated_mbr_rtn += res.mbr_rtn;
  }
  for (const auto& p : alloc.placements) {
    HostResource* host = pool.find_host(p.host_id);
    host->allocated_cpu += p.cpu_units;
    host->allocated_mem += p.mem_mb;
  }
  pool.live[alloc.slice_id] = alloc;
  return alloc;
}

/// Returns every total to its pre-allocate value. Double release and foreign
/// allocations are rejected, not ignored.
inline Result<Ok> release(const Allocation& allocation, ResourcePool& pool) {
  auto it = pool.live.find(allocation.slice_id);
  if (it == pool.live.end() || !(it->second == allocation))
    return Error{"UNKNOWN_ALLOCATION", "allocation not live: " + allocation.slice_id};

  for (const auto& [beam_id, res] : allocation.beams) {
    BeamResource* beam = pool.find_beam(beam_id);
    if (beam == nullptr) return Error{"UNKNOWN_BEAM", "beam not in pool: " + beam_id};
    beam->allocated_gbr_fwd -= res.exclusive_fwd();
    beam->allocated_gbr_rtn -= res.exclusive_rtn();
    beam->allocated_mbr_fwd -= res.mbr_fwd;
    beam->allocated_mbr_rtn -= res.mbr_rtn;
  }
  for (const auto& p : allocation.placements) {
    HostResource* host = pool.find_host(p.host_id);
    if (host != nullptr) {
      host->allocated_cpu -= p.cpu_units;
      host->allocated_mem -= p.mem_mb;
    }
  }
  pool.live.erase(it);
  return Ok{};
}

// ---------------------------------------------------------------------------
// Utilization
// ---------------------------------------------------------------------------

struct BeamUtilization {
  std::string beam_id;
  double gbr_fwd = 0;  // exclusive reservations / capacity
  double gbr_rtn = 0;
  double mbr_fwd = 0;  // mbr reservations / overbooked headroom
  double mbr_rtn = 0;
};

struct HostUtilization {
  std::string host_id;
  double cpu = 0;
  double mem = 0;
};

struct UtilizationReport {
  std::vector<BeamUtilization> beams;
  std::vector<HostUtilization> hosts;
};

/// Fractions in [0,1]; zero capacity reports fraction 0 by convention.
inline UtilizationReport utilization(const ResourcePool& pool) {
  auto frac = [](Kbps num, Kbps den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  UtilizationReport rep;
  for (const auto& b : pool.beams) {
    rep.beams.push_back({b.beam_id, frac(b.allocated_gbr_fwd, b.fwd_capacity_kbps),
                         frac(b.allocated_gbr_rtn, b.rtn_capacity_kbps),
                         frac(b.allocated_mbr_fwd, pool.mbr_headroom(b.fwd_capacity_kbps)),
                         frac(b.allocated_mbr_rtn, pool.mbr_headroom(b.rtn_capacity_kbps))});
  }
  for (const auto& h : pool.hosts) {
    rep.hosts.push_back(
        {h.host_id, frac(h.allocated_cpu, h.cpu_units), frac(h.allocated_mem, h.mem_mb)});
  }
  return rep;
}

/// Recomputes every running total from the live allocations. Used by tests
/// and the recovery path to assert conservation.
inline bool pool_totals_consistent(const ResourcePool& pool) {
  std::map<std::string, BeamResource> expect_beams;
  for (const auto& b : pool.beams) {
    BeamResource zero = b;
    zero.allocated_gbr_fwd = zero.allocated_gbr_rtn = 0;
    zero.allocated_mbr_fwd = zero.allocated_mbr_rtn = 0;
    expect_beams[b.beam_id] = zero;
  }
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> expect_hosts;
  for (const auto& h : pool.hosts) expect_hosts[h.host_id] = {0, 0};

  for (const auto& [slice_id, alloc] : pool.live) {
    for (const auto& [beam_id, res] : alloc.beams) {
      auto it = expect_beams.find(beam_id);
      if (it == expect_beams.end()) return false;
      it->second.allocated_gbr_fwd += res.exclusive_fwd();
      it->second.allocated_gbr_rtn += res.exclusive_rtn();
      it->second.allocated_mbr_fwd += res.mbr_fwd;
      it->second.allocated_mbr_rtn += res.mbr_rtn;
    }
    for (const auto& p : alloc.placements) {
      auto it = expect_hosts.find(p.host_id);
      if (it == expect_hosts.end()) return false;
      it->second.first += p.cpu_units;
      it->second.second += p.mem_mb;
    }
  }
  for (const auto& b : pool.beams) {
    const auto& e = expect_beams.at(b.beam_id);
    if (b.allocated_gbr_fwd != e.allocated_gbr_fwd || b.allocated_gbr_rtn != e.allocated_gbr_rtn ||
        b.allocated_mbr_fwd != e.allocated_mbr_fwd || b.allocated_mbr_rtn != e.allocated_mbr_rtn)
      return false;
  }
  for (const auto& h : pool.hosts) {
    const auto& e = expect_hosts.at(h.host_id);
    if (h.allocated_cpu != e.first || h.allocated_mem != e.second) return false;
  }
  return true;
}

}  // namespace s3
