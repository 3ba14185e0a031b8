#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "s3/qos_mapper.hpp"
#include "s3/resource_pool.hpp"
#include "s3/slice_classifier.hpp"
#include "s3/slice_instance.hpp"
#include "s3/types.hpp"

namespace s3 {

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

enum class TrafficPattern { Cbr, Poisson };

inline std::string_view to_string(TrafficPattern p) {
  return p == TrafficPattern::Cbr ? "CBR" : "Poisson";
}

template <>
inline std::optional<TrafficPattern> enum_from_string<TrafficPattern>(std::string_view s) {
  if (s == "CBR") return TrafficPattern::Cbr;
  if (s == "Poisson") return TrafficPattern::Poisson;
  return std::nullopt;
}

struct FlowSpec {
  std::string flow_id;
  FlowMetadata metadata;
  std::string beam_id;        // empty -> first beam covered by the target slice
  Kbps rate_kbps = 0;
  int packet_size_bytes = 0;  // 0 -> network default
  TrafficPattern pattern = TrafficPattern::Cbr;
  double start_s = 0.0;
  double stop_s = 0.0;
};

struct ScenarioSpec {
  double duration_s = 10.0;
  std::uint64_t seed = 1;
  std::vector<FlowSpec> flows;
};

struct EmulatorParams {
  double token_burst_ms = 50.0;    // green/yellow bucket depth, ms at the bucket rate
  int queue_bound_packets = 100;   // per-slice FIFO bound
  int default_packet_bytes = 1250;
  double isolation_tol = 0.02;

  bool operator==(const EmulatorParams&) const = default;
};

// ---------------------------------------------------------------------------
// Network model
// ---------------------------------------------------------------------------

/// Static snapshot the event loop runs against: one token bucket + FIFO per
/// active slice per covered beam, one capacity server per beam, classifier
/// table at the ingress stitch point, fixed propagation delay.
struct EmulatedNetwork {
  struct SliceEntry {
    std::string slice_id;
    Kbps gbr_kbps = 0;
    Kbps mbr_kbps = 0;
    bool unlimited_mbr = false;  // best-effort default entry
    int scheduler_weight = 1;
    std::vector<std::string> beams;
  };

  std::vector<SliceEntry> slices;  // [0] is always the best-effort default
  std::vector<std::string> beam_ids;
  std::vector<Kbps> beam_capacity_kbps;  // parallel to beam_ids, forward link
  double propagation_ms = 0.0;
  RuleTable rules;
  EmulatorParams params;

  int beam_index(const std::string& id) const {
    for (std::size_t i = 0; i < beam_ids.size(); ++i)
      if (beam_ids[i] == id) return static_cast<int>(i);
    return -1;
  }
  int slice_index(const std::string& id) const {
    for (std::size_t i = 0; i < slices.size(); ++i)
      if (slices[i].slice_id == id) return static_cast<int>(i);
    return -1;
  }
};

/// Wires queues and buckets for every Active slice. Traffic that classifies
/// to no slice lands in the per-beam best-effort default queue.
inline Result<EmulatedNetwork> build_network(const std::vector<SliceInstance>& slices,
                                             const ResourcePool& pool, const RuleTable& rules,
                                             const QosMapTable& qos_table = {},
                                             const OrbitAltitudes& altitudes = {},
                                             const EmulatorParams& params = {}) {
  EmulatedNetwork net;
  net.rules = rules;
  net.params = params;
  net.propagation_ms = propagation_delay_ms(pool.orbit, altitudes);

  std::vector<const BeamResource*> beams;
  for (const auto& b : pool.beams) beams.push_back(&b);
  std::sort(beams.begin(), beams.end(),
            [](const BeamResource* a, const BeamResource* b) { return a->beam_id < b->beam_id; });
  for (const auto* b : beams) {
    net.beam_ids.push_back(b->beam_id);
    net.beam_capacity_kbps.push_back(b->fwd_capacity_kbps);
  }

  EmulatedNetwork::SliceEntry deflt;
  deflt.slice_id = kDefaultSliceLabel;
  deflt.unlimited_mbr = true;
  deflt.scheduler_weight = qos_table.params(SatClassId::Background).scheduler_weight;
  deflt.beams = net.beam_ids;
  net.slices.push_back(deflt);

  std::vector<const SliceInstance*> active;
  for (const auto& inst : slices) {
    if (inst.state != LifecycleState::Active) continue;
    if (!inst.allocation.has_value()) {
      return Error{"INCONSISTENT_STATE",
                   inst.profile.slice_id + " is Active without an allocation"};
    }
    active.push_back(&inst);
  }
  std::sort(active.begin(), active.end(), [](const SliceInstance* a, const SliceInstance* b) {
    return a->profile.slice_id < b->profile.slice_id;
  });
  for (const auto* inst : active) {
    EmulatedNetwork::SliceEntry e;
    e.slice_id = inst->profile.slice_id;
    e.gbr_kbps = inst->profile.qos.gbr_kbps;
    e.mbr_kbps = inst->profile.qos.mbr_kbps;
    e.scheduler_weight =
        qos_table.params(map_qos(inst->profile.qos, inst->profile.service_class)).scheduler_weight;
    for (const auto& [beam_id, res] : inst->allocation->beams) e.beams.push_back(beam_id);
    std::sort(e.beams.begin(), e.beams.end());
    net.slices.push_back(std::move(e));
  }
  return net;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct SliceMetrics {
  double offered_mbps = 0;
  double carried_mbps = 0;
  double mean_delay_ms = 0;
  double p99_delay_ms = 0;
  double loss_ratio = 0;
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_carried = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t packets_in_flight = 0;
};

struct MetricsReport {
  double duration_s = 0;
  std::uint64_t seed = 0;
  std::map<std::string, SliceMetrics> slices;
  std::map<std::string, std::vector<double>> beam_utilization;  // per-second busy fraction
};

// ---------------------------------------------------------------------------
// Event loop
// ---------------------------------------------------------------------------

namespace detail {

enum class PacketColor { Green, Yellow };

struct EmuPacket {
  std::uint64_t arrival_ns = 0;
  std::int64_t bits = 0;
  int slice = 0;
  PacketColor color = PacketColor::Green;
};

struct TokenBucket {
  double tokens = 0;
  double burst = 0;
  Kbps rate_kbps = 0;
  std::uint64_t last_ns = 0;
  bool unlimited = false;

  void refill(std::uint64_t now_ns) {
    if (unlimited) return;
    tokens = std::min(burst, tokens + static_cast<double>(now_ns - last_ns) *
                                         static_cast<double>(rate_kbps) / 1.0e6);
    last_ns = now_ns;
  }
  bool take(std::int64_t bits, std::uint64_t now_ns) {
    if (unlimited) return true;
    refill(now_ns);
    if (tokens + 1e-9 < static_cast<double>(bits)) return false;
    tokens -= static_cast<double>(bits);
    return true;
  }
};

struct EmuQueue {
  int slice = 0;
  std::deque<EmuPacket> fifo;
  TokenBucket green;
  TokenBucket yellow;
  double green_norm = 0;   // bits served / gbr, drives round robin among greens
  double yellow_norm = 0;  // bits served / weight, drives residual sharing
};

struct EmuBeam {
  Kbps capacity_kbps = 0;
  std::vector<EmuQueue> queues;               // one per slice with presence on this beam
  std::map<int, int> slice_to_queue;          // slice index -> queue index
  bool busy = false;
  EmuPacket in_service;
  std::uint64_t tx_start_ns = 0;
};

struct EmuEvent {
  std::uint64_t time_ns = 0;
  std::uint64_t seq = 0;  // deterministic tie-break
  int kind = 0;           // 0 = flow arrival, 1 = beam departure
  int index = 0;          // flow or beam index

  bool operator>(const EmuEvent& o) const {
    if (time_ns != o.time_ns) return time_ns > o.time_ns;
    return seq > o.seq;
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Runs the scenario to completion. The run is a pure function of
/// (network, traffic, duration, seed): identical inputs produce an
/// identical report.
inline Result<MetricsReport> run_scenario(const EmulatedNetwork& net, const ScenarioSpec& scenario) {
  using namespace detail;

  if (!(scenario.duration_s > 0)) return Error{"BAD_DURATION", "duration_s must be > 0"};
  const std::uint64_t end_ns = static_cast<std::uint64_t>(std::llround(scenario.duration_s * 1e9));
  const std::uint64_t prop_ns = static_cast<std::uint64_t>(std::llround(net.propagation_ms * 1e6));

  // Per-beam queue fabric.
  std::vector<EmuBeam> beams(net.beam_ids.size());
  for (std::size_t b = 0; b < beams.size(); ++b) {
    beams[b].capacity_kbps = net.beam_capacity_kbps[b];
    for (std::size_t s = 0; s < net.slices.size(); ++s) {
      const auto& entry = net.slices[s];
      if (std::find(entry.beams.begin(), entry.beams.end(), net.beam_ids[b]) ==
          entry.beams.end())
        continue;
      EmuQueue q;
      q.slice = static_cast<int>(s);
      q.green.rate_kbps = entry.gbr_kbps;
      q.green.burst = static_cast<double>(entry.gbr_kbps) * net.params.token_burst_ms;
      q.green.tokens = q.green.burst;
      q.yellow.rate_kbps = entry.mbr_kbps;
      q.yellow.burst = static_cast<double>(entry.mbr_kbps) * net.params.token_burst_ms;
      q.yellow.tokens = q.yellow.burst;
      q.yellow.unlimited = entry.unlimited_mbr;
      beams[b].slice_to_queue[q.slice] = static_cast<int>(beams[b].queues.size());
      beams[b].queues.push_back(std::move(q));
    }
  }

  // Resolve each flow to (slice, beam) once; metadata is constant per flow.
  struct FlowRt {
    int slice = 0;
    int beam = 0;
    std::int64_t bits = 0;
    std::uint64_t stop_ns = 0;
    double mean_interval_ns = 0;
    TrafficPattern pattern = TrafficPattern::Cbr;
    std::mt19937_64 rng;
  };
  std::vector<FlowRt> flows;
  std::priority_queue<EmuEvent, std::vector<EmuEvent>, std::greater<EmuEvent>> events;
  std::uint64_t event_seq = 0;

  for (std::size_t f = 0; f < scenario.flows.size(); ++f) {
    const auto& spec = scenario.flows[f];
    if (spec.rate_kbps < 0)
      return Error{"BAD_FLOW_RATE", spec.flow_id + ": rate must be non-negative"};
    if (!(spec.stop_s > spec.start_s))
      return Error{"BAD_FLOW_WINDOW", spec.flow_id + ": stop_s must exceed start_s"};
    if (spec.rate_kbps == 0) continue;  // a silent flow generates nothing
    FlowRt rt;
    const std::string label = classify(spec.metadata, net.rules);
    int slice_idx = net.slice_index(label);
    rt.slice = slice_idx >= 0 ? slice_idx : 0;

    std::string beam_id = spec.beam_id;
    if (beam_id.empty()) beam_id = net.slices[rt.slice].beams.empty()
                                        ? (net.beam_ids.empty() ? "" : net.beam_ids[0])
                                        : net.slices[rt.slice].beams[0];
    int beam_idx = net.beam_index(beam_id);
    if (beam_idx < 0) return Error{"UNKNOWN_BEAM", spec.flow_id + ": no such beam " + beam_id};
    rt.beam = beam_idx;
    // A slice with no queue on the chosen beam degrades to best effort there.
    if (beams[rt.beam].slice_to_queue.find(rt.slice) == beams[rt.beam].slice_to_queue.end())
      rt.slice = 0;

    int size = spec.packet_size_bytes > 0 ? spec.packet_size_bytes : net.params.default_packet_bytes;
    rt.bits = static_cast<std::int64_t>(size) * 8;
    rt.stop_ns = static_cast<std::uint64_t>(std::llround(spec.stop_s * 1e9));
    rt.mean_interval_ns = static_cast<double>(rt.bits) * 1.0e6 / static_cast<double>(spec.rate_kbps);
    rt.pattern = spec.pattern;
    rt.rng.seed(scenario.seed ^ splitmix64(static_cast<std::uint64_t>(f) + 1));

    std::uint64_t first_ns = static_cast<std::uint64_t>(std::llround(spec.start_s * 1e9));
    if (rt.pattern == TrafficPattern::Poisson) {
      std::uint64_t u = rt.rng();
      double unit = (static_cast<double>(u >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
      first_ns += static_cast<std::uint64_t>(std::llround(-std::log(unit) * rt.mean_interval_ns));
    }
    const std::uint64_t stop_ns = rt.stop_ns;
    int idx = static_cast<int>(flows.size());
    flows.push_back(std::move(rt));
    if (first_ns < stop_ns && first_ns <= end_ns) events.push({first_ns, event_seq++, 0, idx});
  }

  // Accounting.
  const std::size_t n_slices = net.slices.size();
  std::vector<std::int64_t> offered_bits(n_slices, 0), carried_bits(n_slices, 0);
  std::vector<std::uint64_t> generated(n_slices, 0), carried(n_slices, 0), dropped(n_slices, 0);
  std::vector<std::vector<std::uint64_t>> delays(n_slices);
  const std::size_t n_bins = static_cast<std::size_t>(std::ceil(scenario.duration_s));
  std::vector<std::vector<double>> busy_ns(beams.size(), std::vector<double>(n_bins, 0.0));

  auto add_busy = [&](std::size_t beam, std::uint64_t from_ns, std::uint64_t to_ns) {
    to_ns = std::min(to_ns, end_ns);
    while (from_ns < to_ns) {
      std::size_t bin = static_cast<std::size_t>(from_ns / 1000000000ull);
      if (bin >= n_bins) break;
      std::uint64_t bin_end = (bin + 1) * 1000000000ull;
      std::uint64_t upto = std::min(bin_end, to_ns);
      busy_ns[beam][bin] += static_cast<double>(upto - from_ns);
      from_ns = upto;
    }
  };

  auto ser_ns = [](std::int64_t bits, Kbps capacity) -> std::uint64_t {
    return static_cast<std::uint64_t>((bits * 1000000ll) / capacity);
  };

  // Head-of-line color decides which class a queue competes in: queues with
  // a green head get strict priority; yellow heads share the residual in
  // proportion to scheduler weight.
  auto pick_next = [&](EmuBeam& beam) -> int {
    int best = -1;
    double best_key = 0;
    for (std::size_t qi = 0; qi < beam.queues.size(); ++qi) {
      auto& q = beam.queues[qi];
      if (q.fifo.empty() || q.fifo.front().color != PacketColor::Green) continue;
      double key = q.green_norm;
      if (best < 0 || key < best_key) {
        best = static_cast<int>(qi);
        best_key = key;
      }
    }
    if (best >= 0) return best;
    for (std::size_t qi = 0; qi < beam.queues.size(); ++qi) {
      auto& q = beam.queues[qi];
      if (q.fifo.empty()) continue;
      double key = q.yellow_norm;
      if (best < 0 || key < best_key) {
        best = static_cast<int>(qi);
        best_key = key;
      }
    }
    return best;
  };

  auto start_tx = [&](std::size_t b, std::uint64_t now_ns) {
    auto& beam = beams[b];
    int qi = pick_next(beam);
    if (qi < 0) {
      beam.busy = false;
      return;
    }
    auto& q = beam.queues[qi];
    EmuPacket pkt = q.fifo.front();
    q.fifo.pop_front();
    if (pkt.color == PacketColor::Green) {
      q.green_norm += static_cast<double>(pkt.bits) /
                      std::max<double>(1.0, static_cast<double>(q.green.rate_kbps));
    } else {
      q.yellow_norm += static_cast<double>(pkt.bits) /
                       static_cast<double>(net.slices[q.slice].scheduler_weight);
    }
    beam.busy = true;
    beam.in_service = pkt;
    beam.tx_start_ns = now_ns;
    events.push({now_ns + ser_ns(pkt.bits, beam.capacity_kbps), event_seq++, 1,
                 static_cast<int>(b)});
  };

  while (!events.empty()) {
    EmuEvent ev = events.top();
    if (ev.time_ns > end_ns) break;
    events.pop();

    if (ev.kind == 0) {
      FlowRt& flow = flows[ev.index];
      auto& beam = beams[flow.beam];
      auto& q = beam.queues[beam.slice_to_queue.at(flow.slice)];

      generated[flow.slice] += 1;
      offered_bits[flow.slice] += flow.bits;

      if (q.fifo.size() >= static_cast<std::size_t>(net.params.queue_bound_packets)) {
        dropped[flow.slice] += 1;
      } else {
        EmuPacket pkt{ev.time_ns, flow.bits, flow.slice, PacketColor::Green};
        bool admitted = false;
        if (q.green.take(flow.bits, ev.time_ns)) {
          admitted = true;
        } else if (q.yellow.take(flow.bits, ev.time_ns)) {
          pkt.color = PacketColor::Yellow;
          admitted = true;
        }
        if (!admitted) {
          dropped[flow.slice] += 1;  // above mbr
        } else {
          q.fifo.push_back(pkt);
          if (!beam.busy) start_tx(static_cast<std::size_t>(flow.beam), ev.time_ns);
        }
      }

      // schedule the next arrival of this flow
      std::uint64_t next_ns;
      if (flow.pattern == TrafficPattern::Cbr) {
        next_ns = ev.time_ns + static_cast<std::uint64_t>(std::llround(flow.mean_interval_ns));
      } else {
        std::uint64_t u = flow.rng();
        double unit = (static_cast<double>(u >> 11) + 1.0) * 0x1.0p-53;
        next_ns = ev.time_ns +
                  static_cast<std::uint64_t>(std::llround(-std::log(unit) * flow.mean_interval_ns));
      }
      if (next_ns < flow.stop_ns && next_ns <= end_ns)
        events.push({next_ns, event_seq++, 0, ev.index});
    } else {
      auto& beam = beams[ev.index];
      const EmuPacket& pkt = beam.in_service;
      carried[pkt.slice] += 1;
      carried_bits[pkt.slice] += pkt.bits;
      delays[pkt.slice].push_back(ev.time_ns + prop_ns - pkt.arrival_ns);
      add_busy(static_cast<std::size_t>(ev.index), beam.tx_start_ns, ev.time_ns);
      start_tx(static_cast<std::size_t>(ev.index), ev.time_ns);
    }
  }

  // Whatever is still queued or on the wire at the end is in flight.
  MetricsReport report;
  report.duration_s = scenario.duration_s;
  report.seed = scenario.seed;
  std::vector<std::uint64_t> in_flight(n_slices, 0);
  for (auto& beam : beams) {
    if (beam.busy) {
      in_flight[beam.in_service.slice] += 1;
      add_busy(static_cast<std::size_t>(&beam - beams.data()), beam.tx_start_ns, end_ns);
    }
    for (auto& q : beam.queues) in_flight[q.slice] += q.fifo.size();
  }

  for (std::size_t s = 0; s < n_slices; ++s) {
    if (generated[s] == 0 && net.slices[s].slice_id == kDefaultSliceLabel && s == 0 &&
        carried[s] == 0)
      continue;  // omit an untouched default entry from the report
    SliceMetrics m;
    m.offered_mbps = static_cast<double>(offered_bits[s]) / scenario.duration_s / 1.0e6;
    m.carried_mbps = static_cast<double>(carried_bits[s]) / scenario.duration_s / 1.0e6;
    m.packets_generated = generated[s];
    m.packets_carried = carried[s];
    m.packets_dropped = dropped[s];
    m.packets_in_flight = in_flight[s];
    m.loss_ratio =
        generated[s] == 0 ? 0.0 : static_cast<double>(dropped[s]) / static_cast<double>(generated[s]);
    auto& d = delays[s];
    if (!d.empty()) {
      double sum = 0;
      for (auto v : d) sum += static_cast<double>(v);
      m.mean_delay_ms = sum / static_cast<double>(d.size()) / 1.0e6;
      std::sort(d.begin(), d.end());
      std::size_t idx = (d.size() * 99 + 99) / 100;  // ceil(0.99 n)
      m.p99_delay_ms = static_cast<double>(d[std::min(idx, d.size()) - 1]) / 1.0e6;
    }
    report.slices[net.slices[s].slice_id] = m;
  }
  for (std::size_t b = 0; b < beams.size(); ++b) {
    std::vector<double> util;
    util.reserve(n_bins);
    for (std::size_t bin = 0; bin < n_bins; ++bin) {
      double bin_ns = std::min<double>(1e9, static_cast<double>(end_ns) - static_cast<double>(bin) * 1e9);
      util.push_back(bin_ns <= 0 ? 0.0 : busy_ns[b][bin] / bin_ns);
    }
    report.beam_utilization[net.beam_ids[b]] = util;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Isolation verdicts
// ---------------------------------------------------------------------------

struct IsolationVerdict {
  std::string slice_id;
  bool pass = false;
  double carried_mbps = 0;
  double floor_mbps = 0;  // min(offered, gbr) * (1 - tol)
};

/// A slice passes iff its carried rate meets min(offered, gbr) within the
/// tolerance: the GBR must be honored regardless of other slices' load.
inline std::vector<IsolationVerdict> verify_isolation(const MetricsReport& report,
                                                      const std::vector<SliceInstance>& slices,
                                                      double tol = 0.02) {
  std::map<std::string, Kbps> gbr;
  for (const auto& inst : slices) gbr[inst.profile.slice_id] = inst.profile.qos.gbr_kbps;

  std::vector<IsolationVerdict> verdicts;
  for (const auto& [slice_id, m] : report.slices) {
    IsolationVerdict v;
    v.slice_id = slice_id;
    double gbr_mbps = kbps_to_mbps(gbr.count(slice_id) != 0 ? gbr.at(slice_id) : 0);
    v.floor_mbps = std::min(m.offered_mbps, gbr_mbps) * (1.0 - tol);
    v.carried_mbps = m.carried_mbps;
    v.pass = m.carried_mbps + 1e-9 >= v.floor_mbps;
    verdicts.push_back(v);
  }
  return verdicts;
}

}  // namespace s3
