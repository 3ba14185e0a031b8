#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "s3/emulator.hpp"
#include "s3/gateway_composer.hpp"
#include "s3/mgmt_types.hpp"
#include "s3/qos_mapper.hpp"
#include "s3/resource_pool.hpp"
#include "s3/slice_classifier.hpp"
#include "s3/slice_instance.hpp"
#include "s3/slice_model.hpp"
#include "s3/types.hpp"

// JSON (de)serialization for every wire-visible type. Field names are the
// schema; rates cross the wire in Mbit/s and are held internally in kbit/s.

namespace s3 {

using nlohmann::json;

namespace codec_detail {

template <typename E>
E parse_enum(const json& j, const char* field) {
  auto s = j.get<std::string>();
  auto v = enum_from_string<E>(s);
  if (!v) throw std::invalid_argument(std::string("invalid ") + field + ": " + s);
  return *v;
}

}  // namespace codec_detail

// --- identifiers -----------------------------------------------------------

inline void to_json(json& j, const Snssai& s) {
  j = json{{"sst", s.sst}};
  if (s.sd) j["sd"] = *s.sd;
}

inline void from_json(const json& j, Snssai& s) {
  s.sst = j.at("sst").get<int>();
  if (j.contains("sd")) s.sd = j.at("sd").get<std::uint32_t>();
}

inline void to_json(json& j, const Ipv4Prefix& p) { j = p.str(); }

inline void from_json(const json& j, Ipv4Prefix& p) {
  auto parsed = Ipv4Prefix::parse(j.get<std::string>());
  if (!parsed) throw std::invalid_argument("invalid prefix: " + j.get<std::string>());
  p = *parsed;
}

inline void to_json(json& j, const PrefixPair& p) {
  j = json{{"terminal", p.terminal}, {"hub", p.hub}};
}

inline void from_json(const json& j, PrefixPair& p) {
  j.at("terminal").get_to(p.terminal);
  j.at("hub").get_to(p.hub);
}

// --- qos / profile ---------------------------------------------------------

inline void to_json(json& j, const FiveGQos& q) {
  j = json{{"gbr_mbps", kbps_to_mbps(q.gbr_kbps)},
           {"mbr_mbps", kbps_to_mbps(q.mbr_kbps)},
           {"pdb_ms", q.pdb_ms},
           {"per", q.per},
           {"priority", q.priority}};
}

inline void from_json(const json& j, FiveGQos& q) {
  q.gbr_kbps = mbps_to_kbps(j.value("gbr_mbps", 0.0));
  q.mbr_kbps = mbps_to_kbps(j.value("mbr_mbps", 0.0));
  q.pdb_ms = j.value("pdb_ms", 100.0);
  q.per = j.value("per", 0.01);
  q.priority = j.value("priority", 64);
}

inline void to_json(json& j, const StitchingInfo& s) {
  j = json::object();
  if (!s.ran_edges.empty()) j["ran_edge"] = s.ran_edges;
  if (!s.cn_edges.empty()) j["cn_edge"] = s.cn_edges;
  if (s.snssai) j["snssai"] = *s.snssai;
  if (!s.qfis.empty()) j["qfi"] = s.qfis;
  if (!s.prefix_pairs.empty()) j["prefix_pairs"] = s.prefix_pairs;
  if (!s.dscp.empty()) j["dscp"] = s.dscp;
}

inline void from_json(const json& j, StitchingInfo& s) {
  s = StitchingInfo{};
  if (j.contains("ran_edge")) j.at("ran_edge").get_to(s.ran_edges);
  if (j.contains("cn_edge")) j.at("cn_edge").get_to(s.cn_edges);
  if (j.contains("snssai")) s.snssai = j.at("snssai").get<Snssai>();
  if (j.contains("qfi")) j.at("qfi").get_to(s.qfis);
  if (j.contains("prefix_pairs")) j.at("prefix_pairs").get_to(s.prefix_pairs);
  if (j.contains("dscp")) j.at("dscp").get_to(s.dscp);
}

inline void to_json(json& j, const SliceProfile& p) {
  j = json{{"slice_id", p.slice_id},
           {"mode", to_string(p.mode)},
           {"service_class", to_string(p.service_class)},
           {"qos", p.qos},
           {"isolation", to_string(p.isolation)},
           {"tenant_control", to_string(p.tenant_control)},
           {"orbit_preference", to_string(p.orbit_preference)},
           {"coverage_beams", p.coverage_beams}};
  if (p.rtn_gbr_kbps || p.rtn_mbr_kbps) {
    json rtn = json::object();
    if (p.rtn_gbr_kbps) rtn["gbr_mbps"] = kbps_to_mbps(*p.rtn_gbr_kbps);
    if (p.rtn_mbr_kbps) rtn["mbr_mbps"] = kbps_to_mbps(*p.rtn_mbr_kbps);
    j["rtn"] = rtn;
  }
  if (!p.notes.empty()) j["notes"] = p.notes;
}

inline void from_json(const json& j, SliceProfile& p) {
  using codec_detail::parse_enum;
  p = SliceProfile{};
  p.slice_id = j.value("slice_id", "");
  if (j.contains("mode")) p.mode = parse_enum<SliceMode>(j.at("mode"), "mode");
  if (j.contains("service_class"))
    p.service_class = parse_enum<ServiceClass>(j.at("service_class"), "service_class");
  if (j.contains("qos")) j.at("qos").get_to(p.qos);
  if (j.contains("isolation"))
    p.isolation = parse_enum<IsolationClass>(j.at("isolation"), "isolation");
  if (j.contains("tenant_control"))
    p.tenant_control = parse_enum<TenantControl>(j.at("tenant_control"), "tenant_control");
  if (j.contains("orbit_preference"))
    p.orbit_preference = parse_enum<OrbitPreference>(j.at("orbit_preference"), "orbit_preference");
  if (j.contains("coverage_beams")) j.at("coverage_beams").get_to(p.coverage_beams);
  if (j.contains("rtn")) {
    const auto& rtn = j.at("rtn");
    if (rtn.contains("gbr_mbps")) p.rtn_gbr_kbps = mbps_to_kbps(rtn.at("gbr_mbps").get<double>());
    if (rtn.contains("mbr_mbps")) p.rtn_mbr_kbps = mbps_to_kbps(rtn.at("mbr_mbps").get<double>());
  }
  p.notes = j.value("notes", "");
}

// --- catalog / chain / placement -------------------------------------------

inline void to_json(json& j, const NfDescriptor& nf) {
  j = json{{"nf_id", nf.nf_id},
           {"stage", nf.stage},
           {"provides", nf.provides},
           {"cpu_units", nf.cpu_units},
           {"mem_mb", nf.mem_mb},
           {"latency_ms", nf.latency_ms},
           {"cost", nf.cost}};
}

inline void from_json(const json& j, NfDescriptor& nf) {
  nf.nf_id = j.at("nf_id").get<std::string>();
  nf.stage = j.value("stage", 0);
  j.at("provides").get_to(nf.provides);
  nf.cpu_units = j.value("cpu_units", std::int64_t{1});
  nf.mem_mb = j.value("mem_mb", std::int64_t{128});
  nf.latency_ms = j.value("latency_ms", 0.0);
  nf.cost = j.value("cost", std::int64_t{1});
}

inline void to_json(json& j, const NfChain& c) { j = json{{"nfs", c.nfs}}; }

inline void from_json(const json& j, NfChain& c) { j.at("nfs").get_to(c.nfs); }

inline void to_json(json& j, const NfPlacement& p) {
  j = json{{"nf_id", p.nf_id}, {"host_id", p.host_id}, {"cpu_units", p.cpu_units},
           {"mem_mb", p.mem_mb}};
}

inline void from_json(const json& j, NfPlacement& p) {
  p.nf_id = j.at("nf_id").get<std::string>();
  p.host_id = j.at("host_id").get<std::string>();
  p.cpu_units = j.value("cpu_units", std::int64_t{0});
  p.mem_mb = j.value("mem_mb", std::int64_t{0});
}

// --- pool ------------------------------------------------------------------

inline void to_json(json& j, const BeamReservation& r) {
  j = json{{"gbr_fwd_mbps", kbps_to_mbps(r.gbr_fwd)},
           {"mbr_fwd_mbps", kbps_to_mbps(r.mbr_fwd)},
           {"gbr_rtn_mbps", kbps_to_mbps(r.gbr_rtn)},
           {"mbr_rtn_mbps", kbps_to_mbps(r.mbr_rtn)},
           {"hard", r.hard}};
}

inline void from_json(const json& j, BeamReservation& r) {
  r.gbr_fwd = mbps_to_kbps(j.value("gbr_fwd_mbps", 0.0));
  r.mbr_fwd = mbps_to_kbps(j.value("mbr_fwd_mbps", 0.0));
  r.gbr_rtn = mbps_to_kbps(j.value("gbr_rtn_mbps", 0.0));
  r.mbr_rtn = mbps_to_kbps(j.value("mbr_rtn_mbps", 0.0));
  r.hard = j.value("hard", false);
}

inline void to_json(json& j, const Allocation& a) {
  j = json{{"slice_id", a.slice_id}, {"beams", a.beams}, {"placements", a.placements}};
}

inline void from_json(const json& j, Allocation& a) {
  a.slice_id = j.at("slice_id").get<std::string>();
  if (j.contains("beams")) j.at("beams").get_to(a.beams);
  if (j.contains("placements")) j.at("placements").get_to(a.placements);
}

inline void to_json(json& j, const HostResource& h) {
  j = json{{"host_id", h.host_id},
           {"cpu_units", h.cpu_units},
           {"mem_mb", h.mem_mb},
           {"allocated_cpu", h.allocated_cpu},
           {"allocated_mem", h.allocated_mem}};
}

inline void from_json(const json& j, HostResource& h) {
  h.host_id = j.at("host_id").get<std::string>();
  h.cpu_units = j.value("cpu_units", std::int64_t{0});
  h.mem_mb = j.value("mem_mb", std::int64_t{0});
  h.allocated_cpu = j.value("allocated_cpu", std::int64_t{0});
  h.allocated_mem = j.value("allocated_mem", std::int64_t{0});
}

inline void to_json(json& j, const BeamResource& b) {
  j = json{{"beam_id", b.beam_id},
           {"fwd_mbps", kbps_to_mbps(b.fwd_capacity_kbps)},
           {"rtn_mbps", kbps_to_mbps(b.rtn_capacity_kbps)},
           {"allocated_gbr_fwd_mbps", kbps_to_mbps(b.allocated_gbr_fwd)},
           {"allocated_gbr_rtn_mbps", kbps_to_mbps(b.allocated_gbr_rtn)},
           {"allocated_mbr_fwd_mbps", kbps_to_mbps(b.allocated_mbr_fwd)},
           {"allocated_mbr_rtn_mbps", kbps_to_mbps(b.allocated_mbr_rtn)}};
}

inline void from_json(const json& j, BeamResource& b) {
  b.beam_id = j.at("beam_id").get<std::string>();
  b.fwd_capacity_kbps = mbps_to_kbps(j.value("fwd_mbps", 0.0));
  b.rtn_capacity_kbps = mbps_to_kbps(j.value("rtn_mbps", 0.0));
  b.allocated_gbr_fwd = mbps_to_kbps(j.value("allocated_gbr_fwd_mbps", 0.0));
  b.allocated_gbr_rtn = mbps_to_kbps(j.value("allocated_gbr_rtn_mbps", 0.0));
  b.allocated_mbr_fwd = mbps_to_kbps(j.value("allocated_mbr_fwd_mbps", 0.0));
  b.allocated_mbr_rtn = mbps_to_kbps(j.value("allocated_mbr_rtn_mbps", 0.0));
}

inline void to_json(json& j, const ResourcePool& p) {
  j = json{{"hosts", p.hosts},
           {"beams", p.beams},
           {"orbit", to_string(p.orbit)},
           {"overbooking_mbr", p.overbooking_mbr},
           {"live", p.live}};
}

inline void from_json(const json& j, ResourcePool& p) {
  p = ResourcePool{};
  if (j.contains("hosts")) j.at("hosts").get_to(p.hosts);
  if (j.contains("beams")) j.at("beams").get_to(p.beams);
  if (j.contains("orbit")) p.orbit = codec_detail::parse_enum<OrbitClass>(j.at("orbit"), "orbit");
  p.overbooking_mbr = j.value("overbooking_mbr", 2.0);
  if (j.contains("live")) j.at("live").get_to(p.live);
}

// --- classifier ------------------------------------------------------------

inline void to_json(json& j, const MatchSpec& m) {
  j = json::object();
  if (m.snssai) j["snssai"] = *m.snssai;
  if (m.qfi) j["qfi"] = *m.qfi;
  if (m.dscp) j["dscp"] = *m.dscp;
  if (m.src_prefix) j["src_prefix"] = *m.src_prefix;
  if (m.dst_prefix) j["dst_prefix"] = *m.dst_prefix;
}

inline void from_json(const json& j, MatchSpec& m) {
  m = MatchSpec{};
  if (j.contains("snssai")) m.snssai = j.at("snssai").get<Snssai>();
  if (j.contains("qfi")) m.qfi = j.at("qfi").get<int>();
  if (j.contains("dscp")) m.dscp = j.at("dscp").get<int>();
  if (j.contains("src_prefix")) m.src_prefix = j.at("src_prefix").get<Ipv4Prefix>();
  if (j.contains("dst_prefix")) m.dst_prefix = j.at("dst_prefix").get<Ipv4Prefix>();
}

inline void to_json(json& j, const ClassifierRule& r) {
  j = json{{"id", r.rule_id},
           {"priority", r.priority},
           {"match", r.match},
           {"slice", r.slice_id},
           {"mark", to_string(r.mark)}};
}

inline void from_json(const json& j, ClassifierRule& r) {
  r.rule_id = j.at("id").get<int>();
  r.priority = j.at("priority").get<int>();
  j.at("match").get_to(r.match);
  r.slice_id = j.at("slice").get<std::string>();
  if (j.contains("mark")) r.mark = codec_detail::parse_enum<Direction>(j.at("mark"), "mark");
}

inline void to_json(json& j, const RuleTable& t) {
  j = json{{"rules", t.rules}, {"default", t.default_slice}};
}

inline void from_json(const json& j, RuleTable& t) {
  t = RuleTable{};
  if (j.contains("rules")) j.at("rules").get_to(t.rules);
  t.default_slice = j.value("default", kDefaultSliceLabel);
}

inline void to_json(json& j, const FlowMetadata& m) {
  j = json::object();
  if (m.snssai) j["snssai"] = *m.snssai;
  if (m.qfi) j["qfi"] = *m.qfi;
  if (m.dscp) j["dscp"] = *m.dscp;
  j["src"] = format_ipv4(m.src);
  j["dst"] = format_ipv4(m.dst);
}

inline void from_json(const json& j, FlowMetadata& m) {
  m = FlowMetadata{};
  if (j.contains("snssai")) m.snssai = j.at("snssai").get<Snssai>();
  if (j.contains("qfi")) m.qfi = j.at("qfi").get<int>();
  if (j.contains("dscp")) m.dscp = j.at("dscp").get<int>();
  auto parse_addr = [&](const char* field) -> std::uint32_t {
    if (!j.contains(field)) return 0;
    auto s = j.at(field).get<std::string>();
    auto a = parse_ipv4(s);
    if (!a) throw std::invalid_argument(std::string("invalid address in ") + field + ": " + s);
    return *a;
  };
  m.src = parse_addr("src");
  m.dst = parse_addr("dst");
}

inline void to_json(json& j, const StitchPoint& p) {
  j = json{{"location", p.location}, {"direction", to_string(p.direction)}};
}

inline void from_json(const json& j, StitchPoint& p) {
  p.location = j.at("location").get<std::string>();
  p.direction = codec_detail::parse_enum<Direction>(j.at("direction"), "direction");
}

// --- slice instance --------------------------------------------------------

inline void to_json(json& j, const SliceInstance& inst) {
  j = json{{"profile", inst.profile},
           {"state", to_string(inst.state)},
           {"rules", inst.rules},
           {"created_at", inst.created_at},
           {"updated_at", inst.updated_at},
           {"stitching", inst.stitching}};
  if (inst.allocation) j["allocation"] = *inst.allocation;
  if (inst.chain) j["chain"] = *inst.chain;
  if (inst.failure_reason) j["failure_reason"] = *inst.failure_reason;
}

inline void from_json(const json& j, SliceInstance& inst) {
  inst = SliceInstance{};
  j.at("profile").get_to(inst.profile);
  inst.state = codec_detail::parse_enum<LifecycleState>(j.at("state"), "state");
  if (j.contains("rules")) j.at("rules").get_to(inst.rules);
  inst.created_at = j.value("created_at", std::uint64_t{0});
  inst.updated_at = j.value("updated_at", std::uint64_t{0});
  if (j.contains("stitching")) j.at("stitching").get_to(inst.stitching);
  if (j.contains("allocation")) inst.allocation = j.at("allocation").get<Allocation>();
  if (j.contains("chain")) inst.chain = j.at("chain").get<NfChain>();
  if (j.contains("failure_reason")) inst.failure_reason = j.at("failure_reason").get<std::string>();
}

// --- emulator --------------------------------------------------------------

inline void to_json(json& j, const FlowSpec& f) {
  j = json{{"flow_id", f.flow_id},
           {"metadata", f.metadata},
           {"rate_mbps", kbps_to_mbps(f.rate_kbps)},
           {"packet_size_bytes", f.packet_size_bytes},
           {"pattern", to_string(f.pattern)},
           {"start_s", f.start_s},
           {"stop_s", f.stop_s}};
  if (!f.beam_id.empty()) j["beam_id"] = f.beam_id;
}

inline void from_json(const json& j, FlowSpec& f) {
  f = FlowSpec{};
  f.flow_id = j.value("flow_id", "");
  if (j.contains("metadata")) j.at("metadata").get_to(f.metadata);
  f.beam_id = j.value("beam_id", "");
  f.rate_kbps = mbps_to_kbps(j.value("rate_mbps", 0.0));
  f.packet_size_bytes = j.value("packet_size_bytes", 0);
  if (j.contains("pattern"))
    f.pattern = codec_detail::parse_enum<TrafficPattern>(j.at("pattern"), "pattern");
  f.start_s = j.value("start_s", 0.0);
  f.stop_s = j.value("stop_s", 0.0);
}

inline void to_json(json& j, const ScenarioSpec& s) {
  j = json{{"duration_s", s.duration_s}, {"seed", s.seed}, {"flows", s.flows}};
}

inline void from_json(const json& j, ScenarioSpec& s) {
  s = ScenarioSpec{};
  s.duration_s = j.value("duration_s", 10.0);
  s.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("flows")) j.at("flows").get_to(s.flows);
}

inline void to_json(json& j, const SliceMetrics& m) {
  j = json{{"offered_mbps", m.offered_mbps},
           {"carried_mbps", m.carried_mbps},
           {"mean_delay_ms", m.mean_delay_ms},
           {"p99_delay_ms", m.p99_delay_ms},
           {"loss_ratio", m.loss_ratio},
           {"packets",
            {{"generated", m.packets_generated},
             {"carried", m.packets_carried},
             {"dropped", m.packets_dropped},
             {"in_flight", m.packets_in_flight}}}};
}

inline void from_json(const json& j, SliceMetrics& m) {
  m = SliceMetrics{};
  m.offered_mbps = j.value("offered_mbps", 0.0);
  m.carried_mbps = j.value("carried_mbps", 0.0);
  m.mean_delay_ms = j.value("mean_delay_ms", 0.0);
  m.p99_delay_ms = j.value("p99_delay_ms", 0.0);
  m.loss_ratio = j.value("loss_ratio", 0.0);
  if (j.contains("packets")) {
    const auto& p = j.at("packets");
    m.packets_generated = p.value("generated", std::uint64_t{0});
    m.packets_carried = p.value("carried", std::uint64_t{0});
    m.packets_dropped = p.value("dropped", std::uint64_t{0});
    m.packets_in_flight = p.value("in_flight", std::uint64_t{0});
  }
}

inline void to_json(json& j, const MetricsReport& r) {
  j = json{{"duration_s", r.duration_s},
           {"seed", r.seed},
           {"slices", r.slices},
           {"beam_utilization", r.beam_utilization}};
}

inline void from_json(const json& j, MetricsReport& r) {
  r = MetricsReport{};
  r.duration_s = j.value("duration_s", 0.0);
  r.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("slices")) j.at("slices").get_to(r.slices);
  if (j.contains("beam_utilization")) j.at("beam_utilization").get_to(r.beam_utilization);
}

inline void to_json(json& j, const IsolationVerdict& v) {
  j = json{{"slice_id", v.slice_id},
           {"pass", v.pass},
           {"carried_mbps", v.carried_mbps},
           {"floor_mbps", v.floor_mbps}};
}

inline void from_json(const json& j, IsolationVerdict& v) {
  v.slice_id = j.at("slice_id").get<std::string>();
  v.pass = j.value("pass", false);
  v.carried_mbps = j.value("carried_mbps", 0.0);
  v.floor_mbps = j.value("floor_mbps", 0.0);
}

// --- management ------------------------------------------------------------

inline void to_json(json& j, const NssiRequest& r) {
  j = json{{"profile", r.profile}, {"e2e_slice_ref", r.e2e_slice_ref},
           {"stitching", r.stitching}};
}

inline void from_json(const json& j, NssiRequest& r) {
  j.at("profile").get_to(r.profile);
  r.e2e_slice_ref = j.value("e2e_slice_ref", "");
  if (j.contains("stitching")) j.at("stitching").get_to(r.stitching);
}

inline void to_json(json& j, const StandaloneRequest& r) {
  j = json{{"profile", r.profile}, {"ingress", r.stitching}};
}

inline void from_json(const json& j, StandaloneRequest& r) {
  j.at("profile").get_to(r.profile);
  if (j.contains("ingress")) j.at("ingress").get_to(r.stitching);
}

inline void to_json(json& j, const QosDelta& d) {
  j = json::object();
  if (d.gbr_kbps) j["gbr_mbps"] = kbps_to_mbps(*d.gbr_kbps);
  if (d.mbr_kbps) j["mbr_mbps"] = kbps_to_mbps(*d.mbr_kbps);
  if (d.pdb_ms) j["pdb_ms"] = *d.pdb_ms;
  if (d.per) j["per"] = *d.per;
  if (d.priority) j["priority"] = *d.priority;
}

inline void from_json(const json& j, QosDelta& d) {
  d = QosDelta{};
  const json& q = j.contains("qos") ? j.at("qos") : j;
  if (q.contains("gbr_mbps")) d.gbr_kbps = mbps_to_kbps(q.at("gbr_mbps").get<double>());
  if (q.contains("mbr_mbps")) d.mbr_kbps = mbps_to_kbps(q.at("mbr_mbps").get<double>());
  if (q.contains("pdb_ms")) d.pdb_ms = q.at("pdb_ms").get<double>();
  if (q.contains("per")) d.per = q.at("per").get<double>();
  if (q.contains("priority")) d.priority = q.at("priority").get<int>();
}

inline void to_json(json& j, const SliceEvent& e) {
  j = json{{"seq", e.seq},
           {"slice_id", e.slice_id},
           {"kind", to_string(e.kind)},
           {"timestamp", e.timestamp}};
  if (e.old_state) j["old_state"] = to_string(*e.old_state);
  if (e.new_state) j["new_state"] = to_string(*e.new_state);
  if (!e.detail.empty()) j["detail"] = e.detail;
}

inline void from_json(const json& j, SliceEvent& e) {
  e = SliceEvent{};
  e.seq = j.value("seq", std::uint64_t{0});
  e.slice_id = j.value("slice_id", "");
  e.kind = codec_detail::parse_enum<EventKind>(j.at("kind"), "kind");
  e.timestamp = j.value("timestamp", std::uint64_t{0});
  if (j.contains("old_state"))
    e.old_state = codec_detail::parse_enum<LifecycleState>(j.at("old_state"), "old_state");
  if (j.contains("new_state"))
    e.new_state = codec_detail::parse_enum<LifecycleState>(j.at("new_state"), "new_state");
  e.detail = j.value("detail", "");
}

inline void to_json(json& j, const ApiError& e) {
  j = json{{"code", e.code}, {"reason", e.reason}, {"stage", e.stage}};
}

// --- utilization -----------------------------------------------------------

inline void to_json(json& j, const BeamUtilization& u) {
  j = json{{"beam_id", u.beam_id},
           {"gbr_fwd", u.gbr_fwd},
           {"gbr_rtn", u.gbr_rtn},
           {"mbr_fwd", u.mbr_fwd},
           {"mbr_rtn", u.mbr_rtn}};
}

inline void to_json(json& j, const HostUtilization& u) {
  j = json{{"host_id", u.host_id}, {"cpu", u.cpu}, {"mem", u.mem}};
}

inline void to_json(json& j, const UtilizationReport& r) {
  j = json{{"beams", r.beams}, {"hosts", r.hosts}};
}

}  // namespace s3
