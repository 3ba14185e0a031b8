#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "s3/json_codec.hpp"

namespace s3 {

/// Deployment configuration: pool inventory, NF catalog, QoS mapping table
/// and tunables. Everything here is an artifact default, overridable from
/// the JSON config file.
struct ServiceConfig {
  OrbitClass orbit = OrbitClass::Geo;
  OrbitAltitudes altitudes;
  double scheduling_ms = kDefaultSchedulingMs;
  double overbooking_mbr = 2.0;
  std::vector<HostResource> hosts;
  std::vector<BeamResource> beams;
  std::vector<NfDescriptor> nf_catalog;
  QosMapTable qos_map;
  EmulatorParams emulator;
  std::map<std::string, TenantControl> tenants;
  TenantControl default_control = TenantControl::FullControl;

  ResourcePool make_pool() const {
    ResourcePool pool;
    pool.hosts = hosts;
    pool.beams = beams;
    pool.orbit = orbit;
    pool.overbooking_mbr = overbooking_mbr;
    return pool;
  }

  static ServiceConfig defaults() {
    ServiceConfig cfg;
    cfg.hosts = {{"host-1", 16, 32768, 0, 0}, {"host-2", 16, 32768, 0, 0}};
    cfg.beams = {{"beam-1", 500000, 100000, 0, 0, 0, 0},
                 {"beam-2", 500000, 100000, 0, 0, 0, 0}};
    cfg.nf_catalog = {
        {"classifier-attach", 0, {"classify"}, 1, 512, 0.1, 5},
        {"gse-encapsulator", 1, {"encapsulate"}, 1, 512, 0.2, 5},
        {"qos-scheduler", 2, {"schedule"}, 2, 1024, 0.5, 8},
        {"ll-scheduler", 3, {"schedule", "low-latency-sched"}, 4, 2048, 0.3, 20},
        {"pep-accelerator", 4, {"accelerate"}, 4, 4096, 2.0, 15},
        {"ipsec-encryptor", 5, {"encrypt"}, 2, 1024, 1.0, 12},
    };
    cfg.tenants = {{"operator", TenantControl::FullControl},
                   {"tenant-shared", TenantControl::SharedControl},
                   {"tenant-basic", TenantControl::Managed}};
    return cfg;
  }
};

inline void to_json(json& j, const ServiceConfig& c) {
  j = json{{"orbit", to_string(c.orbit)},
           {"altitudes_km",
            {{"LEO", c.altitudes.leo_km}, {"MEO", c.altitudes.meo_km}, {"GEO", c.altitudes.geo_km}}},
           {"scheduling_ms", c.scheduling_ms},
           {"overbooking_mbr", c.overbooking_mbr},
           {"hosts", c.hosts},
           {"beams", c.beams},
           {"nf_catalog", c.nf_catalog},
           {"emulator",
            {{"token_burst_ms", c.emulator.token_burst_ms},
             {"queue_bound_packets", c.emulator.queue_bound_packets},
             {"default_packet_bytes", c.emulator.default_packet_bytes}}},
           {"tolerances", {{"isolation", c.emulator.isolation_tol}}},
           {"default_control", to_string(c.default_control)}};
  json qos_map = json::object();
  for (const auto& cls : c.qos_map.classes) {
    qos_map[std::string(to_string(cls.class_id))] = {
        {"scheduler_weight", cls.scheduler_weight}, {"drop_precedence", cls.drop_precedence}};
  }
  j["qos_map"] = qos_map;
  json tenants = json::object();
  for (const auto& [name, level] : c.tenants) tenants[name] = to_string(level);
  j["tenants"] = tenants;
}

inline void from_json(const json& j, ServiceConfig& c) {
  using codec_detail::parse_enum;
  c = ServiceConfig::defaults();
  if (j.contains("orbit")) c.orbit = parse_enum<OrbitClass>(j.at("orbit"), "orbit");
  if (j.contains("altitudes_km")) {
    const auto& a = j.at("altitudes_km");
    c.altitudes.leo_km = a.value("LEO", c.altitudes.leo_km);
    c.altitudes.meo_km = a.value("MEO", c.altitudes.meo_km);
    c.altitudes.geo_km = a.value("GEO", c.altitudes.geo_km);
  }
  c.scheduling_ms = j.value("scheduling_ms", c.scheduling_ms);
  c.overbooking_mbr = j.value("overbooking_mbr", c.overbooking_mbr);
  if (j.contains("hosts")) j.at("hosts").get_to(c.hosts);
  if (j.contains("beams")) j.at("beams").get_to(c.beams);
  if (j.contains("nf_catalog")) j.at("nf_catalog").get_to(c.nf_catalog);
  if (j.contains("qos_map")) {
    for (auto& cls : c.qos_map.classes) {
      auto key = std::string(to_string(cls.class_id));
      if (j.at("qos_map").contains(key)) {
        const auto& e = j.at("qos_map").at(key);
        cls.scheduler_weight = e.value("scheduler_weight", cls.scheduler_weight);
        cls.drop_precedence = e.value("drop_precedence", cls.drop_precedence);
      }
    }
  }
  if (j.contains("emulator")) {
    const auto& e = j.at("emulator");
    c.emulator.token_burst_ms = e.value("token_burst_ms", c.emulator.token_burst_ms);
    c.emulator.queue_bound_packets = e.value("queue_bound_packets", c.emulator.queue_bound_packets);
    c.emulator.default_packet_bytes =
        e.value("default_packet_bytes", c.emulator.default_packet_bytes);
  }
  if (j.contains("tolerances"))
    c.emulator.isolation_tol = j.at("tolerances").value("isolation", c.emulator.isolation_tol);
  if (j.contains("tenants")) {
    c.tenants.clear();
    for (const auto& [name, level] : j.at("tenants").items())
      c.tenants[name] = parse_enum<TenantControl>(level, "tenant control");
  }
  if (j.contains("default_control"))
    c.default_control = parse_enum<TenantControl>(j.at("default_control"), "default_control");
}

/// Parses the config file; missing file or malformed JSON is an error, all
/// fields fall back to defaults individually.
inline Result<ServiceConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) return Error{"CONFIG_NOT_FOUND", "cannot open config file: " + path};
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    json j = json::parse(buf.str());
    ServiceConfig cfg = j.get<ServiceConfig>();
    if (!cfg.qos_map.weights_strictly_decreasing())
      return Error{"BAD_QOS_MAP", "scheduler weights must strictly decrease across classes"};
    for (const auto& nf : cfg.nf_catalog) {
      auto v = validate_descriptor(nf);
      if (!v.ok())
        return Error{"BAD_CATALOG", nf.nf_id + ": " + v.violations.front().message};
    }
    std::set<std::string> ids;
    for (const auto& h : cfg.hosts)
      if (!ids.insert("h:" + h.host_id).second)
        return Error{"DUPLICATE_HOST", "duplicate host_id: " + h.host_id};
    for (const auto& b : cfg.beams)
      if (!ids.insert("b:" + b.beam_id).second)
        return Error{"DUPLICATE_BEAM", "duplicate beam_id: " + b.beam_id};
    if (cfg.overbooking_mbr < 1.0)
      return Error{"BAD_OVERBOOKING", "overbooking_mbr must be >= 1"};
    return cfg;
  } catch (const std::exception& e) {
    return Error{"BAD_CONFIG", std::string("config parse failed: ") + e.what()};
  }
}

}  // namespace s3
