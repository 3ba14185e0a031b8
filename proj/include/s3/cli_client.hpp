#pragma once

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "s3/json_codec.hpp"

namespace s3::cli {

// Exit codes: 0 success, 1 rejection/not-found/parse error, 2 transport error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitTransport = 2;

enum class OutputFormat { Table, Json };

struct CliConfig {
  std::string endpoint = "http://127.0.0.1:8080";
  std::string tenant;
  OutputFormat output = OutputFormat::Table;
  int poll_interval_ms = 200;
  int poll_timeout_s = 120;
};

struct HttpReply {
  bool transport_ok = false;
  std::string transport_error;
  int status = 0;
  json body;  // parsed response, or null
};

class Client {
 public:
  explicit Client(CliConfig cfg) : cfg_(std::move(cfg)) {}

  const CliConfig& config() const { return cfg_; }

  HttpReply get(const std::string& path) { return request("GET", path, ""); }
  HttpReply post(const std::string& path, const json& body) {
    return request("POST", path, body.dump());
  }
  HttpReply patch(const std::string& path, const json& body) {
    return request("PATCH", path, body.dump());
  }
  HttpReply del(const std::string& path) { return request("DELETE", path, ""); }
  HttpReply put(const std::string& path, const json& body) {
    return request("PUT", path, body.dump());
  }

 private:
  HttpReply request(const std::string& method, const std::string& path, const std::string& body) {
    HttpReply reply;
    httplib::Client http(cfg_.endpoint);
    http.set_connection_timeout(3, 0);
    http.set_read_timeout(10, 0);
    httplib::Headers headers;
    if (!cfg_.tenant.empty()) headers.emplace("X-Tenant", cfg_.tenant);

    httplib::Result res;
    if (method == "GET") res = http.Get(path, headers);
    else if (method == "POST") res = http.Post(path, headers, body, "application/json");
    else if (method == "PATCH") res = http.Patch(path, headers, body, "application/json");
    else if (method == "PUT") res = http.Put(path, headers, body, "application/json");
    else res = http.Delete(path, headers);

    if (!res) {
      reply.transport_error = httplib::to_string(res.error());
      return reply;
    }
    reply.transport_ok = true;
    reply.status = res->status;
    if (!res->body.empty()) {
      try {
        reply.body = json::parse(res->body);
      } catch (const std::exception&) {
        reply.body = json{{"raw", res->body}};
      }
    }
    return reply;
  }

  CliConfig cfg_;
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());

  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << cells[c];
    }
    out << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

inline std::string format_mbps(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << v;
  return out.str();
}

inline int transport_failure(const HttpReply& reply, std::ostream& err) {
  err << "transport error: " << reply.transport_error << "\n";
  return kExitTransport;
}

inline int rejection(const HttpReply& reply, std::ostream& err) {
  std::string code = reply.body.is_object() ? reply.body.value("code", "") : "";
  std::string reason = reply.body.is_object() ? reply.body.value("reason", "") : "";
  err << "rejected (" << reply.status << ") " << code;
  if (!reason.empty()) err << ": " << reason;
  err << "\n";
  return kExitRejected;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// POST the request file; the mode field selects the integrated or
/// standalone endpoint. Prints the slice id and final state.
inline int cmd_apply(Client& client, const std::string& file, std::ostream& out,
                     std::ostream& err) {
  std::ifstream in(file);
  if (!in) {
    err << "cannot open " << file << "\n";
    return kExitRejected;
  }
  json req;
  try {
    req = json::parse(in);
  } catch (const json::parse_error& e) {
    err << "parse error in " << file << ": " << e.what() << "\n";
    return kExitRejected;
  }
  std::string mode = req.contains("profile") ? req["profile"].value("mode", "") : "";
  if (mode != "Integrated" && mode != "Standalone") {
    err << file << ": profile.mode must be Integrated or Standalone\n";
    return kExitRejected;
  }
  auto reply = client.post(mode == "Integrated" ? "/nssi" : "/slices", req);
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status >= 400) return rejection(reply, err);

  const std::string state = reply.body.value("state", "");
  if (client.config().output == OutputFormat::Json) {
    out << reply.body.dump(2) << "\n";
  } else {
    out << reply.body.value("slice_id", "") << " " << state << "\n";
  }
  return state == "Active" ? kExitOk : kExitRejected;
}

inline int cmd_list(Client& client, std::ostream& out, std::ostream& err) {
  auto reply = client.get("/slices");
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status >= 400) return rejection(reply, err);
  if (client.config().output == OutputFormat::Json) {
    out << reply.body.dump(2) << "\n";
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& inst : reply.body) {
    const auto& profile = inst.at("profile");
    rows.push_back({profile.value("slice_id", ""), profile.value("mode", ""),
                    profile.value("service_class", ""), inst.value("state", ""),
                    format_mbps(profile.at("qos").value("gbr_mbps", 0.0)),
                    format_mbps(profile.at("qos").value("mbr_mbps", 0.0))});
  }
  out << render_table({"SLICE", "MODE", "CLASS", "STATE", "GBR", "MBR"}, rows);
  return kExitOk;
}

inline int cmd_describe(Client& client, const std::string& slice_id, std::ostream& out,
                        std::ostream& err) {
  auto reply = client.get("/slices/" + slice_id);
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status == 404) {
    err << slice_id << " not found\n";
    return kExitRejected;
  }
  if (reply.status >= 400) return rejection(reply, err);
  if (client.config().output == OutputFormat::Json) {
    out << reply.body.dump(2) << "\n";
    return kExitOk;
  }
  const auto& inst = reply.body;
  out << "slice:     " << inst.at("profile").value("slice_id", "") << "\n"
      << "mode:      " << inst.at("profile").value("mode", "") << "\n"
      << "state:     " << inst.value("state", "") << "\n";
  if (inst.contains("failure_reason"))
    out << "failure:   " << inst.value("failure_reason", "") << "\n";
  if (inst.contains("chain")) {
    out << "chain:    ";
    for (const auto& nf : inst.at("chain").at("nfs")) out << " " << nf.value("nf_id", "");
    out << "\n";
  }
  if (inst.contains("allocation")) {
    out << "beams:    ";
    for (const auto& [beam, res] : inst.at("allocation").at("beams").items()) out << " " << beam;
    out << "\n";
  }
  out << "rules:     " << inst.at("rules").size() << "\n";
  return kExitOk;
}

/// Writes the per-beam utilization time series as beam,second,utilization.
inline bool write_utilization_csv(const json& report, const std::string& path,
                                  std::ostream& err) {
  std::ofstream csv(path);
  if (!csv) {
    err << "cannot write " << path << "\n";
    return false;
  }
  csv << "beam,second,utilization\n";
  for (const auto& [beam, series] : report.at("beam_utilization").items()) {
    int second = 0;
    for (const auto& value : series) {
      csv << beam << "," << second++ << "," << value.get<double>() << "\n";
    }
  }
  return true;
}

/// Submit the scenario file, poll until done, print the report and per-slice
/// isolation verdicts. Exit 0 only when every verdict passes.
inline int cmd_scenario(Client& client, const std::string& file, std::ostream& out,
                        std::ostream& err, const std::string& csv_path = "") {
  std::ifstream in(file);
  if (!in) {
    err << "cannot open " << file << "\n";
    return kExitRejected;
  }
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::parse_error& e) {
    err << "parse error in " << file << ": " << e.what() << "\n";
    return kExitRejected;
  }
  auto reply = client.post("/scenario", scenario);
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status >= 400) return rejection(reply, err);
  const std::string id = reply.body.value("scenario_id", "");

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::seconds(client.config().poll_timeout_s);
  json status;
  while (true) {
    auto poll = client.get("/scenario/" + id);
    if (!poll.transport_ok) return transport_failure(poll, err);
    if (poll.status >= 400) return rejection(poll, err);
    status = poll.body;
    if (status.value("state", "") != "running") break;
    if (std::chrono::steady_clock::now() > deadline) {
      err << "scenario " << id << " still running after timeout\n";
      return kExitRejected;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(client.config().poll_interval_ms));
  }

  if (status.value("state", "") != "done") {
    err << "scenario failed: " << status.value("error", "") << "\n";
    return kExitRejected;
  }
  if (!csv_path.empty() && !write_utilization_csv(status.at("report"), csv_path, err))
    return kExitRejected;
  if (client.config().output == OutputFormat::Json) {
    out << status.dump(2) << "\n";
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [slice, m] : status.at("report").at("slices").items()) {
      rows.push_back({slice, format_mbps(m.value("offered_mbps", 0.0)),
                      format_mbps(m.value("carried_mbps", 0.0)),
                      format_mbps(m.value("mean_delay_ms", 0.0)),
                      format_mbps(m.value("p99_delay_ms", 0.0)),
                      format_mbps(m.value("loss_ratio", 0.0))});
    }
    out << render_table({"SLICE", "OFFERED", "CARRIED", "MEAN_MS", "P99_MS", "LOSS"}, rows);
    if (status.contains("verdicts")) {
      std::vector<std::vector<std::string>> vrows;
      for (const auto& v : status.at("verdicts")) {
        vrows.push_back({v.value("slice_id", ""), v.value("pass", false) ? "PASS" : "FAIL",
                         format_mbps(v.value("carried_mbps", 0.0)),
                         format_mbps(v.value("floor_mbps", 0.0))});
      }
      out << "\n" << render_table({"SLICE", "ISOLATION", "CARRIED", "FLOOR"}, vrows);
    }
  }
  bool all_pass = true;
  if (status.contains("verdicts")) {
    for (const auto& v : status.at("verdicts"))
      if (!v.value("pass", false)) all_pass = false;
  }
  return all_pass ? kExitOk : kExitRejected;
}

inline int cmd_pool(Client& client, std::ostream& out, std::ostream& err) {
  auto reply = client.get("/pool");
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status >= 400) return rejection(reply, err);
  if (client.config().output == OutputFormat::Json) {
    out << reply.body.dump(2) << "\n";
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& beam : reply.body.at("utilization").at("beams")) {
    rows.push_back({beam.value("beam_id", ""), format_mbps(beam.value("gbr_fwd", 0.0)),
                    format_mbps(beam.value("mbr_fwd", 0.0)),
                    format_mbps(beam.value("gbr_rtn", 0.0)),
                    format_mbps(beam.value("mbr_rtn", 0.0))});
  }
  out << render_table({"BEAM", "GBR_FWD", "MBR_FWD", "GBR_RTN", "MBR_RTN"}, rows);
  std::vector<std::vector<std::string>> hrows;
  for (const auto& host : reply.body.at("utilization").at("hosts")) {
    hrows.push_back({host.value("host_id", ""), format_mbps(host.value("cpu", 0.0)),
                     format_mbps(host.value("mem", 0.0))});
  }
  out << "\n" << render_table({"HOST", "CPU", "MEM"}, hrows);
  return kExitOk;
}

inline int cmd_rules(Client& client, std::ostream& out, std::ostream& err) {
  auto reply = client.get("/rules");
  if (!reply.transport_ok) return transport_failure(reply, err);
  if (reply.status >= 400) return rejection(reply, err);
  out << reply.body.dump(2) << "\n";
  return kExitOk;
}

}  // namespace s3::cli
