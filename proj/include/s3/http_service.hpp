#pragma once

#include <string>
#include <thread>

#include <httplib.h>

#include "s3/json_codec.hpp"
#include "s3/orchestrator.hpp"

namespace s3 {

/// JSON-over-HTTP front end. Requests may arrive concurrently; every state
/// mutation funnels into the orchestrator's serialized command path. Tenant
/// permissions are enforced here, before any side effect.
class HttpService {
 public:
  explicit HttpService(Orchestrator& orch) : orch_(orch) { routes(); }

  /// Blocking listen on host:port.
  bool listen(const std::string& host, int port) { return server_.listen(host, port); }

  /// Binds an ephemeral port and serves from a background thread (tests).
  int start_async(const std::string& host = "127.0.0.1") {
    int port = server_.bind_to_any_port(host);
    worker_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port;
  }

  void stop() {
    server_.stop();
    if (worker_.joinable()) worker_.join();
  }

  ~HttpService() { stop(); }

 private:
  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2), "application/json");
  }

  static void reply_error(httplib::Response& res, const ApiError& e) {
    reply(res, e.status, json(e));
  }

  /// Maps the request to a control level and checks the operation against
  /// allowed_operations. Returns false (and writes the 403) when denied.
  bool authorize(const httplib::Request& req, httplib::Response& res, const std::string& op) {
    TenantControl level = orch_.config().default_control;
    if (req.has_header("X-Tenant")) {
      const std::string tenant = req.get_header_value("X-Tenant");
      auto it = orch_.config().tenants.find(tenant);
      if (it == orch_.config().tenants.end()) {
        reply_error(res, {403, "UNKNOWN_TENANT", "tenant not configured: " + tenant, "authorize"});
        return false;
      }
      level = it->second;
    }
    auto ops = allowed_operations(level);
    if (ops.count(op) == 0) {
      reply_error(res, {403, "FORBIDDEN", op + " requires a higher control level", "authorize"});
      return false;
    }
    return true;
  }

  template <typename T>
  static std::optional<T> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
      return json::parse(req.body).get<T>();
    } catch (const std::exception& e) {
      reply_error(res, {400, "BAD_JSON", e.what(), "parse"});
      return std::nullopt;
    }
  }

  void routes() {
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, json{{"status", "ok"}});
    });

    server_.Post("/nssi", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "create")) return;
      auto body = parse_body<NssiRequest>(req, res);
      if (!body) return;
      auto outcome = orch_.allocate_nssi(*body);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      reply(res, 201,
            json{{"slice_id", outcome.value().slice_id},
                 {"state", to_string(outcome.value().state)},
                 {"stitch", outcome.value().stitch}});
    });

    server_.Post("/slices", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "create")) return;
      auto body = parse_body<StandaloneRequest>(req, res);
      if (!body) return;
      auto outcome = orch_.create_slice(*body);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      json endpoint{{"ingress", body->stitching.prefix_pairs},
                    {"stitch", outcome.value().stitch}};
      reply(res, 201,
            json{{"slice_id", outcome.value().slice_id},
                 {"state", to_string(outcome.value().state)},
                 {"service_endpoint", endpoint}});
    });

    auto modify = [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "modify")) return;
      auto body = parse_body<QosDelta>(req, res);
      if (!body) return;
      auto outcome = orch_.modify_slice(req.matches[1], *body);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      reply(res, 200, json{{"slice_id", outcome.value().slice_id},
                           {"state", to_string(outcome.value().state)}});
    };
    server_.Patch(R"(/nssi/([^/]+))", modify);
    server_.Patch(R"(/slices/([^/]+))", modify);

    auto erase = [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "delete")) return;
      auto outcome = orch_.deallocate(req.matches[1]);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      reply(res, 200, json{{"slice_id", outcome.value().slice_id},
                           {"state", to_string(outcome.value().state)}});
    };
    server_.Delete(R"(/nssi/([^/]+))", erase);
    server_.Delete(R"(/slices/([^/]+))", erase);

    server_.Get("/slices", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "status")) return;
      reply(res, 200, json(orch_.list_slices()));
    });

    auto describe = [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "status")) return;
      auto inst = orch_.find_slice(req.matches[1]);
      if (!inst)
        return reply_error(res, {404, "NOT_FOUND", "unknown slice: " + std::string(req.matches[1]),
                                 "describe"});
      reply(res, 200, json(*inst));
    };
    server_.Get(R"(/slices/([^/]+))", describe);
    server_.Get(R"(/nssi/([^/]+))", describe);

    server_.Get("/pool", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "pool-inspect")) return;
      auto pool = orch_.pool();
      reply(res, 200, json{{"pool", pool}, {"utilization", utilization(pool)}});
    });

    server_.Get("/rules", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "status")) return;
      reply(res, 200, json(orch_.rules()));
    });

    server_.Get("/catalog", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "status")) return;
      reply(res, 200, json(orch_.catalog()));
    });

    server_.Put("/catalog", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "catalog-edit")) return;
      auto body = parse_body<std::vector<NfDescriptor>>(req, res);
      if (!body) return;
      auto outcome = orch_.set_catalog(*body);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      reply(res, 200, json{{"nfs", body->size()}});
    });

    server_.Post("/scenario", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "scenario-run")) return;
      auto body = parse_body<ScenarioSpec>(req, res);
      if (!body) return;
      auto outcome = orch_.submit_scenario(*body);
      if (!outcome.ok()) return reply_error(res, outcome.error());
      reply(res, 202, json{{"scenario_id", outcome.value()}});
    });

    server_.Get(R"(/scenario/([^/]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
      if (!authorize(req, res, "scenario-run")) return;
      auto status = orch_.scenario_status(req.matches[1]);
      if (!status)
        return reply_error(res, {404, "NOT_FOUND",
                                 "unknown scenario: " + std::string(req.matches[1]), "scenario"});
      json body{{"scenario_id", status->id}, {"state", status->state}};
      if (status->report) body["report"] = *status->report;
      if (!status->verdicts.empty()) body["verdicts"] = status->verdicts;
      if (!status->error.empty()) body["error"] = status->error;
      reply(res, 200, body);
    });

    server_.Post("/subscriptions", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res, "status")) return;
      try {
        auto body = json::parse(req.body);
        auto url = body.at("url").get<std::string>();
        orch_.subscribe(url);
        reply(res, 201, json{{"url", url}});
      } catch (const std::exception& e) {
        reply_error(res, {400, "BAD_JSON", e.what(), "parse"});
      }
    });
  }

  Orchestrator& orch_;
  httplib::Server server_;
  std::thread worker_;
};

}  // namespace s3
