#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include "s3/http_service.hpp"

using namespace s3;

namespace {

json nssi_body(const std::string& id, int sst, double gbr = 10, double mbr = 30,
               double pdb = 300) {
  return json{
      {"profile",
       {{"slice_id", id},
        {"mode", "Integrated"},
        {"service_class", "eMBB"},
        {"qos",
         {{"gbr_mbps", gbr}, {"mbr_mbps", mbr}, {"pdb_ms", pdb}, {"per", 0.001}, {"priority", 60}}},
        {"isolation", "Soft"},
        {"coverage_beams", {"beam-1"}}}},
      {"e2e_slice_ref", "e2e-" + id},
      {"stitching", {{"snssai", {{"sst", sst}}}, {"qfi", {5}}}}};
}

json standalone_body(const std::string& id, const std::string& terminal) {
  return json{{"profile",
               {{"slice_id", id},
                {"mode", "Standalone"},
                {"service_class", "mMTC"},
                {"qos",
                 {{"gbr_mbps", 2}, {"mbr_mbps", 6}, {"pdb_ms", 400}, {"per", 0.01},
                  {"priority", 90}}},
                {"coverage_beams", {"beam-1"}}}},
              {"ingress", {{"prefix_pairs", {{{"terminal", terminal}, {"hub", "198.18.5.0/24"}}}}}}};
}

struct ServiceFixture {
  Orchestrator orch;
  HttpService service;
  int port;
  httplib::Client client;

  ServiceFixture()
      : orch(ServiceConfig::defaults(), {"", true}),
        service(orch),
        port(service.start_async()),
        client("127.0.0.1", port) {
    client.set_connection_timeout(5, 0);
  }
  ~ServiceFixture() {
    service.stop();
    orch.shutdown();
  }

  httplib::Result post(const std::string& path, const json& body,
                       const std::string& tenant = "") {
    httplib::Headers headers;
    if (!tenant.empty()) headers.emplace("X-Tenant", tenant);
    return client.Post(path, headers, body.dump(), "application/json");
  }
};

}  // namespace

TEST_CASE("http: health endpoint") {
  ServiceFixture fx;
  auto res = fx.client.Get("/healthz");
  REQUIRE(res);
  CHECK(res->status == 200);
}

TEST_CASE("http: allocate, describe, list, delete round trip") {
  ServiceFixture fx;
  auto created = fx.post("/nssi", nssi_body("web", 1));
  REQUIRE(created);
  CHECK(created->status == 201);
  auto body = json::parse(created->body);
  CHECK(body.at("state") == "Active");
  CHECK(body.at("stitch").size() == 4);

  auto described = fx.client.Get("/nssi/web");
  REQUIRE(described);
  CHECK(described->status == 200);
  auto inst = json::parse(described->body);
  CHECK(inst.at("profile").at("slice_id") == "web");
  CHECK(inst.at("state") == "Active");

  auto listed = fx.client.Get("/slices");
  REQUIRE(listed);
  CHECK(json::parse(listed->body).size() == 1);

  auto deleted = fx.client.Delete("/nssi/web");
  REQUIRE(deleted);
  CHECK(deleted->status == 200);
  CHECK(json::parse(deleted->body).at("state") == "Terminated");

  auto again = fx.client.Delete("/nssi/web");
  REQUIRE(again);
  CHECK(again->status == 200);  // idempotent

  auto missing = fx.client.Get("/slices/ghost");
  REQUIRE(missing);
  CHECK(missing->status == 404);
}

TEST_CASE("http: error body carries code, reason and stage") {
  ServiceFixture fx;
  auto res = fx.post("/nssi", nssi_body("fat", 1, 900, 900));
  REQUIRE(res);
  CHECK(res->status == 422);
  auto body = json::parse(res->body);
  CHECK(body.at("code") == "GBR_CAPACITY");
  CHECK(body.contains("reason"));
  CHECK(body.at("stage") == "admission");

  auto dup = fx.post("/nssi", nssi_body("d", 2));
  REQUIRE(dup);
  REQUIRE(dup->status == 201);
  auto dup2 = fx.post("/nssi", nssi_body("d", 2));
  REQUIRE(dup2);
  CHECK(dup2->status == 409);

  auto garbage = fx.client.Post("/nssi", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(json::parse(garbage->body).at("code") == "BAD_JSON");
}

TEST_CASE("http: PATCH applies a QoS delta") {
  ServiceFixture fx;
  REQUIRE(fx.post("/nssi", nssi_body("m", 1, 5, 20))->status == 201);
  auto res = fx.client.Patch("/nssi/m", json{{"qos", {{"gbr_mbps", 9}}}}.dump(),
                             "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  auto inst = json::parse(fx.client.Get("/slices/m")->body);
  CHECK(inst.at("profile").at("qos").at("gbr_mbps") == 9.0);

  auto too_big = fx.client.Patch("/nssi/m", json{{"qos", {{"gbr_mbps", 2000}, {"mbr_mbps", 2000}}}}.dump(),
                                 "application/json");
  REQUIRE(too_big);
  CHECK(too_big->status == 422);
}

TEST_CASE("http: tenant permission enforcement") {
  ServiceFixture fx;

  // Managed tenants may create and read
  auto created = fx.post("/slices", standalone_body("t1", "10.77.0.0/24"), "tenant-basic");
  REQUIRE(created);
  CHECK(created->status == 201);

  // but not modify, run scenarios, or inspect the pool
  httplib::Headers basic{{"X-Tenant", "tenant-basic"}};
  auto patch = fx.client.Patch("/slices/t1", basic, json{{"qos", {{"gbr_mbps", 3}}}}.dump(),
                               "application/json");
  REQUIRE(patch);
  CHECK(patch->status == 403);
  auto pool = fx.client.Get("/pool", basic);
  REQUIRE(pool);
  CHECK(pool->status == 403);
  auto scenario = fx.post("/scenario", json{{"duration_s", 1}, {"seed", 1}, {"flows", json::array()}},
                          "tenant-basic");
  REQUIRE(scenario);
  CHECK(scenario->status == 403);

  // shared-control tenants modify; only full control edits the catalog
  auto patch2 = fx.client.Patch("/slices/t1", httplib::Headers{{"X-Tenant", "tenant-shared"}},
                                json{{"qos", {{"gbr_mbps", 3}}}}.dump(), "application/json");
  REQUIRE(patch2);
  CHECK(patch2->status == 200);
  auto catalog = fx.client.Put("/catalog", httplib::Headers{{"X-Tenant", "tenant-shared"}},
                               json::array().dump(), "application/json");
  REQUIRE(catalog);
  CHECK(catalog->status == 403);

  // unknown tenants are refused outright; 403 must not have side effects
  auto stranger = fx.post("/slices", standalone_body("t2", "10.78.0.0/24"), "nobody");
  REQUIRE(stranger);
  CHECK(stranger->status == 403);
  CHECK(json::parse(fx.client.Get("/slices")->body).size() == 1);
}

TEST_CASE("http: pool inspection shows reservations") {
  ServiceFixture fx;
  REQUIRE(fx.post("/nssi", nssi_body("p", 1, 50, 100))->status == 201);
  auto res = fx.client.Get("/pool", httplib::Headers{{"X-Tenant", "operator"}});
  REQUIRE(res);
  REQUIRE(res->status == 200);
  auto body = json::parse(res->body);
  double gbr_frac = 0;
  for (const auto& beam : body.at("utilization").at("beams")) {
    if (beam.at("beam_id") == "beam-1") gbr_frac = beam.at("gbr_fwd").get<double>();
  }
  CHECK(gbr_frac == doctest::Approx(0.1));  // 50 of 500
}

TEST_CASE("http: rules export") {
  ServiceFixture fx;
  REQUIRE(fx.post("/nssi", nssi_body("r", 1))->status == 201);
  auto res = fx.client.Get("/rules");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  auto table = json::parse(res->body);
  CHECK(table.at("default") == "default");
  REQUIRE(!table.at("rules").empty());
  const auto& rule = table.at("rules")[0];
  CHECK(rule.contains("id"));
  CHECK(rule.contains("priority"));
  CHECK(rule.contains("match"));
  CHECK(rule.at("slice") == "r");
}

TEST_CASE("http: scenario submit and poll") {
  ServiceFixture fx;
  REQUIRE(fx.post("/slices", standalone_body("scn", "10.80.0.0/24"))->status == 201);
  json scenario{{"duration_s", 1},
                {"seed", 42},
                {"flows",
                 {{{"flow_id", "f1"},
                   {"metadata", {{"src", "10.80.0.4"}, {"dst", "198.18.5.9"}}},
                   {"beam_id", "beam-1"},
                   {"rate_mbps", 1.5},
                   {"packet_size_bytes", 500},
                   {"pattern", "CBR"},
                   {"start_s", 0},
                   {"stop_s", 1}}}}};
  auto submitted = fx.post("/scenario", scenario);
  REQUIRE(submitted);
  REQUIRE(submitted->status == 202);
  const std::string id = json::parse(submitted->body).at("scenario_id");

  json status;
  for (int i = 0; i < 300; ++i) {
    auto res = fx.client.Get("/scenario/" + id);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    status = json::parse(res->body);
    if (status.at("state") != "running") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  REQUIRE(status.at("state") == "done");
  CHECK(status.at("report").at("slices").contains("scn"));
  CHECK(status.at("verdicts").size() >= 1);

  auto missing = fx.client.Get("/scenario/scn-unknown");
  REQUIRE(missing);
  CHECK(missing->status == 404);
}

TEST_CASE("http: subscriptions deliver events in order") {
  // local sink server collecting callbacks
  httplib::Server sink;
  std::mutex mu;
  std::vector<json> received;
  sink.Post("/events", [&](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(mu);
    received.push_back(json::parse(req.body));
    res.status = 204;
  });
  int sink_port = sink.bind_to_any_port("127.0.0.1");
  std::thread sink_thread([&] { sink.listen_after_bind(); });
  sink.wait_until_ready();

  {
    ServiceFixture fx;
    auto sub = fx.post("/subscriptions",
                       json{{"url", "http://127.0.0.1:" + std::to_string(sink_port) + "/events"}});
    REQUIRE(sub);
    CHECK(sub->status == 201);
    REQUIRE(fx.post("/nssi", nssi_body("evt", 1))->status == 201);
    fx.orch.drain_events();
  }

  sink.stop();
  sink_thread.join();

  REQUIRE(received.size() == 4);  // Created + three StateChanged
  CHECK(received[0].at("kind") == "Created");
  CHECK(received[3].at("new_state") == "Active");
  for (std::size_t i = 1; i < received.size(); ++i)
    CHECK(received[i].at("seq").get<std::uint64_t>() >
          received[i - 1].at("seq").get<std::uint64_t>());
}
