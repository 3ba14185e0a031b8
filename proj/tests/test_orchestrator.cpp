#include <doctest.h>

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "s3/orchestrator.hpp"

using namespace s3;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("s3-orch-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Orchestrator::Options quiet() { return {"", false}; }

NssiRequest nssi(std::string id, double gbr = 20, double mbr = 60, double pdb = 300) {
  NssiRequest req;
  req.profile.slice_id = std::move(id);
  req.profile.mode = SliceMode::Integrated;
  req.profile.service_class = ServiceClass::Embb;
  req.profile.qos = {mbps_to_kbps(gbr), mbps_to_kbps(mbr), pdb, 0.001, 60};
  req.profile.isolation = IsolationClass::Soft;
  req.profile.coverage_beams = {"beam-1"};
  req.e2e_slice_ref = "e2e-" + req.profile.slice_id;
  req.stitching.snssai = Snssai{1, 1654};
  req.stitching.qfis = {5};
  return req;
}

StandaloneRequest standalone(std::string id, const std::string& terminal, double gbr = 5,
                             double mbr = 15) {
  StandaloneRequest req;
  req.profile.slice_id = std::move(id);
  req.profile.mode = SliceMode::Standalone;
  req.profile.service_class = ServiceClass::Mmtc;
  req.profile.qos = {mbps_to_kbps(gbr), mbps_to_kbps(mbr), 400, 0.01, 90};
  req.profile.coverage_beams = {"beam-1"};
  req.stitching.prefix_pairs = {{*Ipv4Prefix::parse(terminal), *Ipv4Prefix::parse("198.18.0.0/24")}};
  return req;
}

Kbps total_allocated_gbr(const ResourcePool& pool) {
  Kbps total = 0;
  for (const auto& b : pool.beams) total += b.allocated_gbr_fwd + b.allocated_gbr_rtn;
  return total;
}

}  // namespace

TEST_CASE("allocate pipeline: a feasible request ends Active") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  // different snssai per slice to avoid intentional conflicts
  auto outcome = orch.allocate_nssi(nssi("s1"));
  REQUIRE(outcome.ok());
  CHECK(outcome.value().state == LifecycleState::Active);
  CHECK(outcome.value().stitch.size() == 4);  // integrated stitch points

  auto inst = orch.find_slice("s1");
  REQUIRE(inst.has_value());
  CHECK(inst->state == LifecycleState::Active);
  REQUIRE(inst->allocation.has_value());
  REQUIRE(inst->chain.has_value());
  CHECK(instance_invariants_ok(*inst));
  CHECK(!inst->rules.empty());
  // eMBB with gbr > 0: classify, encapsulate, schedule, accelerate
  CHECK(inst->chain->nfs.size() == 4);
  CHECK(chain_stages_ordered(*inst->chain));
  CHECK(pool_totals_consistent(orch.pool()));
}

TEST_CASE("allocate pipeline: duplicate slice_id is a 409") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  REQUIRE(orch.allocate_nssi(nssi("dup")).ok());
  auto second = orch.allocate_nssi(nssi("dup"));
  REQUIRE(!second.ok());
  CHECK(second.error().status == 409);
  CHECK(second.error().code == "DUPLICATE_SLICE");
}

TEST_CASE("allocate pipeline: validation failures are 400 and leave no slice") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  auto bad = nssi("bad");
  bad.profile.qos.mbr_kbps = bad.profile.qos.gbr_kbps - 1;
  auto outcome = orch.allocate_nssi(bad);
  REQUIRE(!outcome.ok());
  CHECK(outcome.error().status == 400);
  CHECK(!orch.find_slice("bad").has_value());

  auto no_snssai = nssi("nos");
  no_snssai.stitching.snssai.reset();
  auto r2 = orch.allocate_nssi(no_snssai);
  REQUIRE(!r2.ok());
  CHECK(r2.error().status == 400);
  CHECK(r2.error().reason.find("NO_SNSSAI") != std::string::npos);
}

TEST_CASE("allocate pipeline: rejections record a Failed slice, pool untouched") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  const auto before = orch.pool();

  SUBCASE("capacity reject carries GBR_CAPACITY") {
    auto outcome = orch.allocate_nssi(nssi("fat", 600, 600));  // beam is 500
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().status == 422);
    CHECK(outcome.error().code == "GBR_CAPACITY");
    auto inst = orch.find_slice("fat");
    REQUIRE(inst.has_value());
    CHECK(inst->state == LifecycleState::Failed);
    CHECK(inst->failure_reason == "GBR_CAPACITY");
    CHECK(!inst->allocation.has_value());
  }
  SUBCASE("infeasible pdb on GEO carries LATENCY") {
    auto outcome = orch.allocate_nssi(nssi("tight", 5, 10, 20));
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().code == "LATENCY");
    CHECK(outcome.error().status == 422);
  }
  SUBCASE("unknown beam is rejected") {
    auto req = nssi("lost");
    req.profile.coverage_beams = {"beam-none"};
    auto outcome = orch.allocate_nssi(req);
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().code == "UNKNOWN_BEAM");
  }
  SUBCASE("compute rejection from an oversized catalog") {
    auto cfg = ServiceConfig::defaults();
    for (auto& nf : cfg.nf_catalog) nf.cpu_units = 100;  // no host fits anything
    Orchestrator cramped(cfg, quiet());
    const auto untouched = cramped.pool();
    auto outcome = cramped.allocate_nssi(nssi("heavy"));
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().status == 422);
    CHECK(outcome.error().code == "COMPUTE");
    CHECK(cramped.find_slice("heavy")->state == LifecycleState::Failed);
    CHECK(cramped.pool() == untouched);
  }
  SUBCASE("uncoverable capability set") {
    auto cfg = ServiceConfig::defaults();
    cfg.nf_catalog.pop_back();  // drop the encryptor
    Orchestrator limited(cfg, quiet());
    auto req = nssi("sec");
    req.profile.isolation = IsolationClass::Hard;
    auto outcome = limited.allocate_nssi(req);
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().code == "UNCOVERABLE");
    CHECK(limited.find_slice("sec")->state == LifecycleState::Failed);
    CHECK(total_allocated_gbr(limited.pool()) == 0);
  }
  // all-or-nothing: every failure path leaves pool totals unchanged
  CHECK(orch.pool() == before);
}

TEST_CASE("standalone pipeline: prefix rules and two stitch points") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  auto outcome = orch.create_slice(standalone("sa", "10.42.0.0/24"));
  REQUIRE(outcome.ok());
  CHECK(outcome.value().state == LifecycleState::Active);
  REQUIRE(outcome.value().stitch.size() == 2);
  CHECK(outcome.value().stitch[0].location == "terminal-edge");
  CHECK(outcome.value().stitch[1].location == "hub-edge");

  auto missing = standalone("nopfx", "10.9.0.0/24");
  missing.stitching.prefix_pairs.clear();
  auto bad = orch.create_slice(missing);
  REQUIRE(!bad.ok());
  CHECK(bad.error().status == 400);
  CHECK(bad.error().reason.find("NO_PREFIXES") != std::string::npos);
}

TEST_CASE("conflicting classifier rules roll the allocation back") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  const auto before = orch.pool();
  REQUIRE(orch.create_slice(standalone("one", "10.1.0.0/24")).ok());
  const auto after_first = orch.pool();

  auto clash = orch.create_slice(standalone("two", "10.1.0.0/24"));  // same prefixes
  REQUIRE(!clash.ok());
  CHECK(clash.error().code == "CONFLICTING_RULES");
  CHECK(orch.find_slice("two")->state == LifecycleState::Failed);
  CHECK(orch.pool() == after_first);
  CHECK(!(orch.pool() == before));
}

TEST_CASE("modify: headroom accepted, rollback on reject") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  REQUIRE(orch.allocate_nssi(nssi("m1", 10, 30)).ok());
  const auto active_pool = orch.pool();

  SUBCASE("gbr 10 -> 20 with headroom succeeds") {
    QosDelta delta;
    delta.gbr_kbps = mbps_to_kbps(20);
    auto outcome = orch.modify_slice("m1", delta);
    REQUIRE(outcome.ok());
    CHECK(outcome.value().state == LifecycleState::Active);
    CHECK(orch.find_slice("m1")->profile.qos.gbr_kbps == mbps_to_kbps(20));
    CHECK(pool_totals_consistent(orch.pool()));
    CHECK(orch.pool().beams[0].allocated_gbr_fwd == mbps_to_kbps(20));
  }
  SUBCASE("gbr beyond capacity is a 422 and the slice keeps its old QoS") {
    QosDelta delta;
    delta.gbr_kbps = mbps_to_kbps(1000);
    delta.mbr_kbps = mbps_to_kbps(1000);
    auto outcome = orch.modify_slice("m1", delta);
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().status == 422);
    CHECK(outcome.error().code == "GBR_CAPACITY");
    CHECK(orch.find_slice("m1")->state == LifecycleState::Active);
    CHECK(orch.find_slice("m1")->profile.qos.gbr_kbps == mbps_to_kbps(10));
    CHECK(orch.pool() == active_pool);
  }
  SUBCASE("unknown slice is 404") {
    CHECK(orch.modify_slice("ghost", QosDelta{}).error().status == 404);
  }
  SUBCASE("modify after terminate is 409") {
    REQUIRE(orch.deallocate("m1").ok());
    auto outcome = orch.modify_slice("m1", QosDelta{});
    REQUIRE(!outcome.ok());
    CHECK(outcome.error().status == 409);
  }
}

TEST_CASE("modify: delta-induced capability change recomposes the chain") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  REQUIRE(orch.allocate_nssi(nssi("g0", 0, 30)).ok());  // gbr 0: no accelerator
  CHECK(orch.find_slice("g0")->chain->nfs.size() == 3);
  QosDelta delta;
  delta.gbr_kbps = mbps_to_kbps(10);  // now needs the accelerator
  REQUIRE(orch.modify_slice("g0", delta).ok());
  CHECK(orch.find_slice("g0")->chain->nfs.size() == 4);
  CHECK(pool_totals_consistent(orch.pool()));
}

TEST_CASE("deallocate: terminal, idempotent, capacity restored") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  const auto empty_pool = orch.pool();
  REQUIRE(orch.allocate_nssi(nssi("d1")).ok());
  CHECK(total_allocated_gbr(orch.pool()) > 0);

  auto first = orch.deallocate("d1");
  REQUIRE(first.ok());
  CHECK(first.value().state == LifecycleState::Terminated);
  CHECK(orch.pool() == empty_pool);
  CHECK(orch.rules().rules.empty());

  auto second = orch.deallocate("d1");
  REQUIRE(second.ok());
  CHECK(second.value().state == LifecycleState::Terminated);

  CHECK(orch.deallocate("ghost").error().status == 404);
}

TEST_CASE("events: creation pipeline emits ordered lifecycle notifications") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  std::vector<SliceEvent> events;
  orch.set_event_hook([&](const SliceEvent& e) { events.push_back(e); });
  REQUIRE(orch.allocate_nssi(nssi("ev")).ok());

  REQUIRE(events.size() == 4);
  CHECK(events[0].kind == EventKind::Created);
  CHECK(events[1].kind == EventKind::StateChanged);
  CHECK(events[1].old_state == LifecycleState::Pending);
  CHECK(events[1].new_state == LifecycleState::Preparing);
  CHECK(events[2].new_state == LifecycleState::Instantiating);
  CHECK(events[3].new_state == LifecycleState::Active);
  for (std::size_t i = 1; i < events.size(); ++i) {
    CHECK(events[i].seq > events[i - 1].seq);
    CHECK(events[i].timestamp >= events[i - 1].timestamp);
  }
}

TEST_CASE("persistence: replay reconstructs inventory and pool totals") {
  TempDir dir;
  const Orchestrator::Options opts{dir.path.string(), false};

  std::vector<SliceInstance> expected_slices;
  ResourcePool expected_pool;
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);
    REQUIRE(orch.allocate_nssi(nssi("p1")).ok());
    auto r2 = nssi("p2", 5, 10);
    r2.stitching.snssai = Snssai{2, std::nullopt};
    REQUIRE(orch.allocate_nssi(r2).ok());
    REQUIRE(orch.create_slice(standalone("p3", "10.7.0.0/24")).ok());
    QosDelta delta;
    delta.gbr_kbps = mbps_to_kbps(7);
    REQUIRE(orch.modify_slice("p2", delta).ok());
    REQUIRE(orch.deallocate("p1").ok());
    expected_slices = orch.list_slices();
    expected_pool = orch.pool();
  }
  // the destructor snapshots; dropping the file forces a pure log replay
  fs::remove(dir.path / "snapshot.json");

  Orchestrator replayed(ServiceConfig::defaults(), opts);
  CHECK(replayed.list_slices() == expected_slices);
  CHECK(replayed.pool() == expected_pool);
  CHECK(pool_totals_consistent(replayed.pool()));
}

TEST_CASE("persistence: snapshot plus log tail equals full replay") {
  TempDir dir;
  const Orchestrator::Options opts{dir.path.string(), false};
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);
    REQUIRE(orch.allocate_nssi(nssi("s1")).ok());
    orch.shutdown();  // snapshot at seq 1
  }
  fs::copy_file(dir.path / "snapshot.json", dir.path / "snapshot.at1.json");
  std::vector<SliceInstance> expected_slices;
  ResourcePool expected_pool;
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);  // recovers from snapshot
    auto r2 = nssi("s2", 5, 10);
    r2.stitching.snssai = Snssai{2, std::nullopt};
    REQUIRE(orch.allocate_nssi(r2).ok());  // lands in the log tail
    expected_slices = orch.list_slices();
    expected_pool = orch.pool();
  }
  // crash after seq 2: the last good snapshot is still the one at seq 1
  fs::rename(dir.path / "snapshot.at1.json", dir.path / "snapshot.json");

  Orchestrator replayed(ServiceConfig::defaults(), opts);
  CHECK(replayed.list_slices() == expected_slices);
  CHECK(replayed.pool() == expected_pool);

  // allocations recovered from disk must release cleanly
  REQUIRE(replayed.deallocate("s1").ok());
  REQUIRE(replayed.deallocate("s2").ok());
  CHECK(total_allocated_gbr(replayed.pool()) == 0);
  CHECK(pool_totals_consistent(replayed.pool()));
}

TEST_CASE("persistence: empty data dir starts empty") {
  TempDir dir;
  Orchestrator orch(ServiceConfig::defaults(), {dir.path.string(), false});
  CHECK(orch.list_slices().empty());
  CHECK(orch.clock() == 0);
}

TEST_CASE("persistence: corrupt log halts startup with the record index") {
  TempDir dir;
  const Orchestrator::Options opts{dir.path.string(), false};
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);
    REQUIRE(orch.allocate_nssi(nssi("c1")).ok());
    auto second = nssi("c2", 5, 10);
    second.stitching.snssai = Snssai{3, std::nullopt};
    REQUIRE(orch.allocate_nssi(second).ok());
  }
  fs::remove(dir.path / "snapshot.json");
  // damage the second record
  const auto log_path = (dir.path / "events.log").string();
  {
    std::fstream f(log_path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(0, std::ios::end);
    f.seekp(static_cast<std::streamoff>(f.tellg()) - 5);
    f.put('~');
  }
  CHECK_THROWS_AS(Orchestrator(ServiceConfig::defaults(), opts), CorruptLog);
}

TEST_CASE("scenario runs report through the polling surface") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());
  REQUIRE(orch.create_slice(standalone("scn", "10.50.0.0/24")).ok());

  ScenarioSpec scenario;
  scenario.duration_s = 1.0;
  scenario.seed = 42;
  FlowSpec f;
  f.flow_id = "f1";
  f.metadata.src = *parse_ipv4("10.50.0.3");
  f.metadata.dst = *parse_ipv4("198.18.0.7");
  f.beam_id = "beam-1";
  f.rate_kbps = mbps_to_kbps(2.0);
  f.packet_size_bytes = 800;
  f.start_s = 0.0;
  f.stop_s = 1.0;
  scenario.flows = {f};

  auto submitted = orch.submit_scenario(scenario);
  REQUIRE(submitted.ok());
  const std::string id = submitted.value();

  Orchestrator::ScenarioStatus status;
  for (int i = 0; i < 200; ++i) {
    auto s = orch.scenario_status(id);
    REQUIRE(s.has_value());
    status = *s;
    if (status.state != "running") break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  REQUIRE(status.state == "done");
  REQUIRE(status.report.has_value());
  CHECK(status.report->slices.at("scn").packets_generated > 0);
  REQUIRE(!status.verdicts.empty());
  for (const auto& v : status.verdicts) CHECK(v.pass);
  CHECK(!orch.scenario_status("scn-nope").has_value());
}

TEST_CASE("standalone requests hit the same latency gate") {
  Orchestrator orch(ServiceConfig::defaults(), quiet());  // GEO pool
  auto req = standalone("fast", "10.60.0.0/24");
  req.profile.qos.pdb_ms = 20.0;
  auto outcome = orch.create_slice(req);
  REQUIRE(!outcome.ok());
  CHECK(outcome.error().status == 422);
  CHECK(outcome.error().code == "LATENCY");
}

TEST_CASE("events land in the ndjson sink even with no subscribers") {
  TempDir dir;
  {
    Orchestrator orch(ServiceConfig::defaults(), {dir.path.string(), true});
    REQUIRE(orch.allocate_nssi(nssi("sink")).ok());
    orch.drain_events();
    orch.shutdown();
  }
  std::ifstream sink(dir.path / "notifications.ndjson");
  REQUIRE(sink.good());
  std::vector<json> events;
  for (std::string line; std::getline(sink, line);) events.push_back(json::parse(line));
  REQUIRE(events.size() == 4);
  CHECK(events.front().at("kind") == "Created");
  CHECK(events.back().at("new_state") == "Active");
}

TEST_CASE("recovery: a torn final record is dropped, the prefix replays") {
  TempDir dir;
  const Orchestrator::Options opts{dir.path.string(), false};
  std::vector<SliceInstance> after_first;
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);
    REQUIRE(orch.allocate_nssi(nssi("whole")).ok());
    after_first = orch.list_slices();
    auto second = nssi("torn", 5, 10);
    second.stitching.snssai = Snssai{4, std::nullopt};
    REQUIRE(orch.allocate_nssi(second).ok());
  }
  fs::remove(dir.path / "snapshot.json");
  // rip bytes off the final record, as a crash mid-append would
  const auto log_path = (dir.path / "events.log").string();
  fs::resize_file(log_path, fs::file_size(log_path) - 20);

  Orchestrator replayed(ServiceConfig::defaults(), opts);
  CHECK(replayed.list_slices() == after_first);
  CHECK(!replayed.find_slice("torn").has_value());
  CHECK(pool_totals_consistent(replayed.pool()));
}

TEST_CASE("set_catalog: validation, effect on later slices, persistence") {
  TempDir dir;
  const Orchestrator::Options opts{dir.path.string(), false};
  std::vector<NfDescriptor> slim = {
      {"uni-classify", 0, {"classify", "encapsulate", "schedule", "accelerate"}, 1, 256, 0.2, 3},
  };
  {
    Orchestrator orch(ServiceConfig::defaults(), opts);
    CHECK(orch.set_catalog({}).error().status == 400);

    auto bad = slim;
    bad.push_back(bad.front());  // duplicate nf_id
    CHECK(orch.set_catalog(bad).error().code == "DUPLICATE_NF_ID");

    auto invalid = slim;
    invalid.front().provides.clear();
    CHECK(orch.set_catalog(invalid).error().status == 400);

    REQUIRE(orch.set_catalog(slim).ok());
    REQUIRE(orch.allocate_nssi(nssi("post-edit")).ok());
    CHECK(orch.find_slice("post-edit")->chain->nfs.size() == 1);
    CHECK(orch.find_slice("post-edit")->chain->nfs[0].nf_id == "uni-classify");
  }
  fs::remove(dir.path / "snapshot.json");
  Orchestrator replayed(ServiceConfig::defaults(), opts);  // replay includes the catalog edit
  CHECK(replayed.catalog() == slim);
  CHECK(replayed.find_slice("post-edit")->chain->nfs[0].nf_id == "uni-classify");
}

TEST_CASE("concurrent commands keep the pool consistent") {
  auto cfg = ServiceConfig::defaults();
  for (auto& h : cfg.hosts) {  // compute must not be the binding constraint
    h.cpu_units = 1024;
    h.mem_mb = 1 << 20;
  }
  Orchestrator orch(cfg, quiet());
  const auto empty_pool = orch.pool();
  constexpr int kThreads = 4;
  constexpr int kPerThread = 12;

  std::vector<std::thread> workers;
  for (int t = 0; t < kThreads; ++t) {
    workers.emplace_back([&, t] {
      for (int i = 0; i < kPerThread; ++i) {
        StandaloneRequest req;
        req.profile.slice_id = "c" + std::to_string(t) + "-" + std::to_string(i);
        req.profile.mode = SliceMode::Standalone;
        req.profile.qos = {mbps_to_kbps(1), mbps_to_kbps(2), 300.0, 0.001, 64};
        req.profile.coverage_beams = {"beam-1"};
        req.stitching.prefix_pairs = {
            {Ipv4Prefix{static_cast<std::uint32_t>((10u << 24) | (t << 16) | (i << 8)), 24},
             Ipv4Prefix{static_cast<std::uint32_t>((198u << 24) | (t << 16) | (i << 8)), 24}}};
        auto created = orch.create_slice(req);
        if (created.ok() && i % 2 == 0) (void)orch.deallocate(req.profile.slice_id);
        (void)orch.list_slices();
        (void)orch.pool();
      }
    });
  }
  for (auto& w : workers) w.join();

  CHECK(pool_totals_consistent(orch.pool()));
  int active = 0;
  for (const auto& inst : orch.list_slices()) {
    CHECK(instance_invariants_ok(inst));
    if (inst.state == LifecycleState::Active) ++active;
  }
  CHECK(active == kThreads * kPerThread / 2);
  // terminating everything restores the empty pool exactly
  for (const auto& inst : orch.list_slices()) (void)orch.deallocate(inst.profile.slice_id);
  CHECK(orch.pool().beams == empty_pool.beams);
  CHECK(orch.pool().hosts == empty_pool.hosts);
  CHECK(orch.pool().live.empty());
}
