#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "s3/config.hpp"
#include "s3/emulator.hpp"
#include "s3/event_log.hpp"
#include "s3/json_codec.hpp"
#include "s3/mgmt_types.hpp"
#include "s3/slice_instance.hpp"

namespace s3 {

/// Northbound orchestration core. All state mutations funnel through one
/// serialized command path; reads are served from copies taken under the
/// same lock. Scenario runs execute on immutable snapshots off the writer.
class Orchestrator {
 public:
  struct Options {
    std::string data_dir;        // empty disables persistence
    bool deliver_events = true;  // notifier thread + ndjson sink
  };

  struct ScenarioStatus {
    std::string id;
    std::string state;  // "running" | "done" | "failed"
    std::optional<MetricsReport> report;
    std::vector<IsolationVerdict> verdicts;
    std::string error;
  };

  explicit Orchestrator(ServiceConfig cfg) : Orchestrator(std::move(cfg), Options{}) {}

  Orchestrator(ServiceConfig cfg, Options opts)
      : cfg_(std::move(cfg)), opts_(std::move(opts)), pool_(cfg_.make_pool()) {
    if (!opts_.data_dir.empty()) {
      std::filesystem::create_directories(opts_.data_dir);
      recover();
      log_ = std::make_unique<EventLog>(log_path());
    }
    if (opts_.deliver_events) notifier_ = std::thread([this] { notifier_loop(); });
  }

  ~Orchestrator() { shutdown(); }

  Orchestrator(const Orchestrator&) = delete;
  Orchestrator& operator=(const Orchestrator&) = delete;

  // ------------------------------------------------------------------
  // Commands
  // ------------------------------------------------------------------

  Result<SliceSummary, ApiError> allocate_nssi(const NssiRequest& req) {
    std::lock_guard lock(mu_);
    log_command({{"op", "allocate_nssi"}, {"payload", req}});
    return apply_allocate_nssi(req);
  }

  Result<SliceSummary, ApiError> create_slice(const StandaloneRequest& req) {
    std::lock_guard lock(mu_);
    log_command({{"op", "create_slice"}, {"payload", req}});
    return apply_create_slice(req);
  }

  Result<SliceSummary, ApiError> modify_slice(const std::string& slice_id, const QosDelta& delta) {
    std::lock_guard lock(mu_);
    log_command({{"op", "modify"}, {"slice_id", slice_id}, {"payload", delta}});
    return apply_modify(slice_id, delta);
  }

  Result<SliceSummary, ApiError> deallocate(const std::string& slice_id) {
    std::lock_guard lock(mu_);
    log_command({{"op", "deallocate"}, {"slice_id", slice_id}});
    return apply_deallocate(slice_id);
  }

  Result<Ok, ApiError> set_catalog(const std::vector<NfDescriptor>& catalog) {
    std::lock_guard lock(mu_);
    log_command({{"op", "set_catalog"}, {"payload", catalog}});
    return apply_set_catalog(catalog);
  }

  // ------------------------------------------------------------------
  // Reads (immutable copies)
  // ------------------------------------------------------------------

  std::vector<SliceInstance> list_slices() const {
    std::lock_guard lock(mu_);
    std::vector<SliceInstance> out;
    out.reserve(inventory_.size());
    for (const auto& [id, inst] : inventory_) out.push_back(inst);
    return out;
  }

  std::optional<SliceInstance> find_slice(const std::string& slice_id) const {
    std::lock_guard lock(mu_);
    auto it = inventory_.find(slice_id);
    if (it == inventory_.end()) return std::nullopt;
    return it->second;
  }

  ResourcePool pool() const {
    std::lock_guard lock(mu_);
    return pool_;
  }

  RuleTable rules() const {
    std::lock_guard lock(mu_);
    return rules_;
  }

  std::vector<NfDescriptor> catalog() const {
    std::lock_guard lock(mu_);
    return cfg_.nf_catalog;
  }

  const ServiceConfig& config() const { return cfg_; }

  std::uint64_t clock() const {
    std::lock_guard lock(mu_);
    return clock_;
  }

  // ------------------------------------------------------------------
  // Scenario runs (asynchronous, off the writer)
  // ------------------------------------------------------------------

  Result<std::string, ApiError> submit_scenario(const ScenarioSpec& scenario) {
    if (stopped_.load()) return ApiError{503, "SHUTTING_DOWN", "service is stopping", "scenario"};
    std::vector<SliceInstance> slices;
    ResourcePool pool_snapshot;
    RuleTable rules_snapshot;
    {
      std::lock_guard lock(mu_);
      for (const auto& [id, inst] : inventory_) slices.push_back(inst);
      pool_snapshot = pool_;
      rules_snapshot = rules_;
    }
    auto net = build_network(slices, pool_snapshot, rules_snapshot, cfg_.qos_map, cfg_.altitudes,
                             cfg_.emulator);
    if (!net.ok())
      return ApiError{422, net.error().code, net.error().message, "build-network"};

    std::string id;
    {
      std::lock_guard lock(scn_mu_);
      id = "scn-" + std::to_string(++scn_counter_);
      scenarios_[id] = {id, "running", std::nullopt, {}, ""};
    }
    std::lock_guard lock(scn_mu_);
    scn_threads_.emplace_back([this, id, network = std::move(net.value()), scenario, slices] {
      run_scenario_job(id, network, scenario, slices);
    });
    return id;
  }

  std::optional<ScenarioStatus> scenario_status(const std::string& id) const {
    std::lock_guard lock(scn_mu_);
    auto it = scenarios_.find(id);
    if (it == scenarios_.end()) return std::nullopt;
    return it->second;
  }

  // ------------------------------------------------------------------
  // Events
  // ------------------------------------------------------------------

  void subscribe(std::string url) {
    std::lock_guard lock(ev_mu_);
    subscribers_.push_back(std::move(url));
  }

  /// Test hook: invoked synchronously for every emitted event.
  void set_event_hook(std::function<void(const SliceEvent&)> hook) {
    std::lock_guard lock(ev_mu_);
    hook_ = std::move(hook);
  }

  /// Flushes queued notifications (tests use this to avoid sleeping).
  void drain_events() {
    std::unique_lock lock(ev_mu_);
    ev_cv_.wait(lock, [this] { return ev_queue_.empty() && !ev_busy_; });
  }

  // ------------------------------------------------------------------
  // Lifecycle of the service itself
  // ------------------------------------------------------------------

  /// Clean shutdown: joins scenario threads, stops the notifier and writes
  /// the snapshot so the next start replays nothing.
  void shutdown() {
    bool expected = false;
    if (!stopped_.compare_exchange_strong(expected, true)) return;
    {
      std::lock_guard lock(scn_mu_);
      for (auto& t : scn_threads_)
        if (t.joinable()) t.join();
      scn_threads_.clear();
    }
    {
      std::lock_guard lock(ev_mu_);
      ev_stop_ = true;
    }
    ev_cv_.notify_all();
    if (notifier_.joinable()) notifier_.join();
    if (!opts_.data_dir.empty()) write_snapshot();
  }

 private:
  // ------------------------------------------------------------------
  // Pipeline
  // ------------------------------------------------------------------

  static ApiError err(int status, std::string code, std::string reason, std::string stage) {
    return ApiError{status, std::move(code), std::move(reason), std::move(stage)};
  }

  Result<SliceSummary, ApiError> apply_allocate_nssi(const NssiRequest& req) {
    std::vector<Violation> extra;
    if (req.profile.mode != SliceMode::Integrated)
      extra.push_back({"MODE_MISMATCH", "nssi requests must carry mode Integrated"});
    if (req.e2e_slice_ref.empty())
      extra.push_back({"NO_E2E_REF", "e2e_slice_ref must be non-empty"});
    if (!req.stitching.snssai)
      extra.push_back({"NO_SNSSAI", "integrated stitching requires snssai"});
    return run_create_pipeline(req.profile, req.stitching, extra);
  }

  Result<SliceSummary, ApiError> apply_create_slice(const StandaloneRequest& req) {
    std::vector<Violation> extra;
    if (req.profile.mode != SliceMode::Standalone)
      extra.push_back({"MODE_MISMATCH", "standalone requests must carry mode Standalone"});
    if (req.stitching.prefix_pairs.empty())
      extra.push_back({"NO_PREFIXES", "standalone ingress requires at least one prefix pair"});
    return run_create_pipeline(req.profile, req.stitching, extra);
  }

  Result<SliceSummary, ApiError> run_create_pipeline(const SliceProfile& profile,
                                                     const StitchingInfo& stitching,
                                                     std::vector<Violation> extra_violations) {
    auto validation = validate_profile(profile);
    for (auto& v : extra_violations) validation.violations.push_back(std::move(v));
    if (!validation.ok()) {
      std::string codes;
      for (const auto& v : validation.violations) codes += (codes.empty() ? "" : ",") + v.code;
      return err(400, "VALIDATION", codes, "validate");
    }
    if (inventory_.count(profile.slice_id) != 0)
      return err(409, "DUPLICATE_SLICE", "slice_id already exists: " + profile.slice_id,
                 "validate");

    SliceInstance inst;
    inst.profile = profile;
    inst.stitching = stitching;
    inst.state = LifecycleState::Pending;
    inst.created_at = inst.updated_at = clock_;
    emit(inst.profile.slice_id, EventKind::Created, std::nullopt, std::nullopt, "");
    step(inst, LifecycleEvent::Prepare);

    auto chain = compose_chain(required_capabilities(profile), cfg_.nf_catalog);
    if (!chain.ok()) return fail_slice(inst, 422, chain.error(), "compose");

    auto decision =
        check_admission(profile, chain.value(), pool_, cfg_.scheduling_ms, cfg_.altitudes);
    if (!decision.ok()) return fail_slice(inst, 422, decision.error(), "admission");
    if (!decision.value().admit)
      return fail_slice(inst, 422,
                        Error{decision.value().reason, "admission rejected at " +
                                                           decision.value().detail},
                        "admission");

    step(inst, LifecycleEvent::Instantiate);
    auto alloc = allocate(profile, chain.value(), pool_, cfg_.scheduling_ms, cfg_.altitudes);
    if (!alloc.ok()) return fail_slice(inst, 422, alloc.error(), "allocate");
    inst.allocation = alloc.value();
    inst.chain = chain.value();

    step(inst, LifecycleEvent::ActivateDone);

    auto table = recompile_with(inst);
    if (!table.ok()) {
      (void)release(*inst.allocation, pool_);
      inst.allocation.reset();
      inst.chain.reset();
      return fail_slice(inst, 422, table.error(), "compile-rules");
    }
    install_rules(inst, table.value());
    inventory_[inst.profile.slice_id] = inst;

    SliceSummary summary{inst.profile.slice_id, inst.state, std::nullopt,
                         stitch_points(inst.profile.mode)};
    return summary;
  }

  Result<SliceSummary, ApiError> apply_modify(const std::string& slice_id, const QosDelta& delta) {
    auto it = inventory_.find(slice_id);
    if (it == inventory_.end())
      return err(404, "NOT_FOUND", "unknown slice: " + slice_id, "modify");
    SliceInstance& inst = it->second;
    if (inst.state != LifecycleState::Active)
      return err(409, "NOT_ACTIVE",
                 "modify requires Active, slice is " + std::string(to_string(inst.state)),
                 "modify");

    step(inst, LifecycleEvent::Modify);
    auto revert = [&](int status, const Error& e) {
      step(inst, LifecycleEvent::ModifyDone);  // back to Active with old QoS
      return err(status, e.code, e.message, "modify");
    };

    SliceProfile candidate = inst.profile;
    candidate.qos = delta.apply_to(candidate.qos);
    auto validation = validate_profile(candidate);
    if (!validation.ok())
      return revert(422, Error{"VALIDATION", validation.violations.front().code});

    auto chain = compose_chain(required_capabilities(candidate), cfg_.nf_catalog);
    if (!chain.ok()) return revert(422, chain.error());

    // Admission for the new QoS is judged against the pool without the old
    // reservation, but the old reservation is only released once the new
    // one is certain to commit.
    ResourcePool view = pool_;
    if (auto released = release(*inst.allocation, view); !released.ok())
      return revert(500, released.error());
    auto decision =
        check_admission(candidate, chain.value(), view, cfg_.scheduling_ms, cfg_.altitudes);
    if (!decision.ok()) return revert(422, decision.error());
    if (!decision.value().admit)
      return revert(422, Error{decision.value().reason,
                               "admission rejected at " + decision.value().detail});

    Allocation old_alloc = *inst.allocation;
    (void)release(old_alloc, pool_);
    auto alloc = allocate(candidate, chain.value(), pool_, cfg_.scheduling_ms, cfg_.altitudes);
    if (!alloc.ok()) {
      // Revalidated above on the identical pool state; restore the old
      // reservation if it happens anyway.
      (void)allocate(inst.profile, *inst.chain, pool_, cfg_.scheduling_ms, cfg_.altitudes);
      return revert(500, alloc.error());
    }
    inst.profile = candidate;
    inst.allocation = alloc.value();
    inst.chain = chain.value();
    step(inst, LifecycleEvent::ModifyDone);
    emit(slice_id, EventKind::Modified, std::nullopt, inst.state, "qos updated");

    return SliceSummary{slice_id, inst.state, std::nullopt, stitch_points(inst.profile.mode)};
  }

  Result<SliceSummary, ApiError> apply_deallocate(const std::string& slice_id) {
    auto it = inventory_.find(slice_id);
    if (it == inventory_.end())
      return err(404, "NOT_FOUND", "unknown slice: " + slice_id, "deallocate");
    SliceInstance& inst = it->second;

    // Idempotent completion: repeating the delete reports the final state.
    if (inst.state == LifecycleState::Terminated || inst.state == LifecycleState::Failed)
      return SliceSummary{slice_id, inst.state, inst.failure_reason, {}};

    step(inst, LifecycleEvent::Terminate);
    if (inst.allocation) {
      (void)release(*inst.allocation, pool_);
      inst.allocation.reset();
    }
    inst.chain.reset();
    inst.rules.clear();
    step(inst, LifecycleEvent::TerminateDone);
    rebuild_rule_table();
    emit(slice_id, EventKind::Deleted, std::nullopt, inst.state, "");
    return SliceSummary{slice_id, inst.state, std::nullopt, {}};
  }

  Result<Ok, ApiError> apply_set_catalog(const std::vector<NfDescriptor>& catalog) {
    if (catalog.empty()) return err(400, "EMPTY_CATALOG", "catalog must not be empty", "catalog");
    std::set<std::string> ids;
    for (const auto& nf : catalog) {
      auto v = validate_descriptor(nf);
      if (!v.ok()) return err(400, v.violations.front().code, v.violations.front().message,
                              "catalog");
      if (!ids.insert(nf.nf_id).second)
        return err(400, "DUPLICATE_NF_ID", "duplicate nf_id: " + nf.nf_id, "catalog");
    }
    cfg_.nf_catalog = catalog;
    return Ok{};
  }

  // ------------------------------------------------------------------
  // Pipeline helpers
  // ------------------------------------------------------------------

  void step(SliceInstance& inst, LifecycleEvent event) {
    auto old_state = inst.state;
    auto next = transition(inst, event, clock_);
    // Pipeline steps follow the table by construction.
    inst = next.value();
    emit(inst.profile.slice_id, EventKind::StateChanged, old_state, inst.state, "");
  }

  Result<SliceSummary, ApiError> fail_slice(SliceInstance& inst, int status, const Error& e,
                                            const std::string& stage) {
    auto old_state = inst.state;
    inst.state = LifecycleState::Failed;
    inst.updated_at = clock_;
    inst.failure_reason = e.code;
    inst.allocation.reset();
    inst.chain.reset();
    emit(inst.profile.slice_id, EventKind::StateChanged, old_state, inst.state, e.code);
    inventory_[inst.profile.slice_id] = inst;
    return err(status, e.code, e.message, stage);
  }

  Result<RuleTable> recompile_with(const SliceInstance& extra) {
    std::vector<SliceInstance> all;
    for (const auto& [id, existing] : inventory_) all.push_back(existing);
    all.push_back(extra);
    return compile_rules(all);
  }

  void rebuild_rule_table() {
    std::vector<SliceInstance> all;
    for (const auto& [id, existing] : inventory_) all.push_back(existing);
    auto table = compile_rules(all);
    // Sources were accepted before, so recompilation cannot conflict.
    if (table.ok()) {
      rules_ = table.value();
      for (auto& [id, existing] : inventory_) {
        existing.rules.clear();
        for (const auto& rule : rules_.rules)
          if (rule.slice_id == id) existing.rules.push_back(rule);
      }
    }
  }

  void install_rules(SliceInstance& inst, const RuleTable& table) {
    rules_ = table;
    inst.rules.clear();
    for (const auto& rule : table.rules)
      if (rule.slice_id == inst.profile.slice_id) inst.rules.push_back(rule);
    for (auto& [id, existing] : inventory_) {
      existing.rules.clear();
      for (const auto& rule : table.rules)
        if (rule.slice_id == id) existing.rules.push_back(rule);
    }
  }

  // ------------------------------------------------------------------
  // Events
  // ------------------------------------------------------------------

  void emit(const std::string& slice_id, EventKind kind, std::optional<LifecycleState> old_state,
            std::optional<LifecycleState> new_state, const std::string& detail) {
    if (recovering_) return;
    SliceEvent ev;
    ev.seq = ++event_seq_;
    ev.slice_id = slice_id;
    ev.kind = kind;
    ev.old_state = old_state;
    ev.new_state = new_state;
    ev.timestamp = clock_;
    ev.detail = detail;
    std::lock_guard lock(ev_mu_);
    if (hook_) hook_(ev);
    if (opts_.deliver_events) {
      ev_queue_.push_back(ev);
      ev_cv_.notify_all();
    }
  }

  void notifier_loop();  // defined below

  static bool post_event(const std::string& url, const std::string& body) {
    try {
      auto scheme = url.find("//");
      auto host_start = scheme == std::string::npos ? 0 : scheme + 2;
      auto slash = url.find('/', host_start);
      std::string base = slash == std::string::npos ? url : url.substr(0, slash);
      std::string path = slash == std::string::npos ? "/" : url.substr(slash);
      httplib::Client client(base);
      client.set_connection_timeout(1, 0);
      client.set_read_timeout(2, 0);
      auto res = client.Post(path, body, "application/json");
      return res && res->status >= 200 && res->status < 300;
    } catch (...) {
      return false;
    }
  }

  // ------------------------------------------------------------------
  // Persistence
  // ------------------------------------------------------------------

  std::string log_path() const { return opts_.data_dir + "/events.log"; }
  std::string snapshot_path() const { return opts_.data_dir + "/snapshot.json"; }
  std::string notifications_path() const { return opts_.data_dir + "/notifications.ndjson"; }

  void log_command(json record) {
    ++clock_;
    if (!log_ || recovering_) return;
    record["seq"] = clock_;
    log_->append(record);
  }

  void write_snapshot() const {
    json snap{{"last_seq", clock_},
              {"event_seq", event_seq_},
              {"catalog", cfg_.nf_catalog},
              {"pool", pool_},
              {"rules", rules_},
              {"inventory", json::array()}};
    for (const auto& [id, inst] : inventory_) snap["inventory"].push_back(inst);
    write_json_atomic(snapshot_path(), snap);
  }

  /// Replays snapshot + log tail. Throws CorruptLog on checksum/parse
  /// failures; a truncated final record is ordinary crash damage and is
  /// ignored.
  void recover() {
    recovering_ = true;
    if (auto snap = read_json_file(snapshot_path())) {
      clock_ = snap->value("last_seq", std::uint64_t{0});
      event_seq_ = snap->value("event_seq", std::uint64_t{0});
      if (snap->contains("catalog")) snap->at("catalog").get_to(cfg_.nf_catalog);
      if (snap->contains("pool")) snap->at("pool").get_to(pool_);
      if (snap->contains("rules")) snap->at("rules").get_to(rules_);
      if (snap->contains("inventory")) {
        for (const auto& item : snap->at("inventory")) {
          auto inst = item.get<SliceInstance>();
          inventory_[inst.profile.slice_id] = inst;
        }
      }
    }
    const std::uint64_t snapshot_seq = clock_;
    for (const auto& record : EventLog::read_all(log_path())) {
      const std::uint64_t seq = record.value("seq", std::uint64_t{0});
      if (seq <= snapshot_seq) continue;
      clock_ = seq;
      const std::string op = record.value("op", "");
      try {
        if (op == "allocate_nssi") {
          (void)apply_allocate_nssi(record.at("payload").get<NssiRequest>());
        } else if (op == "create_slice") {
          (void)apply_create_slice(record.at("payload").get<StandaloneRequest>());
        } else if (op == "modify") {
          (void)apply_modify(record.at("slice_id").get<std::string>(),
                       record.at("payload").get<QosDelta>());
        } else if (op == "deallocate") {
          (void)apply_deallocate(record.at("slice_id").get<std::string>());
        } else if (op == "set_catalog") {
          (void)apply_set_catalog(record.at("payload").get<std::vector<NfDescriptor>>());
        }
      } catch (const std::exception&) {
        // A logged command that cannot be decoded would have failed its
        // original parse too; skip it.
      }
    }
    recovering_ = false;
  }

  // ------------------------------------------------------------------
  // Scenario worker
  // ------------------------------------------------------------------

  void run_scenario_job(const std::string& id, const EmulatedNetwork& network,
                        const ScenarioSpec& scenario, const std::vector<SliceInstance>& slices) {
    auto report = run_scenario(network, scenario);
    std::vector<IsolationVerdict> verdicts;
    if (report.ok())
      verdicts = verify_isolation(report.value(), slices, cfg_.emulator.isolation_tol);
    {
      std::lock_guard lock(scn_mu_);
      auto& status = scenarios_[id];
      if (report.ok()) {
        status.state = "done";
        status.report = report.value();
        status.verdicts = verdicts;
      } else {
        status.state = "failed";
        status.error = report.error().code + ": " + report.error().message;
      }
    }
    for (const auto& v : verdicts) {
      if (!v.pass)
        emit(v.slice_id, EventKind::Alarm, std::nullopt, std::nullopt,
             "isolation verdict failed in " + id);
    }
  }

  // ------------------------------------------------------------------
  // State
  // ------------------------------------------------------------------

  ServiceConfig cfg_;
  Options opts_;

  mutable std::mutex mu_;
  ResourcePool pool_;
  std::map<std::string, SliceInstance> inventory_;
  RuleTable rules_;
  std::uint64_t clock_ = 0;      // logical ticks: one per command
  std::uint64_t event_seq_ = 0;  // monotone event counter
  bool recovering_ = false;

  std::unique_ptr<EventLog> log_;

  // notifier
  mutable std::mutex ev_mu_;
  std::condition_variable ev_cv_;
  std::deque<SliceEvent> ev_queue_;
  std::vector<std::string> subscribers_;
  std::function<void(const SliceEvent&)> hook_;
  bool ev_stop_ = false;
  bool ev_busy_ = false;
  std::thread notifier_;

  // scenarios
  mutable std::mutex scn_mu_;
  std::map<std::string, ScenarioStatus> scenarios_;
  std::vector<std::thread> scn_threads_;
  std::uint64_t scn_counter_ = 0;

  std::atomic<bool> stopped_{false};
};

/// Delivery worker: drains the queue in order, writes every event to the
/// ndjson sink, then posts to each subscriber. Failures are logged to the
/// sink and never block the pipeline; per-slice ordering follows from the
/// single delivery thread.
inline void Orchestrator::notifier_loop() {
  for (;;) {
    SliceEvent ev;
    {
      std::unique_lock lock(ev_mu_);
      ev_cv_.wait(lock, [this] { return ev_stop_ || !ev_queue_.empty(); });
      if (ev_queue_.empty()) {
        if (ev_stop_) return;
        continue;
      }
      ev = ev_queue_.front();
      ev_queue_.pop_front();
      ev_busy_ = true;
    }

    const json body = ev;
    if (!opts_.data_dir.empty()) {
      std::ofstream sink(notifications_path(), std::ios::app);
      if (sink) sink << body.dump() << "\n";
    }
    std::vector<std::string> targets;
    {
      std::lock_guard lock(ev_mu_);
      targets = subscribers_;
    }
    for (const auto& url : targets) {
      bool delivered = false;
      for (int attempt = 0; attempt < 3 && !delivered; ++attempt)
        delivered = post_event(url, body.dump());
      if (!delivered && !opts_.data_dir.empty()) {
        std::ofstream sink(notifications_path(), std::ios::app);
        if (sink)
          sink << json{{"delivery_failure", url}, {"seq", ev.seq}}.dump() << "\n";
      }
    }
    {
      std::lock_guard lock(ev_mu_);
      ev_busy_ = false;
    }
    ev_cv_.notify_all();
  }
}

}  // namespace s3
