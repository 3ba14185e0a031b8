#include <doctest.h>

#include <random>

#include "s3/slice_classifier.hpp"

using namespace s3;

namespace {

RuleSource integrated(std::string id, int sst, std::optional<std::uint32_t> sd,
                      std::vector<int> qfis) {
  RuleSource src;
  src.slice_id = std::move(id);
  src.mode = SliceMode::Integrated;
  src.stitching.snssai = Snssai{sst, sd};
  src.stitching.qfis = std::move(qfis);
  return src;
}

RuleSource standalone(std::string id, const std::string& terminal, const std::string& hub) {
  RuleSource src;
  src.slice_id = std::move(id);
  src.mode = SliceMode::Standalone;
  src.stitching.prefix_pairs = {{*Ipv4Prefix::parse(terminal), *Ipv4Prefix::parse(hub)}};
  return src;
}

FlowMetadata meta_snssai(int sst, std::optional<int> qfi = std::nullopt) {
  FlowMetadata m;
  m.snssai = Snssai{sst, std::nullopt};
  m.qfi = qfi;
  m.src = *parse_ipv4("192.0.2.1");
  m.dst = *parse_ipv4("198.51.100.1");
  return m;
}

// Independent oracle: consider every rule regardless of table order and pick
// the matching one with the smallest (priority, rule_id).
std::string classify_oracle(const FlowMetadata& meta, const RuleTable& table) {
  const ClassifierRule* best = nullptr;
  for (const auto& rule : table.rules) {
    if (!rule_matches(rule.match, meta)) continue;
    if (best == nullptr || rule.priority < best->priority ||
        (rule.priority == best->priority && rule.rule_id < best->rule_id))
      best = &rule;
  }
  return best != nullptr ? best->slice_id : table.default_slice;
}

}  // namespace

TEST_CASE("compile_rules: zero slices yields only the default action") {
  auto table = compile_rules(std::vector<RuleSource>{});
  REQUIRE(table.ok());
  CHECK(table.value().rules.empty());
  CHECK(table.value().default_slice == "default");
}

TEST_CASE("compile_rules: one integrated slice") {
  auto table = compile_rules({integrated("s1", 1, std::nullopt, {5})});
  REQUIRE(table.ok());
  // one snssai+qfi match and one snssai-only fallback, each in both directions
  REQUIRE(table.value().rules.size() == 4);
  const auto& first = table.value().rules.front();
  CHECK(first.priority == kTierSnssaiQfi);
  CHECK(first.match.snssai->sst == 1);
  CHECK(first.match.qfi == 5);

  FlowMetadata m = meta_snssai(1, 5);
  CHECK(classify(m, table.value()) == "s1");
  CHECK(classify(meta_snssai(1), table.value()) == "s1");  // snssai-only fallback
  CHECK(classify(meta_snssai(2), table.value()) == "default");
}

TEST_CASE("compile_rules: rule ids follow slice creation order") {
  auto table = compile_rules({integrated("first", 1, std::nullopt, {}),
                              integrated("second", 2, std::nullopt, {})});
  REQUIRE(table.ok());
  std::map<std::string, int> first_id;
  for (const auto& r : table.value().rules)
    if (first_id.count(r.slice_id) == 0) first_id[r.slice_id] = r.rule_id;
  CHECK(first_id.at("first") < first_id.at("second"));
}

TEST_CASE("compile_rules: identical MatchSpecs across slices conflict") {
  auto table = compile_rules({integrated("a", 1, 77u, {}), integrated("b", 1, 77u, {})});
  REQUIRE(!table.ok());
  CHECK(table.error().code == "CONFLICTING_RULES");
  CHECK(table.error().details == std::vector<std::string>{"a", "b"});
}

TEST_CASE("compile_rules: disjoint MatchSpecs never conflict") {
  std::vector<RuleSource> sources;
  for (int i = 0; i < 20; ++i) sources.push_back(integrated("s" + std::to_string(i), i, {}, {i}));
  CHECK(compile_rules(sources).ok());
}

TEST_CASE("compile_rules: standalone slices emit forward and reverse prefix rules") {
  auto table = compile_rules({standalone("sa", "10.1.0.0/24", "198.18.0.0/24")});
  REQUIRE(table.ok());
  REQUIRE(table.value().rules.size() == 2);
  CHECK(table.value().rules[0].mark == Direction::ToSatellite);
  CHECK(table.value().rules[1].mark == Direction::FromSatellite);

  FlowMetadata fwd;
  fwd.src = *parse_ipv4("10.1.0.9");
  fwd.dst = *parse_ipv4("198.18.0.77");
  CHECK(classify(fwd, table.value()) == "sa");
  FlowMetadata rtn;
  rtn.src = *parse_ipv4("198.18.0.77");
  rtn.dst = *parse_ipv4("10.1.0.9");
  CHECK(classify(rtn, table.value()) == "sa");
  FlowMetadata other;
  other.src = *parse_ipv4("10.2.0.9");
  other.dst = *parse_ipv4("198.18.0.77");
  CHECK(classify(other, table.value()) == "default");
}

TEST_CASE("classify: priority order, snssai beats dscp") {
  // rules {P1: sst=1 -> A, P2: dscp=46 -> B}; metadata matching both goes to A
  auto a = integrated("A", 1, std::nullopt, {});
  auto b = standalone("B", "10.9.0.0/24", "198.18.9.0/24");
  b.stitching.dscp = {46};
  auto table = compile_rules({a, b});
  REQUIRE(table.ok());

  FlowMetadata m = meta_snssai(1);
  m.dscp = 46;
  CHECK(classify(m, table.value()) == "A");

  FlowMetadata dscp_only;
  dscp_only.dscp = 46;
  dscp_only.src = *parse_ipv4("192.0.2.9");
  dscp_only.dst = *parse_ipv4("192.0.2.10");
  CHECK(classify(dscp_only, table.value()) == "B");
}

TEST_CASE("classify: absent rule fields are wildcards, sd narrows the match") {
  auto with_sd = compile_rules({integrated("x", 1, 1654u, {})});
  REQUIRE(with_sd.ok());
  FlowMetadata m = meta_snssai(1);
  CHECK(classify(m, with_sd.value()) == "default");  // rule requires sd
  m.snssai->sd = 1654u;
  CHECK(classify(m, with_sd.value()) == "x");

  auto without_sd = compile_rules({integrated("y", 1, std::nullopt, {})});
  REQUIRE(without_sd.ok());
  CHECK(classify(m, without_sd.value()) == "y");  // sd in metadata, wildcard in rule
}

TEST_CASE("classify: prefix containment") {
  auto table = compile_rules({standalone("wide", "10.0.0.0/8", "0.0.0.0/0")});
  REQUIRE(table.ok());
  FlowMetadata m;
  m.src = *parse_ipv4("10.200.3.4");
  m.dst = *parse_ipv4("8.8.8.8");
  CHECK(classify(m, table.value()) == "wide");
  m.src = *parse_ipv4("11.0.0.1");
  CHECK(classify(m, table.value()) == "default");
}

TEST_CASE("classify agrees with the linear-scan oracle on random tables") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    RuleTable table;
    for (int i = 0; i < 50; ++i) {
      ClassifierRule rule;
      rule.rule_id = i + 1;
      rule.priority = static_cast<int>(rng() % 3);
      rule.slice_id = "slice-" + std::to_string(rng() % 8);
      if (rng() % 2 == 0) rule.match.snssai = Snssai{static_cast<int>(rng() % 4), std::nullopt};
      if (rng() % 3 == 0) rule.match.qfi = static_cast<int>(rng() % 8);
      if (rng() % 3 == 0) rule.match.dscp = static_cast<int>(rng() % 4);
      if (rng() % 4 == 0)
        rule.match.src_prefix = Ipv4Prefix{static_cast<std::uint32_t>((rng() % 4) << 24), 8};
      if (!rule.match.any_present()) rule.match.qfi = static_cast<int>(rng() % 8);
      table.rules.push_back(rule);
    }
    std::sort(table.rules.begin(), table.rules.end(),
              [](const ClassifierRule& a, const ClassifierRule& b) {
                if (a.priority != b.priority) return a.priority < b.priority;
                return a.rule_id < b.rule_id;
              });

    for (int probe = 0; probe < 500; ++probe) {
      FlowMetadata m;
      if (rng() % 2 == 0) m.snssai = Snssai{static_cast<int>(rng() % 4), std::nullopt};
      if (rng() % 2 == 0) m.qfi = static_cast<int>(rng() % 8);
      if (rng() % 2 == 0) m.dscp = static_cast<int>(rng() % 4);
      m.src = rng();
      m.dst = rng();
      CHECK(classify(m, table) == classify_oracle(m, table));
    }
  }
}

TEST_CASE("adding a lower-precedence rule never changes existing matches") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    RuleTable table;
    for (int i = 0; i < 10; ++i) {
      ClassifierRule rule;
      rule.rule_id = i + 1;
      rule.priority = static_cast<int>(rng() % 2);
      rule.slice_id = "s" + std::to_string(i);
      rule.match.qfi = static_cast<int>(rng() % 6);
      table.rules.push_back(rule);
    }
    std::sort(table.rules.begin(), table.rules.end(),
              [](const ClassifierRule& a, const ClassifierRule& b) {
                if (a.priority != b.priority) return a.priority < b.priority;
                return a.rule_id < b.rule_id;
              });

    FlowMetadata m;
    m.qfi = static_cast<int>(rng() % 6);
    auto before = classify(m, table);
    if (before == table.default_slice) continue;  // only already-matched metadata

    RuleTable extended = table;
    ClassifierRule extra;
    extra.rule_id = 100;
    extra.priority = 5;  // strictly larger than every existing priority
    extra.slice_id = "late";
    extra.match.qfi = m.qfi;
    extended.rules.push_back(extra);
    CHECK(classify(m, extended) == before);
  }
}

TEST_CASE("stitch_points: the two modes place classifiers differently") {
  Topology topo;
  auto integrated_points = stitch_points(SliceMode::Integrated, topo);
  REQUIRE(integrated_points.size() == 4);
  CHECK(integrated_points[0] == StitchPoint{topo.ran_edge, Direction::ToSatellite});
  CHECK(integrated_points[1] == StitchPoint{topo.cn_edge, Direction::FromSatellite});
  CHECK(integrated_points[2] == StitchPoint{topo.hub_edge, Direction::ToSatellite});
  CHECK(integrated_points[3] == StitchPoint{topo.hub_edge, Direction::FromSatellite});

  auto standalone_points = stitch_points(SliceMode::Standalone, topo);
  REQUIRE(standalone_points.size() == 2);
  CHECK(standalone_points[0] == StitchPoint{topo.terminal_edge, Direction::ToSatellite});
  CHECK(standalone_points[1] == StitchPoint{topo.hub_edge, Direction::FromSatellite});

  CHECK(stitch_points(SliceMode::Integrated, topo) == stitch_points(SliceMode::Integrated, topo));
}

TEST_CASE("prefix parsing canonicalizes host bits") {
  auto p = Ipv4Prefix::parse("10.1.2.3/16");
  REQUIRE(p.has_value());
  CHECK(p->str() == "10.1.0.0/16");
  CHECK(p->contains(*parse_ipv4("10.1.255.255")));
  CHECK(!p->contains(*parse_ipv4("10.2.0.0")));
  CHECK(!Ipv4Prefix::parse("10.1.2.3/33").has_value());
  CHECK(!Ipv4Prefix::parse("300.1.2.3/8").has_value());
}
