// Acceptance suite: end-to-end checks over the CLI binary and the library.
// Each criterion prints one PASS/FAIL line.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "homenav/bench.hpp"
#include "homenav/planner.hpp"
#include "homenav/rng.hpp"
#include "homenav/serialize.hpp"
#include "homenav/world.hpp"

using namespace homenav;
using nlohmann::json;

namespace {

const std::string kCli = HOMENAV_CLI_PATH;
const std::string kScenarioDir = HOMENAV_SCENARIO_DIR;

std::filesystem::path work_dir() {
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() / "homenav_acceptance";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args, const std::string& tag) {
  const auto out_path = work_dir() / (tag + ".out");
  const std::string command =
      "\"" + kCli + "\" " + args + " > \"" + out_path.string() + "\" 2>&1";
  const int status = std::system(command.c_str());

  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Tracks one criterion's checks and prints its summary line.
struct Criterion {
  int number;
  std::string name;
  bool ok = true;
  int uncaught_at_entry = std::uncaught_exceptions();

  Criterion(int number, std::string name) : number(number), name(std::move(name)) {}

  void expect(bool condition, const std::string& what) {
    if (!condition) ok = false;
    const std::string message = "criterion " + std::to_string(number) + ": " + what;
    CHECK_MESSAGE(condition, message);
  }

  ~Criterion() {
    if (std::uncaught_exceptions() > uncaught_at_entry) ok = false;
    std::printf("ACCEPTANCE %2d  %-34s %s\n", number, name.c_str(),
                ok ? "PASS" : "FAIL");
    std::fflush(stdout);
  }
};

VisibilityGraph random_graph(SplitMix64& rng, std::size_t robots,
                             std::size_t landmarks, double edge_probability) {
  std::map<std::string, Transaction> latest;
  for (std::size_t r = 0; r < robots; ++r) {
    const std::string robot = "R" + std::to_string(r);
    std::vector<LandmarkObservation> observations;
    double bearing = 0.0;
    for (std::size_t l = 0; l < landmarks; ++l) {
      if (rng.next_unit() < edge_probability) {
        observations.push_back({"L" + std::to_string(l), bearing, 0.2, {}});
        bearing += 0.1;
      }
    }
    latest[robot] =
        make_transaction(robot, 0, make_panorama(robot, 0, observations));
  }
  return build_graph(latest);
}

PanoramicView view_at(const std::string& robot, std::int64_t now,
                      std::initializer_list<std::string> ids) {
  std::vector<LandmarkObservation> observations;
  double bearing = 0.3;
  for (const auto& id : ids) {
    observations.push_back({id, bearing, 0.15, {0.5}});
    bearing += 0.4;
  }
  return make_panorama(robot, now, std::move(observations));
}

Chain ten_block_chain() {
  Chain chain({"R1", "R2", "R3"}, 0);
  const char* robots[] = {"R1", "R2", "R3"};
  for (int i = 0; i < 9; ++i) {
    const std::int64_t now = (i + 1) * 100;
    std::vector<Transaction> fresh;
    if (i == 0) {
      for (const char* r : robots) {
        fresh.push_back(make_transaction(r, now, view_at(r, now, {"A", "B"})));
      }
    } else {
      const std::string mover = robots[i % 3];
      fresh.push_back(make_transaction(
          mover, now, view_at(mover, now, {"A", "K" + std::to_string(i)})));
    }
    append_block(chain, assemble_block(chain, fresh, now));
  }
  return chain;
}

// Scenario with n robots all moving past the distance threshold for `rounds`
// ticks.
std::pair<WorldModel, SimConfig> all_publish_scenario(std::size_t robots,
                                                      int rounds) {
  WorldModel world;
  world.sensor_range = 500.0;
  world.approach_distance = 3.0;
  world.speed = 0.5;
  world.landmarks.emplace("A", Landmark{"A", {0.0, 200.0}, 1.0, {}});
  SimConfig config;
  config.policy = {0.5, 0.25, 100000000};
  for (std::size_t r = 0; r < robots; ++r) {
    const std::string id = "R" + std::to_string(r);
    world.robots.emplace(id, Pose{{double(r) * 30.0, 0.0}, 0.0});
    for (int i = 1; i <= rounds; ++i) {
      config.scripts[id].push_back({double(r) * 30.0 + double(i), 0.0});
    }
  }
  return {std::move(world), std::move(config)};
}

const BenchOutput& shared_bench() {
  static const BenchOutput output = [] {
    BenchOptions options;
    options.positions = {40, 200, 500};
    options.robots = 2;
    options.seed = 42;
    options.out_dir = (work_dir() / "bench_shared").string();
    return run_benchmark(options);
  }();
  return output;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

TEST_CASE("criterion 1: three-robot scenario end to end") {
  Criterion criterion(1, "scenario end-to-end plan+homing");
  const auto start = std::chrono::steady_clock::now();

  const std::string ledger_path = (work_dir() / "fig3_ledger.jsonl").string();
  const auto sim = run_cli("sim --scenario \"" + kScenarioDir +
                               "/fig3.json\" --ledger-out \"" + ledger_path + "\"",
                           "c1_sim");
  criterion.expect(sim.exit_code == 0, "sim exits 0, got: " + sim.output);

  const auto plan_cmd = run_cli(
      "plan --ledger \"" + ledger_path + "\" --robot R1 --goal GOAL", "c1_plan");
  criterion.expect(plan_cmd.exit_code == 0, "plan exits 0, got: " + plan_cmd.output);

  json plan_json;
  try {
    plan_json = json::parse(plan_cmd.output);
  } catch (...) {
    criterion.expect(false, "plan output is JSON: " + plan_cmd.output);
  }
  if (plan_json.is_object()) {
    criterion.expect(plan_json.value("waypoints", json::array()) ==
                         json::array({"L12", "L23", "GOAL"}),
                     "waypoints are [L12, L23, GOAL]: " + plan_cmd.output);
    criterion.expect(plan_json.value("via_robots", json::array()) ==
                         json::array({"R1", "R2", "R3"}),
                     "via robots are [R1, R2, R3]: " + plan_cmd.output);
  }

  // Execute the plan in-process from the post-scenario world.
  Scenario scenario = load_scenario_file(kScenarioDir + "/fig3.json");
  auto result = run_scenario(scenario.world, scenario.config);
  const auto graph = build_graph(latest_states(result.chain));
  const auto plan = plan_route(graph, "R1", "GOAL");
  criterion.expect(plan.has_value(), "in-process plan exists");
  if (plan) {
    WorldModel world = result.world;
    const auto trace = execute_plan(world, result.chain, scenario.config.policy,
                                    "R1", *plan, 5000, 200);
    criterion.expect(trace.outcome == ExecOutcome::Success,
                     std::string("execution outcome Success, got ") +
                         to_string(trace.outcome));
    const double final_distance =
        distance(world.robots.at("R1").position,
                 world.landmarks.at("GOAL").center);
    criterion.expect(final_distance <= world.approach_distance + 1e-9,
                     "final distance to GOAL within approach distance");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  criterion.expect(elapsed < 5.0,
                   "runtime < 5 s, took " + std::to_string(elapsed));
}

TEST_CASE("criterion 2: planner agrees with the exhaustive oracle") {
  Criterion criterion(2, "oracle equivalence on 1000 graphs");
  const auto start = std::chrono::steady_clock::now();

  SplitMix64 rng(424242);
  int agreements = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t robots = 2 + rng.next_below(6);      // 2..7
    const std::size_t landmarks = 1 + rng.next_below(10);  // 1..10
    const auto graph = random_graph(rng, robots, landmarks, 0.3);
    const std::string start_robot = "R" + std::to_string(rng.next_below(robots));
    const std::string goal = "L" + std::to_string(rng.next_below(landmarks));

    const auto fast = plan_route(graph, start_robot, goal);
    const auto slow = oracle_plan(graph, start_robot, goal);

    bool agree = fast.has_value() == slow.has_value();
    if (agree && fast) {
      agree = fast->via_robots.size() == slow->via_robots.size() &&
              *fast == *slow && plan_is_valid(graph, *fast);
    }
    if (agree) {
      ++agreements;
    } else {
      criterion.expect(false, "disagreement at trial " + std::to_string(trial));
    }
  }
  criterion.expect(agreements == trials, "100% agreement (" +
                                             std::to_string(agreements) + "/" +
                                             std::to_string(trials) + ")");

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  criterion.expect(elapsed < 30.0,
                   "runtime < 30 s, took " + std::to_string(elapsed));
}

TEST_CASE("criterion 3: single-byte tampering always detected by validate") {
  Criterion criterion(3, "tamper detection on dumped chain");

  const Chain chain = ten_block_chain();
  const std::string dump = dump_chain(chain);
  const std::string clean_path = (work_dir() / "clean_chain.jsonl").string();
  {
    std::ofstream out(clean_path, std::ios::binary);
    out << dump;
  }
  const auto clean = run_cli("validate --ledger \"" + clean_path + "\"", "c3_ok");
  criterion.expect(clean.exit_code == 0, "clean chain validates");

  std::vector<std::size_t> line_starts{0};
  for (std::size_t i = 0; i + 1 < dump.size(); ++i) {
    if (dump[i] == '\n') line_starts.push_back(i + 1);
  }
  criterion.expect(line_starts.size() == 10, "dump has 10 block lines");

  SplitMix64 rng(99);
  const int trials = 110;
  int detected = 0;
  for (int trial = 0; trial < trials; ++trial) {
    std::string mutated = dump;
    const std::size_t pos = rng.next_below(mutated.size());
    char replacement = char(rng.next_below(256));
    while (replacement == mutated[pos]) replacement = char(rng.next_below(256));
    mutated[pos] = replacement;

    std::size_t mutated_block = 0;
    for (std::size_t b = 0; b < line_starts.size(); ++b) {
      if (pos >= line_starts[b]) mutated_block = b;
    }

    const std::string path =
        (work_dir() / ("mutated_" + std::to_string(trial) + ".jsonl")).string();
    {
      std::ofstream out(path, std::ios::binary);
      out << mutated;
    }
    const auto result =
        run_cli("validate --ledger \"" + path + "\"", "c3_" + std::to_string(trial));

    bool caught = result.exit_code != 0;
    std::size_t reported = SIZE_MAX;
    if (caught) {
      try {
        const json j = json::parse(result.output);
        reported = j.at("first_bad_index").get<std::size_t>();
      } catch (...) {
        caught = false;
      }
    }
    caught = caught && reported <= mutated_block;
    if (caught) {
      ++detected;
    } else {
      criterion.expect(false, "trial " + std::to_string(trial) + " pos " +
                                  std::to_string(pos) + " block " +
                                  std::to_string(mutated_block) + " reported " +
                                  std::to_string(reported) + " exit " +
                                  std::to_string(result.exit_code));
    }
  }
  criterion.expect(detected == trials,
                   "100% detection (" + std::to_string(detected) + "/" +
                       std::to_string(trials) + ")");
}

TEST_CASE("criterion 4: retrieval time stays flat with chain growth") {
  Criterion criterion(4, "retrieval flatness 40 vs 500");
  const auto& bench = shared_bench();
  REQUIRE(bench.records.size() == 3);
  const auto& at_40 = bench.records[0];
  const auto& at_500 = bench.records[2];
  criterion.expect(at_40.positions == 40 && at_500.positions == 500,
                   "records are ordered 40/200/500");
  criterion.expect(at_40.avg_retrieval_ms > 0.0, "40-position mean is positive");
  criterion.expect(
      at_500.avg_retrieval_ms <= 2.0 * at_40.avg_retrieval_ms,
      "mean retrieval at 500 positions (" +
          std::to_string(at_500.avg_retrieval_ms) + " ms) <= 2x mean at 40 (" +
          std::to_string(at_40.avg_retrieval_ms) + " ms)");
}

TEST_CASE("criterion 5: updates cost more than retrievals at every setting") {
  Criterion criterion(5, "update > retrieval ordering");
  const auto& bench = shared_bench();
  for (const auto& record : bench.records) {
    criterion.expect(record.avg_update_ms > record.avg_retrieval_ms,
                     "positions=" + std::to_string(record.positions) +
                         ": update mean " + std::to_string(record.avg_update_ms) +
                         " ms > retrieval mean " +
                         std::to_string(record.avg_retrieval_ms) + " ms");
  }
}

TEST_CASE("criterion 6: message counts are n*r vs n*(n-1)*r") {
  Criterion criterion(6, "message complexity by team size");
  const int rounds = 10;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    auto [world, config] = all_publish_scenario(n, rounds);

    config.mode = MessageMode::Ledger;
    const auto ledger_run = run_scenario(world, config);
    criterion.expect(ledger_run.stats.messages_sent == n * rounds,
                     "ledger mode n=" + std::to_string(n) + ": " +
                         std::to_string(ledger_run.stats.messages_sent) + " == " +
                         std::to_string(n * rounds));
    criterion.expect(ledger_run.stats.rounds == std::uint64_t(rounds),
                     "rounds counted for n=" + std::to_string(n));

    config.mode = MessageMode::PointToPoint;
    const auto p2p_run = run_scenario(world, config);
    criterion.expect(p2p_run.stats.messages_sent == n * (n - 1) * rounds,
                     "p2p mode n=" + std::to_string(n) + ": " +
                         std::to_string(p2p_run.stats.messages_sent) + " == " +
                         std::to_string(n * (n - 1) * rounds));
  }
}

TEST_CASE("criterion 7: each update trigger fires alone") {
  Criterion criterion(7, "independent update triggers");
  const UpdatePolicy policy{2.0, 0.5, 10000};
  const PriorState prior{{0.0, 0.0}, view_at("R", 0, {"a", "b"}), 0};

  const auto distance_only =
      should_update(policy, prior, {5.0, 0.0}, view_at("R", 0, {"a", "b"}), 1000);
  criterion.expect(distance_only.distance && !distance_only.difference &&
                       !distance_only.time,
                   "distance fires alone");

  const auto difference_only =
      should_update(policy, prior, {0.0, 0.0}, view_at("R", 0, {"b", "c", "d"}), 1000);
  criterion.expect(!difference_only.distance && difference_only.difference &&
                       !difference_only.time,
                   "difference fires alone");

  const auto time_only =
      should_update(policy, prior, {0.0, 0.0}, view_at("R", 0, {"a", "b"}), 20000);
  criterion.expect(!time_only.distance && !time_only.difference && time_only.time,
                   "time fires alone");

  const auto none =
      should_update(policy, prior, {1.0, 0.0}, view_at("R", 0, {"a", "b"}), 1000);
  criterion.expect(!none.should_publish(), "nothing fires below thresholds");
}

TEST_CASE("criterion 8: benchmark runs are deterministic modulo timing") {
  Criterion criterion(8, "bench determinism (seed 42)");

  const std::string dir_a = (work_dir() / "bench_a").string();
  const std::string dir_b = (work_dir() / "bench_b").string();
  const auto run_a = run_cli(
      "bench --positions 200 --seed 42 --out \"" + dir_a + "\"", "c8_a");
  const auto run_b = run_cli(
      "bench --positions 200 --seed 42 --out \"" + dir_b + "\"", "c8_b");
  criterion.expect(run_a.exit_code == 0 && run_b.exit_code == 0,
                   "both bench runs exit 0");

  const std::string ledger_a = read_file(dir_a + "/ledger_200.jsonl");
  const std::string ledger_b = read_file(dir_b + "/ledger_200.jsonl");
  criterion.expect(!ledger_a.empty() && ledger_a == ledger_b,
                   "ledger dumps are byte-identical");

  const auto table_a = parse_csv(read_file(dir_a + "/table.csv"));
  const auto table_b = parse_csv(read_file(dir_b + "/table.csv"));
  criterion.expect(table_a.size() == table_b.size() && table_a.size() == 2,
                   "tables have one data row");
  const std::size_t timing_columns[] = {1, 2};  // avg_update_ms, avg_retrieval_ms
  for (std::size_t row = 0; row < table_a.size() && row < table_b.size(); ++row) {
    REQUIRE(table_a[row].size() == 6);
    REQUIRE(table_b[row].size() == 6);
    for (std::size_t col = 0; col < 6; ++col) {
      const bool is_timing =
          row > 0 && (col == timing_columns[0] || col == timing_columns[1]);
      if (is_timing) continue;
      criterion.expect(table_a[row][col] == table_b[row][col],
                       "table cell (" + std::to_string(row) + "," +
                           std::to_string(col) + ") matches");
    }
  }

  // Quality series derives from geometry alone, so it must match exactly.
  criterion.expect(read_file(dir_a + "/quality_samples_200.csv") ==
                       read_file(dir_b + "/quality_samples_200.csv"),
                   "quality series is byte-identical");
}

TEST_CASE("criterion 9: tip snapshots are complete and carries are verbatim") {
  Criterion criterion(9, "snapshot semantics");

  // Staggered movement: R2 publishes once, then rides along.
  WorldModel world;
  world.sensor_range = 100.0;
  world.approach_distance = 3.0;
  world.speed = 0.5;
  world.landmarks.emplace("A", Landmark{"A", {0.0, 50.0}, 1.0, {}});
  world.robots.emplace("R1", Pose{{0.0, 0.0}, 0.0});
  world.robots.emplace("R2", Pose{{5.0, 0.0}, 0.0});
  SimConfig config;
  config.policy = {0.5, 0.25, 100000000};
  for (int i = 1; i <= 8; ++i) config.scripts["R1"].push_back({double(i), 0.0});
  config.scripts["R2"].push_back({6.0, 0.0});

  const Scenario fig3 = load_scenario_file(kScenarioDir + "/fig3.json");
  const Scenario open_random =
      load_scenario_file(kScenarioDir + "/open_random.json");

  const ScenarioResult results[] = {
      run_scenario(world, config),
      run_scenario(fig3.world, fig3.config),
      run_scenario(open_random.world, open_random.config)};

  for (const auto& result : results) {
    const auto team = result.chain.team();
    const auto blocks = result.chain.blocks();
    criterion.expect(blocks.size() > 1, "scenario appended blocks");

    const auto states = latest_states(result.chain);
    criterion.expect(states.size() == team.size(),
                     "tip holds exactly one transaction per robot");

    for (std::size_t i = 1; i < blocks.size(); ++i) {
      std::set<std::string> robots;
      for (const auto& tx : blocks[i].transactions) robots.insert(tx.robot_id);
      criterion.expect(robots == team, "block " + std::to_string(i) +
                                           " carries the whole team");
      if (i < 2) continue;
      for (std::size_t t = 0; t < blocks[i].transactions.size(); ++t) {
        const auto& now_tx = blocks[i].transactions[t];
        const auto& prev_tx = blocks[i - 1].transactions[t];
        const bool fresh = now_tx.timestamp == blocks[i].timestamp &&
                           now_tx.timestamp != prev_tx.timestamp;
        if (!fresh) {
          criterion.expect(now_tx.tx_id == prev_tx.tx_id,
                           "unmoved robot " + now_tx.robot_id +
                               " carried verbatim into block " +
                               std::to_string(i));
        }
      }
    }
  }
}

TEST_CASE("criterion 10: no coordinates leak into the serialized ledger") {
  Criterion criterion(10, "pose privacy in transactions");

  const Scenario scenario = load_scenario_file(kScenarioDir + "/fig3.json");
  const auto result = run_scenario(scenario.world, scenario.config);
  const std::string dump = dump_chain(result.chain);

  const std::set<std::string> tx_keys{"tx_id", "robot_id", "timestamp", "panorama"};
  const std::set<std::string> pano_keys{"robot_id", "captured_at", "observations"};
  const std::set<std::string> obs_keys{"landmark_id", "bearing", "apparent_size",
                                       "descriptor"};
  const std::set<std::string> forbidden{"x",        "y",       "position",
                                        "pose",     "heading", "coordinates",
                                        "location", "waypoint"};

  std::function<void(const json&)> scan_keys = [&](const json& node) {
    if (node.is_object()) {
      for (auto it = node.begin(); it != node.end(); ++it) {
        criterion.expect(!forbidden.count(it.key()),
                         "forbidden key in transaction: " + it.key());
        scan_keys(it.value());
      }
    } else if (node.is_array()) {
      for (const auto& child : node) scan_keys(child);
    }
  };

  std::istringstream in(dump);
  std::string line;
  std::size_t transactions = 0;
  while (std::getline(in, line)) {
    const json block = json::parse(line);
    for (const auto& tx : block.at("transactions")) {
      ++transactions;
      std::set<std::string> keys;
      for (auto it = tx.begin(); it != tx.end(); ++it) keys.insert(it.key());
      criterion.expect(keys == tx_keys, "transaction carries only declared fields");
      std::set<std::string> pkeys;
      for (auto it = tx.at("panorama").begin(); it != tx.at("panorama").end(); ++it) {
        pkeys.insert(it.key());
      }
      criterion.expect(pkeys == pano_keys, "panorama carries only declared fields");
      for (const auto& obs : tx.at("panorama").at("observations")) {
        std::set<std::string> okeys;
        for (auto it = obs.begin(); it != obs.end(); ++it) okeys.insert(it.key());
        criterion.expect(okeys == obs_keys,
                         "observation carries only declared fields");
      }
      scan_keys(tx);
    }
  }
  criterion.expect(transactions > 0, "the dump contains transactions");
}
