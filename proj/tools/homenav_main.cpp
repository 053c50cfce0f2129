#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "homenav/bench.hpp"
#include "homenav/planner.hpp"
#include "homenav/serialize.hpp"
#include "homenav/world.hpp"

namespace {

using homenav::Chain;
using nlohmann::json;

// Error details can quote raw bytes from a corrupt input file; never let
// that break the JSON we print about it.
std::string dump_lossy(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

int run_sim(const std::string& scenario_path, std::optional<std::uint64_t> seed,
            const std::string& mode, const std::string& ledger_out) {
  homenav::Scenario scenario = homenav::load_scenario_file(scenario_path);
  if (seed) scenario.config.seed = *seed;
  scenario.config.mode = mode == "p2p" ? homenav::MessageMode::PointToPoint
                                       : homenav::MessageMode::Ledger;

  homenav::ScenarioResult result =
      homenav::run_scenario(std::move(scenario.world), scenario.config);

  const auto validation = homenav::validate_chain(result.chain);
  if (!validation.ok) {
    std::cerr << "internal error: produced chain failed validation at block "
              << validation.first_bad_index << " ("
              << homenav::to_string(validation.fault) << ")\n";
    return 1;
  }
  if (!ledger_out.empty()) {
    homenav::dump_chain_file(result.chain, ledger_out);
  }

  json summary{{"scenario", scenario_path},
               {"blocks", result.chain.size()},
               {"robots", result.chain.team().size()},
               {"mode", homenav::to_string(result.stats.mode)},
               {"messages_sent", result.stats.messages_sent},
               {"rounds", result.stats.rounds}};
  if (!ledger_out.empty()) summary["ledger"] = ledger_out;
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_plan(const std::string& ledger_path, const std::string& robot,
             const std::string& goal) {
  Chain chain = homenav::load_chain_file(ledger_path);
  const auto validation = homenav::validate_chain(chain);
  if (!validation.ok) {
    json error{{"error", "InvalidChain"},
               {"first_bad_index", validation.first_bad_index},
               {"reason", homenav::to_string(validation.fault)}};
    std::cout << dump_lossy(error) << '\n';
    return 1;
  }

  const auto graph = homenav::build_graph(homenav::latest_states(chain));
  try {
    const auto plan = homenav::plan_route(graph, robot, goal);
    if (!plan) {
      std::cout << json{{"error", "NoPath"}}.dump() << '\n';
      return 1;
    }
    std::cout << homenav::plan_to_json(*plan).dump() << '\n';
    return 0;
  } catch (const homenav::PlannerError& e) {
    std::cout << dump_lossy(json{{"error", "UnknownRobot"}, {"detail", e.what()}})
              << '\n';
    return 1;
  }
}

int run_validate(const std::string& ledger_path) {
  Chain chain = [&] {
    try {
      return homenav::load_chain_file(ledger_path);
    } catch (const homenav::ChainParseError& e) {
      json error{{"ok", false},
                 {"first_bad_index", e.line_index()},
                 {"reason", "ParseError"},
                 {"detail", e.what()}};
      std::cout << dump_lossy(error) << '\n';
      std::exit(1);
    }
  }();

  const auto validation = homenav::validate_chain(chain);
  if (!validation.ok) {
    json error{{"ok", false},
               {"first_bad_index", validation.first_bad_index},
               {"reason", homenav::to_string(validation.fault)},
               {"detail", validation.detail}};
    std::cout << dump_lossy(error) << '\n';
    return 1;
  }
  std::cout << json{{"ok", true}, {"blocks", chain.size()}}.dump() << '\n';
  return 0;
}

int run_bench(const std::string& positions_csv, std::size_t robots,
              std::uint64_t seed, const std::string& out_dir) {
  homenav::BenchOptions options;
  options.positions.clear();
  std::stringstream stream(positions_csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    options.positions.push_back(std::stoul(token));
  }
  if (options.positions.empty()) {
    std::cerr << "bench: --positions needs at least one value\n";
    return 2;
  }
  options.robots = robots;
  options.seed = seed;
  options.out_dir = out_dir;

  const auto output = homenav::run_benchmark(options);
  json summary{{"table", output.table_path}, {"ledgers", output.ledger_paths}};
  std::cout << summary.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-ledger visual homing coordination for robot teams"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string ledger_out;
  std::string mode = "ledger";
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_value = 0;

  auto* sim = app.add_subcommand("sim", "Run a scenario and dump the ledger");
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  auto* seed_opt = sim->add_option("--seed", seed_value, "Override scenario seed");
  sim->add_option("--ledger-out", ledger_out, "Ledger JSON-lines output path");
  sim->add_option("--mode", mode, "Message accounting: ledger or p2p")
      ->check(CLI::IsMember({"ledger", "p2p"}));

  std::string ledger_path;
  std::string robot;
  std::string goal;
  auto* plan = app.add_subcommand("plan", "Plan a landmark chain from a ledger");
  plan->add_option("--ledger", ledger_path, "Ledger JSON-lines file")->required();
  plan->add_option("--robot", robot, "Start robot id")->required();
  plan->add_option("--goal", goal, "Goal landmark id")->required();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a dumped ledger");
  validate->add_option("--ledger", validate_path, "Ledger JSON-lines file")
      ->required();

  std::string positions = "40,200,500";
  std::size_t robots = 2;
  std::uint64_t bench_seed = 42;
  std::string out_dir = "bench_out";
  auto* bench = app.add_subcommand("bench", "Latency/scaling benchmark");
  bench->add_option("--positions", positions, "Comma-separated position counts");
  bench->add_option("--robots", robots, "Team size")->check(CLI::Range(2, 64));
  bench->add_option("--seed", bench_seed, "Workload seed");
  bench->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  try {
    if (sim->parsed()) {
      if (seed_opt->count() > 0) seed_override = seed_value;
      return run_sim(scenario_path, seed_override, mode, ledger_out);
    }
    if (plan->parsed()) {
      return run_plan(ledger_path, robot, goal);
    }
    if (validate->parsed()) {
      return run_validate(validate_path);
    }
    if (bench->parsed()) {
      return run_bench(positions, robots, bench_seed, out_dir);
    }
  } catch (const homenav::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
