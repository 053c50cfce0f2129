#include "homenav/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "homenav/planner.hpp"
#include "homenav/rng.hpp"
#include "homenav/serialize.hpp"

namespace homenav {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms_since(Clock::time_point start) {
  const auto ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return double(ns.count()) / 1e6;
}

constexpr double kQualityReferenceSize = 0.25;  // radians
constexpr double kQualityScale = 5.0;

double mean(const std::vector<std::pair<std::size_t, double>>& samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [index, value] : samples) total += value;
  return total / double(samples.size());
}

// 6 significant digits, plain formatting.
std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

void write_series(const std::string& path, const std::string& header,
                  const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << header << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

}  // namespace

QualityScore landmark_quality(const WorldModel& world,
                              const std::string& landmark_id,
                              const std::string& robot_a,
                              const std::string& robot_b) {
  auto size_from = [&](const std::string& robot) -> double {
    for (const auto& obs : visible_landmarks(world, robot)) {
      if (obs.landmark_id == landmark_id) return obs.apparent_size;
    }
    throw NotCommonError("landmark " + landmark_id + " is not visible to " +
                         robot);
  };
  const double size_a = size_from(robot_a);
  const double size_b = size_from(robot_b);
  const double smaller = std::min(size_a, size_b);
  return {kQualityScale * std::min(1.0, smaller / kQualityReferenceSize)};
}

UpdateMeasurement measure_update(Chain& chain,
                                 const std::vector<Transaction>& new_transactions,
                                 std::int64_t timestamp) {
  const auto start = Clock::now();
  std::vector<Transaction> rebuilt;
  rebuilt.reserve(new_transactions.size());
  for (const auto& tx : new_transactions) {
    rebuilt.push_back(make_transaction(tx.robot_id, tx.timestamp, tx.panorama));
  }
  Block block = assemble_block(chain, rebuilt, timestamp);
  append_block(chain, block);
  const double elapsed = elapsed_ms_since(start);
  return {std::move(block), elapsed};
}

RetrievalMeasurement measure_retrieval(const Chain& chain) {
  const auto start = Clock::now();
  RetrievalMeasurement result;
  result.states = latest_states(chain);
  const VisibilityGraph graph = build_graph(result.states);
  if (result.states.size() >= 2) {
    auto first = result.states.begin();
    auto second = std::next(first);
    const auto common =
        common_landmarks(first->second.panorama, second->second.panorama);
    (void)common;
  }
  (void)graph;
  result.elapsed_ms = elapsed_ms_since(start);
  return result;
}

void emit_table(const std::vector<MetricsRecord>& records,
                const std::string& path) {
  const std::filesystem::path table_path(path);
  const std::filesystem::path dir = table_path.parent_path();

  std::ofstream out(table_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "positions,avg_update_ms,avg_retrieval_ms,avg_landmark_quality,"
         "ledger_msgs,p2p_msgs\n";
  for (const auto& record : records) {
    out << record.positions << ',' << format_value(record.avg_update_ms) << ','
        << format_value(record.avg_retrieval_ms) << ','
        << format_value(record.avg_landmark_quality) << ','
        << record.message_stats.messages_sent << ','
        << record.p2p_message_stats.messages_sent << '\n';
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path);

  for (const auto& record : records) {
    const std::string suffix = std::to_string(record.positions) + ".csv";

    std::vector<std::string> update_rows;
    update_rows.reserve(record.samples_update.size());
    for (std::size_t i = 0; i < record.samples_update.size(); ++i) {
      const auto& [index, ms] = record.samples_update[i];
      const std::string robot = i < record.update_sample_robots.size()
                                    ? record.update_sample_robots[i]
                                    : std::string();
      update_rows.push_back(std::to_string(index) + ',' + robot + ',' +
                            format_value(ms));
    }
    write_series((dir / ("update_samples_" + suffix)).string(),
                 "index,robot,ms", update_rows);

    std::vector<std::string> retrieval_rows;
    retrieval_rows.reserve(record.samples_retrieval.size());
    for (const auto& [index, ms] : record.samples_retrieval) {
      retrieval_rows.push_back(std::to_string(index) + ',' + format_value(ms));
    }
    write_series((dir / ("retrieval_samples_" + suffix)).string(), "index,ms",
                 retrieval_rows);

    std::vector<std::string> quality_rows;
    quality_rows.reserve(record.samples_quality.size());
    for (const auto& [index, score] : record.samples_quality) {
      quality_rows.push_back(std::to_string(index) + ',' + format_value(score));
    }
    write_series((dir / ("quality_samples_" + suffix)).string(), "index,score",
                 quality_rows);
  }
}

namespace {

// Open landmark field with the team re-placed at random per position round;
// robot pair spacing is drawn from [1, 20] m.
WorldModel make_bench_world(SplitMix64& rng, std::size_t robot_count) {
  WorldModel world;
  world.sensor_range = 40.0;
  world.approach_distance = 3.0;
  world.speed = 0.5;
  for (int i = 0; i < 30; ++i) {
    Landmark landmark;
    char id[8];
    std::snprintf(id, sizeof(id), "L%02d", i);
    landmark.id = id;
    landmark.center = {rng.next_in(0.0, 60.0), rng.next_in(0.0, 60.0)};
    landmark.radius = rng.next_in(0.6, 1.6);
    landmark.descriptor = descriptor_for(landmark.id);
    world.landmarks.emplace(landmark.id, std::move(landmark));
  }
  for (std::size_t i = 0; i < robot_count; ++i) {
    world.robots.emplace("R" + std::to_string(i + 1), Pose{});
  }
  return world;
}

void place_team(WorldModel& world, SplitMix64& rng) {
  const Vec2 anchor{rng.next_in(10.0, 50.0), rng.next_in(10.0, 50.0)};
  bool first = true;
  for (auto& [id, pose] : world.robots) {
    if (first) {
      pose.position = anchor;
      first = false;
      continue;
    }
    const double spacing = rng.next_in(1.0, 20.0);
    const double direction = rng.next_in(0.0, 2.0 * std::numbers::pi);
    pose.position = {anchor.x + spacing * std::cos(direction),
                     anchor.y + spacing * std::sin(direction)};
  }
}

}  // namespace

BenchOutput run_benchmark(const BenchOptions& options) {
  if (options.robots < 2) {
    throw std::invalid_argument("benchmark needs at least 2 robots");
  }
  std::filesystem::create_directories(options.out_dir);

  BenchOutput output;
  for (const std::size_t positions : options.positions) {
    SplitMix64 rng(options.seed * 1000003ULL + positions);
    WorldModel world = make_bench_world(rng, options.robots);

    std::set<std::string> team;
    for (const auto& [id, pose] : world.robots) team.insert(id);
    const std::size_t team_size = team.size();

    Chain chain(team, 0);

    // Bootstrap block so every later append carries a full team snapshot;
    // not part of the measured series.
    {
      place_team(world, rng);
      std::vector<Transaction> initial;
      for (const auto& id : team) {
        initial.push_back(make_transaction(id, 50, capture_panorama(world, id, 50)));
      }
      append_block(chain, assemble_block(chain, initial, 50));
    }

    // Warm-up: unmeasured passes over the update path.
    for (std::size_t i = 0; i < options.warmup_iterations; ++i) {
      for (const auto& id : team) {
        const auto panorama = capture_panorama(world, id, 60);
        (void)compute_hash(canonical_encode_transaction(id, 60, panorama));
      }
    }

    MetricsRecord record;
    record.positions = positions;
    std::size_t update_index = 0;

    for (std::size_t p = 0; p < positions; ++p) {
      place_team(world, rng);
      const std::int64_t now = std::int64_t(p + 1) * 100;

      for (const auto& id : team) {
        Transaction tx = make_transaction(id, now, capture_panorama(world, id, now));
        const auto measurement = measure_update(chain, {std::move(tx)}, now);
        record.samples_update.emplace_back(update_index++, measurement.elapsed_ms);
        record.update_sample_robots.push_back(id);
      }

      // Quality of the best common landmark for the first robot pair.
      auto first = team.begin();
      auto second = std::next(first);
      const auto commons = common_landmarks(capture_panorama(world, *first, now),
                                            capture_panorama(world, *second, now));
      double best = -1.0;
      for (const auto& landmark : commons) {
        best = std::max(best,
                        landmark_quality(world, landmark, *first, *second).value);
      }
      if (best >= 0.0) {
        record.samples_quality.emplace_back(p, best);
      }
    }

    for (std::size_t i = 0; i < options.warmup_iterations; ++i) {
      (void)measure_retrieval(chain);
    }
    for (std::size_t p = 0; p < positions; ++p) {
      const auto measurement = measure_retrieval(chain);
      record.samples_retrieval.emplace_back(p, measurement.elapsed_ms);
    }

    record.avg_update_ms = mean(record.samples_update);
    record.avg_retrieval_ms = mean(record.samples_retrieval);
    record.avg_landmark_quality = mean(record.samples_quality);
    record.message_stats = {MessageMode::Ledger,
                            std::uint64_t(team_size * positions),
                            std::uint64_t(positions)};
    record.p2p_message_stats = {
        MessageMode::PointToPoint,
        std::uint64_t(team_size * (team_size - 1) * positions),
        std::uint64_t(positions)};

    const std::string ledger_path =
        (std::filesystem::path(options.out_dir) /
         ("ledger_" + std::to_string(positions) + ".jsonl"))
            .string();
    dump_chain_file(chain, ledger_path);
    output.ledger_paths.push_back(ledger_path);
    output.records.push_back(std::move(record));
  }

  output.table_path =
      (std::filesystem::path(options.out_dir) / "table.csv").string();
  emit_table(output.records, output.table_path);
  return output;
}

}  // namespace homenav
