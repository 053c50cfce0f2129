#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homenav/ledger.hpp"
#include "homenav/world.hpp"

namespace homenav {

// Substitute common-landmark quality score in [0, 5]: saturating in the
// smaller of the two apparent sizes, pinned against a 0.25 rad reference.
struct QualityScore {
  double value = 0.0;
};

class NotCommonError : public std::runtime_error {
 public:
  explicit NotCommonError(const std::string& what) : std::runtime_error(what) {}
};

// Requires the landmark to be visible to both robots in the world.
QualityScore landmark_quality(const WorldModel& world,
                              const std::string& landmark_id,
                              const std::string& robot_a,
                              const std::string& robot_b);

// One benchmark workload's results. Averages are the arithmetic means of the
// sample series below them.
struct MetricsRecord {
  std::size_t positions = 0;
  double avg_update_ms = 0.0;
  double avg_retrieval_ms = 0.0;
  double avg_landmark_quality = 0.0;
  std::vector<std::pair<std::size_t, double>> samples_update;     // (index, ms)
  std::vector<std::pair<std::size_t, double>> samples_retrieval;  // (index, ms)
  std::vector<std::pair<std::size_t, double>> samples_quality;    // (index, score)
  std::vector<std::string> update_sample_robots;  // robot per update sample
  MessageStats message_stats;      // ledger-broadcast accounting
  MessageStats p2p_message_stats;  // point-to-point accounting of the same run
};

struct UpdateMeasurement {
  Block block;
  double elapsed_ms = 0.0;
};

// Re-encodes and re-hashes the given transaction contents, assembles the next
// block, verifies the link, and appends — the full update span, timed with a
// monotonic clock.
UpdateMeasurement measure_update(Chain& chain,
                                 const std::vector<Transaction>& new_transactions,
                                 std::int64_t timestamp);

struct RetrievalMeasurement {
  std::map<std::string, Transaction> states;
  double elapsed_ms = 0.0;
};

// Times a tip read: latest_states, one graph build, and one common-landmark
// query over the first two robots.
RetrievalMeasurement measure_retrieval(const Chain& chain);

// Writes the summary CSV to `path` and per-sample series CSVs
// (update_samples_<P>.csv, retrieval_samples_<P>.csv, quality_samples_<P>.csv)
// into the same directory.
void emit_table(const std::vector<MetricsRecord>& records,
                const std::string& path);

struct BenchOptions {
  std::vector<std::size_t> positions{40, 200, 500};
  std::size_t robots = 2;
  std::uint64_t seed = 42;
  std::string out_dir;
  std::size_t warmup_iterations = 10;
};

struct BenchOutput {
  std::vector<MetricsRecord> records;
  std::vector<std::string> ledger_paths;
  std::string table_path;
};

// Random-placement workload: per position, the robot team is re-placed with
// pair spacing drawn from [1, 20] m inside an open landmark field, every
// robot publishes, and each publication is timed as its own block append.
BenchOutput run_benchmark(const BenchOptions& options);

}  // namespace homenav
