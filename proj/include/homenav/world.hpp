#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "homenav/geometry.hpp"
#include "homenav/ledger.hpp"
#include "homenav/panorama.hpp"
#include "homenav/planner.hpp"

namespace homenav {

// Simulator ground truth only. Poses are never written into transactions;
// robots coordinate purely through published panoramas.
struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians in [0, 2*pi)
};

struct Landmark {
  std::string id;
  Vec2 center;
  double radius = 1.0;
  std::vector<double> descriptor;
};

struct WorldModel {
  std::map<std::string, Landmark> landmarks;
  std::vector<Segment> walls;
  std::map<std::string, Pose> robots;
  double sensor_range = 40.0;
  double approach_distance = 3.0;
  double speed = 0.5;  // meters per tick
};

enum class MessageMode { Ledger, PointToPoint };

const char* to_string(MessageMode mode);

struct MessageStats {
  MessageMode mode = MessageMode::Ledger;
  std::uint64_t messages_sent = 0;
  std::uint64_t rounds = 0;
};

struct SimConfig {
  std::uint64_t seed = 0;
  UpdatePolicy policy;
  std::int64_t tick_ms = 100;
  MessageMode mode = MessageMode::Ledger;
  std::map<std::string, std::vector<Vec2>> scripts;  // per-robot waypoint list
};

struct Scenario {
  WorldModel world;
  SimConfig config;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Checks WorldModel invariants: positive speed and ranges, landmark radii
// below sensor range, approach distance above every landmark radius.
void validate_world(const WorldModel& world);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

// Deterministic appearance signature for a landmark id (8 values in [0,1]).
std::vector<double> descriptor_for(const std::string& landmark_id);

// A landmark is visible iff it is within sensor range and the sight segment
// from the robot to its center crosses no wall. Sorted by bearing.
std::vector<LandmarkObservation> visible_landmarks(const WorldModel& world,
                                                   const std::string& robot_id);

PanoramicView capture_panorama(const WorldModel& world,
                               const std::string& robot_id, std::int64_t now);

struct HomingResult {
  enum class Kind { Moved, Arrived, NotVisible };
  Kind kind = Kind::NotVisible;
  Pose pose;  // pose after the step (meaningful for Moved)
};

// One tick of bearing pursuit toward a landmark: no-op when the landmark is
// hidden or the robot is already within approach distance, otherwise the
// robot advances min(speed, distance - approach_distance) along the bearing.
HomingResult homing_step(WorldModel& world, const std::string& robot_id,
                         const std::string& landmark_id);

enum class ExecOutcome { Success, NextWaypointNotVisible, TickBudgetExhausted };

const char* to_string(ExecOutcome outcome);

struct PublishRecord {
  std::int64_t tick = 0;
  Hash tx_id;
  UpdateDecision reasons;
};

struct ExecutionTrace {
  std::string robot_id;
  ExecOutcome outcome = ExecOutcome::Success;
  std::string failed_waypoint;  // set for NextWaypointNotVisible
  std::vector<Pose> poses;      // poses[0] is the starting pose
  std::vector<std::pair<std::int64_t, std::string>> arrivals;  // (tick, waypoint)
  std::vector<PublishRecord> publications;
  std::int64_t ticks = 0;  // movement ticks consumed
};

// Homes along the plan's waypoints, re-scanning at each arrival before
// heading for the next one. Publishes transactions en route whenever the
// update policy fires. A hidden next waypoint aborts the run, which is how
// a world that violates the "landmarks are spatially grouped" assumption
// shows up.
ExecutionTrace execute_plan(WorldModel& world, Chain& chain,
                            const UpdatePolicy& policy,
                            const std::string& robot_id,
                            const NavigationPlan& plan, std::int64_t max_ticks,
                            std::int64_t start_ms, std::int64_t tick_ms = 100);

struct ScenarioResult {
  Chain chain;
  MessageStats stats;
  std::vector<ExecutionTrace> traces;  // one per robot, in robot_id order
  WorldModel world;                    // world state after the last tick
};

// Drives scripted robots tick by tick, publishing per the update policy and
// appending at most one block per tick. Fully deterministic for a given
// scenario.
ScenarioResult run_scenario(WorldModel world, const SimConfig& config);

}  // namespace homenav
