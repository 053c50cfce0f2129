#include "homenav/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace homenav {

using nlohmann::json;

const char* to_string(MessageMode mode) {
  return mode == MessageMode::Ledger ? "Ledger" : "PointToPoint";
}

const char* to_string(ExecOutcome outcome) {
  switch (outcome) {
    case ExecOutcome::Success: return "Success";
    case ExecOutcome::NextWaypointNotVisible: return "NextWaypointNotVisible";
    case ExecOutcome::TickBudgetExhausted: return "TickBudgetExhausted";
  }
  return "Unknown";
}

void validate_world(const WorldModel& world) {
  if (world.sensor_range <= 0.0) {
    throw ScenarioError("sensor_range must be positive");
  }
  if (world.approach_distance <= 0.0) {
    throw ScenarioError("approach_distance must be positive");
  }
  if (world.speed <= 0.0) {
    throw ScenarioError("speed must be positive");
  }
  for (const auto& [id, landmark] : world.landmarks) {
    if (landmark.radius <= 0.0) {
      throw ScenarioError("landmark " + id + " has non-positive radius");
    }
    if (landmark.radius >= world.sensor_range) {
      throw ScenarioError("landmark " + id + " radius exceeds sensor range");
    }
    if (landmark.radius >= world.approach_distance) {
      throw ScenarioError("approach_distance must exceed radius of landmark " +
                          id);
    }
  }
  for (const auto& [id, pose] : world.robots) {
    if (!std::isfinite(pose.position.x) || !std::isfinite(pose.position.y)) {
      throw ScenarioError("robot " + id + " has non-finite position");
    }
  }
}

std::vector<double> descriptor_for(const std::string& landmark_id) {
  const Hash digest = sha256(landmark_id);
  std::vector<double> descriptor(8);
  for (int i = 0; i < 8; ++i) {
    descriptor[i] = double(digest.bytes[i]) / 255.0;
  }
  return descriptor;
}

namespace {

Vec2 parse_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ScenarioError(std::string(what) + " must be a [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw ScenarioError(std::string(key) + " must be a number");
  }
  return j.at(key).get<double>();
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");

  Scenario scenario;
  WorldModel& world = scenario.world;
  SimConfig& config = scenario.config;

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) {
      throw ScenarioError("seed must be an integer");
    }
    config.seed = j.at("seed").get<std::uint64_t>();
  }
  world.sensor_range = number_or(j, "sensor_range", 40.0);
  world.approach_distance = number_or(j, "approach_distance", 3.0);
  world.speed = number_or(j, "speed", 0.5);

  if (j.contains("policy")) {
    const json& policy = j.at("policy");
    config.policy.distance_threshold =
        number_or(policy, "distance_threshold", config.policy.distance_threshold);
    config.policy.difference_threshold = number_or(
        policy, "difference_threshold", config.policy.difference_threshold);
    if (policy.contains("time_threshold")) {
      if (!policy.at("time_threshold").is_number_integer()) {
        throw ScenarioError("time_threshold must be integer milliseconds");
      }
      config.policy.time_threshold = policy.at("time_threshold").get<std::int64_t>();
    }
  }
  if (config.policy.distance_threshold <= 0.0 ||
      config.policy.difference_threshold <= 0.0 ||
      config.policy.difference_threshold > 1.0 ||
      config.policy.time_threshold <= 0) {
    throw ScenarioError("policy thresholds must be positive"
                        " (difference in (0,1])");
  }

  if (j.contains("landmarks")) {
    if (!j.at("landmarks").is_array()) {
      throw ScenarioError("landmarks must be an array");
    }
    for (const json& l : j.at("landmarks")) {
      if (!l.is_object() || !l.contains("id") || !l.at("id").is_string()) {
        throw ScenarioError("each landmark needs a string id");
      }
      Landmark landmark;
      landmark.id = l.at("id").get<std::string>();
      landmark.center = {number_or(l, "x", 0.0), number_or(l, "y", 0.0)};
      landmark.radius = number_or(l, "radius", 1.0);
      landmark.descriptor = descriptor_for(landmark.id);
      if (!world.landmarks.emplace(landmark.id, std::move(landmark)).second) {
        throw ScenarioError("duplicate landmark id " + l.at("id").get<std::string>());
      }
    }
  }

  if (j.contains("walls")) {
    if (!j.at("walls").is_array()) throw ScenarioError("walls must be an array");
    for (const json& w : j.at("walls")) {
      if (!w.is_array() || w.size() != 4 || !w[0].is_number() ||
          !w[1].is_number() || !w[2].is_number() || !w[3].is_number()) {
        throw ScenarioError("each wall must be [x1, y1, x2, y2]");
      }
      world.walls.push_back({{w[0].get<double>(), w[1].get<double>()},
                             {w[2].get<double>(), w[3].get<double>()}});
    }
  }

  if (j.contains("robots")) {
    if (!j.at("robots").is_array()) throw ScenarioError("robots must be an array");
    for (const json& r : j.at("robots")) {
      if (!r.is_object() || !r.contains("id") || !r.at("id").is_string()) {
        throw ScenarioError("each robot needs a string id");
      }
      const std::string id = r.at("id").get<std::string>();
      Pose pose;
      pose.position = {number_or(r, "x", 0.0), number_or(r, "y", 0.0)};
      if (!world.robots.emplace(id, pose).second) {
        throw ScenarioError("duplicate robot id " + id);
      }
      std::vector<Vec2> script;
      if (r.contains("script")) {
        if (!r.at("script").is_array()) {
          throw ScenarioError("script must be an array of [x, y] points");
        }
        for (const json& p : r.at("script")) {
          script.push_back(parse_point(p, "script point"));
        }
      }
      config.scripts.emplace(id, std::move(script));
    }
  }
  if (world.robots.empty()) throw ScenarioError("scenario defines no robots");

  validate_world(world);
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ScenarioError("invalid scenario JSON in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

std::vector<LandmarkObservation> visible_landmarks(const WorldModel& world,
                                                   const std::string& robot_id) {
  auto robot = world.robots.find(robot_id);
  if (robot == world.robots.end()) {
    throw ScenarioError("unknown robot " + robot_id);
  }
  const Vec2 origin = robot->second.position;

  std::vector<LandmarkObservation> observations;
  for (const auto& [id, landmark] : world.landmarks) {
    const double dist = distance(origin, landmark.center);
    if (dist > world.sensor_range) continue;

    const Segment sight{origin, landmark.center};
    bool occluded = false;
    for (const Segment& wall : world.walls) {
      if (segment_intersects(sight, wall)) {
        occluded = true;
        break;
      }
    }
    if (occluded) continue;

    LandmarkObservation obs;
    obs.landmark_id = id;
    obs.bearing = normalize_bearing(
        std::atan2(landmark.center.y - origin.y, landmark.center.x - origin.x));
    obs.apparent_size = 2.0 * std::atan(landmark.radius / dist);
    obs.descriptor = landmark.descriptor;
    observations.push_back(std::move(obs));
  }
  std::sort(observations.begin(), observations.end(),
            [](const LandmarkObservation& a, const LandmarkObservation& b) {
              if (a.bearing != b.bearing) return a.bearing < b.bearing;
              return a.landmark_id < b.landmark_id;
            });
  return observations;
}

PanoramicView capture_panorama(const WorldModel& world,
                               const std::string& robot_id, std::int64_t now) {
  return make_panorama(robot_id, now, visible_landmarks(world, robot_id));
}

HomingResult homing_step(WorldModel& world, const std::string& robot_id,
                         const std::string& landmark_id) {
  auto robot = world.robots.find(robot_id);
  if (robot == world.robots.end()) {
    throw ScenarioError("unknown robot " + robot_id);
  }

  const auto observations = visible_landmarks(world, robot_id);
  const LandmarkObservation* target = nullptr;
  for (const auto& obs : observations) {
    if (obs.landmark_id == landmark_id) {
      target = &obs;
      break;
    }
  }
  if (target == nullptr) {
    return {HomingResult::Kind::NotVisible, robot->second};
  }

  const Vec2 center = world.landmarks.at(landmark_id).center;
  const double dist = distance(robot->second.position, center);
  // Slack absorbs rounding in the final clamped step, which can otherwise
  // strand the robot a few ulps outside the ring.
  constexpr double kArrivalSlack = 1e-9;
  if (dist <= world.approach_distance + kArrivalSlack) {
    return {HomingResult::Kind::Arrived, robot->second};
  }

  const double step = std::min(world.speed, dist - world.approach_distance);
  Pose& pose = robot->second;
  pose.heading = target->bearing;
  pose.position.x += step * std::cos(target->bearing);
  pose.position.y += step * std::sin(target->bearing);
  return {HomingResult::Kind::Moved, pose};
}

namespace {

struct Publisher {
  // Per-robot local knowledge; positions stay out of the ledger.
  std::map<std::string, PriorState> prior;
  std::map<std::string, bool> has_published;

  explicit Publisher(const WorldModel& world, std::int64_t now) {
    for (const auto& [id, pose] : world.robots) {
      prior[id] = {pose.position, capture_panorama(world, id, now), now};
      has_published[id] = false;
    }
  }
};

}  // namespace

ExecutionTrace execute_plan(WorldModel& world, Chain& chain,
                            const UpdatePolicy& policy,
                            const std::string& robot_id,
                            const NavigationPlan& plan, std::int64_t max_ticks,
                            std::int64_t start_ms, std::int64_t tick_ms) {
  ExecutionTrace trace;
  trace.robot_id = robot_id;
  trace.poses.push_back(world.robots.at(robot_id));

  PriorState prior{world.robots.at(robot_id).position,
                   capture_panorama(world, robot_id, start_ms), start_ms};

  std::size_t waypoint_index = 0;
  std::int64_t now = start_ms;

  auto publish_if_due = [&]() {
    const Vec2 position = world.robots.at(robot_id).position;
    const PanoramicView panorama = capture_panorama(world, robot_id, now);
    const UpdateDecision decision =
        should_update(policy, prior, position, panorama, now);
    if (!decision.should_publish()) return;
    Transaction tx = make_transaction(robot_id, now, panorama);
    const Hash tx_id = tx.tx_id;
    Block block = assemble_block(chain, {std::move(tx)}, now);
    append_block(chain, std::move(block));
    prior = {position, panorama, now};
    trace.publications.push_back({trace.ticks, tx_id, decision});
  };

  while (waypoint_index < plan.waypoints.size()) {
    const std::string& waypoint = plan.waypoints[waypoint_index];
    const HomingResult result = homing_step(world, robot_id, waypoint);

    if (result.kind == HomingResult::Kind::NotVisible) {
      trace.outcome = ExecOutcome::NextWaypointNotVisible;
      trace.failed_waypoint = waypoint;
      return trace;
    }
    if (result.kind == HomingResult::Kind::Arrived) {
      trace.arrivals.emplace_back(trace.ticks, waypoint);
      publish_if_due();  // the robot looks around again at each waypoint
      ++waypoint_index;
      continue;
    }

    // Moved one tick along the bearing.
    ++trace.ticks;
    now += tick_ms;
    trace.poses.push_back(result.pose);
    publish_if_due();
    if (trace.ticks >= max_ticks) {
      trace.outcome = ExecOutcome::TickBudgetExhausted;
      return trace;
    }
  }
  trace.outcome = ExecOutcome::Success;
  return trace;
}

ScenarioResult run_scenario(WorldModel world, const SimConfig& config) {
  validate_world(world);
  for (const auto& [robot, script] : config.scripts) {
    if (!world.robots.count(robot)) {
      throw ScenarioError("script for unknown robot " + robot);
    }
  }
  if (config.tick_ms <= 0) throw ScenarioError("tick_ms must be positive");

  std::set<std::string> team;
  for (const auto& [id, pose] : world.robots) team.insert(id);

  Chain chain(team, 0);
  MessageStats stats{config.mode, 0, 0};
  Publisher publisher(world, 0);

  std::map<std::string, ExecutionTrace> traces;
  for (const auto& id : team) {
    traces[id].robot_id = id;
    traces[id].poses.push_back(world.robots.at(id));
  }

  std::size_t max_script = 0;
  for (const auto& [robot, script] : config.scripts) {
    max_script = std::max(max_script, script.size());
  }

  const std::size_t team_size = team.size();
  for (std::size_t tick = 1; tick <= max_script; ++tick) {
    const std::int64_t now = std::int64_t(tick) * config.tick_ms;

    for (const auto& id : team) {
      auto script = config.scripts.find(id);
      if (script == config.scripts.end() || script->second.size() < tick) {
        traces[id].poses.push_back(world.robots.at(id));
        continue;
      }
      const Vec2 target = script->second[tick - 1];
      Pose& pose = world.robots.at(id);
      const Vec2 delta = target - pose.position;
      if (delta.norm() > 0.0) {
        pose.heading = normalize_bearing(std::atan2(delta.y, delta.x));
      }
      pose.position = target;
      traces[id].poses.push_back(pose);
      traces[id].ticks = std::int64_t(tick);
    }

    std::vector<Transaction> fresh;
    std::vector<std::string> publishers;
    for (const auto& id : team) {
      const Vec2 position = world.robots.at(id).position;
      const PanoramicView panorama = capture_panorama(world, id, now);
      const UpdateDecision decision = should_update(
          config.policy, publisher.prior.at(id), position, panorama, now);
      if (!decision.should_publish()) continue;
      Transaction tx = make_transaction(id, now, panorama);
      traces[id].publications.push_back({std::int64_t(tick), tx.tx_id, decision});
      fresh.push_back(std::move(tx));
      publishers.push_back(id);
      publisher.prior[id] = {position, panorama, now};
      publisher.has_published[id] = true;
    }
    if (fresh.empty()) continue;

    // The very first block must cover the whole team, so robots that have
    // not yet published contribute their current capture.
    for (const auto& id : team) {
      if (publisher.has_published.at(id)) continue;
      const Vec2 position = world.robots.at(id).position;
      const PanoramicView panorama = capture_panorama(world, id, now);
      Transaction tx = make_transaction(id, now, panorama);
      traces[id].publications.push_back({std::int64_t(tick), tx.tx_id, {}});
      fresh.push_back(std::move(tx));
      publishers.push_back(id);
      publisher.prior[id] = {position, panorama, now};
      publisher.has_published[id] = true;
    }

    Block block = assemble_block(chain, fresh, now);
    append_block(chain, std::move(block));
    stats.rounds += 1;
    const std::uint64_t count = publishers.size();
    stats.messages_sent += config.mode == MessageMode::Ledger
                               ? count
                               : count * std::uint64_t(team_size - 1);
  }

  ScenarioResult result{std::move(chain), stats, {}, std::move(world)};
  result.traces.reserve(traces.size());
  for (auto& [id, trace] : traces) {
    result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace homenav
