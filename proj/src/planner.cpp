#include "homenav/planner.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace homenav {

bool VisibilityGraph::has_edge(const std::string& robot,
                               const std::string& landmark) const {
  auto it = robot_sees.find(robot);
  return it != robot_sees.end() && it->second.count(landmark) > 0;
}

std::size_t VisibilityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [robot, seen] : robot_sees) n += seen.size();
  return n;
}

VisibilityGraph build_graph(const std::map<std::string, Transaction>& latest) {
  VisibilityGraph graph;
  for (const auto& [robot, tx] : latest) {
    graph.robots.insert(robot);
    auto& seen = graph.robot_sees[robot];
    for (const auto& obs : tx.panorama.observations) {
      graph.landmarks.insert(obs.landmark_id);
      seen.insert(obs.landmark_id);
      graph.landmark_seen_by[obs.landmark_id].insert(robot);
    }
  }
  return graph;
}

std::vector<std::string> robots_seeing(const VisibilityGraph& graph,
                                       const std::string& landmark_id) {
  auto it = graph.landmark_seen_by.find(landmark_id);
  if (it == graph.landmark_seen_by.end()) return {};
  return {it->second.begin(), it->second.end()};
}

namespace {

// Smallest landmark id shared by the two robots' views; empty when disjoint.
std::string smallest_shared_landmark(const VisibilityGraph& graph,
                                     const std::string& a,
                                     const std::string& b) {
  auto ia = graph.robot_sees.find(a);
  auto ib = graph.robot_sees.find(b);
  if (ia == graph.robot_sees.end() || ib == graph.robot_sees.end()) return {};
  for (const auto& landmark : ia->second) {
    if (ib->second.count(landmark)) return landmark;
  }
  return {};
}

NavigationPlan plan_from_robot_sequence(const VisibilityGraph& graph,
                                        const std::vector<std::string>& robots,
                                        const std::string& goal) {
  NavigationPlan plan;
  plan.start_robot = robots.front();
  plan.goal = goal;
  plan.via_robots = robots;
  for (std::size_t i = 0; i + 1 < robots.size(); ++i) {
    plan.waypoints.push_back(
        smallest_shared_landmark(graph, robots[i], robots[i + 1]));
  }
  plan.waypoints.push_back(goal);
  return plan;
}

}  // namespace

std::optional<NavigationPlan> plan_route(const VisibilityGraph& graph,
                                         const std::string& start_robot,
                                         const std::string& goal) {
  if (!graph.robots.count(start_robot)) {
    throw PlannerError(PlannerError::Code::UnknownRobot,
                       "robot " + start_robot + " is not in the graph");
  }

  // Hops from each robot to the nearest goal-seeing robot, breadth-first
  // over the "shares at least one landmark" adjacency.
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  std::map<std::string, std::size_t> hops_to_goal;
  for (const auto& robot : graph.robots) hops_to_goal[robot] = kUnreached;

  std::deque<std::string> frontier;
  auto seen_by = graph.landmark_seen_by.find(goal);
  if (seen_by != graph.landmark_seen_by.end()) {
    for (const auto& robot : seen_by->second) {
      hops_to_goal[robot] = 0;
      frontier.push_back(robot);
    }
  }
  while (!frontier.empty()) {
    const std::string current = frontier.front();
    frontier.pop_front();
    const std::size_t next_hops = hops_to_goal[current] + 1;
    for (const auto& landmark : graph.robot_sees.at(current)) {
      for (const auto& neighbor : graph.landmark_seen_by.at(landmark)) {
        if (hops_to_goal[neighbor] == kUnreached) {
          hops_to_goal[neighbor] = next_hops;
          frontier.push_back(neighbor);
        }
      }
    }
  }

  if (hops_to_goal[start_robot] == kUnreached) return std::nullopt;

  // Walk downhill in hop count, always picking the lexicographically
  // smallest next robot. Every minimal chain has the same length, so the
  // greedy prefix choice yields the smallest robot sequence overall.
  std::vector<std::string> sequence{start_robot};
  std::string current = start_robot;
  while (hops_to_goal[current] > 0) {
    const std::size_t want = hops_to_goal[current] - 1;
    std::string next;
    for (const auto& landmark : graph.robot_sees.at(current)) {
      for (const auto& neighbor : graph.landmark_seen_by.at(landmark)) {
        if (neighbor == current || hops_to_goal[neighbor] != want) continue;
        if (next.empty() || neighbor < next) next = neighbor;
      }
    }
    sequence.push_back(next);
    current = next;
  }
  return plan_from_robot_sequence(graph, sequence, goal);
}

bool plan_is_valid(const VisibilityGraph& graph, const NavigationPlan& plan) {
  if (plan.waypoints.empty()) return false;
  if (plan.waypoints.size() != plan.via_robots.size()) return false;
  if (plan.via_robots.front() != plan.start_robot) return false;
  if (plan.waypoints.back() != plan.goal) return false;
  if (!graph.has_edge(plan.via_robots.front(), plan.waypoints.front())) {
    return false;
  }
  // Each shared waypoint must be visible to the robots on both sides of the
  // hop; the goal must be visible to the final robot.
  for (std::size_t i = 0; i + 1 < plan.waypoints.size(); ++i) {
    if (!graph.has_edge(plan.via_robots[i], plan.waypoints[i])) return false;
    if (!graph.has_edge(plan.via_robots[i + 1], plan.waypoints[i])) return false;
  }
  return graph.has_edge(plan.via_robots.back(), plan.goal);
}

}  // namespace homenav
