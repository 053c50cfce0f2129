#include "homenav/planner.hpp"

namespace homenav {

namespace {

bool shares_landmark(const VisibilityGraph& graph, const std::string& a,
                     const std::string& b) {
  auto ia = graph.robot_sees.find(a);
  auto ib = graph.robot_sees.find(b);
  if (ia == graph.robot_sees.end() || ib == graph.robot_sees.end()) return false;
  for (const auto& landmark : ia->second) {
    if (ib->second.count(landmark)) return true;
  }
  return false;
}

bool sees(const VisibilityGraph& graph, const std::string& robot,
          const std::string& landmark) {
  auto it = graph.robot_sees.find(robot);
  return it != graph.robot_sees.end() && it->second.count(landmark) > 0;
}

struct Enumeration {
  const VisibilityGraph& graph;
  const std::string& goal;
  std::vector<std::string> current;
  std::set<std::string> used;
  std::optional<std::vector<std::string>> best;

  void consider() {
    if (!sees(graph, current.back(), goal)) return;
    if (!best || current.size() < best->size() ||
        (current.size() == best->size() && current < *best)) {
      best = current;
    }
  }

  void extend() {
    consider();
    // Longer sequences can never beat an already-found minimum.
    if (best && current.size() + 1 > best->size()) return;
    for (const auto& next : graph.robots) {
      if (used.count(next)) continue;
      if (!shares_landmark(graph, current.back(), next)) continue;
      current.push_back(next);
      used.insert(next);
      extend();
      used.erase(next);
      current.pop_back();
    }
  }
};

std::string smallest_shared(const VisibilityGraph& graph, const std::string& a,
                            const std::string& b) {
  const auto& sa = graph.robot_sees.at(a);
  const auto& sb = graph.robot_sees.at(b);
  for (const auto& landmark : sa) {
    if (sb.count(landmark)) return landmark;
  }
  return {};
}

}  // namespace

std::optional<NavigationPlan> oracle_plan(const VisibilityGraph& graph,
                                          const std::string& start_robot,
                                          const std::string& goal) {
  if (graph.robots.size() > 8) {
    throw PlannerError(PlannerError::Code::TooLarge,
                       "oracle only enumerates teams of at most 8 robots");
  }
  if (!graph.robots.count(start_robot)) {
    throw PlannerError(PlannerError::Code::UnknownRobot,
                       "robot " + start_robot + " is not in the graph");
  }

  Enumeration enumeration{graph, goal, {start_robot}, {start_robot}, {}};
  enumeration.extend();
  if (!enumeration.best) return std::nullopt;

  const auto& robots = *enumeration.best;
  NavigationPlan plan;
  plan.start_robot = start_robot;
  plan.goal = goal;
  plan.via_robots = robots;
  for (std::size_t i = 0; i + 1 < robots.size(); ++i) {
    plan.waypoints.push_back(smallest_shared(graph, robots[i], robots[i + 1]));
  }
  plan.waypoints.push_back(goal);
  return plan;
}

}  // namespace homenav
