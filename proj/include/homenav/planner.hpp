#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "homenav/ledger.hpp"

namespace homenav {

// Bipartite robot-landmark graph derived purely from ledger tip state; the
// simulator's ground truth never enters here.
struct VisibilityGraph {
  std::set<std::string> robots;
  std::set<std::string> landmarks;
  std::map<std::string, std::set<std::string>> robot_sees;       // robot -> landmarks
  std::map<std::string, std::set<std::string>> landmark_seen_by;  // landmark -> robots

  bool has_edge(const std::string& robot, const std::string& landmark) const;
  std::size_t edge_count() const;
};

// The ordered landmark chain a robot homes along. waypoints ends with the
// goal; via_robots[i] is the robot whose view vouches for waypoints[i], so
// the two lists always have equal length. A chain across k+1 robots uses k
// shared landmarks plus the goal.
struct NavigationPlan {
  std::string start_robot;
  std::string goal;
  std::vector<std::string> waypoints;
  std::vector<std::string> via_robots;

  bool operator==(const NavigationPlan&) const = default;
};

class PlannerError : public std::runtime_error {
 public:
  enum class Code { UnknownRobot, TooLarge };

  PlannerError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

VisibilityGraph build_graph(const std::map<std::string, Transaction>& latest);

// Robots with an edge to the landmark, ascending by robot_id.
std::vector<std::string> robots_seeing(const VisibilityGraph& graph,
                                       const std::string& landmark_id);

// Minimum-hop chain of robots from start_robot to any robot that sees the
// goal; ties break to the lexicographically smallest robot sequence, and the
// shared landmark per hop is the lexicographically smallest one. Returns
// nullopt when no chain exists; throws PlannerError(UnknownRobot) when
// start_robot is not in the graph.
std::optional<NavigationPlan> plan_route(const VisibilityGraph& graph,
                                         const std::string& start_robot,
                                         const std::string& goal);

// Reference search for tests: exhaustively enumerates all simple robot
// sequences and applies the same tie-break. Only valid for teams of at most
// 8 robots (throws PlannerError(TooLarge) beyond that). Shares nothing with
// plan_route beyond the graph type.
std::optional<NavigationPlan> oracle_plan(const VisibilityGraph& graph,
                                          const std::string& start_robot,
                                          const std::string& goal);

// True iff the plan satisfies every NavigationPlan invariant against the
// graph it was derived from.
bool plan_is_valid(const VisibilityGraph& graph, const NavigationPlan& plan);

}  // namespace homenav
