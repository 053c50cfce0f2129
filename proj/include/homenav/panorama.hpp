#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "homenav/encoding.hpp"
#include "homenav/geometry.hpp"

namespace homenav {

// One abstract landmark sighting inside a 360-degree scan.
struct LandmarkObservation {
  std::string landmark_id;
  double bearing = 0.0;        // radians in [0, 2*pi), ccw from world +x
  double apparent_size = 0.0;  // angular diameter, radians in (0, pi)
  std::vector<double> descriptor;  // appearance signature, values in [0,1]
};

// A robot's full 360-degree observation set at one position. Observations are
// sorted ascending by bearing and landmark ids are unique within one view.
struct PanoramicView {
  std::string robot_id;
  std::int64_t captured_at = 0;  // ms since scenario start
  std::vector<LandmarkObservation> observations;
};

// Normalizes raw sightings into a valid view: duplicate landmark ids collapse
// to the one with the largest apparent size (the nearest sighting), then the
// result is sorted by bearing.
PanoramicView make_panorama(std::string robot_id, std::int64_t captured_at,
                            std::vector<LandmarkObservation> observations);

// Thresholds that decide when a robot must publish a new transaction.
struct UpdatePolicy {
  double distance_threshold = 2.0;        // meters
  double difference_threshold = 0.25;     // in (0,1]
  std::int64_t time_threshold = 10000;    // ms
};

// What a robot remembers about its last published state.
struct PriorState {
  Vec2 position;
  PanoramicView panorama;
  std::int64_t published_at = 0;
};

struct UpdateDecision {
  bool distance = false;
  bool difference = false;
  bool time = false;

  bool should_publish() const { return distance || difference || time; }
};

std::set<std::string> landmark_ids(const PanoramicView& view);

// Jaccard distance between the landmark-id sets: 1 - |A∩B| / |A∪B|.
// Two empty views compare equal (0).
double panorama_difference(const PanoramicView& a, const PanoramicView& b);

// Evaluates the three publish triggers, each with strict inequality.
// Requires now >= prior.published_at.
UpdateDecision should_update(const UpdatePolicy& policy, const PriorState& prior,
                             const Vec2& current_position,
                             const PanoramicView& current_panorama,
                             std::int64_t now);

bool contains_landmark(const PanoramicView& view, const std::string& landmark_id);

// Intersection of the two views' landmark-id sets (sorted by id).
std::set<std::string> common_landmarks(const PanoramicView& a,
                                       const PanoramicView& b);

// Canonical byte encoding of a view, in declared field order.
void encode_panorama(ByteBuffer& out, const PanoramicView& view);

}  // namespace homenav
