#include "homenav/panorama.hpp"

#include <algorithm>
#include <map>

namespace homenav {

PanoramicView make_panorama(std::string robot_id, std::int64_t captured_at,
                            std::vector<LandmarkObservation> observations) {
  std::map<std::string, LandmarkObservation> by_id;
  for (auto& obs : observations) {
    auto it = by_id.find(obs.landmark_id);
    if (it == by_id.end()) {
      by_id.emplace(obs.landmark_id, std::move(obs));
    } else if (obs.apparent_size > it->second.apparent_size) {
      it->second = std::move(obs);
    }
  }

  PanoramicView view;
  view.robot_id = std::move(robot_id);
  view.captured_at = captured_at;
  view.observations.reserve(by_id.size());
  for (auto& [id, obs] : by_id) {
    view.observations.push_back(std::move(obs));
  }
  std::sort(view.observations.begin(), view.observations.end(),
            [](const LandmarkObservation& a, const LandmarkObservation& b) {
              if (a.bearing != b.bearing) return a.bearing < b.bearing;
              return a.landmark_id < b.landmark_id;
            });
  return view;
}

std::set<std::string> landmark_ids(const PanoramicView& view) {
  std::set<std::string> ids;
  for (const auto& obs : view.observations) {
    ids.insert(obs.landmark_id);
  }
  return ids;
}

double panorama_difference(const PanoramicView& a, const PanoramicView& b) {
  const auto ids_a = landmark_ids(a);
  const auto ids_b = landmark_ids(b);
  if (ids_a.empty() && ids_b.empty()) return 0.0;

  std::size_t common = 0;
  for (const auto& id : ids_a) {
    if (ids_b.count(id)) ++common;
  }
  const std::size_t total = ids_a.size() + ids_b.size() - common;
  return 1.0 - double(common) / double(total);
}

UpdateDecision should_update(const UpdatePolicy& policy, const PriorState& prior,
                             const Vec2& current_position,
                             const PanoramicView& current_panorama,
                             std::int64_t now) {
  UpdateDecision decision;
  decision.distance =
      distance(prior.position, current_position) > policy.distance_threshold;
  decision.difference =
      panorama_difference(prior.panorama, current_panorama) >
      policy.difference_threshold;
  decision.time = (now - prior.published_at) > policy.time_threshold;
  return decision;
}

bool contains_landmark(const PanoramicView& view, const std::string& landmark_id) {
  for (const auto& obs : view.observations) {
    if (obs.landmark_id == landmark_id) return true;
  }
  return false;
}

std::set<std::string> common_landmarks(const PanoramicView& a,
                                       const PanoramicView& b) {
  const auto ids_b = landmark_ids(b);
  std::set<std::string> out;
  for (const auto& obs : a.observations) {
    if (ids_b.count(obs.landmark_id)) out.insert(obs.landmark_id);
  }
  return out;
}

void encode_panorama(ByteBuffer& out, const PanoramicView& view) {
  put_string(out, view.robot_id);
  put_i64(out, view.captured_at);
  put_u32(out, std::uint32_t(view.observations.size()));
  for (const auto& obs : view.observations) {
    put_string(out, obs.landmark_id);
    put_f64(out, obs.bearing);
    put_f64(out, obs.apparent_size);
    put_u32(out, std::uint32_t(obs.descriptor.size()));
    for (double v : obs.descriptor) {
      put_f64(out, v);
    }
  }
}

}  // namespace homenav
