#include "homenav/serialize.hpp"

#include <fstream>
#include <sstream>

namespace homenav {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const char* what) {
  if (!j.is_object() || j.size() != keys.size()) {
    throw std::runtime_error(std::string(what) + ": unexpected shape");
  }
  for (const char* key : keys) {
    if (!j.contains(key)) {
      throw std::runtime_error(std::string(what) + ": missing field " + key);
    }
  }
}

std::int64_t require_int(const json& j, const char* what) {
  if (!j.is_number_integer()) {
    throw std::runtime_error(std::string(what) + " must be an integer");
  }
  return j.get<std::int64_t>();
}

double require_real(const json& j, const char* what) {
  if (!j.is_number()) {
    throw std::runtime_error(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

std::string require_string(const json& j, const char* what) {
  if (!j.is_string()) {
    throw std::runtime_error(std::string(what) + " must be a string");
  }
  return j.get<std::string>();
}

}  // namespace

json panorama_to_json(const PanoramicView& view) {
  json observations = json::array();
  for (const auto& obs : view.observations) {
    observations.push_back({{"landmark_id", obs.landmark_id},
                            {"bearing", obs.bearing},
                            {"apparent_size", obs.apparent_size},
                            {"descriptor", obs.descriptor}});
  }
  return {{"robot_id", view.robot_id},
          {"captured_at", view.captured_at},
          {"observations", std::move(observations)}};
}

PanoramicView panorama_from_json(const json& j) {
  require_keys(j, {"robot_id", "captured_at", "observations"}, "panorama");
  PanoramicView view;
  view.robot_id = require_string(j.at("robot_id"), "panorama.robot_id");
  view.captured_at = require_int(j.at("captured_at"), "panorama.captured_at");
  const json& observations = j.at("observations");
  if (!observations.is_array()) {
    throw std::runtime_error("panorama.observations must be an array");
  }
  for (const json& o : observations) {
    require_keys(o, {"landmark_id", "bearing", "apparent_size", "descriptor"},
                 "observation");
    LandmarkObservation obs;
    obs.landmark_id = require_string(o.at("landmark_id"), "landmark_id");
    obs.bearing = require_real(o.at("bearing"), "bearing");
    obs.apparent_size = require_real(o.at("apparent_size"), "apparent_size");
    const json& descriptor = o.at("descriptor");
    if (!descriptor.is_array()) {
      throw std::runtime_error("descriptor must be an array");
    }
    for (const json& v : descriptor) {
      obs.descriptor.push_back(require_real(v, "descriptor value"));
    }
    view.observations.push_back(std::move(obs));
  }
  return view;
}

json transaction_to_json(const Transaction& tx) {
  return {{"tx_id", tx.tx_id.hex()},
          {"robot_id", tx.robot_id},
          {"timestamp", tx.timestamp},
          {"panorama", panorama_to_json(tx.panorama)}};
}

Transaction transaction_from_json(const json& j) {
  require_keys(j, {"tx_id", "robot_id", "timestamp", "panorama"}, "transaction");
  Transaction tx;
  tx.tx_id = Hash::from_hex(require_string(j.at("tx_id"), "tx_id"));
  tx.robot_id = require_string(j.at("robot_id"), "robot_id");
  tx.timestamp = require_int(j.at("timestamp"), "transaction.timestamp");
  tx.panorama = panorama_from_json(j.at("panorama"));
  return tx;
}

json block_to_json(const Block& block) {
  json transactions = json::array();
  for (const auto& tx : block.transactions) {
    transactions.push_back(transaction_to_json(tx));
  }
  return {{"index", block.index},
          {"timestamp", block.timestamp},
          {"prev_hash", block.prev_hash.hex()},
          {"block_hash", block.block_hash.hex()},
          {"transactions", std::move(transactions)}};
}

Block block_from_json(const json& j) {
  require_keys(j, {"index", "timestamp", "prev_hash", "block_hash", "transactions"},
               "block");
  Block block;
  const std::int64_t index = require_int(j.at("index"), "block.index");
  if (index < 0) throw std::runtime_error("block.index must be non-negative");
  block.index = std::uint64_t(index);
  block.timestamp = require_int(j.at("timestamp"), "block.timestamp");
  block.prev_hash = Hash::from_hex(require_string(j.at("prev_hash"), "prev_hash"));
  block.block_hash =
      Hash::from_hex(require_string(j.at("block_hash"), "block_hash"));
  const json& transactions = j.at("transactions");
  if (!transactions.is_array()) {
    throw std::runtime_error("block.transactions must be an array");
  }
  for (const json& t : transactions) {
    block.transactions.push_back(transaction_from_json(t));
  }
  return block;
}

void dump_chain(const Chain& chain, std::ostream& out) {
  for (const Block& block : chain.blocks()) {
    out << block_to_json(block).dump() << '\n';
  }
}

std::string dump_chain(const Chain& chain) {
  std::ostringstream out;
  dump_chain(chain, out);
  return out.str();
}

void dump_chain_file(const Chain& chain, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  dump_chain(chain, out);
  if (!out.good()) throw std::runtime_error("failed writing " + path);
}

Chain load_chain(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  std::size_t line_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      throw ChainParseError(line_index, "empty ledger line");
    }
    try {
      blocks.push_back(block_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw ChainParseError(line_index, e.what());
    }
    ++line_index;
  }
  return Chain::from_blocks(std::move(blocks));
}

Chain load_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_chain(in);
}

nlohmann::json plan_to_json(const NavigationPlan& plan) {
  return {{"start_robot", plan.start_robot},
          {"goal", plan.goal},
          {"waypoints", plan.waypoints},
          {"via_robots", plan.via_robots}};
}

}  // namespace homenav
