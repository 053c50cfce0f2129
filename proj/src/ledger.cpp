#include "homenav/ledger.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace homenav {

namespace {

void encode_transaction_with_id(ByteBuffer& out, const Transaction& tx) {
  put_raw(out, tx.tx_id.bytes.data(), tx.tx_id.bytes.size());
  const ByteBuffer core =
      canonical_encode_transaction(tx.robot_id, tx.timestamp, tx.panorama);
  put_raw(out, core.data(), core.size());
}

}  // namespace

ByteBuffer canonical_encode_transaction(const std::string& robot_id,
                                        std::int64_t timestamp,
                                        const PanoramicView& panorama) {
  ByteBuffer out;
  put_string(out, robot_id);
  put_i64(out, timestamp);
  encode_panorama(out, panorama);
  return out;
}

Hash compute_hash(const ByteBuffer& bytes) {
  return sha256(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

Transaction make_transaction(std::string robot_id, std::int64_t timestamp,
                             PanoramicView panorama) {
  if (panorama.robot_id != robot_id) {
    throw std::invalid_argument("panorama robot_id '" + panorama.robot_id +
                                "' does not match transaction robot_id '" +
                                robot_id + "'");
  }
  Transaction tx;
  tx.tx_id = compute_hash(
      canonical_encode_transaction(robot_id, timestamp, panorama));
  tx.robot_id = std::move(robot_id);
  tx.timestamp = timestamp;
  tx.panorama = std::move(panorama);
  return tx;
}

ByteBuffer canonical_encode_block(std::uint64_t index, std::int64_t timestamp,
                                  const Hash& prev_hash,
                                  const std::vector<Transaction>& transactions) {
  ByteBuffer out;
  put_u64(out, index);
  put_i64(out, timestamp);
  put_raw(out, prev_hash.bytes.data(), prev_hash.bytes.size());
  put_u32(out, std::uint32_t(transactions.size()));
  for (const auto& tx : transactions) {
    encode_transaction_with_id(out, tx);
  }
  return out;
}

Block create_genesis(std::int64_t timestamp) {
  Block genesis;
  genesis.index = 0;
  genesis.timestamp = timestamp;
  genesis.prev_hash = Hash::zero();
  genesis.block_hash = compute_hash(
      canonical_encode_block(0, timestamp, genesis.prev_hash, {}));
  return genesis;
}

const char* to_string(LedgerFault fault) {
  switch (fault) {
    case LedgerFault::UnknownRobot: return "UnknownRobot";
    case LedgerFault::DuplicateRobot: return "DuplicateRobot";
    case LedgerFault::MissingRobot: return "MissingRobot";
    case LedgerFault::IndexMismatch: return "IndexMismatch";
    case LedgerFault::LinkMismatch: return "LinkMismatch";
    case LedgerFault::HashMismatch: return "HashMismatch";
  }
  return "Unknown";
}

const char* to_string(ValidationFault fault) {
  switch (fault) {
    case ValidationFault::None: return "None";
    case ValidationFault::IndexMismatch: return "IndexMismatch";
    case ValidationFault::LinkMismatch: return "LinkMismatch";
    case ValidationFault::HashMismatch: return "HashMismatch";
    case ValidationFault::TxIdMismatch: return "TxIdMismatch";
    case ValidationFault::OrderViolation: return "OrderViolation";
    case ValidationFault::SnapshotViolation: return "SnapshotViolation";
  }
  return "Unknown";
}

Chain::Chain(std::set<std::string> team, std::int64_t genesis_timestamp)
    : team_(std::move(team)) {
  blocks_.push_back(create_genesis(genesis_timestamp));
}

Chain Chain::from_blocks(std::vector<Block> blocks) {
  std::set<std::string> team;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].transactions.empty()) continue;
    for (const auto& tx : blocks[i].transactions) team.insert(tx.robot_id);
    break;
  }
  return from_blocks(std::move(blocks), std::move(team));
}

Chain Chain::from_blocks(std::vector<Block> blocks, std::set<std::string> team) {
  Chain chain;
  chain.team_ = std::move(team);
  chain.blocks_ = std::move(blocks);
  return chain;
}

Chain::Chain(const Chain& other) {
  std::shared_lock lock(other.mutex_);
  team_ = other.team_;
  blocks_ = other.blocks_;
}

Chain& Chain::operator=(const Chain& other) {
  if (this != &other) {
    std::vector<Block> copy;
    std::set<std::string> team;
    {
      std::shared_lock lock(other.mutex_);
      copy = other.blocks_;
      team = other.team_;
    }
    std::unique_lock lock(mutex_);
    blocks_ = std::move(copy);
    team_ = std::move(team);
  }
  return *this;
}

Chain::Chain(Chain&& other) noexcept {
  std::unique_lock lock(other.mutex_);
  team_ = std::move(other.team_);
  blocks_ = std::move(other.blocks_);
}

Chain& Chain::operator=(Chain&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mutex_, other.mutex_);
    team_ = std::move(other.team_);
    blocks_ = std::move(other.blocks_);
  }
  return *this;
}

std::size_t Chain::size() const {
  std::shared_lock lock(mutex_);
  return blocks_.size();
}

Block Chain::block(std::size_t index) const {
  std::shared_lock lock(mutex_);
  return blocks_.at(index);
}

Block Chain::tip() const {
  std::shared_lock lock(mutex_);
  if (blocks_.empty()) throw std::out_of_range("chain has no blocks");
  return blocks_.back();
}

std::vector<Block> Chain::blocks() const {
  std::shared_lock lock(mutex_);
  return blocks_;
}

Block assemble_block(const Chain& chain,
                     const std::vector<Transaction>& new_transactions,
                     std::int64_t timestamp) {
  std::shared_lock lock(chain.mutex_);
  if (chain.blocks_.empty()) throw std::out_of_range("chain has no blocks");

  std::map<std::string, const Transaction*> fresh;
  for (const auto& tx : new_transactions) {
    if (!chain.team_.count(tx.robot_id)) {
      throw LedgerError(LedgerFault::UnknownRobot,
                        "transaction from unregistered robot " + tx.robot_id);
    }
    if (!fresh.emplace(tx.robot_id, &tx).second) {
      throw LedgerError(LedgerFault::DuplicateRobot,
                        "two new transactions share robot " + tx.robot_id);
    }
  }

  const Block& tip = chain.blocks_.back();
  std::map<std::string, const Transaction*> carried;
  for (const auto& tx : tip.transactions) {
    carried.emplace(tx.robot_id, &tx);
  }

  Block block;
  block.index = tip.index + 1;
  block.timestamp = timestamp;
  block.prev_hash = tip.block_hash;
  block.transactions.reserve(chain.team_.size());
  for (const auto& robot : chain.team_) {
    if (auto it = fresh.find(robot); it != fresh.end()) {
      block.transactions.push_back(*it->second);
    } else if (auto c = carried.find(robot); c != carried.end()) {
      block.transactions.push_back(*c->second);
    } else {
      throw LedgerError(LedgerFault::MissingRobot,
                        "robot " + robot +
                            " has neither a new nor a carried transaction");
    }
  }
  block.block_hash = compute_hash(canonical_encode_block(
      block.index, block.timestamp, block.prev_hash, block.transactions));
  return block;
}

void append_block(Chain& chain, Block block) {
  std::unique_lock lock(chain.mutex_);
  if (chain.blocks_.empty()) throw std::out_of_range("chain has no blocks");
  const Block& tip = chain.blocks_.back();
  if (block.index != tip.index + 1) {
    std::ostringstream msg;
    msg << "expected index " << tip.index + 1 << ", got " << block.index;
    throw LedgerError(LedgerFault::IndexMismatch, msg.str());
  }
  if (block.prev_hash != tip.block_hash) {
    throw LedgerError(LedgerFault::LinkMismatch,
                      "prev_hash does not match tip block_hash");
  }
  const Hash recomputed = compute_hash(canonical_encode_block(
      block.index, block.timestamp, block.prev_hash, block.transactions));
  if (recomputed != block.block_hash) {
    throw LedgerError(LedgerFault::HashMismatch,
                      "stored block_hash does not match recomputed digest");
  }
  chain.blocks_.push_back(std::move(block));
}

ValidationResult validate_chain(const Chain& chain) {
  std::shared_lock lock(chain.mutex_);

  auto fail = [](std::size_t index, ValidationFault fault, std::string detail) {
    return ValidationResult{false, index, fault, std::move(detail)};
  };

  if (chain.blocks_.empty()) {
    return fail(0, ValidationFault::SnapshotViolation, "chain has no genesis");
  }

  for (std::size_t i = 0; i < chain.blocks_.size(); ++i) {
    const Block& block = chain.blocks_[i];
    if (block.index != i) {
      return fail(i, ValidationFault::IndexMismatch,
                  "stored index does not match position");
    }
    if (i == 0) {
      if (!block.prev_hash.is_zero()) {
        return fail(0, ValidationFault::LinkMismatch,
                    "genesis prev_hash is not all-zero");
      }
    } else if (block.prev_hash != chain.blocks_[i - 1].block_hash) {
      return fail(i, ValidationFault::LinkMismatch,
                  "prev_hash does not match previous block_hash");
    }
    const Hash recomputed = compute_hash(canonical_encode_block(
        block.index, block.timestamp, block.prev_hash, block.transactions));
    if (recomputed != block.block_hash) {
      return fail(i, ValidationFault::HashMismatch,
                  "stored block_hash does not match recomputed digest");
    }
    if (i == 0) {
      if (!block.transactions.empty()) {
        return fail(0, ValidationFault::SnapshotViolation,
                    "genesis carries transactions");
      }
      continue;
    }

    std::set<std::string> robots;
    for (std::size_t t = 0; t < block.transactions.size(); ++t) {
      const Transaction& tx = block.transactions[t];
      if (t > 0 && !(block.transactions[t - 1].robot_id < tx.robot_id)) {
        return fail(i, ValidationFault::OrderViolation,
                    "transactions not strictly sorted by robot_id");
      }
      if (tx.panorama.robot_id != tx.robot_id) {
        return fail(i, ValidationFault::OrderViolation,
                    "panorama robot_id differs from transaction robot_id");
      }
      robots.insert(tx.robot_id);
    }
    if (robots != chain.team_) {
      return fail(i, ValidationFault::SnapshotViolation,
                  "block does not carry exactly one transaction per robot");
    }
    for (const Transaction& tx : block.transactions) {
      const Hash tx_recomputed = compute_hash(
          canonical_encode_transaction(tx.robot_id, tx.timestamp, tx.panorama));
      if (tx_recomputed != tx.tx_id) {
        return fail(i, ValidationFault::TxIdMismatch,
                    "tx_id of " + tx.robot_id + " does not match content");
      }
    }
  }
  return ValidationResult{};
}

std::map<std::string, Transaction> latest_states(const Chain& chain) {
  std::shared_lock lock(chain.mutex_);
  std::map<std::string, Transaction> states;
  if (chain.blocks_.empty()) return states;
  for (const auto& tx : chain.blocks_.back().transactions) {
    states.emplace(tx.robot_id, tx);
  }
  return states;
}

}  // namespace homenav
