#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "homenav/hash.hpp"
#include "homenav/panorama.hpp"

namespace homenav {

// One robot's published snapshot. tx_id is the SHA-256 digest of the
// canonical encoding of (robot_id, timestamp, panorama).
struct Transaction {
  Hash tx_id;
  std::string robot_id;
  std::int64_t timestamp = 0;  // ms since scenario start
  PanoramicView panorama;
};

ByteBuffer canonical_encode_transaction(const std::string& robot_id,
                                        std::int64_t timestamp,
                                        const PanoramicView& panorama);

Hash compute_hash(const ByteBuffer& bytes);

// Builds a transaction with its tx_id filled in.
Transaction make_transaction(std::string robot_id, std::int64_t timestamp,
                             PanoramicView panorama);

// A full-team snapshot: one transaction per registered robot, sorted by
// robot_id. block_hash covers (index, timestamp, prev_hash, transactions).
struct Block {
  std::uint64_t index = 0;
  std::int64_t timestamp = 0;
  Hash prev_hash;
  std::vector<Transaction> transactions;
  Hash block_hash;
};

ByteBuffer canonical_encode_block(std::uint64_t index, std::int64_t timestamp,
                                  const Hash& prev_hash,
                                  const std::vector<Transaction>& transactions);

// Index 0, all-zero prev_hash, no transactions.
Block create_genesis(std::int64_t timestamp);

enum class LedgerFault {
  UnknownRobot,
  DuplicateRobot,
  MissingRobot,
  IndexMismatch,
  LinkMismatch,
  HashMismatch,
};

const char* to_string(LedgerFault fault);

class LedgerError : public std::runtime_error {
 public:
  LedgerError(LedgerFault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}
  LedgerFault fault() const { return fault_; }

 private:
  LedgerFault fault_;
};

enum class ValidationFault {
  None,
  IndexMismatch,
  LinkMismatch,
  HashMismatch,
  TxIdMismatch,
  OrderViolation,     // unsorted / duplicated / malformed transaction list
  SnapshotViolation,  // block does not carry exactly the registered team
};

const char* to_string(ValidationFault fault);

struct ValidationResult {
  bool ok = true;
  std::size_t first_bad_index = 0;
  ValidationFault fault = ValidationFault::None;
  std::string detail;
};

class Chain;

// Builds the next block: new transactions plus every other registered
// robot's transaction carried verbatim from the tip. Throws LedgerError with
// UnknownRobot, DuplicateRobot, or MissingRobot (a robot with neither a new
// nor a carried transaction).
Block assemble_block(const Chain& chain,
                     const std::vector<Transaction>& new_transactions,
                     std::int64_t timestamp);

// Appends after re-checking index, link, and block hash; throws LedgerError
// naming the failed invariant.
void append_block(Chain& chain, Block block);

// Walks the whole chain and reports the smallest index whose recomputed
// hashes, links, or snapshot structure fail.
ValidationResult validate_chain(const Chain& chain);

// The tip block's transactions keyed by robot_id. Reads only the tip, so the
// cost is independent of chain length. Genesis-only chains yield an empty map.
std::map<std::string, Transaction> latest_states(const Chain& chain);

// Append-only hash-chained ledger whose tip is always a complete snapshot of
// the team's latest panoramic states.
//
// Appends are serialized internally; concurrent readers never observe a
// partially appended block.
class Chain {
 public:
  Chain(std::set<std::string> team, std::int64_t genesis_timestamp);

  // Rebuilds a chain from stored blocks without validating them (callers run
  // validate_chain). The registered team is inferred from the first
  // non-genesis block unless given explicitly.
  static Chain from_blocks(std::vector<Block> blocks);
  static Chain from_blocks(std::vector<Block> blocks, std::set<std::string> team);

  Chain(const Chain& other);
  Chain& operator=(const Chain& other);
  Chain(Chain&& other) noexcept;
  Chain& operator=(Chain&& other) noexcept;

  std::size_t size() const;
  Block block(std::size_t index) const;
  Block tip() const;
  std::vector<Block> blocks() const;
  const std::set<std::string>& team() const { return team_; }

 private:
  Chain() = default;

  friend Block assemble_block(const Chain&, const std::vector<Transaction>&,
                              std::int64_t);
  friend void append_block(Chain&, Block);
  friend ValidationResult validate_chain(const Chain&);
  friend std::map<std::string, Transaction> latest_states(const Chain&);

  std::set<std::string> team_;  // fixed after construction
  std::vector<Block> blocks_;
  mutable std::shared_mutex mutex_;
};

}  // namespace homenav
