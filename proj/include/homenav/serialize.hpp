#pragma once

// JSON rendering of ledger state: one block object per line, hashes as
// lowercase hex. Loading is strict (exact key sets, integer-typed integers,
// lowercase hex) so that any byte-level tampering of a dump surfaces either
// here or in validate_chain.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "homenav/ledger.hpp"
#include "homenav/planner.hpp"

namespace homenav {

class ChainParseError : public std::runtime_error {
 public:
  ChainParseError(std::size_t line_index, const std::string& what)
      : std::runtime_error(what), line_index_(line_index) {}
  // 0-based line (= block) index at which parsing failed.
  std::size_t line_index() const { return line_index_; }

 private:
  std::size_t line_index_;
};

nlohmann::json panorama_to_json(const PanoramicView& view);
PanoramicView panorama_from_json(const nlohmann::json& j);

nlohmann::json transaction_to_json(const Transaction& tx);
Transaction transaction_from_json(const nlohmann::json& j);

nlohmann::json block_to_json(const Block& block);
Block block_from_json(const nlohmann::json& j);

void dump_chain(const Chain& chain, std::ostream& out);
std::string dump_chain(const Chain& chain);
void dump_chain_file(const Chain& chain, const std::string& path);

Chain load_chain(std::istream& in);          // throws ChainParseError
Chain load_chain_file(const std::string& path);

nlohmann::json plan_to_json(const NavigationPlan& plan);

}  // namespace homenav
