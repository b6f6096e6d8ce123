#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "brlsim/beliefs.hpp"
#include "brlsim/dynamics.hpp"
#include "brlsim/market.hpp"

namespace brlsim {

/// Shortest decimal rendering that parses back to the same double.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

nlohmann::ordered_json market_to_json(const Market& market);

/// Parses and validates a market document. rho outside (0,1) is rejected
/// here, at parse time, before any computation runs.
Market market_from_json(const nlohmann::json& doc);

void save_market(const std::string& path, const Market& market,
                 const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());
Market load_market(const std::string& path);

/// Hash of the market's canonical serialization, for report headers.
std::string market_hash(const Market& market);

nlohmann::ordered_json model_to_json(const MentalModel& model);

/// Parses one tree: {"kind":"stay"} or {"kind":"respond","owner":k,"children":{...}}.
/// `slot` is the seller this model predicts; a respond node's owner must match.
MentalModel model_from_json(const nlohmann::json& doc, std::size_t slot,
                            std::size_t num_sellers);

/// Parses {"sellers":[entry,...]} where an entry is either {"level": k} or
/// {"children": {"<seller>": <model>, ...}}.
BeliefProfile profile_from_json(const nlohmann::json& doc, std::size_t num_sellers,
                                int max_depth = BeliefProfile::kDefaultMaxDepth);

/// Delimited trajectory export: comment lines, a header row, then one row
/// per step with step, epoch, active-set bitmask, prices, and diagnostics.
/// Doubles are rendered round-trip exact.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<std::string>& header_comments);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace brlsim
