#pragma once

#include "defikit/sim.hpp"
#include "defikit/snapshot.hpp"
#include "defikit/tokens.hpp"

#include <string>

namespace defikit {

// Snapshot files are JSON with a schema_version field and these top-level
// keys: tokens, protocols, plain_prices, stakes, positions. Unknown keys are
// rejected with their field path. Parsing runs full validation, so the
// returned snapshot is ready for metrics and simulation.
Snapshot parse_snapshot_text(const std::string& text);
Snapshot load_snapshot(const std::string& path);

std::string snapshot_to_text(const Snapshot& snapshot);
void save_snapshot(const Snapshot& snapshot, const std::string& path);

// Scenario files: schema_version, shock_token, grid (either an array of
// fractions or {start, stop, count}), gas {gas_limit, gas_price_usd, scale},
// max_rounds, close_factor_overrides, bonus_override.
ShockScenario parse_scenario_text(const std::string& text);
ShockScenario load_scenario(const std::string& path);

// Category-list files: schema_version plus native / governance /
// non_crypto_stablecoins arrays of token ids.
CategoryLists parse_category_lists_text(const std::string& text);
CategoryLists load_category_lists(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace defikit
