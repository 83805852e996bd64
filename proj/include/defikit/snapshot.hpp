#pragma once

#include "defikit/protocols.hpp"
#include "defikit/tokens.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace defikit {

// token id -> protocol id -> quantity. Used for both the staked matrix and
// the derived held (redeemable) matrix.
using StakeTable = std::map<std::string, std::map<std::string, double>>;

// Full system state: token declarations, protocol parameters, the staked
// matrix, debt positions, and the derived held matrix (staked minus tokens
// lent out of protocol custody, clamped at zero).
struct Snapshot {
    int schema_version = 1;
    std::vector<Token> tokens;
    std::vector<Protocol> protocols;
    StakeTable staked;
    StakeTable held; // derived; rebuild with validate()/build_held()
    std::vector<Position> positions;

    const Token* find_token(const std::string& id) const;
    const Protocol* find_protocol(const std::string& id) const;
    Token* find_token(const std::string& id);

    PriceMap resolve() const { return resolve_prices(tokens); }
};

// Held matrix: start from the staked matrix and subtract each position's debt
// quantities — first from the position's own protocol column, then (if the
// column runs dry) from that token's other columns in lexicographic protocol
// order, never below zero. Quantities a protocol minted rather than lent out
// simply find no column to come out of.
StakeTable build_held(const Snapshot& snapshot);

// Structural validation: unique ids, kind-specific field rules, declared
// references, non-negative quantities, thresholds configured for all pledged
// collateral. Rebuilds the held matrix on success.
void validate(Snapshot& snapshot);

// Applies a triggered liquidation to the snapshot in place: stake-matrix
// deltas, position collateral/debt reduction, and — for CDP liquidations —
// the supply burn of the repaid coin and the matching shrink of its declared
// backing basket. A no-op when the outcome was not triggered.
void apply_liquidation(Snapshot& snapshot, std::size_t position_index,
                       const LiquidationOutcome& outcome);

} // namespace defikit
