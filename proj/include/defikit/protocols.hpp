#pragma once

#include "defikit/tokens.hpp"

#include <map>
#include <string>
#include <vector>

namespace defikit {

// Passive protocols only custody stakes (wrapping, pools); Cdp and Lending
// protocols additionally host collateralized debt positions and can liquidate
// them. The PLF flag used by the value-locked decomposition is "Cdp or
// Lending".
enum class ProtocolKind {
    Passive,
    Cdp,
    Lending,
};

std::string to_string(ProtocolKind kind);
ProtocolKind protocol_kind_from_string(const std::string& text);

struct Protocol {
    std::string id;
    ProtocolKind kind = ProtocolKind::Passive;
    double close_factor = 1.0;      // share of debt repayable per liquidation
    double liquidation_bonus = 0.0; // collateral premium paid to liquidators
    // Per accepted collateral token: discount applied to collateral value when
    // judging solvency, each in [0, 1).
    std::map<std::string, double> liquidation_thresholds;

    bool is_plf() const { return kind != ProtocolKind::Passive; }
};

struct Holding {
    std::string token;
    double quantity = 0.0;
};

// One account's collateral and debt inside a Cdp or Lending protocol.
struct Position {
    std::string account;
    std::string protocol;
    std::vector<Holding> collateral;
    std::vector<Holding> debt;
};

struct GasFees {
    double gas_limit = 500000.0;
    double gas_price_usd = 4.85e-4; // USD per gas unit
    double scale = 1.0;             // scenario multiplier

    double usd() const { return gas_limit * gas_price_usd * scale; }
};

double holdings_value(const std::vector<Holding>& holdings, const PriceMap& prices);

// h = Σ c_i·α_i·p_i / Σ d_j·p_j. Zero total debt is reported as +infinity
// (never liquidable). A collateral token with no configured threshold is a
// validation error.
double health_factor(const Position& position, const PriceMap& prices,
                     const std::map<std::string, double>& thresholds);

// Largest USD amount of debt a liquidator may repay on a lending position:
// min{V_c/(1+b), δ·V_d}.
double max_repayable(const Position& position, const PriceMap& prices,
                     double close_factor, double liquidation_bonus);

// Liquidator profit: collateral minus debt minus gas for a Cdp (the vault is
// closed whole), repayment bonus minus gas for a Lending pool.
double liquidation_profit(const Position& position, const PriceMap& prices,
                          const Protocol& protocol, const GasFees& gas);

// Quantity changes caused by one liquidation.
//   repaid     — signed stake-matrix change per repaid token (positive for
//                Lending deposits; zero for Cdp, whose repaid coins are
//                burned).
//   collateral — signed stake-matrix change per seized collateral token
//                (negative).
//   debt_cleared — per-token quantity removed from the position's debt (equal
//                to the burned supply for a Cdp).
struct LiquidationDeltas {
    std::map<std::string, double> repaid;
    std::map<std::string, double> collateral;
    std::map<std::string, double> debt_cleared;

    bool empty() const {
        return repaid.empty() && collateral.empty() && debt_cleared.empty();
    }
};

LiquidationDeltas liquidation_deltas(const Position& position,
                                     const PriceMap& prices,
                                     const Protocol& protocol);

struct LiquidationOutcome {
    bool triggered = false;
    double health = 0.0;
    double profit = 0.0;
    LiquidationDeltas deltas; // all-zero unless triggered
};

// Full trigger check: liquidate iff health < 1 and profit > 0.
LiquidationOutcome evaluate_liquidation(const Position& position,
                                        const PriceMap& prices,
                                        const Protocol& protocol,
                                        const GasFees& gas);

} // namespace defikit
