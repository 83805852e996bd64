#pragma once

#include "defikit/protocols.hpp"
#include "defikit/snapshot.hpp"
#include "defikit/tokens.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defikit {

// Configuration for one shock run: a single plain token's price is cut by
// each grid fraction in turn and liquidations cascade to a fixed point.
struct ShockScenario {
    std::string shock_token;
    std::vector<double> grid;  // fractions in [0, 1], ascending
    GasFees gas;
    int max_rounds = 100;
    // Optional parameter sweeps: per-protocol close factor, and one bonus
    // applied to every lending/CDP protocol.
    std::map<std::string, double> close_factor_overrides;
    std::optional<double> bonus_override;
};

struct LiquidationEvent {
    int round = 0;  // 1-based
    std::string account;
    std::string protocol;
    double health = 0.0;
    double profit = 0.0;
    double seized_usd = 0.0;  // collateral value at round-start prices
};

struct DepegEvent {
    std::string token;
    double ratio = 0.0;  // backing per coin relative to the peg, in [0, 1)
};

// Cuts the plain token's price by the fraction d; nothing else changes.
void apply_shock(Snapshot& snapshot, const std::string& token, double d);

struct FixedPointResult {
    Snapshot snapshot;  // state after the cascade settles
    PriceMap prices;    // resolved at the settled state
    std::vector<LiquidationEvent> events;
    int rounds = 0;  // rounds that applied at least one liquidation
    bool converged = true;
};

// Runs liquidation rounds until none trigger or max_rounds is exhausted.
// Each round evaluates every position against the round-start prices and
// applies all triggered liquidations together at round end, in (account,
// protocol) order. Scenario overrides are applied to a working copy first;
// the grid is not consulted.
FixedPointResult liquidation_fixed_point(const Snapshot& snapshot,
                                         const ShockScenario& scenario);

struct GridPoint {
    double drawdown = 0.0;
    double tvl = 0.0;
    double tvr = 0.0;
    double delta_tvl = 0.0;
    double delta_tvr = 0.0;
    std::vector<LiquidationEvent> events;
    int rounds = 0;
    bool converged = true;
    double seized_usd = 0.0;
    std::vector<DepegEvent> depegs;  // stablecoins off the peg at this point
};

struct SensitivityCurve {
    std::string shock_token;
    double baseline_tvl = 0.0;
    double baseline_tvr = 0.0;
    std::vector<std::string> stablecoins;  // ids watched for depegs
    std::vector<GridPoint> points;
};

// Full sweep: the baseline runs the identical pipeline at d = 0, then each
// grid point shocks a fresh copy, settles liquidations, and reports value
// changes against the baseline.
SensitivityCurve sensitivity_curve(const Snapshot& snapshot,
                                   const ShockScenario& scenario);

// First grid fraction at which the given stablecoin sat below its peg, or
// absent if it never did. The token must have been watched by the run.
std::optional<double> depeg_point(const SensitivityCurve& curve,
                                  const std::string& token);

// drawdown,tvl,tvr,delta_tvl,delta_tvr,events,rounds,converged,seized_usd,
// depegged — one row per grid point; depegged holds token:ratio pairs
// joined by ';'.
std::string curve_csv(const SensitivityCurve& curve);

// Aligned human-readable table of the same rows.
std::string curve_text(const SensitivityCurve& curve);

} // namespace defikit
