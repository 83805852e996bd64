#include "defikit/protocols.hpp"

#include "defikit/errors.hpp"

#include <algorithm>
#include <limits>

namespace defikit {

std::string to_string(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::Passive: return "passive";
    case ProtocolKind::Cdp: return "cdp";
    case ProtocolKind::Lending: return "lending";
    }
    fail_validation("unrepresentable protocol kind");
}

ProtocolKind protocol_kind_from_string(const std::string& text) {
    if (text == "passive") return ProtocolKind::Passive;
    if (text == "cdp") return ProtocolKind::Cdp;
    if (text == "lending") return ProtocolKind::Lending;
    fail_parse("unknown protocol kind '" + text + "'");
}

namespace {

double price_of(const PriceMap& prices, const std::string& token) {
    auto it = prices.find(token);
    if (it == prices.end())
        fail_domain("no resolved price for token '" + token + "'");
    return it->second;
}

void require_plf(const Protocol& protocol) {
    if (!protocol.is_plf())
        fail_domain("protocol '" + protocol.id +
                    "' is passive and has no liquidation rules");
}

} // namespace

double holdings_value(const std::vector<Holding>& holdings, const PriceMap& prices) {
    double total = 0.0;
    for (const Holding& h : holdings) total += h.quantity * price_of(prices, h.token);
    return total;
}

double health_factor(const Position& position, const PriceMap& prices,
                     const std::map<std::string, double>& thresholds) {
    double debt_usd = holdings_value(position.debt, prices);
    if (debt_usd <= 0.0) return std::numeric_limits<double>::infinity();

    double weighted_collateral = 0.0;
    for (const Holding& h : position.collateral) {
        auto it = thresholds.find(h.token);
        if (it == thresholds.end())
            fail_validation("position of '" + position.account +
                            "' pledges collateral '" + h.token +
                            "' with no configured liquidation threshold");
        weighted_collateral += h.quantity * it->second * price_of(prices, h.token);
    }
    return weighted_collateral / debt_usd;
}

double max_repayable(const Position& position, const PriceMap& prices,
                     double close_factor, double liquidation_bonus) {
    const double vc = holdings_value(position.collateral, prices);
    const double vd = holdings_value(position.debt, prices);
    return std::min(vc / (1.0 + liquidation_bonus), close_factor * vd);
}

double liquidation_profit(const Position& position, const PriceMap& prices,
                          const Protocol& protocol, const GasFees& gas) {
    require_plf(protocol);
    const double vc = holdings_value(position.collateral, prices);
    const double vd = holdings_value(position.debt, prices);
    if (protocol.kind == ProtocolKind::Cdp) return vc - vd - gas.usd();
    const double vliq = max_repayable(position, prices, protocol.close_factor,
                                      protocol.liquidation_bonus);
    return vliq * protocol.liquidation_bonus - gas.usd();
}

LiquidationDeltas liquidation_deltas(const Position& position,
                                     const PriceMap& prices,
                                     const Protocol& protocol) {
    require_plf(protocol);
    LiquidationDeltas deltas;

    if (protocol.kind == ProtocolKind::Cdp) {
        // The vault is closed whole: all collateral is seized and the whole
        // debt is settled by burning the repaid coins, so the stake matrix
        // gains nothing on the repaid side.
        for (const Holding& h : position.collateral)
            if (h.quantity > 0.0) deltas.collateral[h.token] -= h.quantity;
        for (const Holding& h : position.debt)
            if (h.quantity > 0.0) deltas.debt_cleared[h.token] += h.quantity;
        return deltas;
    }

    const double vc = holdings_value(position.collateral, prices);
    const double vd = holdings_value(position.debt, prices);
    if (vc <= 0.0 || vd <= 0.0) return deltas;
    const double vliq = max_repayable(position, prices, protocol.close_factor,
                                      protocol.liquidation_bonus);
    if (vliq <= 0.0) return deltas;

    // The liquidator repays each debt token and receives each collateral
    // token in proportion to its share of the position's totals.
    for (const Holding& h : position.debt) {
        if (h.quantity <= 0.0) continue;
        const double dq = vliq * h.quantity / vd;
        deltas.repaid[h.token] += dq;
        deltas.debt_cleared[h.token] += dq;
    }
    const double seize_usd = (1.0 + protocol.liquidation_bonus) * vliq;
    for (const Holding& h : position.collateral) {
        if (h.quantity <= 0.0) continue;
        deltas.collateral[h.token] -= seize_usd * h.quantity / vc;
    }
    return deltas;
}

LiquidationOutcome evaluate_liquidation(const Position& position,
                                        const PriceMap& prices,
                                        const Protocol& protocol,
                                        const GasFees& gas) {
    require_plf(protocol);
    LiquidationOutcome out;
    out.health = health_factor(position, prices, protocol.liquidation_thresholds);
    out.profit = liquidation_profit(position, prices, protocol, gas);
    out.triggered = out.health < 1.0 && out.profit > 0.0;
    if (out.triggered) {
        out.deltas = liquidation_deltas(position, prices, protocol);
        if (out.deltas.empty()) out.triggered = false;
    }
    return out;
}

} // namespace defikit
