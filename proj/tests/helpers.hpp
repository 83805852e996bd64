#pragma once

#include "defikit/snapshot.hpp"

#include <map>
#include <string>
#include <vector>

// Shared fixture builders. The six-protocol wrap chain mirrors
// fixtures/chain6.json so unit tests stay independent of the JSON loader.
namespace testutil {

inline defikit::Token plain_token(const std::string& id, double price) {
    defikit::Token t;
    t.id = id;
    t.kind = defikit::TokenKind::Plain;
    t.exogenous_price = price;
    return t;
}

inline defikit::Token derivative_token(const std::string& id, double supply,
                                       std::vector<defikit::BasketEntry> basket) {
    defikit::Token t;
    t.id = id;
    t.kind = defikit::TokenKind::Derivative;
    t.circulating_supply = supply;
    t.basket = std::move(basket);
    return t;
}

inline defikit::Token stable_token(const std::string& id, double supply,
                                   double peg,
                                   std::vector<defikit::BasketEntry> basket) {
    defikit::Token t;
    t.id = id;
    t.kind = defikit::TokenKind::CdpStablecoin;
    t.circulating_supply = supply;
    t.peg_price = peg;
    t.basket = std::move(basket);
    return t;
}

inline defikit::Protocol passive_protocol(const std::string& id) {
    defikit::Protocol p;
    p.id = id;
    p.kind = defikit::ProtocolKind::Passive;
    return p;
}

inline defikit::Protocol cdp_protocol(const std::string& id, double close_factor,
                                      double bonus,
                                      std::map<std::string, double> thresholds) {
    defikit::Protocol p;
    p.id = id;
    p.kind = defikit::ProtocolKind::Cdp;
    p.close_factor = close_factor;
    p.liquidation_bonus = bonus;
    p.liquidation_thresholds = std::move(thresholds);
    return p;
}

inline defikit::Protocol lending_protocol(const std::string& id,
                                          double close_factor, double bonus,
                                          std::map<std::string, double> thresholds) {
    defikit::Protocol p;
    p.id = id;
    p.kind = defikit::ProtocolKind::Lending;
    p.close_factor = close_factor;
    p.liquidation_bonus = bonus;
    p.liquidation_thresholds = std::move(thresholds);
    return p;
}

// Six-protocol wrap chain seeded with `scale` ETH at $1,000: each hop wraps
// or redeposits the previous receipt, and one CDP vault mints 571·scale DAI
// against the wrapped collateral. TVL = 4,713·scale, TVR = 1,000·scale.
inline defikit::Snapshot make_wrap_chain(double scale = 1.0) {
    using namespace defikit;
    Snapshot s;
    s.tokens = {
        plain_token("ETH", 1000.0),
        derivative_token("stETH", scale, {{"ETH", scale}}),
        derivative_token("wstETH", scale, {{"stETH", scale}}),
        stable_token("DAI", 571.0 * scale, 1.0, {{"wstETH", scale}}),
        derivative_token("aDAI", 571.0 * scale, {{"DAI", 571.0 * scale}}),
        derivative_token("a3CRV", 571.0 * scale, {{"aDAI", 571.0 * scale}}),
        derivative_token("cvxa3CRV", 571.0 * scale, {{"a3CRV", 571.0 * scale}}),
    };
    s.protocols = {
        passive_protocol("lido"),
        passive_protocol("uniswap"),
        cdp_protocol("makerdao", 1.0, 0.0, {{"wstETH", 0.65}}),
        lending_protocol("aave", 0.5, 0.05, {}),
        passive_protocol("curve"),
        passive_protocol("convex"),
    };
    s.staked = {
        {"ETH", {{"lido", scale}}},
        {"stETH", {{"uniswap", scale}}},
        {"wstETH", {{"makerdao", scale}}},
        {"DAI", {{"aave", 571.0 * scale}}},
        {"aDAI", {{"curve", 571.0 * scale}}},
        {"a3CRV", {{"convex", 571.0 * scale}}},
    };
    s.positions = {{"desk",
                    "makerdao",
                    {{"wstETH", scale}},
                    {{"DAI", 571.0 * scale}}}};
    validate(s);
    return s;
}

// Two-protocol wrap pair rooted at a plain staking receipt: 1 stETH at
// $1,000 sits in lido, its 1:1 wrap sits in makerdao. TVL 2,000, TVR 1,000.
inline defikit::Snapshot make_wrap_pair_plain_root() {
    using namespace defikit;
    Snapshot s;
    s.tokens = {
        plain_token("stETH", 1000.0),
        derivative_token("wstETH", 1.0, {{"stETH", 1.0}}),
    };
    s.protocols = {
        passive_protocol("lido"),
        cdp_protocol("makerdao", 1.0, 0.0, {{"wstETH", 0.65}}),
    };
    s.staked = {
        {"stETH", {{"lido", 1.0}}},
        {"wstETH", {{"makerdao", 1.0}}},
    };
    validate(s);
    return s;
}

// Same two venues, but the root asset is unstaked plain ETH: both staked
// rows are derivatives, so nothing is redeemable. TVL 2,000, TVR 0.
inline defikit::Snapshot make_wrap_pair_eth_root() {
    using namespace defikit;
    Snapshot s;
    s.tokens = {
        plain_token("ETH", 1000.0),
        derivative_token("stETH", 1.0, {{"ETH", 1.0}}),
        derivative_token("wstETH", 1.0, {{"stETH", 1.0}}),
    };
    s.protocols = {
        passive_protocol("lido"),
        cdp_protocol("makerdao", 1.0, 0.0, {{"wstETH", 0.65}}),
    };
    s.staked = {
        {"stETH", {{"lido", 1.0}}},
        {"wstETH", {{"makerdao", 1.0}}},
    };
    validate(s);
    return s;
}

inline std::string fixture_path(const std::string& name) {
    return std::string(DEFIKIT_FIXTURE_DIR) + "/" + name;
}

} // namespace testutil
