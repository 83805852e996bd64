#include "defikit/snapshot.hpp"

#include "defikit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace defikit {

namespace {

constexpr double kQuantityEps = 1e-9;

} // namespace

const Token* Snapshot::find_token(const std::string& id) const {
    for (const Token& t : tokens)
        if (t.id == id) return &t;
    return nullptr;
}

Token* Snapshot::find_token(const std::string& id) {
    for (Token& t : tokens)
        if (t.id == id) return &t;
    return nullptr;
}

const Protocol* Snapshot::find_protocol(const std::string& id) const {
    for (const Protocol& p : protocols)
        if (p.id == id) return &p;
    return nullptr;
}

StakeTable build_held(const Snapshot& snapshot) {
    StakeTable held = snapshot.staked;

    // Deterministic position order: (account, protocol).
    std::vector<const Position*> ordered;
    ordered.reserve(snapshot.positions.size());
    for (const Position& p : snapshot.positions) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](const Position* a, const Position* b) {
                  return std::tie(a->account, a->protocol) <
                         std::tie(b->account, b->protocol);
              });

    for (const Position* pos : ordered) {
        for (const Holding& debt : pos->debt) {
            double remaining = debt.quantity;
            if (remaining <= 0.0) continue;
            auto cols = held.find(debt.token);
            if (cols == held.end()) continue;
            // The borrowed tokens left the pool they were borrowed from.
            auto own = cols->second.find(pos->protocol);
            if (own != cols->second.end()) {
                const double take = std::min(remaining, own->second);
                own->second -= take;
                remaining -= take;
            }
            if (remaining <= 0.0) continue;
            for (auto& [proto, qty] : cols->second) {
                if (proto == pos->protocol) continue;
                const double take = std::min(remaining, qty);
                qty -= take;
                remaining -= take;
                if (remaining <= 0.0) break;
            }
        }
    }
    return held;
}

void validate(Snapshot& snapshot) {
    if (snapshot.schema_version != 1)
        fail_validation("unsupported schema_version " +
                        std::to_string(snapshot.schema_version));

    std::set<std::string> token_ids;
    for (const Token& t : snapshot.tokens) {
        if (t.id.empty()) fail_validation("token with empty id");
        if (!token_ids.insert(t.id).second)
            fail_validation("duplicate token id '" + t.id + "'");
        if (!std::isfinite(t.fluctuation))
            fail_validation("token '" + t.id + "': fluctuation must be finite");
        if (t.is_plain()) {
            if (!t.basket.empty())
                fail_validation("token '" + t.id +
                                "': plain tokens take no underlying basket");
            if (!(t.exogenous_price >= 0.0) || !std::isfinite(t.exogenous_price))
                fail_validation("token '" + t.id +
                                "': plain price must be a finite value >= 0");
        } else {
            if (t.basket.empty())
                fail_validation("token '" + t.id +
                                "': derivative tokens need an underlying basket");
            if (!(t.circulating_supply > 0.0))
                fail_validation("token '" + t.id +
                                "': circulating supply must be > 0");
            for (const BasketEntry& e : t.basket)
                if (e.quantity < 0.0)
                    fail_validation("token '" + t.id + "': basket quantity for '" +
                                    e.token + "' is negative");
        }
        if (t.is_stablecoin() && !(t.peg_price > 0.0))
            fail_validation("token '" + t.id + "': peg price must be > 0");
    }
    for (const Token& t : snapshot.tokens)
        for (const BasketEntry& e : t.basket)
            if (!token_ids.count(e.token))
                fail_validation("token '" + t.id + "': basket names undeclared token '" +
                                e.token + "'");

    std::set<std::string> protocol_ids;
    for (const Protocol& p : snapshot.protocols) {
        if (p.id.empty()) fail_validation("protocol with empty id");
        if (!protocol_ids.insert(p.id).second)
            fail_validation("duplicate protocol id '" + p.id + "'");
        if (p.is_plf()) {
            if (!(p.close_factor > 0.0 && p.close_factor <= 1.0))
                fail_validation("protocol '" + p.id +
                                "': close factor must lie in (0, 1]");
            if (p.liquidation_bonus < 0.0)
                fail_validation("protocol '" + p.id +
                                "': liquidation bonus must be >= 0");
            for (const auto& [tok, alpha] : p.liquidation_thresholds) {
                if (!token_ids.count(tok))
                    fail_validation("protocol '" + p.id +
                                    "': liquidation threshold names undeclared token '" +
                                    tok + "'");
                if (!(alpha >= 0.0 && alpha < 1.0))
                    fail_validation("protocol '" + p.id + "': threshold for '" + tok +
                                    "' must lie in [0, 1)");
            }
        } else if (!p.liquidation_thresholds.empty()) {
            fail_validation("protocol '" + p.id +
                            "': passive protocols take no liquidation thresholds");
        }
    }

    for (const auto& [token, cols] : snapshot.staked) {
        if (!token_ids.count(token))
            fail_validation("stake references undeclared token '" + token + "'");
        for (const auto& [proto, qty] : cols) {
            if (!protocol_ids.count(proto))
                fail_validation("stake references undeclared protocol '" + proto +
                                "'");
            if (qty < 0.0)
                fail_validation("stake of '" + token + "' in '" + proto +
                                "' is negative");
        }
    }

    for (const Position& pos : snapshot.positions) {
        if (pos.account.empty()) fail_validation("position with empty account id");
        const Protocol* proto = snapshot.find_protocol(pos.protocol);
        if (!proto)
            fail_validation("position of '" + pos.account +
                            "' references undeclared protocol '" + pos.protocol +
                            "'");
        if (!proto->is_plf())
            fail_validation("position of '" + pos.account + "' sits in passive protocol '" +
                            pos.protocol + "'");
        for (const Holding& h : pos.collateral) {
            if (!token_ids.count(h.token))
                fail_validation("position of '" + pos.account +
                                "' pledges undeclared token '" + h.token + "'");
            if (h.quantity < 0.0)
                fail_validation("position of '" + pos.account +
                                "' has negative collateral quantity");
            if (!proto->liquidation_thresholds.count(h.token))
                fail_validation("position of '" + pos.account + "' pledges '" +
                                h.token + "' which '" + pos.protocol +
                                "' does not accept as collateral");
        }
        for (const Holding& h : pos.debt) {
            if (!token_ids.count(h.token))
                fail_validation("position of '" + pos.account +
                                "' owes undeclared token '" + h.token + "'");
            if (h.quantity < 0.0)
                fail_validation("position of '" + pos.account +
                                "' has negative debt quantity");
        }
    }

    snapshot.held = build_held(snapshot);
}

namespace {

void subtract_holding(std::vector<Holding>& holdings, const std::string& token,
                      double quantity, const std::string& what) {
    for (Holding& h : holdings) {
        if (h.token != token) continue;
        if (h.quantity + kQuantityEps < quantity)
            fail_validation("liquidation would drive " + what + " of '" + token +
                            "' negative");
        h.quantity = std::max(0.0, h.quantity - quantity);
        return;
    }
    fail_validation("liquidation references unknown " + what + " token '" + token +
                    "'");
}

} // namespace

void apply_liquidation(Snapshot& snapshot, std::size_t position_index,
                       const LiquidationOutcome& outcome) {
    if (!outcome.triggered) return;
    if (position_index >= snapshot.positions.size())
        fail_validation("liquidation references position index out of range");
    Position& pos = snapshot.positions[position_index];
    const Protocol* proto = snapshot.find_protocol(pos.protocol);
    if (!proto)
        fail_validation("liquidation references undeclared protocol '" +
                        pos.protocol + "'");

    // Seized collateral leaves protocol custody entirely.
    for (const auto& [token, dq] : outcome.deltas.collateral) {
        const double seized = -dq;
        double& cell = snapshot.staked[token][pos.protocol];
        if (cell + kQuantityEps < seized)
            fail_validation("liquidation would drive staked '" + token + "' in '" +
                            pos.protocol + "' negative");
        cell = std::max(0.0, cell - seized);
        double& held_cell = snapshot.held[token][pos.protocol];
        held_cell = std::max(0.0, held_cell - seized);
        subtract_holding(pos.collateral, token, seized, "collateral");
    }

    // Repaid tokens (lending only) flow back into the pool.
    for (const auto& [token, dq] : outcome.deltas.repaid) {
        snapshot.staked[token][pos.protocol] += dq;
        snapshot.held[token][pos.protocol] += dq;
    }

    const bool is_cdp = proto->kind == ProtocolKind::Cdp;
    double cleared_total = 0.0;
    for (const auto& [token, dq] : outcome.deltas.debt_cleared) cleared_total += dq;

    for (const auto& [token, dq] : outcome.deltas.debt_cleared) {
        subtract_holding(pos.debt, token, dq, "debt");
        if (!is_cdp) continue;
        // The CDP burns the repaid coins: supply falls, and the seized
        // collateral no longer backs the coin. With several repaid coins the
        // basket shrink is attributed by cleared-quantity share.
        Token* coin = snapshot.find_token(token);
        if (!coin)
            fail_validation("liquidation burns undeclared token '" + token + "'");
        coin->circulating_supply = std::max(0.0, coin->circulating_supply - dq);
        const double share = cleared_total > 0.0 ? dq / cleared_total : 0.0;
        for (const auto& [ctoken, cdq] : outcome.deltas.collateral) {
            const double seized = -cdq * share;
            for (BasketEntry& e : coin->basket)
                if (e.token == ctoken)
                    e.quantity = std::max(0.0, e.quantity - seized);
        }
    }
}

} // namespace defikit
