#include "defikit/sim.hpp"

#include "defikit/errors.hpp"
#include "defikit/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace defikit {

void apply_shock(Snapshot& snapshot, const std::string& token, double d) {
    if (!(d >= 0.0 && d <= 1.0))
        fail_validation("shock fraction must lie in [0, 1]");
    Token* t = snapshot.find_token(token);
    if (!t) fail_validation("shock token '" + token + "' is not declared");
    if (!t->is_plain())
        fail_validation("shock token '" + token +
                        "' is not plain; only exogenous prices can be shocked");
    t->exogenous_price *= (1.0 - d);
}

namespace {

void apply_overrides(Snapshot& snapshot, const ShockScenario& scenario) {
    for (const auto& [id, delta] : scenario.close_factor_overrides) {
        Protocol* target = nullptr;
        for (Protocol& p : snapshot.protocols)
            if (p.id == id) target = &p;
        if (!target)
            fail_validation("close-factor override names unknown protocol '" + id +
                            "'");
        if (!target->is_plf())
            fail_validation("close-factor override targets passive protocol '" +
                            id + "'");
        if (!(delta > 0.0 && delta <= 1.0))
            fail_validation("close-factor override for '" + id +
                            "' must lie in (0, 1]");
        target->close_factor = delta;
    }
    if (scenario.bonus_override) {
        if (*scenario.bonus_override < 0.0)
            fail_validation("liquidation-bonus override must be >= 0");
        for (Protocol& p : snapshot.protocols)
            if (p.is_plf()) p.liquidation_bonus = *scenario.bonus_override;
    }
}

bool position_open(const Position& pos) {
    for (const Holding& h : pos.debt)
        if (h.quantity > 0.0) return true;
    return false;
}

} // namespace

FixedPointResult liquidation_fixed_point(const Snapshot& snapshot,
                                         const ShockScenario& scenario) {
    if (scenario.max_rounds <= 0)
        fail_validation("max_rounds must be positive");

    FixedPointResult result;
    result.snapshot = snapshot;
    Snapshot& s = result.snapshot;
    apply_overrides(s, scenario);

    // Deterministic evaluation order within each round.
    std::stable_sort(s.positions.begin(), s.positions.end(),
                     [](const Position& a, const Position& b) {
                         return std::tie(a.account, a.protocol) <
                                std::tie(b.account, b.protocol);
                     });

    for (;;) {
        result.prices = s.resolve();

        std::vector<std::pair<std::size_t, LiquidationOutcome>> triggered;
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            const Position& pos = s.positions[i];
            if (!position_open(pos)) continue;
            const Protocol* proto = s.find_protocol(pos.protocol);
            if (!proto)
                fail_validation("position of '" + pos.account +
                                "' references undeclared protocol '" +
                                pos.protocol + "'");
            LiquidationOutcome out =
                evaluate_liquidation(pos, result.prices, *proto, scenario.gas);
            if (out.triggered) triggered.emplace_back(i, out);
        }
        if (triggered.empty()) break;
        if (result.rounds == scenario.max_rounds) {
            result.converged = false;
            break;
        }
        ++result.rounds;

        for (const auto& [index, outcome] : triggered) {
            LiquidationEvent ev;
            ev.round = result.rounds;
            ev.account = s.positions[index].account;
            ev.protocol = s.positions[index].protocol;
            ev.health = outcome.health;
            ev.profit = outcome.profit;
            for (const auto& [token, dq] : outcome.deltas.collateral) {
                auto it = result.prices.find(token);
                if (it != result.prices.end()) ev.seized_usd += -dq * it->second;
            }
            result.events.push_back(ev);
            apply_liquidation(s, index, outcome);
        }
    }
    return result;
}

SensitivityCurve sensitivity_curve(const Snapshot& snapshot,
                                   const ShockScenario& scenario) {
    if (scenario.grid.empty()) fail_validation("shock grid is empty");
    for (std::size_t i = 0; i < scenario.grid.size(); ++i) {
        const double d = scenario.grid[i];
        if (!(d >= 0.0 && d <= 1.0))
            fail_validation("shock grid values must lie in [0, 1]");
        if (i > 0 && scenario.grid[i - 1] > d)
            fail_validation("shock grid must be sorted ascending");
    }
    {
        const Token* t = snapshot.find_token(scenario.shock_token);
        if (!t)
            fail_validation("shock token '" + scenario.shock_token +
                            "' is not declared");
        if (!t->is_plain())
            fail_validation("shock token '" + scenario.shock_token +
                            "' is not plain; only exogenous prices can be shocked");
    }

    SensitivityCurve curve;
    curve.shock_token = scenario.shock_token;
    for (const Token& t : snapshot.tokens)
        if (t.kind == TokenKind::CdpStablecoin) curve.stablecoins.push_back(t.id);

    auto run_point = [&](double d) {
        Snapshot shocked = snapshot;
        apply_shock(shocked, scenario.shock_token, d);
        FixedPointResult fp = liquidation_fixed_point(shocked, scenario);
        GridPoint point;
        point.drawdown = d;
        point.tvl = tvl(fp.snapshot, fp.prices);
        point.tvr = tvr(fp.snapshot, fp.prices);
        point.events = std::move(fp.events);
        point.rounds = fp.rounds;
        point.converged = fp.converged;
        for (const LiquidationEvent& ev : point.events)
            point.seized_usd += ev.seized_usd;
        for (const std::string& id : curve.stablecoins) {
            const Token* t = fp.snapshot.find_token(id);
            PegStatus status = peg_status(*t, fp.prices);
            if (!status.pegged) point.depegs.push_back({id, status.ratio});
        }
        return point;
    };

    GridPoint baseline = run_point(0.0);
    curve.baseline_tvl = baseline.tvl;
    curve.baseline_tvr = baseline.tvr;

    for (double d : scenario.grid) {
        GridPoint point = run_point(d);
        point.delta_tvl = point.tvl - curve.baseline_tvl;
        point.delta_tvr = point.tvr - curve.baseline_tvr;
        curve.points.push_back(std::move(point));
    }
    return curve;
}

std::optional<double> depeg_point(const SensitivityCurve& curve,
                                  const std::string& token) {
    if (std::find(curve.stablecoins.begin(), curve.stablecoins.end(), token) ==
        curve.stablecoins.end())
        fail_domain("token '" + token + "' was not watched by this run");
    for (const GridPoint& p : curve.points)
        for (const DepegEvent& d : p.depegs)
            if (d.token == token) return p.drawdown;
    return std::nullopt;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string depeg_cell(const GridPoint& p) {
    std::string cell;
    for (const DepegEvent& d : p.depegs) {
        if (!cell.empty()) cell += ';';
        cell += d.token + ":" + fmt(d.ratio);
    }
    return cell;
}

} // namespace

std::string curve_csv(const SensitivityCurve& curve) {
    std::string out =
        "drawdown,tvl,tvr,delta_tvl,delta_tvr,events,rounds,converged,"
        "seized_usd,depegged\n";
    for (const GridPoint& p : curve.points) {
        out += fmt(p.drawdown) + ',' + fmt(p.tvl) + ',' + fmt(p.tvr) + ',' +
               fmt(p.delta_tvl) + ',' + fmt(p.delta_tvr) + ',' +
               std::to_string(p.events.size()) + ',' + std::to_string(p.rounds) +
               ',' + (p.converged ? "1" : "0") + ',' + fmt(p.seized_usd) + ',' +
               depeg_cell(p) + '\n';
    }
    return out;
}

std::string curve_text(const SensitivityCurve& curve) {
    std::ostringstream out;
    out << "shock token: " << curve.shock_token
        << "  baseline tvl: " << fmt(curve.baseline_tvl)
        << "  baseline tvr: " << fmt(curve.baseline_tvr) << "\n";
    char row[256];
    std::snprintf(row, sizeof row, "%9s %14s %14s %14s %14s %7s %7s %10s  %s\n",
                  "drawdown", "tvl", "tvr", "delta_tvl", "delta_tvr", "events",
                  "rounds", "seized", "notes");
    out << row;
    for (const GridPoint& p : curve.points) {
        std::string notes = depeg_cell(p);
        if (!p.converged) notes += (notes.empty() ? "" : " ") +
                                   std::string("(not converged)");
        std::snprintf(row, sizeof row,
                      "%9.4f %14.2f %14.2f %14.2f %14.2f %7zu %7d %10.2f  %s\n",
                      p.drawdown, p.tvl, p.tvr, p.delta_tvl, p.delta_tvr,
                      p.events.size(), p.rounds, p.seized_usd, notes.c_str());
        out << row;
    }
    return out.str();
}

} // namespace defikit
