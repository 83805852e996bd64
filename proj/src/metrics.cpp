#include "defikit/metrics.hpp"

#include "defikit/errors.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace defikit {

namespace {

double price_of(const PriceMap& prices, const std::string& token) {
    auto it = prices.find(token);
    if (it == prices.end())
        fail_validation("no resolved price for staked token '" + token + "'");
    return it->second;
}

} // namespace

double tvl(const Snapshot& snapshot, const PriceMap& prices) {
    double total = 0.0;
    for (const auto& [token, cols] : snapshot.staked) {
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols) {
            (void)proto;
            total += p * qty;
        }
    }
    return total;
}

Decomposition tvl_decomposition(const Snapshot& snapshot, const PriceMap& prices) {
    Decomposition out;
    for (const auto& [token, cols] : snapshot.staked) {
        const Token* t = snapshot.find_token(token);
        if (!t) fail_validation("stake references undeclared token '" + token + "'");
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols) {
            const Protocol* pr = snapshot.find_protocol(proto);
            if (!pr)
                fail_validation("stake references undeclared protocol '" + proto +
                                "'");
            const double value = p * qty;
            if (t->is_plain())
                (pr->is_plf() ? out.plain_plf : out.plain_non_plf) += value;
            else
                (pr->is_plf() ? out.derivative_plf : out.derivative_non_plf) +=
                    value;
        }
    }
    return out;
}

double tvr(const Snapshot& snapshot, const PriceMap& prices) {
    double total = 0.0;
    for (const auto& [token, cols] : snapshot.held) {
        const Token* t = snapshot.find_token(token);
        if (!t) fail_validation("held table references undeclared token '" + token + "'");
        if (!t->is_plain()) continue;
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols) {
            (void)proto;
            total += p * qty;
        }
    }
    return total;
}

double adjusted_tvl(const Snapshot& snapshot, const PriceMap& prices,
                    const std::vector<std::string>& excluded_protocols) {
    std::set<std::string> excluded;
    for (const std::string& id : excluded_protocols) {
        if (!snapshot.find_protocol(id))
            fail_validation("exclusion list names unknown protocol '" + id + "'");
        excluded.insert(id);
    }
    double total = 0.0;
    for (const auto& [token, cols] : snapshot.staked) {
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols)
            if (!excluded.count(proto)) total += p * qty;
    }
    return total;
}

double money_multiplier(double tvl, double tvr) {
    if (tvr == 0.0)
        fail_domain("money multiplier undefined: no redeemable value (tvr = 0)");
    return tvl / tvr;
}

std::map<std::string, ProtocolMetrics> protocol_ratios(const Snapshot& snapshot,
                                                       const PriceMap& prices) {
    std::map<std::string, ProtocolMetrics> out;
    for (const Protocol& p : snapshot.protocols) out[p.id] = ProtocolMetrics{};
    for (const auto& [token, cols] : snapshot.staked) {
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols) out[proto].tvl += p * qty;
    }
    for (const auto& [token, cols] : snapshot.held) {
        const Token* t = snapshot.find_token(token);
        if (!t || !t->is_plain()) continue;
        const double p = price_of(prices, token);
        for (const auto& [proto, qty] : cols) out[proto].tvr += p * qty;
    }
    for (auto& [id, m] : out) {
        (void)id;
        if (m.tvr > 0.0) m.ratio = m.tvl / m.tvr;
    }
    return out;
}

MetricReport metric_report(const Snapshot& snapshot, const PriceMap& prices,
                           const std::vector<std::string>& excluded_protocols) {
    MetricReport report;
    report.tvl = tvl(snapshot, prices);
    report.tvr = tvr(snapshot, prices);
    report.tvl_adjusted = adjusted_tvl(snapshot, prices, excluded_protocols);
    if (report.tvr > 0.0) report.multiplier = report.tvl / report.tvr;
    report.decomposition = tvl_decomposition(snapshot, prices);
    report.per_protocol = protocol_ratios(snapshot, prices);
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

std::string report_csv(const MetricReport& report) {
    std::string out =
        "tvl,tvr,tvl_adjusted,multiplier,plain_non_plf,plain_plf,"
        "derivative_non_plf,derivative_plf\n";
    out += fmt(report.tvl) + ',' + fmt(report.tvr) + ',' +
           fmt(report.tvl_adjusted) + ',' +
           (report.multiplier ? fmt(*report.multiplier) : std::string()) + ',' +
           fmt(report.decomposition.plain_non_plf) + ',' +
           fmt(report.decomposition.plain_plf) + ',' +
           fmt(report.decomposition.derivative_non_plf) + ',' +
           fmt(report.decomposition.derivative_plf) + '\n';
    return out;
}

std::string report_text(const MetricReport& report) {
    std::ostringstream out;
    char row[160];
    std::snprintf(row, sizeof row, "%-22s %16.2f\n", "tvl (USD)", report.tvl);
    out << row;
    std::snprintf(row, sizeof row, "%-22s %16.2f\n", "tvr (USD)", report.tvr);
    out << row;
    std::snprintf(row, sizeof row, "%-22s %16.2f\n", "tvl adjusted (USD)",
                  report.tvl_adjusted);
    out << row;
    if (report.multiplier)
        std::snprintf(row, sizeof row, "%-22s %16.3f\n", "money multiplier",
                      *report.multiplier);
    else
        std::snprintf(row, sizeof row, "%-22s %16s\n", "money multiplier",
                      "(undefined)");
    out << row;

    out << "decomposition (USD):\n";
    const Decomposition& d = report.decomposition;
    std::snprintf(row, sizeof row, "  %-20s %16.2f\n", "plain, non-lending",
                  d.plain_non_plf);
    out << row;
    std::snprintf(row, sizeof row, "  %-20s %16.2f\n", "plain, lending",
                  d.plain_plf);
    out << row;
    std::snprintf(row, sizeof row, "  %-20s %16.2f\n", "derivative, non-lending",
                  d.derivative_non_plf);
    out << row;
    std::snprintf(row, sizeof row, "  %-20s %16.2f\n", "derivative, lending",
                  d.derivative_plf);
    out << row;

    out << "per protocol:\n";
    std::snprintf(row, sizeof row, "  %-16s %14s %14s %10s\n", "protocol", "tvl",
                  "tvr", "ratio");
    out << row;
    for (const auto& [id, m] : report.per_protocol) {
        if (m.ratio)
            std::snprintf(row, sizeof row, "  %-16s %14.2f %14.2f %10.3f\n",
                          id.c_str(), m.tvl, m.tvr, *m.ratio);
        else
            std::snprintf(row, sizeof row, "  %-16s %14.2f %14.2f %10s\n",
                          id.c_str(), m.tvl, m.tvr, "-");
        out << row;
    }
    return out.str();
}

} // namespace defikit
