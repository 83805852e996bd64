#pragma once

#include "defikit/snapshot.hpp"
#include "defikit/tokens.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defikit {

// Four-way split of locked value by token class (plain vs derivative) and
// venue class (lending venue vs not).
struct Decomposition {
    double plain_non_plf = 0.0;
    double plain_plf = 0.0;
    double derivative_non_plf = 0.0;
    double derivative_plf = 0.0;

    double total() const {
        return plain_non_plf + plain_plf + derivative_non_plf + derivative_plf;
    }
};

struct ProtocolMetrics {
    double tvl = 0.0;
    double tvr = 0.0;
    // tvl/tvr; absent when the protocol holds no redeemable plain value.
    std::optional<double> ratio;
};

struct MetricReport {
    double tvl = 0.0;
    double tvr = 0.0;
    double tvl_adjusted = 0.0;
    // tvl/tvr; absent when tvr is zero.
    std::optional<double> multiplier;
    Decomposition decomposition;
    std::map<std::string, ProtocolMetrics> per_protocol;
};

// Total value locked: every staked quantity times its token price.
double tvl(const Snapshot& snapshot, const PriceMap& prices);

// Same sum, split by (plain?, lending venue?).
Decomposition tvl_decomposition(const Snapshot& snapshot, const PriceMap& prices);

// Total value redeemable: plain tokens only, counted from the held matrix
// (staked minus lent-out quantities).
double tvr(const Snapshot& snapshot, const PriceMap& prices);

// TVL with whole protocol columns removed, mirroring how aggregator sites
// exclude double-counting categories. Unknown protocol ids are rejected.
double adjusted_tvl(const Snapshot& snapshot, const PriceMap& prices,
                    const std::vector<std::string>& excluded_protocols);

// M = tvl/tvr. A zero tvr has no meaningful multiplier and is rejected.
double money_multiplier(double tvl, double tvr);

// Per-protocol tvl, tvr and their ratio (absent where tvr is zero).
std::map<std::string, ProtocolMetrics> protocol_ratios(const Snapshot& snapshot,
                                                       const PriceMap& prices);

// Everything above in one pass, plus the adjusted total for the given
// exclusion list.
MetricReport metric_report(const Snapshot& snapshot, const PriceMap& prices,
                           const std::vector<std::string>& excluded_protocols = {});

// Header plus a single row: tvl, tvr, tvl_adjusted, multiplier (empty when
// absent), and the four decomposition components.
std::string report_csv(const MetricReport& report);

// Human-readable block including the per-protocol breakdown.
std::string report_text(const MetricReport& report);

} // namespace defikit
