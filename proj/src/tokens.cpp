#include "defikit/tokens.hpp"

#include "defikit/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace defikit {

std::string to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Plain: return "plain";
    case TokenKind::Derivative: return "derivative";
    case TokenKind::CdpStablecoin: return "cdp_stablecoin";
    }
    fail_validation("unrepresentable token kind");
}

TokenKind token_kind_from_string(const std::string& text) {
    if (text == "plain") return TokenKind::Plain;
    if (text == "derivative") return TokenKind::Derivative;
    if (text == "cdp_stablecoin") return TokenKind::CdpStablecoin;
    fail_parse("unknown token kind '" + text + "'");
}

int classify_from_lists(const std::string& token_id, const CategoryLists& lists) {
    return (lists.native.count(token_id) || lists.governance.count(token_id) ||
            lists.non_crypto_stablecoins.count(token_id))
               ? 1
               : 0;
}

double basket_value(const Token& token, const PriceMap& prices) {
    double total = 0.0;
    for (const BasketEntry& entry : token.basket) {
        auto it = prices.find(entry.token);
        if (it == prices.end())
            fail_domain("no resolved price for underlying '" + entry.token +
                        "' of '" + token.id + "'");
        total += it->second * entry.quantity;
    }
    return total;
}

std::optional<double> collateralization(const Token& token, const PriceMap& prices) {
    if (token.circulating_supply <= 0.0) return std::nullopt;
    return basket_value(token, prices) / token.circulating_supply;
}

double derivative_price(const Token& token, const PriceMap& underlying_prices) {
    if (token.is_plain())
        fail_domain("token '" + token.id + "' is plain; its price is exogenous");
    std::optional<double> gamma = collateralization(token, underlying_prices);
    if (!gamma)
        fail_domain("token '" + token.id +
                    "' has zero circulating supply; ratio is undefined");
    double core = *gamma;
    if (token.is_stablecoin() && core >= token.peg_price) core = token.peg_price;
    return core + token.fluctuation;
}

PegStatus peg_status(const Token& token, const PriceMap& resolved_prices) {
    if (!token.is_stablecoin())
        fail_domain("peg status is defined only for CDP stablecoins; '" +
                    token.id + "' is " + to_string(token.kind));
    std::optional<double> gamma = collateralization(token, resolved_prices);
    PegStatus status;
    if (!gamma) return status; // nothing outstanding: treat as pegged
    if (*gamma >= token.peg_price) return status;
    status.pegged = false;
    status.ratio = *gamma / token.peg_price;
    return status;
}

PriceMap resolve_prices(const std::vector<Token>& tokens) {
    std::map<std::string, const Token*> by_id;
    for (const Token& t : tokens) {
        if (!by_id.emplace(t.id, &t).second)
            fail_validation("duplicate token id '" + t.id + "'");
    }

    // Dependency edges: derivative -> each basket token. Kahn's algorithm
    // with a lexicographically ordered ready set gives a deterministic order.
    std::map<std::string, int> pending;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const Token& t : tokens) {
        pending[t.id] += 0;
        if (t.is_plain()) continue;
        for (const BasketEntry& entry : t.basket) {
            if (!by_id.count(entry.token))
                fail_domain("basket of '" + t.id + "' names unknown token '" +
                            entry.token + "'");
            ++pending[t.id];
            dependents[entry.token].push_back(t.id);
        }
    }

    std::set<std::string> ready;
    for (const auto& [id, count] : pending)
        if (count == 0) ready.insert(id);

    PriceMap prices;
    std::size_t resolved = 0;
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        const Token& t = *by_id.at(id);
        if (t.is_plain()) {
            prices[id] = t.exogenous_price;
        } else if (t.circulating_supply <= 0.0 && t.is_stablecoin()) {
            // Nothing outstanding to honor: the coin sits at its peg.
            prices[id] = t.peg_price + t.fluctuation;
        } else {
            prices[id] = derivative_price(t, prices);
        }
        ++resolved;
        auto dep = dependents.find(id);
        if (dep != dependents.end()) {
            for (const std::string& d : dep->second)
                if (--pending[d] == 0) ready.insert(d);
        }
    }

    if (resolved != tokens.size()) {
        std::string stuck;
        for (const auto& [id, count] : pending)
            if (count > 0) stuck += (stuck.empty() ? "" : ", ") + id;
        fail_domain("wrapping graph contains a cycle involving: " + stuck);
    }
    return prices;
}

} // namespace defikit
