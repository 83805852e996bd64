#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace defikit {

// Taxonomy: a token is either a plain asset with an exogenous market price,
// a derivative redeemable for an underlying basket, or a CDP stablecoin — a
// derivative that additionally carries a peg price it cannot exceed.
enum class TokenKind {
    Plain,
    Derivative,
    CdpStablecoin,
};

std::string to_string(TokenKind kind);
TokenKind token_kind_from_string(const std::string& text);

// One underlying holding backing a derivative. `quantity` is the total amount
// of the underlying token backing the derivative's entire circulating supply.
struct BasketEntry {
    std::string token;
    double quantity = 0.0;
};

struct Token {
    std::string id;
    TokenKind kind = TokenKind::Plain;
    double exogenous_price = 0.0;    // Plain only: USD per unit.
    double peg_price = 1.0;          // CdpStablecoin only: target price c.
    double circulating_supply = 0.0; // Derivative/CdpStablecoin: units issued.
    double fluctuation = 0.0;        // Exogenous price offset, default 0.
    std::vector<BasketEntry> basket; // Derivative/CdpStablecoin: backing.

    bool is_plain() const { return kind == TokenKind::Plain; }
    bool is_stablecoin() const { return kind == TokenKind::CdpStablecoin; }
};

using PriceMap = std::map<std::string, double>;

// Membership lists used to flag plain tokens: native chain assets,
// governance tokens, and stablecoins not backed by crypto collateral.
struct CategoryLists {
    std::set<std::string> native;
    std::set<std::string> governance;
    std::set<std::string> non_crypto_stablecoins;
};

// Returns 1 iff the id appears in any of the plain-category lists, else 0.
int classify_from_lists(const std::string& token_id, const CategoryLists& lists);

// Total USD value of the token's underlying basket at the given prices.
// Throws a domain error if a basket entry's price is missing.
double basket_value(const Token& token, const PriceMap& prices);

// Collateralization ratio Γ = basket value / circulating supply.
// Empty when supply is zero (no outstanding claims to collateralize).
std::optional<double> collateralization(const Token& token, const PriceMap& prices);

// Endogenous price of a derivative: Γ capped at the peg for CDP stablecoins
// (they never trade above the peg; below it they float at Γ), plus the
// exogenous fluctuation term. Plain tokens and zero-supply derivatives are
// domain errors.
double derivative_price(const Token& token, const PriceMap& underlying_prices);

struct PegStatus {
    bool pegged = true;
    // Γ / peg for a depegged coin (in [0,1)); 1.0 when pegged.
    double ratio = 1.0;
};

// Peg check for a CDP stablecoin at resolved prices. Zero supply counts as
// pegged (nothing outstanding to honor). Non-stablecoin input is a domain
// error.
PegStatus peg_status(const Token& token, const PriceMap& resolved_prices);

// Prices every token: plain tokens from their exogenous price, derivatives by
// walking the wrapping graph in dependency order (lexicographic id order
// breaks ties, so output is deterministic). A zero-supply CDP stablecoin
// prices at its peg plus fluctuation; a zero-supply plain-backed derivative
// is a domain error, as is a cycle in the wrapping graph or a basket entry
// that names an unknown token.
PriceMap resolve_prices(const std::vector<Token>& tokens);

} // namespace defikit
