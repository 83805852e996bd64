#include "defikit/io.hpp"

#include "defikit/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>

namespace defikit {

namespace {

using nlohmann::json;

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string elem(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail_parse(path + ": expected an object");
}

void expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail_parse(path + ": expected an array");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            fail_parse(child(path, it.key()) + ": unknown key");
}

bool has(const json& obj, const std::string& key) { return obj.contains(key); }

const json& field(const json& obj, const std::string& path,
                  const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail_parse(child(path, key) + ": missing required field");
    return *it;
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key) {
    const json& j = field(obj, path, key);
    if (!j.is_string()) fail_parse(child(path, key) + ": expected a string");
    return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail_parse(path + ": expected a number");
    return j.get<double>();
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key) {
    return as_number(field(obj, path, key), child(path, key));
}

double get_number_or(const json& obj, const std::string& path,
                     const std::string& key, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return as_number(*it, child(path, key));
}

int get_int(const json& obj, const std::string& path, const std::string& key) {
    const json& j = field(obj, path, key);
    if (!j.is_number_integer())
        fail_parse(child(path, key) + ": expected an integer");
    return j.get<int>();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail_parse(std::string("invalid JSON: ") + e.what());
    }
}

std::vector<BasketEntry> parse_basket(const json& j, const std::string& path) {
    expect_array(j, path);
    std::vector<BasketEntry> basket;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string epath = elem(path, i);
        expect_object(j[i], epath);
        check_keys(j[i], epath, {"token", "quantity"});
        BasketEntry entry;
        entry.token = get_string(j[i], epath, "token");
        entry.quantity = get_number(j[i], epath, "quantity");
        basket.push_back(std::move(entry));
    }
    return basket;
}

Token parse_token(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path, {"id", "kind", "supply", "peg", "fluctuation", "basket"});
    Token t;
    t.id = get_string(j, path, "id");
    try {
        t.kind = token_kind_from_string(get_string(j, path, "kind"));
    } catch (const error& e) {
        fail_parse(child(path, "kind") + ": " + e.what());
    }
    t.circulating_supply = get_number_or(j, path, "supply", 0.0);
    t.peg_price = get_number_or(j, path, "peg", 1.0);
    t.fluctuation = get_number_or(j, path, "fluctuation", 0.0);
    if (has(j, "basket")) t.basket = parse_basket(j["basket"], child(path, "basket"));
    return t;
}

Protocol parse_protocol(const json& j, const std::string& path) {
    expect_object(j, path);
    check_keys(j, path,
               {"id", "kind", "close_factor", "liquidation_bonus",
                "liquidation_thresholds"});
    Protocol p;
    p.id = get_string(j, path, "id");
    try {
        p.kind = protocol_kind_from_string(get_string(j, path, "kind"));
    } catch (const error& e) {
        fail_parse(child(path, "kind") + ": " + e.what());
    }
    p.close_factor = get_number_or(j, path, "close_factor", 1.0);
    p.liquidation_bonus = get_number_or(j, path, "liquidation_bonus", 0.0);
    if (has(j, "liquidation_thresholds")) {
        const std::string tpath = child(path, "liquidation_thresholds");
        const json& th = j["liquidation_thresholds"];
        expect_object(th, tpath);
        for (auto it = th.begin(); it != th.end(); ++it)
            p.liquidation_thresholds[it.key()] =
                as_number(it.value(), child(tpath, it.key()));
    }
    return p;
}

std::vector<Holding> parse_holdings(const json& j, const std::string& path) {
    expect_array(j, path);
    std::vector<Holding> holdings;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string epath = elem(path, i);
        expect_object(j[i], epath);
        check_keys(j[i], epath, {"token", "quantity"});
        Holding h;
        h.token = get_string(j[i], epath, "token");
        h.quantity = get_number(j[i], epath, "quantity");
        holdings.push_back(std::move(h));
    }
    return holdings;
}

} // namespace

Snapshot parse_snapshot_text(const std::string& text) {
    const json root = parse_json(text);
    expect_object(root, "snapshot");
    check_keys(root, "",
               {"schema_version", "tokens", "protocols", "plain_prices", "stakes",
                "positions"});

    Snapshot s;
    s.schema_version = get_int(root, "", "schema_version");

    if (has(root, "tokens")) {
        expect_array(root["tokens"], "tokens");
        for (std::size_t i = 0; i < root["tokens"].size(); ++i)
            s.tokens.push_back(parse_token(root["tokens"][i], elem("tokens", i)));
    }
    if (has(root, "protocols")) {
        expect_array(root["protocols"], "protocols");
        for (std::size_t i = 0; i < root["protocols"].size(); ++i)
            s.protocols.push_back(
                parse_protocol(root["protocols"][i], elem("protocols", i)));
    }

    if (has(root, "plain_prices")) {
        expect_object(root["plain_prices"], "plain_prices");
        for (auto it = root["plain_prices"].begin();
             it != root["plain_prices"].end(); ++it) {
            const std::string ppath = child("plain_prices", it.key());
            Token* t = s.find_token(it.key());
            if (!t) fail_parse(ppath + ": price for undeclared token");
            if (!t->is_plain())
                fail_parse(ppath + ": only plain tokens take exogenous prices");
            t->exogenous_price = as_number(it.value(), ppath);
        }
    }
    for (const Token& t : s.tokens)
        if (t.is_plain() && !(has(root, "plain_prices") &&
                              root["plain_prices"].contains(t.id)))
            fail_parse("plain_prices: missing price for plain token '" + t.id +
                       "'");

    if (has(root, "stakes")) {
        expect_array(root["stakes"], "stakes");
        for (std::size_t i = 0; i < root["stakes"].size(); ++i) {
            const std::string epath = elem("stakes", i);
            const json& row = root["stakes"][i];
            expect_object(row, epath);
            check_keys(row, epath, {"protocol", "token", "quantity"});
            const std::string proto = get_string(row, epath, "protocol");
            const std::string token = get_string(row, epath, "token");
            s.staked[token][proto] += get_number(row, epath, "quantity");
        }
    }

    if (has(root, "positions")) {
        expect_array(root["positions"], "positions");
        for (std::size_t i = 0; i < root["positions"].size(); ++i) {
            const std::string epath = elem("positions", i);
            const json& row = root["positions"][i];
            expect_object(row, epath);
            check_keys(row, epath, {"account", "protocol", "collateral", "debt"});
            Position pos;
            pos.account = get_string(row, epath, "account");
            pos.protocol = get_string(row, epath, "protocol");
            if (has(row, "collateral"))
                pos.collateral =
                    parse_holdings(row["collateral"], child(epath, "collateral"));
            if (has(row, "debt"))
                pos.debt = parse_holdings(row["debt"], child(epath, "debt"));
            s.positions.push_back(std::move(pos));
        }
    }

    validate(s);
    return s;
}

Snapshot load_snapshot(const std::string& path) {
    return parse_snapshot_text(read_text_file(path));
}

std::string snapshot_to_text(const Snapshot& snapshot) {
    json root;
    root["schema_version"] = snapshot.schema_version;

    json tokens = json::array();
    json plain_prices = json::object();
    for (const Token& t : snapshot.tokens) {
        json tok;
        tok["id"] = t.id;
        tok["kind"] = to_string(t.kind);
        if (!t.is_plain()) {
            tok["supply"] = t.circulating_supply;
            json basket = json::array();
            for (const BasketEntry& e : t.basket)
                basket.push_back({{"token", e.token}, {"quantity", e.quantity}});
            tok["basket"] = basket;
        }
        if (t.is_stablecoin()) tok["peg"] = t.peg_price;
        if (t.fluctuation != 0.0) tok["fluctuation"] = t.fluctuation;
        if (t.is_plain()) plain_prices[t.id] = t.exogenous_price;
        tokens.push_back(std::move(tok));
    }
    root["tokens"] = std::move(tokens);
    root["plain_prices"] = std::move(plain_prices);

    json protocols = json::array();
    for (const Protocol& p : snapshot.protocols) {
        json proto;
        proto["id"] = p.id;
        proto["kind"] = to_string(p.kind);
        if (p.is_plf()) {
            proto["close_factor"] = p.close_factor;
            proto["liquidation_bonus"] = p.liquidation_bonus;
            if (!p.liquidation_thresholds.empty()) {
                json th = json::object();
                for (const auto& [token, alpha] : p.liquidation_thresholds)
                    th[token] = alpha;
                proto["liquidation_thresholds"] = std::move(th);
            }
        }
        protocols.push_back(std::move(proto));
    }
    root["protocols"] = std::move(protocols);

    json stakes = json::array();
    for (const auto& [token, cols] : snapshot.staked)
        for (const auto& [proto, qty] : cols)
            stakes.push_back(
                {{"protocol", proto}, {"token", token}, {"quantity", qty}});
    root["stakes"] = std::move(stakes);

    json positions = json::array();
    for (const Position& pos : snapshot.positions) {
        json row;
        row["account"] = pos.account;
        row["protocol"] = pos.protocol;
        json collateral = json::array();
        for (const Holding& h : pos.collateral)
            collateral.push_back({{"token", h.token}, {"quantity", h.quantity}});
        row["collateral"] = std::move(collateral);
        json debt = json::array();
        for (const Holding& h : pos.debt)
            debt.push_back({{"token", h.token}, {"quantity", h.quantity}});
        row["debt"] = std::move(debt);
        positions.push_back(std::move(row));
    }
    root["positions"] = std::move(positions);

    return root.dump(2) + "\n";
}

void save_snapshot(const Snapshot& snapshot, const std::string& path) {
    write_text_file(path, snapshot_to_text(snapshot));
}

ShockScenario parse_scenario_text(const std::string& text) {
    const json root = parse_json(text);
    expect_object(root, "scenario");
    check_keys(root, "",
               {"schema_version", "shock_token", "grid", "gas", "max_rounds",
                "close_factor_overrides", "bonus_override"});
    if (get_int(root, "", "schema_version") != 1)
        fail_parse("schema_version: unsupported value");

    ShockScenario sc;
    sc.shock_token = get_string(root, "", "shock_token");

    const json& grid = field(root, "", "grid");
    if (grid.is_array()) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            sc.grid.push_back(as_number(grid[i], elem("grid", i)));
    } else if (grid.is_object()) {
        check_keys(grid, "grid", {"start", "stop", "count"});
        const double start = get_number(grid, "grid", "start");
        const double stop = get_number(grid, "grid", "stop");
        const int count = get_int(grid, "grid", "count");
        if (count < 1) fail_parse("grid.count: must be at least 1");
        if (stop < start) fail_parse("grid.stop: must be >= grid.start");
        for (int i = 0; i < count; ++i)
            sc.grid.push_back(count == 1 ? start
                                         : start + (stop - start) * i / (count - 1));
    } else {
        fail_parse("grid: expected an array of fractions or {start, stop, count}");
    }

    if (has(root, "gas")) {
        const json& gas = root["gas"];
        expect_object(gas, "gas");
        check_keys(gas, "gas", {"gas_limit", "gas_price_usd", "scale"});
        sc.gas.gas_limit = get_number_or(gas, "gas", "gas_limit", sc.gas.gas_limit);
        sc.gas.gas_price_usd =
            get_number_or(gas, "gas", "gas_price_usd", sc.gas.gas_price_usd);
        sc.gas.scale = get_number_or(gas, "gas", "scale", sc.gas.scale);
    }
    if (has(root, "max_rounds")) sc.max_rounds = get_int(root, "", "max_rounds");

    if (has(root, "close_factor_overrides")) {
        const json& ov = root["close_factor_overrides"];
        expect_object(ov, "close_factor_overrides");
        for (auto it = ov.begin(); it != ov.end(); ++it)
            sc.close_factor_overrides[it.key()] =
                as_number(it.value(), child("close_factor_overrides", it.key()));
    }
    if (has(root, "bonus_override"))
        sc.bonus_override = get_number(root, "", "bonus_override");
    return sc;
}

ShockScenario load_scenario(const std::string& path) {
    return parse_scenario_text(read_text_file(path));
}

CategoryLists parse_category_lists_text(const std::string& text) {
    const json root = parse_json(text);
    expect_object(root, "category lists");
    check_keys(root, "",
               {"schema_version", "native", "governance",
                "non_crypto_stablecoins"});
    if (get_int(root, "", "schema_version") != 1)
        fail_parse("schema_version: unsupported value");

    CategoryLists lists;
    auto read_list = [&](const char* key, std::set<std::string>& out) {
        if (!has(root, key)) return;
        expect_array(root[key], key);
        for (std::size_t i = 0; i < root[key].size(); ++i) {
            if (!root[key][i].is_string())
                fail_parse(elem(key, i) + ": expected a string");
            out.insert(root[key][i].get<std::string>());
        }
    };
    read_list("native", lists.native);
    read_list("governance", lists.governance);
    read_list("non_crypto_stablecoins", lists.non_crypto_stablecoins);
    return lists;
}

CategoryLists load_category_lists(const std::string& path) {
    return parse_category_lists_text(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_parse("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_parse("cannot write file '" + path + "'");
    out << content;
    if (!out) fail_parse("failed while writing '" + path + "'");
}

} // namespace defikit
