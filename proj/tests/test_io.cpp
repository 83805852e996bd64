#include <string>

#include "defikit/errors.hpp"
#include "defikit/io.hpp"
#include "defikit/metrics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace defikit;

namespace {

void expect_parse_error(const std::string& text, const std::string& needle) {
    try {
        parse_snapshot_text(text);
        FAIL_CHECK("expected a parse error for: " << needle);
    } catch (const error& e) {
        CHECK(e.kind() == errc::parse);
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

void expect_scenario_error(const std::string& text, const std::string& needle) {
    try {
        parse_scenario_text(text);
        FAIL_CHECK("expected a parse error for: " << needle);
    } catch (const error& e) {
        CHECK(e.kind() == errc::parse);
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("the wrap-chain snapshot file loads with its documented totals") {
    Snapshot s = load_snapshot(testutil::fixture_path("chain6.json"));
    CHECK(s.tokens.size() == 7);
    CHECK(s.protocols.size() == 6);
    CHECK(s.positions.size() == 1);
    CHECK(s.staked.at("DAI").at("aave") == 571.0);

    PriceMap prices = s.resolve();
    CHECK(tvl(s, prices) == doctest::Approx(4713.0));
    CHECK(tvr(s, prices) == doctest::Approx(1000.0));
}

TEST_CASE("serialization round-trips byte for byte") {
    Snapshot s = load_snapshot(testutil::fixture_path("chain6.json"));
    std::string once = snapshot_to_text(s);
    Snapshot reparsed = parse_snapshot_text(once);
    CHECK(snapshot_to_text(reparsed) == once);

    const std::string tmp = "/tmp/defikit_io_roundtrip.json";
    save_snapshot(s, tmp);
    Snapshot reloaded = load_snapshot(tmp);
    CHECK(snapshot_to_text(reloaded) == once);
}

TEST_CASE("unknown keys are rejected with their field path") {
    expect_parse_error(R"({"schema_version": 1, "tokens": [{"pegg": 1}]})",
                       "tokens[0].pegg: unknown key");
    expect_parse_error(R"({"schema_version": 1, "tokenz": []})",
                       "tokenz: unknown key");
    expect_parse_error(
        R"({"schema_version": 1, "stakes": [{"amount": 1}]})",
        "stakes[0].amount: unknown key");
    expect_parse_error(
        R"({"schema_version": 1, "positions": [{"owner": "x"}]})",
        "positions[0].owner: unknown key");
    expect_parse_error(
        R"({"schema_version": 1,
            "tokens": [{"id": "S", "kind": "derivative",
                        "basket": [{"token": "ETH", "amount": 1}]}]})",
        "tokens[0].basket[0].amount: unknown key");
}

TEST_CASE("missing required fields are named") {
    expect_parse_error("{}", "schema_version: missing required field");
    expect_parse_error(R"({"schema_version": 1, "tokens": [{"kind": "plain"}]})",
                       "tokens[0].id: missing required field");
    expect_parse_error(
        R"({"schema_version": 1,
            "stakes": [{"protocol": "p", "token": "t"}]})",
        "stakes[0].quantity: missing required field");
    expect_parse_error(R"({"schema_version": 1, "tokens": [{"id": "E"}]})",
                       "tokens[0].kind: missing required field");
}

TEST_CASE("kind strings outside the taxonomy fail with their path") {
    expect_parse_error(
        R"({"schema_version": 1, "tokens": [{"id": "E", "kind": "plains"}]})",
        "tokens[0].kind");
    expect_parse_error(
        R"({"schema_version": 1, "protocols": [{"id": "p", "kind": "amm"}]})",
        "protocols[0].kind");
}

TEST_CASE("exogenous prices must cover exactly the plain tokens") {
    expect_parse_error(
        R"({"schema_version": 1, "tokens": [{"id": "ETH", "kind": "plain"}]})",
        "plain_prices: missing price for plain token 'ETH'");
    expect_parse_error(
        R"({"schema_version": 1, "plain_prices": {"ETH": 1000}})",
        "plain_prices.ETH: price for undeclared token");
    expect_parse_error(
        R"({"schema_version": 1,
            "tokens": [{"id": "sE", "kind": "derivative"}],
            "plain_prices": {"sE": 5}})",
        "plain_prices.sE: only plain tokens take exogenous prices");
}

TEST_CASE("malformed json and missing files are parse errors") {
    expect_parse_error("{nope", "invalid JSON");
    expect_parse_error("[]", "snapshot: expected an object");
    try {
        load_snapshot("/nonexistent/never.json");
        FAIL_CHECK("expected a parse error");
    } catch (const error& e) {
        CHECK(e.kind() == errc::parse);
        CHECK(std::string(e.what()).find("cannot read file") !=
              std::string::npos);
    }
}

TEST_CASE("the default scenario file expands its grid to 51 points") {
    ShockScenario sc = load_scenario(testutil::fixture_path("scenario_default.json"));
    CHECK(sc.shock_token == "ETH");
    REQUIRE(sc.grid.size() == 51);
    CHECK(sc.grid.front() == 0.0);
    CHECK(sc.grid.back() == doctest::Approx(0.5));
    CHECK(sc.grid[13] == doctest::Approx(0.13));
    CHECK(sc.gas.usd() == doctest::Approx(242.5));
    CHECK(sc.max_rounds == 100);
    CHECK(sc.close_factor_overrides.empty());
    CHECK_FALSE(sc.bonus_override.has_value());
}

TEST_CASE("scenario grids accept explicit arrays and overrides") {
    ShockScenario sc = parse_scenario_text(
        R"({"schema_version": 1, "shock_token": "ETH",
            "grid": [0.0, 0.25, 0.5],
            "gas": {"scale": 2},
            "close_factor_overrides": {"makerdao": 0.5},
            "bonus_override": 0.1})");
    CHECK(sc.grid == std::vector<double>{0.0, 0.25, 0.5});
    CHECK(sc.gas.gas_limit == 500000.0);  // defaults survive partial gas
    CHECK(sc.gas.usd() == doctest::Approx(485.0));
    CHECK(sc.close_factor_overrides.at("makerdao") == 0.5);
    REQUIRE(sc.bonus_override.has_value());
    CHECK(*sc.bonus_override == 0.1);

    ShockScenario single = parse_scenario_text(
        R"({"schema_version": 1, "shock_token": "E",
            "grid": {"start": 0.2, "stop": 0.9, "count": 1}})");
    CHECK(single.grid == std::vector<double>{0.2});
}

TEST_CASE("scenario shape errors are specific") {
    expect_scenario_error(
        R"({"schema_version": 2, "shock_token": "E", "grid": [0]})",
        "schema_version: unsupported value");
    expect_scenario_error(
        R"({"schema_version": 1, "shock_token": "E",
            "grid": {"start": 0, "stop": 1, "count": 0}})",
        "grid.count: must be at least 1");
    expect_scenario_error(
        R"({"schema_version": 1, "shock_token": "E",
            "grid": {"start": 0.5, "stop": 0.1, "count": 3}})",
        "grid.stop: must be >= grid.start");
    expect_scenario_error(
        R"({"schema_version": 1, "shock_token": "E", "grid": "all"})",
        "grid: expected an array");
    expect_scenario_error(
        R"({"schema_version": 1, "shock_token": "E", "grid": [0],
            "gridd": []})",
        "gridd: unknown key");
    expect_scenario_error(R"({"schema_version": 1, "grid": [0]})",
                          "shock_token: missing required field");
}

TEST_CASE("category lists load into membership sets") {
    CategoryLists lists =
        load_category_lists(testutil::fixture_path("categories.json"));
    CHECK(lists.native.count("ETH") == 1);
    CHECK(lists.governance.count("UNI") == 1);
    CHECK(lists.non_crypto_stablecoins.count("USDT") == 1);
    CHECK(classify_from_lists("ETH", lists) == 1);
    CHECK(classify_from_lists("stETH", lists) == 0);

    try {
        parse_category_lists_text(
            R"({"schema_version": 1, "native": [1]})");
        FAIL_CHECK("expected a parse error");
    } catch (const error& e) {
        CHECK(e.kind() == errc::parse);
        CHECK(std::string(e.what()).find("native[0]") != std::string::npos);
    }
    try {
        parse_category_lists_text(R"({"schema_version": 1, "stables": []})");
        FAIL_CHECK("expected a parse error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("stables: unknown key") !=
              std::string::npos);
    }
}

TEST_CASE("text file helpers round-trip and report failures") {
    const std::string tmp = "/tmp/defikit_io_text.txt";
    write_text_file(tmp, "line one\nline two\n");
    CHECK(read_text_file(tmp) == "line one\nline two\n");
    CHECK_THROWS_AS(read_text_file("/nonexistent/never.txt"), error);
    CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file.txt", "x"), error);
}

} // TEST_SUITE
