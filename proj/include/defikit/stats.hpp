#pragma once

// Rank correlation and price-series utilities.
//
// The centrepiece is Spearman's rank correlation: both inputs are converted
// to ranks (ties receive the average of the positions they straddle) and the
// Pearson coefficient of the ranks is reported together with a two-sided
// p-value from the t approximation
//
//     t = rho * sqrt((n - 2) / (1 - rho^2)),   t ~ Student-t with n-2 dof.
//
// Around that sit a tiny CSV table format for dated price series (empty
// cells mean "missing"; pairs are correlated over the rows where both sides
// are present), log-return transformation, an all-pairs correlation table
// with significance stars, and a seeded random-walk generator for producing
// demo data deterministically.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace defikit {

// Ranks 1..n with ties averaged: {10, 20, 20, 30} -> {1, 2.5, 2.5, 4}.
std::vector<double> average_ranks(const std::vector<double>& values);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
};

// Two-sided p-value of a Spearman coefficient under the t approximation.
// Requires n >= 3 (domain error otherwise); |rho| == 1 yields 0.
double spearman_p_value(double rho, std::size_t n);

// Rank correlation of two equally long series. Errors: validation if the
// lengths differ, domain if fewer than three pairs or either series is
// constant (the coefficient is undefined for zero rank variance).
SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y);

// Significance stars: "***" p < 0.01, "**" p < 0.05, "*" p < 0.10, else "".
std::string significance_stars(double p_value);

// log(p[i+1] / p[i]) for consecutive prices; all prices must be positive.
std::vector<double> log_returns(const std::vector<double>& prices);

// A dated table of named series. columns[s][r] is series s at row r; an
// empty optional is a missing observation.
struct SeriesTable {
    std::vector<std::string> dates;
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> columns;

    std::size_t rows() const { return dates.size(); }
};

// CSV with header "date,<name>,<name>,..."; empty cells are missing values.
SeriesTable parse_series_csv(const std::string& text);
SeriesTable load_series_csv(const std::string& path);
std::string series_csv(const SeriesTable& table);

struct CorrelationCell {
    enum class State { ok, insufficient, undefined };
    State state = State::ok;
    double rho = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;  // overlapping observations used for this pair
};

struct CorrelationTable {
    std::vector<std::string> names;
    std::vector<std::vector<CorrelationCell>> cells;  // square, symmetric
    bool on_log_returns = false;
};

// All-pairs rank correlation. With on_log_returns the series are first
// transformed to log returns (a return exists only where two consecutive
// observations do). Pairs overlapping in fewer than three rows come back as
// insufficient; constant series come back as undefined.
CorrelationTable correlate_table(const SeriesTable& table,
                                 bool on_log_returns);

// Matrix rendering with stars and a legend line.
std::string correlation_text(const CorrelationTable& table);

// One row per unordered pair:
// "series_a,series_b,rho,p_value,n,significance".
std::string correlation_csv(const CorrelationTable& table);

// Seeded geometric random walks (daily steps, 2% volatility) starting at
// 100, dated from 2021-01-01. Same seed, same table.
SeriesTable gen_series(const std::vector<std::string>& names,
                       std::size_t rows, std::uint64_t seed);

} // namespace defikit
