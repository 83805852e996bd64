#include "defikit/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "defikit/errors.hpp"
#include "defikit/io.hpp"

namespace defikit {

std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman_p_value(double rho, std::size_t n) {
    if (n < 3) {
        fail_domain("p-value needs at least 3 pairs, got " + std::to_string(n));
    }
    double denom = 1.0 - rho * rho;
    if (denom <= 0.0) return 0.0;
    double t = rho * std::sqrt(static_cast<double>(n - 2) / denom);
    boost::math::students_t_distribution<double> dist(static_cast<double>(n - 2));
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y) {
    if (x.size() != y.size()) {
        fail_validation("series lengths differ: " + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()));
    }
    const std::size_t n = x.size();
    if (n < 3) {
        fail_domain("insufficient data: rank correlation needs at least 3 "
                    "pairs, got " + std::to_string(n));
    }
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    // Tie-averaged ranks always sum to n(n+1)/2, so the mean is (n+1)/2.
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mean;
        double dy = ry[i] - mean;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        fail_domain("undefined correlation: a series is constant");
    }
    double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return {rho, spearman_p_value(rho, n), n};
}

std::string significance_stars(double p_value) {
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

std::vector<double> log_returns(const std::vector<double>& prices) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (prices[i] <= 0.0 || prices[i + 1] <= 0.0) {
            fail_domain("log returns need positive prices");
        }
        out.push_back(std::log(prices[i + 1] / prices[i]));
    }
    return out;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_cell(const std::string& text, std::size_t line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size()) {
        fail_parse("line " + std::to_string(line_no) + ": not a number: '" +
                   text + "'");
    }
    return value;
}

} // namespace

SeriesTable parse_series_csv(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) fail_parse("series table is empty");

    std::vector<std::string> header = split_fields(lines[0]);
    if (header[0] != "date") {
        fail_parse("line 1: first column must be 'date', got '" + header[0] +
                   "'");
    }
    if (header.size() < 2) fail_parse("line 1: header names no series");

    SeriesTable table;
    table.names.assign(header.begin() + 1, header.end());
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        if (table.names[i].empty()) fail_parse("line 1: empty series name");
        for (std::size_t j = i + 1; j < table.names.size(); ++j) {
            if (table.names[i] == table.names[j]) {
                fail_validation("duplicate series name '" + table.names[i] +
                                "'");
            }
        }
    }
    table.columns.assign(table.names.size(), {});

    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::vector<std::string> fields = split_fields(lines[li]);
        if (fields.size() != header.size()) {
            fail_parse("line " + std::to_string(li + 1) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
        }
        table.dates.push_back(fields[0]);
        for (std::size_t s = 0; s < table.names.size(); ++s) {
            const std::string& cell = fields[s + 1];
            if (cell.empty()) {
                table.columns[s].push_back(std::nullopt);
            } else {
                table.columns[s].push_back(parse_cell(cell, li + 1));
            }
        }
    }
    return table;
}

SeriesTable load_series_csv(const std::string& path) {
    return parse_series_csv(read_text_file(path));
}

std::string series_csv(const SeriesTable& table) {
    std::string out = "date";
    for (const std::string& name : table.names) out += "," + name;
    out += "\n";
    char buf[64];
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out += table.dates[r];
        for (std::size_t s = 0; s < table.names.size(); ++s) {
            out += ",";
            if (table.columns[s][r]) {
                std::snprintf(buf, sizeof(buf), "%.10g", *table.columns[s][r]);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

CorrelationTable correlate_table(const SeriesTable& table,
                                 bool on_log_returns) {
    std::vector<std::vector<std::optional<double>>> cols = table.columns;
    if (on_log_returns) {
        for (std::size_t s = 0; s < cols.size(); ++s) {
            std::vector<std::optional<double>> returns;
            const auto& col = cols[s];
            for (std::size_t r = 0; r + 1 < col.size(); ++r) {
                if (col[r] && col[r + 1]) {
                    if (*col[r] <= 0.0 || *col[r + 1] <= 0.0) {
                        fail_domain("log returns need positive prices "
                                    "(series '" + table.names[s] + "')");
                    }
                    returns.emplace_back(std::log(*col[r + 1] / *col[r]));
                } else {
                    returns.emplace_back(std::nullopt);
                }
            }
            cols[s] = std::move(returns);
        }
    }

    const std::size_t k = table.names.size();
    CorrelationTable out;
    out.names = table.names;
    out.on_log_returns = on_log_returns;
    out.cells.assign(k, std::vector<CorrelationCell>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            CorrelationCell cell;
            std::vector<double> xs, ys;
            for (std::size_t r = 0; r < cols[i].size(); ++r) {
                if (cols[i][r] && cols[j][r]) {
                    xs.push_back(*cols[i][r]);
                    ys.push_back(*cols[j][r]);
                }
            }
            cell.n = xs.size();
            if (i == j) {
                cell.rho = 1.0;
                cell.p_value = 0.0;
            } else if (cell.n < 3) {
                cell.state = CorrelationCell::State::insufficient;
            } else {
                try {
                    SpearmanResult r = spearman(xs, ys);
                    cell.rho = r.rho;
                    cell.p_value = r.p_value;
                } catch (const error&) {
                    cell.state = CorrelationCell::State::undefined;
                }
            }
            out.cells[i][j] = cell;
            out.cells[j][i] = cell;
        }
    }
    return out;
}

namespace {

std::string cell_text(const CorrelationCell& cell, bool diagonal) {
    switch (cell.state) {
        case CorrelationCell::State::insufficient:
            return "n/a";
        case CorrelationCell::State::undefined:
            return "undefined";
        case CorrelationCell::State::ok:
            break;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", cell.rho);
    std::string text = buf;
    if (!diagonal) text += significance_stars(cell.p_value);
    return text;
}

std::string pad_left(const std::string& text, std::size_t width) {
    if (text.size() >= width) return text;
    return std::string(width - text.size(), ' ') + text;
}

} // namespace

std::string correlation_text(const CorrelationTable& table) {
    const std::size_t k = table.names.size();
    std::size_t width = 9;
    for (const std::string& name : table.names) {
        width = std::max(width, name.size());
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            width = std::max(width, cell_text(table.cells[i][j], i == j).size());
        }
    }
    width += 2;

    std::string out = "spearman rank correlation (";
    out += table.on_log_returns ? "log returns" : "levels";
    out += ")\n";
    out += std::string(width, ' ');
    for (const std::string& name : table.names) out += pad_left(name, width);
    out += "\n";
    for (std::size_t i = 0; i < k; ++i) {
        out += pad_left(table.names[i], width);
        for (std::size_t j = 0; j < k; ++j) {
            out += pad_left(cell_text(table.cells[i][j], i == j), width);
        }
        out += "\n";
    }
    out += "significance: *** p < 0.01, ** p < 0.05, * p < 0.10\n";
    return out;
}

std::string correlation_csv(const CorrelationTable& table) {
    std::string out = "series_a,series_b,rho,p_value,n,significance\n";
    char buf[64];
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        for (std::size_t j = i + 1; j < table.names.size(); ++j) {
            const CorrelationCell& cell = table.cells[i][j];
            out += table.names[i] + "," + table.names[j] + ",";
            switch (cell.state) {
                case CorrelationCell::State::ok:
                    std::snprintf(buf, sizeof(buf), "%.10g", cell.rho);
                    out += buf;
                    out += ",";
                    std::snprintf(buf, sizeof(buf), "%.10g", cell.p_value);
                    out += buf;
                    out += "," + std::to_string(cell.n) + ",";
                    out += significance_stars(cell.p_value);
                    break;
                case CorrelationCell::State::insufficient:
                    out += ",," + std::to_string(cell.n) + ",insufficient data";
                    break;
                case CorrelationCell::State::undefined:
                    out += ",," + std::to_string(cell.n) + ",undefined";
                    break;
            }
            out += "\n";
        }
    }
    return out;
}

SeriesTable gen_series(const std::vector<std::string>& names,
                       std::size_t rows, std::uint64_t seed) {
    if (names.empty()) fail_validation("need at least one series name");
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) fail_validation("empty series name");
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            if (names[i] == names[j]) {
                fail_validation("duplicate series name '" + names[i] + "'");
            }
        }
    }

    SeriesTable table;
    table.names = names;
    table.columns.assign(names.size(), {});
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> step(0.0, 0.02);
    std::vector<double> price(names.size(), 100.0);

    using namespace std::chrono;
    sys_days day{year{2021} / January / 1};
    char buf[16];
    for (std::size_t r = 0; r < rows; ++r) {
        year_month_day ymd{day};
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                      static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()),
                      static_cast<unsigned>(ymd.day()));
        table.dates.emplace_back(buf);
        for (std::size_t s = 0; s < names.size(); ++s) {
            table.columns[s].push_back(price[s]);
            price[s] *= std::exp(step(rng));
        }
        day += days{1};
    }
    return table;
}

} // namespace defikit
