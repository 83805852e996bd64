// defikit — command line front end for the modelling library.
//
// Subcommands:
//   compute     value-locked metrics of a snapshot
//   simulate    price-shock sweep with cascading liquidations
//   ledger      double-entry bookkeeping from a transaction script
//   classify    EVM bytecode disassembly and heuristic classification
//   correlate   rank correlation matrix of a price-series table
//   gen-series  seeded random-walk series for demos and tests
//
// Exit status: 0 on success, 1 on any data/model error, 2 on usage errors.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "defikit/errors.hpp"
#include "defikit/evm.hpp"
#include "defikit/io.hpp"
#include "defikit/ledger.hpp"
#include "defikit/metrics.hpp"
#include "defikit/sim.hpp"
#include "defikit/snapshot.hpp"
#include "defikit/stats.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        defikit::write_text_file(out_path, text);
    }
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

struct ComputeArgs {
    std::string snapshot_path;
    std::vector<std::string> exclude;
    bool csv = false;
    std::string out_path;
};

int run_compute(const ComputeArgs& args) {
    defikit::Snapshot snapshot = defikit::load_snapshot(args.snapshot_path);
    defikit::PriceMap prices = snapshot.resolve();
    defikit::MetricReport report =
        defikit::metric_report(snapshot, prices, args.exclude);
    emit(args.csv ? defikit::report_csv(report) : defikit::report_text(report),
         args.out_path);
    return 0;
}

struct SimulateArgs {
    std::string snapshot_path;
    std::string scenario_path;
    std::string depeg_token;
    bool csv = false;
    std::string out_path;
};

int run_simulate(const SimulateArgs& args) {
    defikit::Snapshot snapshot = defikit::load_snapshot(args.snapshot_path);
    defikit::ShockScenario scenario = defikit::load_scenario(args.scenario_path);
    defikit::SensitivityCurve curve =
        defikit::sensitivity_curve(snapshot, scenario);
    if (!args.depeg_token.empty()) {
        auto point = defikit::depeg_point(curve, args.depeg_token);
        std::string line =
            point ? "token " + args.depeg_token + " first depegs at drawdown " +
                        format_number(*point) + "\n"
                  : "token " + args.depeg_token + " never depegs on this grid\n";
        emit(line, args.out_path);
        return 0;
    }
    emit(args.csv ? defikit::curve_csv(curve) : defikit::curve_text(curve),
         args.out_path);
    return 0;
}

struct LedgerArgs {
    std::string script_path;
    std::string holder;
    std::string tvr_protocol;
    bool consolidate = false;
    bool with_wallets = false;
    bool csv = false;
    std::string out_path;
};

int run_ledger(const LedgerArgs& args) {
    defikit::Ledger ledger;
    ledger.run_script(defikit::read_text_file(args.script_path));

    std::string text;
    if (!args.tvr_protocol.empty()) {
        double value =
            defikit::protocol_tvr(ledger.user_sheets(), args.tvr_protocol);
        text = "tvr " + args.tvr_protocol + " = " + format_number(value) + "\n";
    } else if (args.consolidate) {
        const std::map<std::string, defikit::Sheet> no_wallets;
        defikit::ConsolidationResult result = defikit::consolidate(
            ledger.protocol_sheets(),
            args.with_wallets ? ledger.user_sheets() : no_wallets);
        text = args.csv ? defikit::sheet_csv("consolidated", result.sheet)
                        : defikit::consolidation_text(result);
    } else if (!args.holder.empty()) {
        const defikit::Sheet& sheet = ledger.balance_sheet(args.holder);
        text = args.csv ? defikit::sheet_csv(args.holder, sheet)
                        : defikit::sheet_text(args.holder, sheet);
    } else {
        bool first = true;
        auto append = [&](const std::string& name, const defikit::Sheet& sheet) {
            if (args.csv) {
                std::string rows = defikit::sheet_csv(name, sheet);
                if (!first) rows.erase(0, rows.find('\n') + 1);  // drop header
                text += rows;
            } else {
                if (!first) text += "\n";
                text += defikit::sheet_text(name, sheet);
            }
            first = false;
        };
        for (const auto& [name, sheet] : ledger.protocol_sheets()) {
            append(name, sheet);
        }
        for (const auto& [name, sheet] : ledger.user_sheets()) {
            append(name, sheet);
        }
    }
    emit(text, args.out_path);
    return 0;
}

struct ClassifyArgs {
    std::string bytecode_path;
    bool disassemble = false;
    std::string out_path;
};

int run_classify(const ClassifyArgs& args) {
    std::vector<std::uint8_t> bytes =
        defikit::parse_hex(defikit::read_text_file(args.bytecode_path));
    std::vector<defikit::Instruction> instructions = defikit::disassemble(bytes);
    std::string text =
        args.disassemble
            ? defikit::instructions_text(instructions)
            : defikit::classification_text(defikit::classify_bytecode(instructions));
    emit(text, args.out_path);
    return 0;
}

struct CorrelateArgs {
    std::string series_path;
    bool levels = false;
    bool csv = false;
    std::string out_path;
};

int run_correlate(const CorrelateArgs& args) {
    defikit::SeriesTable table = defikit::load_series_csv(args.series_path);
    defikit::CorrelationTable corr =
        defikit::correlate_table(table, !args.levels);
    emit(args.csv ? defikit::correlation_csv(corr)
                  : defikit::correlation_text(corr),
         args.out_path);
    return 0;
}

struct GenSeriesArgs {
    std::vector<std::string> names;
    std::size_t rows = 250;
    std::uint64_t seed = 42;
    std::string out_path;
};

int run_gen_series(const GenSeriesArgs& args) {
    defikit::SeriesTable table =
        defikit::gen_series(args.names, args.rows, args.seed);
    emit(defikit::series_csv(table), args.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic DeFi balance-sheet and risk modelling"};
    app.require_subcommand(1);

    ComputeArgs compute_args;
    CLI::App* compute =
        app.add_subcommand("compute", "value-locked metrics of a snapshot");
    compute->add_option("--snapshot", compute_args.snapshot_path,
                        "snapshot JSON file")->required();
    compute->add_option("--exclude", compute_args.exclude,
                        "protocol ids excluded from the adjusted total");
    compute->add_flag("--csv", compute_args.csv, "emit CSV instead of text");
    compute->add_option("--out", compute_args.out_path,
                        "write output to a file instead of stdout");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "price-shock sweep with cascading liquidations");
    simulate->add_option("--snapshot", simulate_args.snapshot_path,
                         "snapshot JSON file")->required();
    simulate->add_option("--scenario", simulate_args.scenario_path,
                         "scenario JSON file")->required();
    simulate->add_option("--depeg", simulate_args.depeg_token,
                         "report only the first depeg drawdown of this token");
    simulate->add_flag("--csv", simulate_args.csv, "emit CSV instead of text");
    simulate->add_option("--out", simulate_args.out_path,
                         "write output to a file instead of stdout");

    LedgerArgs ledger_args;
    CLI::App* ledger = app.add_subcommand(
        "ledger", "double-entry bookkeeping from a transaction script");
    ledger->add_option("--script", ledger_args.script_path,
                       "transaction script file")->required();
    ledger->add_option("--holder", ledger_args.holder,
                       "print only this holder's balance sheet");
    ledger->add_flag("--consolidate", ledger_args.consolidate,
                     "merge protocol sheets into one system sheet");
    ledger->add_flag("--with-wallets", ledger_args.with_wallets,
                     "include wallet sheets in the consolidation");
    ledger->add_option("--tvr", ledger_args.tvr_protocol,
                       "print wallets' net redeemable claim on this protocol");
    ledger->add_flag("--csv", ledger_args.csv, "emit CSV instead of text");
    ledger->add_option("--out", ledger_args.out_path,
                       "write output to a file instead of stdout");

    ClassifyArgs classify_args;
    CLI::App* classify = app.add_subcommand(
        "classify", "EVM bytecode disassembly and classification");
    classify->add_option("--bytecode", classify_args.bytecode_path,
                         "file containing hex bytecode")->required();
    classify->add_flag("--disassemble", classify_args.disassemble,
                       "print the instruction listing instead");
    classify->add_option("--out", classify_args.out_path,
                         "write output to a file instead of stdout");

    CorrelateArgs correlate_args;
    CLI::App* correlate = app.add_subcommand(
        "correlate", "rank correlation matrix of a price-series table");
    correlate->add_option("--series", correlate_args.series_path,
                          "series CSV file (date column + one per series)")
        ->required();
    correlate->add_flag("--levels", correlate_args.levels,
                        "correlate raw levels instead of log returns");
    correlate->add_flag("--csv", correlate_args.csv,
                        "emit CSV instead of text");
    correlate->add_option("--out", correlate_args.out_path,
                          "write output to a file instead of stdout");

    GenSeriesArgs gen_args;
    CLI::App* gen = app.add_subcommand(
        "gen-series", "seeded random-walk price series");
    gen->add_option("--names", gen_args.names, "comma-separated series names")
        ->required()
        ->delimiter(',');
    gen->add_option("--rows", gen_args.rows, "number of rows (default 250)");
    gen->add_option("--seed", gen_args.seed, "random seed (default 42)");
    gen->add_option("--out", gen_args.out_path,
                    "write output to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compute->parsed()) return run_compute(compute_args);
        if (simulate->parsed()) return run_simulate(simulate_args);
        if (ledger->parsed()) return run_ledger(ledger_args);
        if (classify->parsed()) return run_classify(classify_args);
        if (correlate->parsed()) return run_correlate(correlate_args);
        if (gen->parsed()) return run_gen_series(gen_args);
    } catch (const defikit::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
