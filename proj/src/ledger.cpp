#include "defikit/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "defikit/errors.hpp"

namespace defikit {

namespace {

constexpr double kAmountEps = 1e-9;

std::string line_label(const LineKey& key) {
    std::string label = to_string(key.category) + " - " + key.token;
    if (!key.counterparty.empty()) {
        label += " [" + key.counterparty + "]";
    }
    return label;
}

std::string money_row(const std::string& label, double amount, int indent) {
    if (std::fabs(amount) < kAmountEps) {
        amount = 0.0;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%*s%-*s%14.2f\n", indent, "",
                  46 - indent, label.c_str(), amount);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Categories and lines
// ---------------------------------------------------------------------------

BookSection section_of(BookCategory category) {
    switch (category) {
        case BookCategory::ValueLocked:
        case BookCategory::Receivables:
        case BookCategory::Cash:
            return BookSection::Assets;
        case BookCategory::Payables:
        case BookCategory::NewMoney:
            return BookSection::Liabilities;
        case BookCategory::InitialDeposit:
        case BookCategory::UnrealizedGain:
        case BookCategory::RealizedGain:
            return BookSection::NetPosition;
    }
    fail_validation("unknown book category");
}

std::string to_string(BookCategory category) {
    switch (category) {
        case BookCategory::ValueLocked: return "Value Locked";
        case BookCategory::Receivables: return "Receivables";
        case BookCategory::Cash: return "Cash";
        case BookCategory::Payables: return "Payables";
        case BookCategory::NewMoney: return "New Money";
        case BookCategory::InitialDeposit: return "Initial Deposit";
        case BookCategory::UnrealizedGain: return "Unrealized Gain";
        case BookCategory::RealizedGain: return "Realized Gain";
    }
    fail_validation("unknown book category");
}

std::string to_string(BookSection section) {
    switch (section) {
        case BookSection::Assets: return "assets";
        case BookSection::Liabilities: return "liabilities";
        case BookSection::NetPosition: return "net position";
    }
    fail_validation("unknown book section");
}

double debit_total(const JournalEntry& entry) {
    double total = 0.0;
    for (const auto& line : entry.lines) {
        if (line.side == EntrySide::Debit) total += line.amount_usd;
    }
    return total;
}

double credit_total(const JournalEntry& entry) {
    double total = 0.0;
    for (const auto& line : entry.lines) {
        if (line.side == EntrySide::Credit) total += line.amount_usd;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Sheets
// ---------------------------------------------------------------------------

bool LineKey::operator<(const LineKey& other) const {
    return std::tie(category, token, counterparty) <
           std::tie(other.category, other.token, other.counterparty);
}

bool LineKey::operator==(const LineKey& other) const {
    return category == other.category && token == other.token &&
           counterparty == other.counterparty;
}

void Sheet::post_line(const BookLine& line) {
    bool asset_side = section_of(line.category) == BookSection::Assets;
    bool debit = line.side == EntrySide::Debit;
    double sign = (asset_side == debit) ? 1.0 : -1.0;
    lines[LineKey{line.category, line.token, line.counterparty}] +=
        sign * line.amount_usd;
}

double Sheet::balance(BookCategory category, const std::string& token,
                      const std::string& counterparty) const {
    auto it = lines.find(LineKey{category, token, counterparty});
    return it == lines.end() ? 0.0 : it->second;
}

double Sheet::category_total(BookCategory category) const {
    double total = 0.0;
    for (const auto& [key, value] : lines) {
        if (key.category == category) total += value;
    }
    return total;
}

double Sheet::section_total(BookSection section) const {
    double total = 0.0;
    for (const auto& [key, value] : lines) {
        if (section_of(key.category) == section) total += value;
    }
    return total;
}

void post(Sheet& sheet, const JournalEntry& entry) {
    double debits = debit_total(entry);
    double credits = credit_total(entry);
    double tolerance = 1e-6 * std::max(1.0, std::max(debits, credits));
    if (std::fabs(debits - credits) > tolerance) {
        fail_validation("journal entry '" + entry.memo +
                        "' does not balance: debits " + std::to_string(debits) +
                        " vs credits " + std::to_string(credits));
    }
    for (const auto& line : entry.lines) {
        sheet.post_line(line);
    }
}

// ---------------------------------------------------------------------------
// Script parsing
// ---------------------------------------------------------------------------

std::string to_string(TxKind kind) {
    switch (kind) {
        case TxKind::Fund: return "fund";
        case TxKind::Stake: return "stake";
        case TxKind::Burn: return "burn";
        case TxKind::CdpBorrow: return "cdp_borrow";
        case TxKind::CdpFee: return "cdp_fee";
        case TxKind::CdpRepay: return "cdp_repay";
        case TxKind::CdpPenalty: return "cdp_penalty";
        case TxKind::CdpLiquidate: return "cdp_liquidate";
        case TxKind::LendSupply: return "lend_supply";
        case TxKind::LendBorrow: return "lend_borrow";
        case TxKind::LendAccrue: return "lend_accrue";
        case TxKind::LendRepay: return "lend_repay";
        case TxKind::LendLiquidate: return "lend_liquidate";
        case TxKind::LpAdd: return "lp_add";
        case TxKind::LpRemove: return "lp_remove";
        case TxKind::Swap: return "swap";
        case TxKind::Appreciate: return "appreciate";
        case TxKind::Depreciate: return "depreciate";
    }
    fail_validation("unknown transaction kind");
}

namespace {

struct Cursor {
    std::vector<std::string> words;
    std::size_t next = 0;
    int line = 0;

    [[noreturn]] void fail(const std::string& what) const {
        fail_parse("script line " + std::to_string(line) + ": " + what);
    }

    const std::string& word(const std::string& what) {
        if (next >= words.size()) {
            fail("expected " + what + " but the line ended");
        }
        return words[next++];
    }

    double number(const std::string& what) {
        const std::string& w = word(what);
        try {
            std::size_t used = 0;
            double value = std::stod(w, &used);
            if (used != w.size()) throw std::invalid_argument(w);
            return value;
        } catch (const std::exception&) {
            fail("'" + w + "' is not a number (" + what + ")");
        }
    }

    TokenLeg leg(const std::string& what) {
        TokenLeg leg;
        leg.quantity = number(what + " quantity");
        leg.token = word(what + " token");
        leg.price_usd = number(what + " price");
        return leg;
    }

    void arrow() {
        if (word("'->'") != "->") fail("expected '->'");
    }

    void done() {
        if (next < words.size()) {
            fail("unexpected trailing argument '" + words[next] + "'");
        }
    }
};

const std::map<std::string, TxKind>& kind_names() {
    static const std::map<std::string, TxKind> names = {
        {"fund", TxKind::Fund},
        {"stake", TxKind::Stake},
        {"burn", TxKind::Burn},
        {"cdp_borrow", TxKind::CdpBorrow},
        {"cdp_fee", TxKind::CdpFee},
        {"cdp_repay", TxKind::CdpRepay},
        {"cdp_penalty", TxKind::CdpPenalty},
        {"cdp_liquidate", TxKind::CdpLiquidate},
        {"lend_supply", TxKind::LendSupply},
        {"lend_borrow", TxKind::LendBorrow},
        {"lend_accrue", TxKind::LendAccrue},
        {"lend_repay", TxKind::LendRepay},
        {"lend_liquidate", TxKind::LendLiquidate},
        {"lp_add", TxKind::LpAdd},
        {"lp_remove", TxKind::LpRemove},
        {"swap", TxKind::Swap},
        {"appreciate", TxKind::Appreciate},
        {"depreciate", TxKind::Depreciate},
    };
    return names;
}

Transaction parse_line(Cursor& cur) {
    Transaction tx;
    tx.line = cur.line;
    const std::string& verb = cur.word("transaction name");
    auto kind_it = kind_names().find(verb);
    if (kind_it == kind_names().end()) {
        cur.fail("unknown transaction '" + verb + "'");
    }
    tx.kind = kind_it->second;

    switch (tx.kind) {
        case TxKind::Fund:
            tx.account = cur.word("account");
            tx.in.push_back(cur.leg("funded"));
            break;
        case TxKind::Stake:
        case TxKind::Burn:
        case TxKind::CdpBorrow:
        case TxKind::CdpRepay:
        case TxKind::LendSupply:
        case TxKind::LendBorrow:
        case TxKind::LendRepay:
        case TxKind::Swap:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("incoming"));
            cur.arrow();
            tx.out.push_back(cur.leg("outgoing"));
            break;
        case TxKind::CdpFee:
        case TxKind::CdpPenalty:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("stablecoin"));
            break;
        case TxKind::CdpLiquidate:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("stablecoin"));
            tx.aux_quantity = cur.number("accrued quantity");
            cur.arrow();
            tx.out.push_back(cur.leg("collateral"));
            break;
        case TxKind::LendAccrue:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("debt"));
            tx.aux_token_a = cur.word("borrowed token");
            break;
        case TxKind::LendLiquidate:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("repaid"));
            tx.aux_quantity = cur.number("interest quantity");
            tx.aux_token_a = cur.word("debt token");
            cur.arrow();
            tx.out.push_back(cur.leg("collateral"));
            tx.aux_token_b = cur.word("receipt token");
            break;
        case TxKind::LpAdd:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("first"));
            tx.in.push_back(cur.leg("second"));
            cur.arrow();
            tx.out.push_back(cur.leg("pool share"));
            break;
        case TxKind::LpRemove:
            tx.account = cur.word("account");
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("pool share"));
            cur.arrow();
            tx.out.push_back(cur.leg("first"));
            tx.out.push_back(cur.leg("second"));
            break;
        case TxKind::Appreciate:
        case TxKind::Depreciate:
            tx.protocol = cur.word("protocol");
            tx.in.push_back(cur.leg("repriced"));
            break;
    }
    cur.done();
    return tx;
}

} // namespace

std::vector<Transaction> parse_script(const std::string& text) {
    std::vector<Transaction> txs;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        Cursor cur;
        cur.line = line_no;
        std::istringstream words(raw);
        std::string w;
        while (words >> w) cur.words.push_back(w);
        if (cur.words.empty()) continue;
        txs.push_back(parse_line(cur));
    }
    return txs;
}

// ---------------------------------------------------------------------------
// Journalizing
// ---------------------------------------------------------------------------

namespace {

BookLine make_line(EntrySide side, BookCategory category, const std::string& token,
                   double amount, const std::string& counterparty = "") {
    return BookLine{side, category, token, counterparty, amount};
}

void require_equal_value(const Transaction& tx, double a, double b) {
    double tolerance = 1e-6 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
    if (std::fabs(a - b) > tolerance) {
        fail_validation("script line " + std::to_string(tx.line) + ": " +
                        to_string(tx.kind) + " legs must carry equal value (" +
                        std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

void require_non_negative(const Transaction& tx) {
    auto check_leg = [&](const TokenLeg& leg) {
        if (leg.quantity < 0.0 || leg.price_usd < 0.0 || leg.token.empty()) {
            fail_validation("script line " + std::to_string(tx.line) + ": " +
                            to_string(tx.kind) +
                            " legs need a token and non-negative quantity and price");
        }
    };
    for (const auto& leg : tx.in) check_leg(leg);
    for (const auto& leg : tx.out) check_leg(leg);
    if (tx.aux_quantity < 0.0) {
        fail_validation("script line " + std::to_string(tx.line) + ": " +
                        to_string(tx.kind) + " auxiliary quantity must be non-negative");
    }
}

} // namespace

JournalizedTx Ledger::journalize(const Transaction& tx) const {
    require_non_negative(tx);

    std::string memo = to_string(tx.kind);
    if (!tx.account.empty()) memo += " " + tx.account;
    if (!tx.protocol.empty()) memo += " @ " + tx.protocol;

    JournalEntry protocol_entry{memo, {}};
    JournalEntry user_entry{memo, {}};

    const Sheet* wallet = nullptr;
    if (auto it = user_sheets_.find(tx.account); it != user_sheets_.end()) {
        wallet = &it->second;
    }

    // Wallet line for gaining a token: a claim on its issuer when it is a
    // registered receipt, spendable cash otherwise.
    auto gain = [&](const TokenLeg& leg) {
        auto it = issuers_.find(leg.token);
        if (it != issuers_.end()) {
            return make_line(EntrySide::Debit, BookCategory::Receivables,
                             leg.token, leg.value(), it->second);
        }
        return make_line(EntrySide::Debit, BookCategory::Cash, leg.token, leg.value());
    };
    // Wallet line for paying a token out: drawn from the matching claim when
    // the wallet holds enough of it, from cash otherwise.
    auto give = [&](const TokenLeg& leg) {
        auto it = issuers_.find(leg.token);
        if (it != issuers_.end()) {
            double held =
                wallet ? wallet->balance(BookCategory::Receivables, leg.token, it->second)
                       : 0.0;
            if (held + kAmountEps >= leg.value()) {
                return make_line(EntrySide::Credit, BookCategory::Receivables,
                                 leg.token, leg.value(), it->second);
            }
        }
        return make_line(EntrySide::Credit, BookCategory::Cash, leg.token, leg.value());
    };
    // Wallet line balancing a settlement: the gap between what was given up
    // and what was received lands in realized gain (debit = loss).
    auto settle_gap = [&](std::vector<BookLine>& lines, const std::string& token,
                          double received_minus_paid) {
        if (std::fabs(received_minus_paid) < kAmountEps) return;
        if (received_minus_paid > 0.0) {
            lines.push_back(make_line(EntrySide::Credit, BookCategory::RealizedGain,
                                      token, received_minus_paid));
        } else {
            lines.push_back(make_line(EntrySide::Debit, BookCategory::RealizedGain,
                                      token, -received_minus_paid));
        }
    };

    switch (tx.kind) {
        case TxKind::Fund: {
            const TokenLeg& leg = tx.in.at(0);
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Cash, leg.token, leg.value()),
                make_line(EntrySide::Credit, BookCategory::InitialDeposit, leg.token,
                          leg.value()),
            };
            return {std::nullopt, std::make_pair(tx.account, user_entry)};
        }
        case TxKind::Stake:
        case TxKind::LendSupply: {
            const TokenLeg& in = tx.in.at(0);
            const TokenLeg& out = tx.out.at(0);
            require_equal_value(tx, in.value(), out.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, in.token, in.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, out.token, out.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, out.token,
                          out.value(), tx.protocol),
                give(in),
            };
            break;
        }
        case TxKind::Burn: {
            const TokenLeg& in = tx.in.at(0);
            const TokenLeg& out = tx.out.at(0);
            require_equal_value(tx, in.value(), out.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, in.token, in.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, out.token,
                          out.value()),
            };
            user_entry.lines = {
                gain(out),
                make_line(EntrySide::Credit, BookCategory::Receivables, in.token,
                          in.value(), tx.protocol),
            };
            break;
        }
        case TxKind::CdpBorrow: {
            const TokenLeg& coll = tx.in.at(0);
            const TokenLeg& coin = tx.out.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, coin.token,
                          coin.value()),
                make_line(EntrySide::Debit, BookCategory::ValueLocked, coll.token,
                          coll.value()),
                make_line(EntrySide::Credit, BookCategory::NewMoney, coin.token,
                          coin.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, coll.token,
                          coll.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Cash, coin.token, coin.value()),
                make_line(EntrySide::Debit, BookCategory::Receivables, coll.token,
                          coll.value(), tx.protocol),
                make_line(EntrySide::Credit, BookCategory::Payables, coin.token,
                          coin.value(), tx.protocol),
                give(coll),
            };
            break;
        }
        case TxKind::CdpFee:
        case TxKind::CdpPenalty: {
            const TokenLeg& coin = tx.in.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, coin.token,
                          coin.value()),
                make_line(EntrySide::Credit, BookCategory::UnrealizedGain, coin.token,
                          coin.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::UnrealizedGain, coin.token,
                          coin.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, coin.token,
                          coin.value(), tx.protocol),
            };
            break;
        }
        case TxKind::CdpRepay: {
            const TokenLeg& coin = tx.in.at(0);
            const TokenLeg& coll = tx.out.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::NewMoney, coin.token,
                          coin.value()),
                make_line(EntrySide::Debit, BookCategory::Payables, coll.token,
                          coll.value()),
                make_line(EntrySide::Credit, BookCategory::Receivables, coin.token,
                          coin.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, coll.token,
                          coll.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, coin.token,
                          coin.value(), tx.protocol),
                gain(coll),
                give(coin),
                make_line(EntrySide::Credit, BookCategory::Receivables, coll.token,
                          coll.value(), tx.protocol),
            };
            break;
        }
        case TxKind::CdpLiquidate: {
            const TokenLeg& coin = tx.in.at(0);
            const TokenLeg& coll = tx.out.at(0);
            double accrued = tx.aux_quantity * coin.price_usd;
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::NewMoney, coin.token,
                          coin.value()),
                make_line(EntrySide::Debit, BookCategory::UnrealizedGain, coin.token,
                          accrued),
                make_line(EntrySide::Debit, BookCategory::Payables, coll.token,
                          coll.value()),
                make_line(EntrySide::Credit, BookCategory::Receivables, coin.token,
                          coin.value() + accrued),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, coll.token,
                          coll.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, coin.token,
                          coin.value() + accrued, tx.protocol),
                make_line(EntrySide::Credit, BookCategory::Receivables, coll.token,
                          coll.value(), tx.protocol),
            };
            settle_gap(user_entry.lines, coll.token,
                       (coin.value() + accrued) - coll.value());
            break;
        }
        case TxKind::LendBorrow: {
            const TokenLeg& borrowed = tx.in.at(0);
            const TokenLeg& debt = tx.out.at(0);
            require_equal_value(tx, borrowed.value(), debt.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, debt.token,
                          debt.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, borrowed.token,
                          borrowed.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Cash, borrowed.token,
                          borrowed.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, debt.token,
                          debt.value(), tx.protocol),
            };
            break;
        }
        case TxKind::LendAccrue: {
            const TokenLeg& debt = tx.in.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, debt.token,
                          debt.value()),
                make_line(EntrySide::Credit, BookCategory::UnrealizedGain, tx.aux_token_a,
                          debt.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::UnrealizedGain, tx.aux_token_a,
                          debt.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, debt.token,
                          debt.value(), tx.protocol),
            };
            break;
        }
        case TxKind::LendRepay: {
            const TokenLeg& borrowed = tx.in.at(0);
            const TokenLeg& debt = tx.out.at(0);
            require_equal_value(tx, borrowed.value(), debt.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, borrowed.token,
                          borrowed.value()),
                make_line(EntrySide::Credit, BookCategory::Receivables, debt.token,
                          debt.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, debt.token,
                          debt.value(), tx.protocol),
                give(borrowed),
            };
            break;
        }
        case TxKind::LendLiquidate: {
            const TokenLeg& repaid = tx.in.at(0);
            const TokenLeg& coll = tx.out.at(0);
            double interest = tx.aux_quantity * repaid.price_usd;
            // Seized receipts redeem into the token their deposit put in
            // custody; that is what actually leaves the pool.
            auto backing = backing_.find(tx.aux_token_b);
            if (backing == backing_.end()) {
                fail_validation("script line " + std::to_string(tx.line) +
                                ": receipt '" + tx.aux_token_b +
                                "' has no recorded deposit backing it");
            }
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, repaid.token,
                          repaid.value()),
                make_line(EntrySide::Debit, BookCategory::UnrealizedGain, repaid.token,
                          interest),
                make_line(EntrySide::Debit, BookCategory::Payables, tx.aux_token_b,
                          coll.value()),
                make_line(EntrySide::Credit, BookCategory::Receivables, tx.aux_token_a,
                          repaid.value()),
                make_line(EntrySide::Credit, BookCategory::RealizedGain, tx.aux_token_b,
                          interest),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, backing->second,
                          coll.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, tx.aux_token_a,
                          repaid.value(), tx.protocol),
                make_line(EntrySide::Credit, BookCategory::Receivables, tx.aux_token_b,
                          coll.value(), tx.protocol),
            };
            settle_gap(user_entry.lines, tx.aux_token_b,
                       repaid.value() - coll.value());
            break;
        }
        case TxKind::LpAdd: {
            const TokenLeg& a = tx.in.at(0);
            const TokenLeg& b = tx.in.at(1);
            const TokenLeg& share = tx.out.at(0);
            require_equal_value(tx, a.value() + b.value(), share.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, a.token, a.value()),
                make_line(EntrySide::Debit, BookCategory::ValueLocked, b.token, b.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, share.token,
                          share.value()),
            };
            user_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Receivables, share.token,
                          share.value(), tx.protocol),
                give(a),
                give(b),
            };
            break;
        }
        case TxKind::LpRemove: {
            const TokenLeg& share = tx.in.at(0);
            const TokenLeg& a = tx.out.at(0);
            const TokenLeg& b = tx.out.at(1);
            require_equal_value(tx, share.value(), a.value() + b.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, share.token,
                          share.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, a.token, a.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, b.token, b.value()),
            };
            user_entry.lines = {
                gain(a),
                gain(b),
                make_line(EntrySide::Credit, BookCategory::Receivables, share.token,
                          share.value(), tx.protocol),
            };
            break;
        }
        case TxKind::Swap: {
            const TokenLeg& in = tx.in.at(0);
            const TokenLeg& out = tx.out.at(0);
            require_equal_value(tx, in.value(), out.value());
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, in.token, in.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, out.token,
                          out.value()),
            };
            user_entry.lines = {gain(out), give(in)};
            break;
        }
        case TxKind::Appreciate: {
            const TokenLeg& leg = tx.in.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::ValueLocked, leg.token,
                          leg.value()),
                make_line(EntrySide::Credit, BookCategory::Payables, leg.token,
                          leg.value()),
            };
            return {std::make_pair(tx.protocol, protocol_entry), std::nullopt};
        }
        case TxKind::Depreciate: {
            const TokenLeg& leg = tx.in.at(0);
            protocol_entry.lines = {
                make_line(EntrySide::Debit, BookCategory::Payables, leg.token,
                          leg.value()),
                make_line(EntrySide::Credit, BookCategory::ValueLocked, leg.token,
                          leg.value()),
            };
            return {std::make_pair(tx.protocol, protocol_entry), std::nullopt};
        }
    }

    return {std::make_pair(tx.protocol, protocol_entry),
            std::make_pair(tx.account, user_entry)};
}

void Ledger::register_issuer(const std::string& token, const std::string& protocol,
                             int line) {
    auto [it, inserted] = issuers_.emplace(token, protocol);
    if (!inserted && it->second != protocol) {
        fail_validation("script line " + std::to_string(line) + ": token '" + token +
                        "' is already issued by '" + it->second + "'");
    }
}

void Ledger::apply(const Transaction& tx) {
    JournalizedTx journalized = journalize(tx);
    switch (tx.kind) {
        case TxKind::Stake:
        case TxKind::CdpBorrow:
        case TxKind::LendSupply:
        case TxKind::LendBorrow:
        case TxKind::LpAdd:
            register_issuer(tx.out.at(0).token, tx.protocol, tx.line);
            break;
        default:
            break;
    }
    if (tx.kind == TxKind::LendSupply) {
        backing_[tx.out.at(0).token] = tx.in.at(0).token;
    }
    if (journalized.protocol_entry) {
        post_protocol(journalized.protocol_entry->first,
                      journalized.protocol_entry->second);
    }
    if (journalized.user_entry) {
        post_user(journalized.user_entry->first, journalized.user_entry->second);
    }
}

void Ledger::run_script(const std::string& text) {
    for (const Transaction& tx : parse_script(text)) {
        apply(tx);
    }
}

void Ledger::post_protocol(const std::string& holder, const JournalEntry& entry) {
    if (holder.empty()) fail_validation("protocol sheet needs a holder name");
    post(protocol_sheets_[holder], entry);
}

void Ledger::post_user(const std::string& holder, const JournalEntry& entry) {
    if (holder.empty()) fail_validation("wallet sheet needs a holder name");
    post(user_sheets_[holder], entry);
}

const Sheet& Ledger::balance_sheet(const std::string& holder) const {
    if (auto it = protocol_sheets_.find(holder); it != protocol_sheets_.end()) {
        return it->second;
    }
    if (auto it = user_sheets_.find(holder); it != user_sheets_.end()) {
        return it->second;
    }
    fail_validation("no balance sheet for holder '" + holder + "'");
}

// ---------------------------------------------------------------------------
// Consolidation
// ---------------------------------------------------------------------------

namespace {

// Subtracts up to `amount` across a category's lines in key order, flooring
// each line at zero; returns how much was actually removed.
double reduce_category(Sheet& sheet, BookCategory category, double amount) {
    double removed = 0.0;
    for (auto& [key, value] : sheet.lines) {
        if (key.category != category || amount - removed <= kAmountEps) continue;
        double take = std::min(value, amount - removed);
        if (take <= 0.0) continue;
        value -= take;
        removed += take;
    }
    return removed;
}

} // namespace

ConsolidationResult consolidate(const std::map<std::string, Sheet>& protocol_sheets,
                                const std::map<std::string, Sheet>& user_sheets) {
    ConsolidationResult result;
    std::map<std::string, Sheet> work = protocol_sheets;

    for (const auto& [name, sheet] : protocol_sheets) {
        result.naive_value_locked += sheet.category_total(BookCategory::ValueLocked);
    }

    // Rule 1: custody of a token on one sheet cancels another sheet's payable
    // for the same token (a wrapped token counted twice).
    std::set<std::string> tokens;
    for (const auto& [name, sheet] : work) {
        for (const auto& [key, value] : sheet.lines) {
            if (key.category == BookCategory::ValueLocked ||
                key.category == BookCategory::Payables) {
                tokens.insert(key.token);
            }
        }
    }
    for (const std::string& token : tokens) {
        for (auto& [debtor_name, debtor] : work) {
            for (auto& [holder_name, holder] : work) {
                if (holder_name == debtor_name) continue;
                auto vl = holder.lines.find(
                    LineKey{BookCategory::ValueLocked, token, ""});
                auto pay = debtor.lines.find(LineKey{BookCategory::Payables, token, ""});
                if (vl == holder.lines.end() || pay == debtor.lines.end()) continue;
                double cancel = std::min(vl->second, pay->second);
                if (cancel <= kAmountEps) continue;
                vl->second -= cancel;
                pay->second -= cancel;
                result.wrap_eliminated += cancel;
            }
        }
    }

    // Rule 2: receivables beyond a sheet's own new-money liability in the
    // same token are loans out of custody; net them against the sheet's
    // payables so lent value is not reported twice.
    for (auto& [name, sheet] : work) {
        std::vector<LineKey> receivables;
        for (const auto& [key, value] : sheet.lines) {
            if (key.category == BookCategory::Receivables) receivables.push_back(key);
        }
        for (const LineKey& key : receivables) {
            double recv = sheet.lines[key];
            double backed = sheet.balance(BookCategory::NewMoney, key.token);
            double nettable = recv - backed;
            if (nettable <= kAmountEps) continue;
            double netted =
                reduce_category(sheet, BookCategory::Payables, nettable);
            sheet.lines[key] -= netted;
            result.unbacked_netted += netted;
        }
    }

    // Merge surviving lines, dropping counterparty tags.
    Sheet merged;
    for (const auto& [name, sheet] : work) {
        for (const auto& [key, value] : sheet.lines) {
            if (std::fabs(value) < kAmountEps) continue;
            merged.lines[LineKey{key.category, key.token, ""}] += value;
        }
    }

    // Rule 3: a wallet owing more than its cash has redeposited borrowed
    // value somewhere; that leverage inflates custody and payables alike.
    // The payable side is cancelled against the receipts those wallets hold,
    // since the redeposit is what issued them.
    if (!user_sheets.empty()) {
        double leverage = 0.0;
        std::vector<std::string> held_receipts;
        for (const auto& [name, sheet] : user_sheets) {
            double owed = sheet.category_total(BookCategory::Payables);
            double cash = sheet.category_total(BookCategory::Cash);
            double wallet_leverage = std::max(0.0, owed - cash);
            leverage += wallet_leverage;
            if (wallet_leverage <= kAmountEps) continue;
            for (const auto& [key, value] : sheet.lines) {
                if (key.category == BookCategory::Receivables &&
                    value > kAmountEps) {
                    held_receipts.push_back(key.token);
                }
            }
        }
        if (leverage > kAmountEps) {
            result.leverage_eliminated =
                reduce_category(merged, BookCategory::ValueLocked, leverage);
            double remaining = result.leverage_eliminated;
            for (const std::string& token : held_receipts) {
                if (remaining <= kAmountEps) break;
                auto it = merged.lines.find(
                    LineKey{BookCategory::Payables, token, ""});
                if (it == merged.lines.end()) continue;
                double cut = std::min(remaining, it->second);
                if (cut <= kAmountEps) continue;
                it->second -= cut;
                remaining -= cut;
            }
            if (remaining > kAmountEps) {
                reduce_category(merged, BookCategory::Payables, remaining);
            }
        }
    }

    result.value_locked = merged.category_total(BookCategory::ValueLocked);
    std::erase_if(merged.lines,
                  [](const auto& kv) { return std::fabs(kv.second) < kAmountEps; });
    result.sheet = merged;
    return result;
}

double protocol_tvr(const std::map<std::string, Sheet>& user_sheets,
                    const std::string& protocol) {
    double total = 0.0;
    for (const auto& [name, sheet] : user_sheets) {
        for (const auto& [key, value] : sheet.lines) {
            if (key.counterparty != protocol) continue;
            if (key.category == BookCategory::Receivables) total += value;
            if (key.category == BookCategory::Payables) total -= value;
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string sheet_text(const std::string& title, const Sheet& sheet) {
    std::string out = "balance sheet: " + title + "\n";
    const BookSection sections[] = {BookSection::Assets, BookSection::Liabilities,
                                    BookSection::NetPosition};
    for (BookSection section : sections) {
        out += "  " + to_string(section) + "\n";
        for (const auto& [key, value] : sheet.lines) {
            if (section_of(key.category) != section) continue;
            if (std::fabs(value) < kAmountEps) continue;
            out += money_row(line_label(key), value, 4);
        }
        out += money_row("total " + to_string(section), sheet.section_total(section), 2);
    }
    return out;
}

std::string sheet_csv(const std::string& holder, const Sheet& sheet) {
    std::string out = "holder,section,category,token,counterparty,amount\n";
    char buf[64];
    for (const auto& [key, value] : sheet.lines) {
        if (std::fabs(value) < kAmountEps) continue;
        std::snprintf(buf, sizeof(buf), "%.10g", value);
        out += holder + "," + to_string(section_of(key.category)) + "," +
               to_string(key.category) + "," + key.token + "," + key.counterparty +
               "," + buf + "\n";
    }
    return out;
}

std::string consolidation_text(const ConsolidationResult& result) {
    std::string out = sheet_text("consolidated", result.sheet);
    out += money_row("naive value locked", result.naive_value_locked, 0);
    out += money_row("consolidated value locked", result.value_locked, 0);
    out += money_row("wrap eliminated", result.wrap_eliminated, 0);
    out += money_row("unbacked receivables netted", result.unbacked_netted, 0);
    out += money_row("leverage eliminated", result.leverage_eliminated, 0);
    return out;
}

} // namespace defikit
