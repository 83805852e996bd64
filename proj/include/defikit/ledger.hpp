#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Double-entry bookkeeping for protocol and wallet balance sheets.
//
// Every transaction journalizes into one entry on the protocol's sheet and
// (for transactions with a named account) a mirror entry on that account's
// wallet sheet.  Debits always equal credits within an entry.  Sheets are
// plain category/token/counterparty -> balance maps; consolidation merges
// protocol sheets while eliminating the three double-counting channels
// (wrapped collateral, unbacked loan receivables, borrowed-and-redeposited
// value).

namespace defikit {

// ---------------------------------------------------------------------------
// Categories, sections, lines
// ---------------------------------------------------------------------------

enum class BookCategory {
    ValueLocked,     // tokens held in custody by a protocol
    Receivables,     // claims against someone else (loans out, receipt tokens)
    Cash,            // wallet tokens with no claim relationship
    Payables,        // obligations to return or redeem tokens
    NewMoney,        // liability created when a protocol mints money
    InitialDeposit,  // wallet capital contributed from outside
    UnrealizedGain,  // accrued but unsettled income (fees, interest)
    RealizedGain,    // settled income or loss
};

enum class BookSection { Assets, Liabilities, NetPosition };

BookSection section_of(BookCategory category);

// Display names: "Value Locked", "New Money", ...
std::string to_string(BookCategory category);
std::string to_string(BookSection section);

enum class EntrySide { Debit, Credit };

struct BookLine {
    EntrySide side = EntrySide::Debit;
    BookCategory category = BookCategory::Cash;
    std::string token;
    std::string counterparty;  // issuing protocol for wallet claims; empty otherwise
    double amount_usd = 0.0;
};

struct JournalEntry {
    std::string memo;
    std::vector<BookLine> lines;
};

double debit_total(const JournalEntry& entry);
double credit_total(const JournalEntry& entry);

// ---------------------------------------------------------------------------
// Sheets
// ---------------------------------------------------------------------------

struct LineKey {
    BookCategory category = BookCategory::Cash;
    std::string token;
    std::string counterparty;

    bool operator<(const LineKey& other) const;
    bool operator==(const LineKey& other) const;
};

// A running balance sheet.  Balances are signed: debits increase asset
// lines and decrease liability/net lines, credits do the opposite, so a
// healthy sheet carries non-negative balances everywhere.
struct Sheet {
    std::map<LineKey, double> lines;

    void post_line(const BookLine& line);
    double balance(BookCategory category, const std::string& token,
                   const std::string& counterparty = "") const;
    double category_total(BookCategory category) const;
    double section_total(BookSection section) const;
};

// Applies one balanced journal entry to a sheet.  An entry whose debit and
// credit totals disagree by more than a cent-level tolerance is rejected.
void post(Sheet& sheet, const JournalEntry& entry);

// ---------------------------------------------------------------------------
// Transactions
// ---------------------------------------------------------------------------

enum class TxKind {
    Fund,
    Stake,
    Burn,
    CdpBorrow,
    CdpFee,
    CdpRepay,
    CdpPenalty,
    CdpLiquidate,
    LendSupply,
    LendBorrow,
    LendAccrue,
    LendRepay,
    LendLiquidate,
    LpAdd,
    LpRemove,
    Swap,
    Appreciate,
    Depreciate,
};

std::string to_string(TxKind kind);

struct TokenLeg {
    double quantity = 0.0;
    std::string token;
    double price_usd = 0.0;

    double value() const { return quantity * price_usd; }
};

// One script line.  `in` holds the legs before "->", `out` the legs after.
// The auxiliary fields carry the extra arguments some templates need:
//   CdpLiquidate:  aux_quantity = accrued fee + penalty, in stablecoin units
//   LendAccrue:    aux_token_a  = borrowed token whose gain line is credited
//   LendLiquidate: aux_quantity = realized interest (borrowed-token units),
//                  aux_token_a  = debt-claim token, aux_token_b = receipt token
struct Transaction {
    TxKind kind = TxKind::Fund;
    std::string account;   // empty for Appreciate/Depreciate
    std::string protocol;  // empty for Fund
    std::vector<TokenLeg> in;
    std::vector<TokenLeg> out;
    double aux_quantity = 0.0;
    std::string aux_token_a;
    std::string aux_token_b;
    int line = 0;  // 1-based script line, for diagnostics
};

// Script grammar: one transaction per line, '#' starts a comment, blank
// lines are skipped.  Legs are written "<quantity> <token> <price>".
//
//   fund <account> <leg>
//   stake <account> <protocol> <leg> -> <leg>
//   burn <account> <protocol> <leg> -> <leg>
//   cdp_borrow <account> <protocol> <collateral-leg> -> <stablecoin-leg>
//   cdp_fee <account> <protocol> <stablecoin-leg>
//   cdp_repay <account> <protocol> <stablecoin-leg> -> <collateral-leg>
//   cdp_penalty <account> <protocol> <stablecoin-leg>
//   cdp_liquidate <account> <protocol> <stablecoin-leg> <accrued-qty> -> <collateral-leg>
//   lend_supply <account> <protocol> <leg> -> <receipt-leg>
//   lend_borrow <account> <protocol> <borrowed-leg> -> <debt-leg>
//   lend_accrue <account> <protocol> <debt-leg> <borrowed-token>
//   lend_repay <account> <protocol> <borrowed-leg> -> <debt-leg>
//   lend_liquidate <account> <protocol> <repaid-leg> <interest-qty> <debt-token>
//                  -> <collateral-leg> <receipt-token>
//   lp_add <account> <protocol> <leg> <leg> -> <lp-leg>
//   lp_remove <account> <protocol> <lp-leg> -> <leg> <leg>
//   swap <account> <protocol> <leg-in> -> <leg-out>
//   appreciate <protocol> <leg>     (price move, quantity x delta-price)
//   depreciate <protocol> <leg>
std::vector<Transaction> parse_script(const std::string& text);

// ---------------------------------------------------------------------------
// Ledger
// ---------------------------------------------------------------------------

struct JournalizedTx {
    // holder name + entry; user_entry is absent for account-less transactions
    std::optional<std::pair<std::string, JournalEntry>> protocol_entry;
    std::optional<std::pair<std::string, JournalEntry>> user_entry;
};

class Ledger {
public:
    // Builds the sheet entries a transaction produces, using the current
    // receipt registry and wallet state to decide whether a wallet pays out
    // of a receivable claim or out of cash.  Does not mutate the ledger.
    JournalizedTx journalize(const Transaction& tx) const;

    // journalize + register newly issued receipt tokens + post both entries.
    void apply(const Transaction& tx);

    void run_script(const std::string& text);

    // Posts onto a holder's sheet, creating the sheet if absent.  An entry
    // with no lines just registers the holder.
    void post_protocol(const std::string& holder, const JournalEntry& entry);
    void post_user(const std::string& holder, const JournalEntry& entry);

    // Looks up a holder's sheet among protocols first, wallets second.
    // Unknown holder -> validation error.
    const Sheet& balance_sheet(const std::string& holder) const;

    const std::map<std::string, Sheet>& protocol_sheets() const { return protocol_sheets_; }
    const std::map<std::string, Sheet>& user_sheets() const { return user_sheets_; }

    // token -> protocol that issued it (receipt, debt, or minted tokens)
    const std::map<std::string, std::string>& issuer_registry() const { return issuers_; }

private:
    void register_issuer(const std::string& token, const std::string& protocol, int line);

    std::map<std::string, Sheet> protocol_sheets_;
    std::map<std::string, Sheet> user_sheets_;
    std::map<std::string, std::string> issuers_;
    // deposit receipt -> token it redeems into; seizing receipts releases
    // custody of that token
    std::map<std::string, std::string> backing_;
};

// ---------------------------------------------------------------------------
// Consolidation
// ---------------------------------------------------------------------------

struct ConsolidationResult {
    Sheet sheet;                    // merged protocol sheets after eliminations
    double naive_value_locked = 0;  // sum of Value Locked lines before merging
    double value_locked = 0;        // sum of Value Locked lines after
    double wrap_eliminated = 0;     // custody of another sheet's receipt token
    double unbacked_netted = 0;     // loan receivables not backed by new money
    double leverage_eliminated = 0; // borrowed value redeposited by wallets
};

// Merges protocol sheets into one system-wide sheet:
//   1. for each token, custody (Value Locked) on one sheet cancels the
//      payable for the same token on another sheet;
//   2. within each sheet, receivables in excess of the sheet's own new-money
//      liability in the same token are netted against its payables;
//   3. with wallet sheets supplied, each wallet's payables in excess of its
//      cash measure value that was borrowed and redeposited; that total is
//      removed from value locked and payables.
ConsolidationResult consolidate(const std::map<std::string, Sheet>& protocol_sheets,
                                const std::map<std::string, Sheet>& user_sheets = {});

// Net redeemable claim of all wallets against one protocol: receivables
// issued by it minus payables owed to it.
double protocol_tvr(const std::map<std::string, Sheet>& user_sheets,
                    const std::string& protocol);

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

// Fixed-width text table with assets / liabilities / net position sections,
// per-line balances, and section totals.  Zero lines are omitted.
std::string sheet_text(const std::string& title, const Sheet& sheet);

// CSV rows "holder,section,category,token,counterparty,amount" (with header).
std::string sheet_csv(const std::string& holder, const Sheet& sheet);

std::string consolidation_text(const ConsolidationResult& result);

} // namespace defikit
