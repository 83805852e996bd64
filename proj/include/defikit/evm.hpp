#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Linear disassembler and heuristic classifier for EVM-style bytecode.
//
// Classification looks at how a token contract can acquire backing when it
// mints: pulling an underlying token via transferFrom (its 4-byte selector
// pushed before an external call) marks a token-backed derivative, reading
// the attached native value marks a native-backed one.

namespace defikit {

// One decoded instruction.  `opcode` always retains the raw byte, including
// for undefined opcodes, whose mnemonic is rendered as INVALID.
struct Instruction {
    std::size_t offset = 0;
    std::uint8_t opcode = 0;
    std::string mnemonic;
    std::vector<std::uint8_t> immediate;  // PUSH payload, empty otherwise
};

// Decodes hex text into bytes.  Accepts an optional 0x prefix and ignores
// whitespace.  Odd digit counts or non-hex characters are parse errors.
std::vector<std::uint8_t> parse_hex(const std::string& text);

std::string to_hex(const std::vector<std::uint8_t>& bytes);

// Linear sweep: PUSH1..PUSH32 consume that many immediate bytes; every other
// byte is a single instruction.  A PUSH whose immediate runs past the end of
// the code is a parse error naming its offset.
std::vector<Instruction> disassemble(const std::vector<std::uint8_t>& bytes);

// Inverse of disassemble: concatenates opcodes and immediates.
std::vector<std::uint8_t> assemble(const std::vector<Instruction>& instructions);

// Text listing, one "0x<offset>: MNEMONIC [0x<immediate>]" line per
// instruction.
std::string instructions_text(const std::vector<Instruction>& instructions);

enum class ContractKind {
    DerivativeTokenBacked,
    DerivativeNativeBacked,
    Undetermined,
};

std::string to_string(ContractKind kind);

struct PatternMatch {
    std::size_t offset = 0;
    std::string pattern;
};

struct Classification {
    ContractKind kind = ContractKind::Undetermined;
    std::vector<PatternMatch> evidence;  // every match, decisive or not
};

// Rules, in precedence order:
//   1. a PUSH4 of the transferFrom selector (0x23b872dd) plus at least one
//      CALL  -> DerivativeTokenBacked
//   2. any CALLVALUE                        -> DerivativeNativeBacked
//   3. otherwise                            -> Undetermined
Classification classify_bytecode(const std::vector<Instruction>& instructions);
Classification classify_bytecode(const std::vector<std::uint8_t>& bytes);

std::string classification_text(const Classification& classification);

} // namespace defikit
