#include "defikit/evm.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "defikit/errors.hpp"

namespace defikit {

namespace {

constexpr std::uint8_t kPushBase = 0x60;  // PUSH1
constexpr std::uint8_t kPushLast = 0x7f;  // PUSH32
constexpr std::uint8_t kCallValue = 0x34;
constexpr std::uint8_t kCall = 0xf1;
constexpr std::array<std::uint8_t, 4> kTransferFromSelector = {0x23, 0xb8, 0x72, 0xdd};

const char* base_mnemonic(std::uint8_t opcode) {
    switch (opcode) {
        case 0x00: return "STOP";
        case 0x01: return "ADD";
        case 0x02: return "MUL";
        case 0x03: return "SUB";
        case 0x04: return "DIV";
        case 0x05: return "SDIV";
        case 0x06: return "MOD";
        case 0x07: return "SMOD";
        case 0x08: return "ADDMOD";
        case 0x09: return "MULMOD";
        case 0x0a: return "EXP";
        case 0x0b: return "SIGNEXTEND";
        case 0x10: return "LT";
        case 0x11: return "GT";
        case 0x12: return "SLT";
        case 0x13: return "SGT";
        case 0x14: return "EQ";
        case 0x15: return "ISZERO";
        case 0x16: return "AND";
        case 0x17: return "OR";
        case 0x18: return "XOR";
        case 0x19: return "NOT";
        case 0x1a: return "BYTE";
        case 0x1b: return "SHL";
        case 0x1c: return "SHR";
        case 0x1d: return "SAR";
        case 0x20: return "KECCAK256";
        case 0x30: return "ADDRESS";
        case 0x31: return "BALANCE";
        case 0x32: return "ORIGIN";
        case 0x33: return "CALLER";
        case 0x34: return "CALLVALUE";
        case 0x35: return "CALLDATALOAD";
        case 0x36: return "CALLDATASIZE";
        case 0x37: return "CALLDATACOPY";
        case 0x38: return "CODESIZE";
        case 0x39: return "CODECOPY";
        case 0x3a: return "GASPRICE";
        case 0x3b: return "EXTCODESIZE";
        case 0x3c: return "EXTCODECOPY";
        case 0x3d: return "RETURNDATASIZE";
        case 0x3e: return "RETURNDATACOPY";
        case 0x3f: return "EXTCODEHASH";
        case 0x40: return "BLOCKHASH";
        case 0x41: return "COINBASE";
        case 0x42: return "TIMESTAMP";
        case 0x43: return "NUMBER";
        case 0x44: return "PREVRANDAO";
        case 0x45: return "GASLIMIT";
        case 0x46: return "CHAINID";
        case 0x47: return "SELFBALANCE";
        case 0x48: return "BASEFEE";
        case 0x50: return "POP";
        case 0x51: return "MLOAD";
        case 0x52: return "MSTORE";
        case 0x53: return "MSTORE8";
        case 0x54: return "SLOAD";
        case 0x55: return "SSTORE";
        case 0x56: return "JUMP";
        case 0x57: return "JUMPI";
        case 0x58: return "PC";
        case 0x59: return "MSIZE";
        case 0x5a: return "GAS";
        case 0x5b: return "JUMPDEST";
        case 0xf0: return "CREATE";
        case 0xf1: return "CALL";
        case 0xf2: return "CALLCODE";
        case 0xf3: return "RETURN";
        case 0xf4: return "DELEGATECALL";
        case 0xf5: return "CREATE2";
        case 0xfa: return "STATICCALL";
        case 0xfd: return "REVERT";
        case 0xff: return "SELFDESTRUCT";
        default: return nullptr;
    }
}

std::string mnemonic_of(std::uint8_t opcode) {
    if (opcode >= kPushBase && opcode <= kPushLast) {
        return "PUSH" + std::to_string(opcode - kPushBase + 1);
    }
    if (opcode >= 0x80 && opcode <= 0x8f) {
        return "DUP" + std::to_string(opcode - 0x80 + 1);
    }
    if (opcode >= 0x90 && opcode <= 0x9f) {
        return "SWAP" + std::to_string(opcode - 0x90 + 1);
    }
    if (opcode >= 0xa0 && opcode <= 0xa4) {
        return "LOG" + std::to_string(opcode - 0xa0);
    }
    if (const char* name = base_mnemonic(opcode)) {
        return name;
    }
    return "INVALID";
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::vector<std::uint8_t> parse_hex(const std::string& text) {
    std::vector<int> digits;
    digits.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if ((c == 'x' || c == 'X') && digits.size() == 1 && digits[0] == 0) {
            digits.clear();  // strip a leading 0x / 0X
            continue;
        }
        int value = hex_digit(c);
        if (value < 0) {
            fail_parse(std::string("invalid hex character '") + c +
                       "' at position " + std::to_string(i));
        }
        digits.push_back(value);
    }
    if (digits.size() % 2 != 0) {
        fail_parse("hex text has an odd number of digits");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(digits.size() / 2);
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        bytes.push_back(static_cast<std::uint8_t>(digits[i] * 16 + digits[i + 1]));
    }
    return bytes;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<Instruction> disassemble(const std::vector<std::uint8_t>& bytes) {
    std::vector<Instruction> instructions;
    std::size_t i = 0;
    while (i < bytes.size()) {
        Instruction ins;
        ins.offset = i;
        ins.opcode = bytes[i];
        ins.mnemonic = mnemonic_of(bytes[i]);
        ++i;
        if (ins.opcode >= kPushBase && ins.opcode <= kPushLast) {
            std::size_t width = ins.opcode - kPushBase + 1;
            if (i + width > bytes.size()) {
                fail_parse("truncated " + ins.mnemonic + " at offset " +
                           std::to_string(ins.offset) + ": needs " +
                           std::to_string(width) + " immediate bytes, " +
                           std::to_string(bytes.size() - i) + " left");
            }
            ins.immediate.assign(bytes.begin() + i, bytes.begin() + i + width);
            i += width;
        }
        instructions.push_back(std::move(ins));
    }
    return instructions;
}

std::vector<std::uint8_t> assemble(const std::vector<Instruction>& instructions) {
    std::vector<std::uint8_t> bytes;
    for (const Instruction& ins : instructions) {
        bytes.push_back(ins.opcode);
        bytes.insert(bytes.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return bytes;
}

std::string instructions_text(const std::vector<Instruction>& instructions) {
    std::string out;
    char buf[32];
    for (const Instruction& ins : instructions) {
        std::snprintf(buf, sizeof(buf), "0x%04zx: ", ins.offset);
        out += buf;
        out += ins.mnemonic;
        if (!ins.immediate.empty()) {
            out += " 0x" + to_hex(ins.immediate);
        }
        out += "\n";
    }
    return out;
}

std::string to_string(ContractKind kind) {
    switch (kind) {
        case ContractKind::DerivativeTokenBacked: return "derivative_token_backed";
        case ContractKind::DerivativeNativeBacked: return "derivative_native_backed";
        case ContractKind::Undetermined: return "undetermined";
    }
    fail_validation("unknown contract kind");
}

Classification classify_bytecode(const std::vector<Instruction>& instructions) {
    Classification result;
    bool selector = false;
    bool call = false;
    bool callvalue = false;
    for (const Instruction& ins : instructions) {
        if (ins.mnemonic == "PUSH4" &&
            std::equal(ins.immediate.begin(), ins.immediate.end(),
                       kTransferFromSelector.begin(), kTransferFromSelector.end())) {
            selector = true;
            result.evidence.push_back({ins.offset, "transferFrom selector push"});
        } else if (ins.opcode == kCall) {
            call = true;
            result.evidence.push_back({ins.offset, "external call"});
        } else if (ins.opcode == kCallValue) {
            callvalue = true;
            result.evidence.push_back({ins.offset, "native value read"});
        }
    }
    if (selector && call) {
        result.kind = ContractKind::DerivativeTokenBacked;
    } else if (callvalue) {
        result.kind = ContractKind::DerivativeNativeBacked;
    } else {
        result.kind = ContractKind::Undetermined;
    }
    return result;
}

Classification classify_bytecode(const std::vector<std::uint8_t>& bytes) {
    return classify_bytecode(disassemble(bytes));
}

std::string classification_text(const Classification& classification) {
    std::string out = "kind: " + to_string(classification.kind) + "\n";
    char buf[32];
    for (const PatternMatch& match : classification.evidence) {
        std::snprintf(buf, sizeof(buf), "  0x%04zx: ", match.offset);
        out += buf;
        out += match.pattern;
        out += "\n";
    }
    return out;
}

} // namespace defikit
