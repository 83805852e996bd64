#pragma once

#include <stdexcept>
#include <string>

namespace defikit {

// Error taxonomy used across the library.
//
//   validation — an input object violates a structural rule (bad schema,
//                negative quantity, unknown reference, duplicate id).
//   domain     — the inputs are well-formed but the requested computation is
//                undefined on them (pricing cycle, zero-supply division,
//                unknown token in a price query).
//   parse      — raw text could not be decoded (JSON, hex, CSV, script line).
//
// The CLI maps {validation, domain, parse} to exit code 1 and reserves exit
// code 2 for command-line usage mistakes.
enum class errc {
    validation,
    domain,
    parse,
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail_validation(const std::string& message) {
    throw error(errc::validation, message);
}

[[noreturn]] inline void fail_domain(const std::string& message) {
    throw error(errc::domain, message);
}

[[noreturn]] inline void fail_parse(const std::string& message) {
    throw error(errc::parse, message);
}

} // namespace defikit
