// Error taxonomy shared by the library and the CLI exit-code contract.
#pragma once

#include <stdexcept>
#include <string>

namespace metawig {

// Bad arguments or violated preconditions (CLI exit 2).
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files (CLI exit 3).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Size caps exceeded (CLI exit 4).
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented invariant failed at runtime (treated as a domain error by the CLI).
struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace metawig
