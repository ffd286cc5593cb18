#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace seqrec {

using ItemIndex = std::uint32_t;
using UserIndex = std::uint32_t;

inline constexpr ItemIndex kInvalidItem = static_cast<ItemIndex>(-1);

// Bad user input: malformed flags, unknown config keys, contradictory options.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data: unreadable files, schema violations, empty datasets.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace seqrec
