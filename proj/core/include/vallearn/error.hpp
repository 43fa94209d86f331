#pragma once

#include <stdexcept>
#include <string>

namespace vallearn {

// Thrown on contract violations: malformed inputs, out-of-range indices,
// size guards, and infeasible internal states that callers can act on.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vallearn
