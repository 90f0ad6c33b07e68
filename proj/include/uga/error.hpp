#pragma once

#include <stdexcept>
#include <string>

namespace uga {

/// Raised when a caller breaks an operation's precondition (bad descriptor,
/// length mismatch, out-of-range locus, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File and stream failures. The message always carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ContractViolation(message);
    }
}

} // namespace uga
