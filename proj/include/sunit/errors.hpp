#pragma once

#include <stdexcept>
#include <string>

namespace sunit {

// Malformed input or violated precondition. CLI exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical certification failed at the current precision. Callers may retry.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precision escalation hit its cap. CLI exit code 3.
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration would exceed its configured budget. CLI exit code 4.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace sunit
