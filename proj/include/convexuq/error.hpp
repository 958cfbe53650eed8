#pragma once

#include <stdexcept>
#include <string>

namespace convexuq {

/// Raised for every contract violation in the library. The message is the
/// stable, user-facing diagnostic (e.g. "empty input", "degenerate input").
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace convexuq
