#pragma once

#include <stdexcept>
#include <string>

namespace pkoszul {

/// Malformed or inconsistent input (bad presentation, bad tables, bad arguments).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The request is well formed but asks for data outside the certified range.
class refusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pkoszul
