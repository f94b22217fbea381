#pragma once

// The degree function of piecewise-Koszul resolutions: with n = qp + r,
// 0 <= r < p, delta(n) = q d + r.

#include <string>

#include "errors.hpp"

namespace pkoszul {

struct DeltaFunction {
    int p = 2;
    int d = 2;

    DeltaFunction() = default;
    DeltaFunction(int period, int jump) : p(period), d(jump) {
        if (p < 2) throw input_error("period p must be at least 2, got " + std::to_string(p));
        if (d < p) throw input_error("jump degree d must be at least p, got p=" + std::to_string(p) + " d=" + std::to_string(d));
    }

    int operator()(int n) const {
        if (n < 0) throw input_error("delta is defined for n >= 0");
        return (n / p) * d + n % p;
    }

    bool is_koszul() const { return d == p; }

    friend bool operator==(const DeltaFunction&, const DeltaFunction&) = default;
};

}  // namespace pkoszul
