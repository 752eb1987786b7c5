#pragma once

#include <cmath>
#include <numbers>

#include "nfedof/errors.hpp"

namespace nfedof {

struct CapacityInputs {
    double edof = 1.0;
    double alpha = 1.0;  // overall channel gain
    double P = 1.0;      // W
    double N0 = 1.0;     // W
};

// C = EDoF log2(1 + alpha P / (EDoF^2 N0)), bits/s/Hz
inline double capacity(const CapacityInputs& in) {
    if (!(in.edof > 0.0) || !(in.alpha > 0.0) || !(in.P > 0.0) || !(in.N0 > 0.0))
        throw ArgumentError("capacity: edof, alpha, P and N0 must all be positive");
    return in.edof * std::log1p(in.alpha * in.P / (in.edof * in.edof * in.N0)) / std::numbers::ln2;
}

enum class AlphaReading {
    sqrt_numerator,  // square root of the EDoF numerator (default)
    numerator,
};

// numerator: the squared quantity on top of the EDoF ratio, e.g. tr^2(R) or gamma^2.
inline double alpha_from_numerator(double numerator, AlphaReading reading = AlphaReading::sqrt_numerator) {
    if (!(numerator > 0.0)) throw ArgumentError("alpha_from_numerator: numerator must be positive");
    return reading == AlphaReading::sqrt_numerator ? std::sqrt(numerator) : numerator;
}

}  // namespace nfedof
