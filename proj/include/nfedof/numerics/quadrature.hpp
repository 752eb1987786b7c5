#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"

namespace nfedof {

struct QuadratureRule {
    std::vector<double> nodes;    // ascending, in [-1, 1]
    std::vector<double> weights;
    int order = 0;
};

// Nodes/weights mapped onto an interval [a, b].
struct IntervalRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kMaxQuadratureOrder = 512;

// Gauss-Legendre by Newton iteration on the three-term recurrence.
inline QuadratureRule gauss_legendre(int order) {
    if (order < 1 || order > kMaxQuadratureOrder)
        throw ArgumentError("gauss_legendre: order " + std::to_string(order) + " outside [1, 512]");
    const int n = order;
    QuadratureRule r;
    r.order = n;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    // returns P_n'(x), leaves P_n(x) in pn
    auto legendre = [n](double x, double& pn) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        pn = p1;
        return n * (x * p1 - p0) / (x * x - 1.0);
    };
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pn = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double d = legendre(x, pn);
            const double step = pn / d;
            x -= step;
            if (std::abs(step) <= 1e-15) break;
        }
        const double dp = legendre(x, pn);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; mirror for exact symmetry
        r.nodes[n - 1 - i] = x;
        r.nodes[i] = -x;
        r.weights[n - 1 - i] = w;
        r.weights[i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

// Composite rule: `panels` equal sub-intervals of [a, b], each with `rule`.
inline IntervalRule map_rule(const QuadratureRule& rule, double a, double b, int panels = 1) {
    if (panels < 1) throw ArgumentError("map_rule: panels must be >= 1");
    IntervalRule out;
    out.nodes.reserve(rule.nodes.size() * panels);
    out.weights.reserve(rule.nodes.size() * panels);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double c = lo + 0.5 * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            out.nodes.push_back(c + 0.5 * h * rule.nodes[i]);
            out.weights.push_back(0.5 * h * rule.weights[i]);
        }
    }
    return out;
}

template <class F>
double integrate(const QuadratureRule& rule, double a, double b, F&& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
        s += rule.weights[i] * f(x);
    }
    return 0.5 * (b - a) * s;
}

// Tensor-product rule over [ax, bx] x [ay, by].
template <class F>
double integrate2d(const QuadratureRule& rx, double ax, double bx, const QuadratureRule& ry, double ay,
                   double by, F&& f) {
    return integrate(rx, ax, bx, [&](double x) { return integrate(ry, ay, by, [&](double y) { return f(x, y); }); });
}

}  // namespace nfedof
