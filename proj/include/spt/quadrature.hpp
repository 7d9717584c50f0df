#pragma once

//! \file quadrature.hpp
//! Vector-valued tanh-sinh quadrature with accurate endpoint distances.

#include <array>
#include <cmath>
#include <numbers>

namespace spt {

template <std::size_t K>
struct QuadratureResult {
    std::array<double, K> value{};
    double error = 0;
    int level = 0;
};

/*!
 * Integrates f over [lo, hi] by level-doubled tanh-sinh.
 *
 * f is called as f(s, dlo, dhi) with dlo = s - lo and dhi = hi - s computed
 * without cancellation, so integrands can resolve inverse square root
 * singularities at either end. Stops once successive levels agree to tol.
 */
template <std::size_t K, class F>
QuadratureResult<K> tanh_sinh(F&& f, double lo, double hi, double tol, int max_level = 12) {
    constexpr double kTMax = 4.0;
    constexpr double kHalfPi = std::numbers::pi / 2;
    const double width = hi - lo;
    const double half = 0.5 * width;

    auto add_node = [&](double t, std::array<double, K>& acc) {
        double u = kHalfPi * std::sinh(t);
        double ch = std::cosh(u);
        double w = kHalfPi * std::cosh(t) / (ch * ch);
        double tail = half * 2.0 / (std::exp(2.0 * std::fabs(u)) + 1.0);
        if (!(tail > 0)) return;
        double dlo, dhi, s;
        if (t >= 0) {
            dhi = tail;
            dlo = width - tail;
            s = hi - tail;
        } else {
            dlo = tail;
            dhi = width - tail;
            s = lo + tail;
        }
        auto v = f(s, dlo, dhi);
        for (std::size_t k = 0; k < K; ++k) acc[k] += w * v[k];
    };

    QuadratureResult<K> out;
    std::array<double, K> sum{};
    double h = 1.0;
    add_node(0.0, sum);
    for (double t = h; t <= kTMax; t += h) {
        add_node(t, sum);
        add_node(-t, sum);
    }
    std::array<double, K> prev{};
    for (std::size_t k = 0; k < K; ++k) prev[k] = half * h * sum[k];

    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        for (double t = h; t <= kTMax; t += 2 * h) {
            add_node(t, sum);
            add_node(-t, sum);
        }
        double err = 0;
        std::array<double, K> cur{};
        for (std::size_t k = 0; k < K; ++k) {
            cur[k] = half * h * sum[k];
            err = std::fmax(err, std::fabs(cur[k] - prev[k]));
        }
        out.value = cur;
        out.error = err;
        out.level = level;
        if (level >= 3 && err <= tol) break;
        prev = cur;
    }
    return out;
}

} // namespace spt
