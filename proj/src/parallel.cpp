#include "spt/parallel.hpp"

#include <omp.h>

#include "spt/errors.hpp"

namespace spt {

namespace {

GridValue eval_frequency(const Vec& lambda, const Ellipsoid& ell, const SpectralOptions& opts) {
    GridValue g;
    try {
        if (ell.n() == 1) {
            g.omega = Vec{rotation_number(lambda[0], ell, opts)};
        } else {
            FrequencyValue f = frequency_map(lambda, ell, opts);
            g.omega = f.omega;
            g.error_estimate = f.error_estimate;
        }
    } catch (const Error& e) {
        g.failure = e.kind();
    }
    return g;
}

GridValue eval_empirical(const Vec& lambda, const Ellipsoid& ell, std::size_t bounces) {
    GridValue g;
    try {
        g.omega = empirical_frequency(lambda, ell, bounces);
        g.error_estimate = 1.0 / double(bounces);
    } catch (const Error& e) {
        g.failure = e.kind();
    }
    return g;
}

} // namespace

std::vector<GridValue> frequency_grid(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                      const SpectralOptions& opts) {
    std::vector<GridValue> out(lambdas.size());
    const long n = long(lambdas.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) out[k] = eval_frequency(lambdas[k], ell, opts);
    return out;
}

std::vector<GridValue> frequency_grid_serial(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                             const SpectralOptions& opts) {
    std::vector<GridValue> out;
    for (const Vec& l : lambdas) out.push_back(eval_frequency(l, ell, opts));
    return out;
}

std::vector<GridValue> empirical_grid(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                      std::size_t bounces) {
    std::vector<GridValue> out(lambdas.size());
    const long n = long(lambdas.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) out[k] = eval_empirical(lambdas[k], ell, bounces);
    return out;
}

std::vector<GridValue> empirical_grid_serial(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                             std::size_t bounces) {
    std::vector<GridValue> out;
    for (const Vec& l : lambdas) out.push_back(eval_empirical(l, ell, bounces));
    return out;
}

std::vector<Vec> caustic_grid(const CausticType& type, const Ellipsoid& ell, std::size_t m) {
    if (type.n != ell.n()) throw InvalidArgument("caustic type and ellipsoid dimensions differ");
    if (m == 0) throw InvalidArgument("grid needs at least one point per side");
    const std::size_t n = type.n;
    auto lo = [&](std::size_t i) {
        bool upper = (type.mask >> i) & 1u;
        return upper ? ell.a(i) : (i == 0 ? 0.0 : ell.a(i - 1));
    };
    auto hi = [&](std::size_t i) {
        bool upper = (type.mask >> i) & 1u;
        return upper ? ell.a(i + 1) : ell.a(i);
    };
    std::vector<Vec> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= m;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vec l(n);
        std::size_t r = idx;
        for (std::size_t i = 0; i < n; ++i) {
            double t = (double(r % m) + 1.0) / double(m + 1);
            r /= m;
            // A parameter sharing its interval with the previous one (H1H1) starts above it.
            double from = (i > 0 && hi(i) == hi(i - 1)) ? l[i - 1] : lo(i);
            l[i] = from + t * (hi(i) - from);
        }
        out.push_back(l);
    }
    return out;
}

int worker_threads() { return omp_get_max_threads(); }

} // namespace spt
