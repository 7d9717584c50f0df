#include "spt/spectral.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "spt/errors.hpp"
#include "spt/quadrature.hpp"

namespace spt {

namespace {

constexpr std::size_t kMoments = 4;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Maps an unconstrained vector onto the open component of a caustic type.
struct Component {
    std::vector<double> lo, hi;
    std::vector<bool> chained;

    Component(const CausticType& type, const Ellipsoid& ell) {
        auto edge = [&](std::size_t g) { return g == 0 ? 0.0 : ell.a(g - 1); };
        std::size_t prev_gap = 0;
        for (std::size_t i = 1; i <= type.n; ++i) {
            std::size_t gap = ((type.mask >> (i - 1)) & 1u) ? i : i - 1;
            lo.push_back(edge(gap));
            hi.push_back(edge(gap + 1));
            chained.push_back(i > 1 && gap == prev_gap);
            prev_gap = gap;
        }
    }

    Vec lambda(const Vec& u) const {
        Vec l(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            double a = chained[i] ? l[i - 1] : lo[i];
            l[i] = a + (hi[i] - a) * logistic(u[i]);
        }
        return l;
    }
};

constexpr double kUMax = 24.0;

} // namespace

PeriodIntegrals period_integrals(const CausticParams& caustic, const Ellipsoid& ell,
                                 const SpectralOptions& opts) {
    const std::size_t n = ell.n();
    if (n > kMoments) throw UnsupportedDimension("period integrals are limited to n <= 4");
    Cuboid box = cuboid(caustic, ell);
    const Vec& c = box.c;
    PeriodIntegrals out;
    for (std::size_t i = 0; i <= n; ++i) {
        const std::size_t klo = 2 * i, khi = 2 * i + 1;
        const double lo = c[klo], hi = c[khi];
        auto integrand = [&](double s, double dlo, double dhi) {
            double P = 1;
            for (std::size_t k = 1; k < c.size(); ++k) {
                if (k == klo) P *= dlo;
                else if (k == khi) P *= dhi;
                else if (k < klo) P *= (lo - c[k]) + dlo;
                else P *= (c[k] - hi) + dhi;
            }
            double base = 1.0 / std::sqrt(P);
            std::array<double, kMoments> v{};
            for (std::size_t m = 0; m < kMoments; ++m) {
                v[m] = base;
                base *= s;
            }
            return v;
        };
        auto r = tanh_sinh<kMoments>(integrand, lo, hi, opts.quad_tol, opts.max_level);
        out.K.emplace_back(r.value.begin(), r.value.begin() + std::max<std::size_t>(n, 1));
        out.error = std::max(out.error, r.error);
    }
    return out;
}

double rotation_number(double lambda, const Ellipsoid& ell, const SpectralOptions& opts) {
    if (ell.n() != 1) throw UnsupportedDimension("rotation number needs a planar billiard");
    return frequency_map(Vec{lambda}, ell, opts).omega[0];
}

FrequencyValue frequency_map(const Vec& lambda, const Ellipsoid& ell, const SpectralOptions& opts) {
    const std::size_t n = ell.n();
    if (n != 1 && n != 2) throw UnsupportedDimension("frequency map is implemented for n = 1, 2");
    CausticParams caustic = make_caustic(lambda, ell);
    PeriodIntegrals pi = period_integrals(caustic, ell, opts);
    const auto& K = pi.K;
    FrequencyValue fv;
    if (n == 1) {
        fv.omega = Vec{K[0][0] / (2.0 * K[1][0])};
        fv.error_estimate = pi.error * (1.0 + fv.omega[0]) / K[1][0];
        return fv;
    }
    // K0/2 - w1 K1 + w2 K2 = 0 for both moments.
    double a11 = K[1][0], a12 = -K[2][0], a21 = K[1][1], a22 = -K[2][1];
    double b1 = 0.5 * K[0][0], b2 = 0.5 * K[0][1];
    double det = a11 * a22 - a12 * a21;
    if (det == 0) throw SingularCaustic("degenerate period matrix");
    fv.omega = Vec{(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det};
    double inv_norm = (std::fabs(a11) + std::fabs(a12) + std::fabs(a21) + std::fabs(a22)) / std::fabs(det);
    fv.error_estimate = pi.error * inv_norm * (1.0 + std::fabs(fv.omega[0]) + std::fabs(fv.omega[1]));
    return fv;
}

TurningPointCounter::TurningPointCounter(const Cuboid& box, const Ellipsoid& ell, double endpoint_tol)
    : box_(box), ell_(ell), tol_(endpoint_tol * ell.scale()), counts_(box.n() + 1, 0) {
    for (std::size_t j = 0; j < ell.dim(); ++j) axis_bp_.push_back(box.index_of_axis(j));
    for (std::size_t i = 0; i < ell.n(); ++i) caustic_bp_.push_back(box.index_of_caustic(i));
}

void TurningPointCounter::add_chord(const Vec& q, const Vec& d, double len) {
    std::uint32_t start = 0, end = 0;
    auto classify = [&](double t, std::size_t k) {
        if (std::fabs(t) <= tol_) start |= 1u << k;
        else if (std::fabs(t - len) <= tol_) end |= 1u << k;
        else if (t > 0 && t < len) ++counts_[Cuboid::owner(k)];
    };
    for (std::size_t j = 0; j < q.size(); ++j)
        if (d[j] != 0) classify(-q[j] / d[j], axis_bp_[j]);
    for (std::size_t i = 0; i < caustic_bp_.size(); ++i) {
        double lam = box_.c[caustic_bp_[i]];
        double alpha = 0, beta = 0, size = 0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            double r = 1.0 / (ell_.a(j) - lam);
            alpha += d[j] * d[j] * r;
            beta += q[j] * d[j] * r;
            size += d[j] * d[j] * std::fabs(r);
        }
        // alpha = 0: the chord runs along an asymptote and touches the caustic at infinity.
        if (std::fabs(alpha) > 1e-10 * size) classify(-beta / alpha, caustic_bp_[i]);
    }
    if (!started_) {
        first_start_ = start;
        started_ = true;
    } else {
        flush(pending_end_ | start);
    }
    pending_end_ = end;
}

void TurningPointCounter::flush(std::uint32_t mask) {
    mask |= 1u; // the impact itself is a turning point of mu_0
    for (std::size_t k = 0; k < 32; ++k)
        if ((mask >> k) & 1u) ++counts_[Cuboid::owner(k)];
}

void TurningPointCounter::close_loop() {
    if (!started_) return;
    flush(pending_end_ | first_start_);
    started_ = false;
}

void TurningPointCounter::finish() {
    if (!started_) return;
    flush(first_start_);
    flush(pending_end_);
    started_ = false;
}

std::vector<long> turning_points(const std::vector<PhasePoint>& points, const CausticParams& caustic,
                                 const Ellipsoid& ell, bool periodic) {
    TurningPointCounter counter(cuboid(caustic, ell), ell);
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const Vec& q = points[j].q;
        Vec chord = points[j + 1].q - q;
        counter.add_chord(q, points[j + 1].p, norm(chord));
    }
    if (periodic) counter.close_loop();
    else counter.finish();
    return counter.counts();
}

namespace {

std::vector<Vec> sample_coordinates(const std::vector<PhasePoint>& points, const Ellipsoid& ell,
                                    std::size_t samples, double offset) {
    std::vector<Vec> mus;
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const Vec& q = points[j].q;
        Vec chord = points[j + 1].q - q;
        for (std::size_t k = 0; k < samples; ++k) {
            double t = (double(k) + offset) / double(samples);
            mus.push_back(cartesian_to_elliptic(q + t * chord, ell).mu);
        }
    }
    return mus;
}

} // namespace

std::vector<long> sampled_turning_points(const std::vector<PhasePoint>& points,
                                         const CausticParams& caustic, const Ellipsoid& ell,
                                         std::size_t samples_per_chord) {
    const std::size_t n = ell.n();
    const std::size_t chords = points.empty() ? 0 : points.size() - 1;
    std::vector<long> counts(n + 1, 0);
    counts[0] = 2 * long(chords);
    if (chords == 0 || samples_per_chord < 2) return counts;
    auto mus = sample_coordinates(points, ell, samples_per_chord, 0.0);
    (void)caustic;
    constexpr double kFlat = 1e-15;
    for (std::size_t i = 1; i <= n; ++i) {
        int last = 0;
        for (std::size_t k = 0; k + 1 < mus.size(); ++k) {
            double delta = mus[k + 1][i] - mus[k][i];
            if (std::fabs(delta) <= kFlat) continue;
            int s = delta > 0 ? 1 : -1;
            if (last != 0 && s != last) ++counts[i];
            last = s;
        }
    }
    return counts;
}

double max_cuboid_excursion(const std::vector<PhasePoint>& points, const CausticParams& caustic,
                            const Ellipsoid& ell, std::size_t samples_per_chord) {
    Cuboid box = cuboid(caustic, ell);
    double worst = 0;
    for (const Vec& mu : sample_coordinates(points, ell, samples_per_chord, 0.5))
        worst = std::max(worst, cuboid_excursion(mu, box));
    for (const auto& m : points)
        worst = std::max(worst, cuboid_excursion(cartesian_to_elliptic(m.q, ell).mu, box));
    return worst;
}

PhasePoint generic_tangent_seed(const CausticParams& caustic, const Ellipsoid& ell, std::uint64_t salt) {
    Cuboid box = cuboid(caustic, ell);
    const double golden = 0.6180339887498949;
    Vec face(ell.n());
    for (std::size_t i = 1; i <= ell.n(); ++i) {
        double frac = std::fmod(0.3 + golden * double(i) + 0.41421356237 * double(salt), 1.0);
        face[i - 1] = box.lo(i) + (0.15 + 0.7 * frac) * (box.hi(i) - box.lo(i));
    }
    auto xs = std::uint32_t(salt * 2654435761u) & ((1u << ell.dim()) - 1u);
    auto ps = std::uint32_t(salt >> 3) & ((1u << ell.n()) - 1u);
    return tangent_phase_point(ell, caustic.lambda, face, xs, ps);
}

Vec empirical_frequency(const Vec& lambda, const Ellipsoid& ell, std::size_t bounces,
                        std::size_t samples_per_chord, std::uint64_t salt) {
    CausticParams caustic = make_caustic(lambda, ell);
    if (bounces == 0) throw InvalidArgument("need at least one bounce");
    PhasePoint m = generic_tangent_seed(caustic, ell, salt);
    std::vector<long> counts;
    if (samples_per_chord > 0) {
        counts = sampled_turning_points(orbit(m, ell, bounces), caustic, ell, samples_per_chord);
    } else {
        TurningPointCounter counter(cuboid(caustic, ell), ell, 1e-9);
        for (std::size_t k = 0; k < bounces; ++k) {
            PhasePoint next = billiard_map(m, ell);
            counter.add_chord(m.q, next.p, norm(next.q - m.q));
            m = next;
        }
        counter.finish();
        counts = counter.counts();
    }
    Vec omega(ell.n());
    for (std::size_t i = 1; i <= ell.n(); ++i) omega[i - 1] = double(counts[i]) / (4.0 * double(bounces));
    return omega;
}

Vec winding_target(const std::vector<int>& winding) {
    if (winding.size() < 2) throw InvalidArgument("winding vector needs at least two entries");
    if (winding[0] < 2) throw InvalidArgument("m_0 must be at least 2");
    Vec t;
    for (std::size_t i = 1; i < winding.size(); ++i) {
        if (winding[i] < 1) throw InvalidArgument("winding numbers must be positive");
        t.push_back(double(winding[i]) / (2.0 * winding[0]));
    }
    return t;
}

InversionResult invert_frequency_detailed(const std::vector<int>& winding, const CausticType& type,
                                          const Ellipsoid& ell, const SpectralOptions& opts) {
    const std::size_t n = ell.n();
    if (n != 1 && n != 2) throw UnsupportedDimension("frequency inversion is implemented for n = 1, 2");
    if (winding.size() != n + 1) throw InvalidArgument("winding vector must have n + 1 entries");
    if (type.n != n) throw InvalidArgument("caustic type dimension mismatch");
    const Vec target = winding_target(winding);
    // An interval ending at a squared semiaxis is crossed in pairs.
    auto bp = symbolic_breakpoints(type);
    for (std::size_t i = 0; i <= n; ++i) {
        bool axis_end = bp[2 * i].kind == Breakpoint::Kind::Axis || bp[2 * i + 1].kind == Breakpoint::Kind::Axis;
        if (axis_end && winding[i] % 2 != 0)
            throw InvalidArgument("m_" + std::to_string(i) + " must be even for caustic type " + type.name());
    }
    const Component comp(type, ell);

    auto residual = [&](const Vec& u, Vec* omega_out) {
        Vec om = frequency_map(comp.lambda(u), ell, opts).omega;
        if (omega_out) *omega_out = om;
        return om - target;
    };
    auto sup = [](const Vec& v) {
        double m = 0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    };

    InversionResult out;
    if (n == 1) {
        // Scan for a sign change, then Illinois false position.
        double ul = 0, ur = 0, fl = 0, fr = 0;
        bool found = false;
        double prev_u = -kUMax, prev_f = residual(Vec{prev_u}, nullptr)[0];
        for (double u = -kUMax + 0.5; u <= kUMax + 1e-12; u += 0.5) {
            double f = residual(Vec{u}, nullptr)[0];
            if ((prev_f <= 0 && f >= 0) || (prev_f >= 0 && f <= 0)) {
                ul = prev_u, fl = prev_f, ur = u, fr = f;
                found = true;
                break;
            }
            prev_u = u, prev_f = f;
        }
        if (!found) throw NoSolutionInComponent("rotation number target not attained in " + type.name());
        int side = 0;
        double u = ul, f = fl;
        for (int it = 0; it < 200 && std::fabs(f) > 1e-14 && ur - ul > 1e-15; ++it) {
            u = (ul * fr - ur * fl) / (fr - fl);
            if (!(u > ul && u < ur)) u = 0.5 * (ul + ur);
            f = residual(Vec{u}, nullptr)[0];
            ++out.iterations;
            if ((f < 0) == (fl < 0)) {
                ul = u, fl = f;
                if (side == -1) fr *= 0.5;
                side = -1;
            } else {
                ur = u, fr = f;
                if (side == 1) fl *= 0.5;
                side = 1;
            }
        }
        Vec om;
        Vec r = residual(Vec{u}, &om);
        out.caustic = make_caustic(comp.lambda(Vec{u}), ell);
        out.omega = om;
        out.residual = sup(r);
        if (out.residual > 1e-10)
            throw NoSolutionInComponent("rotation number inversion did not converge");
        return out;
    }

    // Coarse scan over the component, then damped Newton from the best starts.
    constexpr int kGrid = 17;
    struct Start {
        double err;
        Vec u;
    };
    std::vector<Start> starts;
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            Vec u{-16.0 + 32.0 * i / (kGrid - 1), -16.0 + 32.0 * j / (kGrid - 1)};
            try {
                starts.push_back({sup(residual(u, nullptr)), u});
            } catch (const Error&) {
                // corners of chained components can collide with an axis
            }
        }
    std::sort(starts.begin(), starts.end(), [](const Start& x, const Start& y) { return x.err < y.err; });

    for (std::size_t s = 0; s < std::min<std::size_t>(8, starts.size()); ++s) {
        Vec u = starts[s].u;
        Vec r = residual(u, nullptr);
        double err = sup(r);
        int iters = 0;
        for (; iters < 80 && err > 1e-13; ++iters) {
            const double h = 1e-5;
            double J[2][2];
            try {
                for (int c = 0; c < 2; ++c) {
                    Vec up = u, um = u;
                    up[c] += h;
                    um[c] -= h;
                    Vec d = (1.0 / (2 * h)) * (residual(up, nullptr) - residual(um, nullptr));
                    J[0][c] = d[0];
                    J[1][c] = d[1];
                }
            } catch (const Error&) {
                break;
            }
            double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            if (det == 0 || !std::isfinite(det)) break;
            Vec step{-(J[1][1] * r[0] - J[0][1] * r[1]) / det, -(J[0][0] * r[1] - J[1][0] * r[0]) / det};
            double len = norm(step);
            if (len > 4.0) step *= 4.0 / len;
            bool accepted = false;
            for (double damp = 1.0; damp > 1e-6; damp *= 0.5) {
                Vec trial = u + damp * step;
                if (std::fabs(trial[0]) > 2 * kUMax || std::fabs(trial[1]) > 2 * kUMax) continue;
                Vec rt;
                try {
                    rt = residual(trial, nullptr);
                } catch (const Error&) {
                    continue;
                }
                if (sup(rt) < err) {
                    u = trial, r = rt, err = sup(rt);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        out.iterations += iters;
        if (err <= 1e-10) {
            Vec om;
            residual(u, &om);
            out.caustic = make_caustic(comp.lambda(u), ell);
            out.omega = om;
            out.residual = err;
            return out;
        }
    }
    throw NoSolutionInComponent("frequency target not attained in " + type.name());
}

CausticParams invert_frequency(const std::vector<int>& winding, const CausticType& type,
                               const Ellipsoid& ell, const SpectralOptions& opts) {
    return invert_frequency_detailed(winding, type, ell, opts).caustic;
}

} // namespace spt
