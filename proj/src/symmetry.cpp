#include "spt/symmetry.hpp"

#include <bit>
#include <cmath>

#include "spt/errors.hpp"

namespace spt {

namespace {

struct VertexInfo {
    Reversor::Family family = Reversor::Family::Tilde;
    std::uint32_t axes = 0;   // axes whose value appears at the vertex
    std::vector<std::size_t> caustics;
};

VertexInfo describe(VertexMask v, const CausticType& type) {
    auto bp = symbolic_breakpoints(type);
    VertexInfo info;
    for (std::size_t i = 0; i <= type.n; ++i) {
        const Breakpoint& b = bp[2 * i + ((v >> i) & 1u)];
        if (b.kind == Breakpoint::Kind::Axis) info.axes |= 1u << b.index;
        if (b.kind == Breakpoint::Kind::Caustic) info.caustics.push_back(b.index);
        if (i == 0 && b.kind != Breakpoint::Kind::Origin) info.family = Reversor::Family::Hat;
    }
    return info;
}

// Square root of a formula value that must be non-negative at a feasible vertex.
double root(double v) {
    if (v < -1e-12) throw NegativeRadicand("seed formula radicand is negative");
    return std::sqrt(std::fmax(v, 0.0));
}

double pick(double magnitude, unsigned branch, unsigned bit) {
    return ((branch >> bit) & 1u) ? -magnitude : magnitude;
}

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

PhasePoint planar_seed(const VertexInfo& info, double lam, const Ellipsoid& ell, unsigned br) {
    // Coordinate 0 is y (axis b), coordinate 1 is x (axis a).
    const double b = ell.a(0), a = ell.a(1);
    double x = 0, y = 0, u = 0, w = 0;
    const bool hat = info.family == Reversor::Family::Hat;
    switch (info.axes | (hat ? 4u : 0u)) {
    case 0u: { // R, orthogonal impact on the hyperbola
        x = pick(root(a * (a - lam) / (a - b)), br, 0);
        y = pick(root(b * (lam - b) / (a - b)), br, 1);
        double s = std::sqrt(a * b / lam);
        u = s * x / a;
        w = s * y / b;
        break;
    }
    case 2u: // R_x, impact on the y axis
        y = pick(std::sqrt(b), br, 0);
        u = pick(root((a - lam) / a), br, 1);
        w = sign_of(y) * root(lam / a);
        break;
    case 1u: // R_y, impact on the x axis
        x = pick(std::sqrt(a), br, 0);
        w = pick(root((b - lam) / b), br, 1);
        u = sign_of(x) * root(lam / b);
        break;
    case 4u | 2u: // f o R_x, horizontal chord
        x = pick(root(a * lam / b), br, 0);
        y = pick(root(b - lam), br, 1);
        u = sign_of(x);
        break;
    case 4u | 1u: // f o R_y, vertical chord
        x = pick(root(a - lam), br, 0);
        y = pick(root(b * lam / a), br, 1);
        w = sign_of(y);
        break;
    case 4u | 3u: { // f o R_xy, chord through the centre
        u = pick(root((a - lam) / (a - b)), br, 0);
        w = pick(root((lam - b) / (a - b)), br, 1);
        double s = std::sqrt(a * b / lam);
        x = s * u;
        y = s * w;
        break;
    }
    default: throw FeasibilityError("vertex has an empty symmetry set");
    }
    return {Vec{y, x}, Vec{w, u}};
}

PhasePoint spatial_seed(const VertexInfo& info, const Vec& lam, const Ellipsoid& ell, unsigned br) {
    const Vec& A = ell.axes();
    const double prod = A[0] * A[1] * A[2];
    const double l1 = lam[0], l2 = lam[1];
    Vec x(3), u(3);
    auto others = [](std::size_t l) {
        std::size_t m = l == 0 ? 1 : 0;
        std::size_t n = l == 2 ? 1 : 2;
        return std::pair{m, n};
    };
    auto lone = [](std::uint32_t mask) {
        for (std::size_t j = 0; j < 3; ++j)
            if (mask == (1u << j)) return j;
        return std::size_t(3);
    };
    const bool hat = info.family == Reversor::Family::Hat;
    const int count = std::popcount(info.axes);

    if (!hat && count == 0) { // R: orthogonal impact
        double s = std::sqrt(prod / (l1 * l2));
        for (std::size_t l = 0; l < 3; ++l) {
            auto [m, n] = others(l);
            x[l] = pick(root(A[l] * (A[l] - l1) * (A[l] - l2) / ((A[l] - A[m]) * (A[l] - A[n]))), br,
                        unsigned(l));
            u[l] = s * x[l] / A[l];
        }
    } else if (!hat && count == 1) { // R_l: impact on the section S_l
        std::size_t l = lone(info.axes);
        auto [m, n] = others(l);
        std::size_t j = info.caustics.at(0), k = 1 - j;
        x[l] = 0;
        x[m] = pick(root(A[m] * (A[m] - lam[j]) / (A[m] - A[n])), br, 0);
        x[n] = pick(root(A[n] * (A[n] - lam[j]) / (A[n] - A[m])), br, 1);
        u[l] = pick(root((A[l] - lam[k]) / A[l]), br, 2);
        double nu = std::sqrt(lam[k] / (prod * lam[j]));
        u[m] = nu * A[n] * x[m];
        u[n] = nu * A[m] * x[n];
    } else if (!hat && count == 2) { // R_mn: impact at an endpoint of the x_l axis
        std::size_t l = lone(info.axes ^ 7u);
        auto [m, n] = others(l);
        x[l] = pick(std::sqrt(A[l]), br, 0);
        u[l] = sign_of(x[l]) * root(l1 * l2 / (A[m] * A[n]));
        u[m] = pick(root((A[m] - l1) * (A[m] - l2) / (A[m] * (A[m] - A[n]))), br, 1);
        u[n] = pick(root((A[n] - l1) * (A[n] - l2) / (A[n] * (A[n] - A[m]))), br, 2);
    } else if (hat && count == 3) { // f o R_123: chord through the centre
        double s = std::sqrt(prod / (l1 * l2));
        for (std::size_t l = 0; l < 3; ++l) {
            auto [m, n] = others(l);
            u[l] = pick(root((A[l] - l1) * (A[l] - l2) / ((A[l] - A[m]) * (A[l] - A[n]))), br,
                        unsigned(l));
            x[l] = s * u[l];
        }
    } else if (hat && count == 2) { // f o R_mn: chord crossing the x_l axis
        std::size_t l = lone(info.axes ^ 7u);
        auto [m, n] = others(l);
        std::size_t v = info.caustics.at(0), o = 1 - v;
        x[l] = pick(root(A[l] - lam[v]), br, 0);
        u[l] = 0;
        u[m] = pick(root((A[m] - lam[o]) / (A[m] - A[n])), br, 1);
        u[n] = pick(root((A[n] - lam[o]) / (A[n] - A[m])), br, 2);
        double s = std::sqrt(A[m] * A[n] * lam[v] / (A[l] * lam[o]));
        x[m] = s * u[m];
        x[n] = s * u[n];
    } else if (hat && count == 1) { // f o R_l: chord parallel to the x_l axis
        std::size_t l = lone(info.axes);
        auto [m, n] = others(l);
        x[l] = pick(root(A[l] * l1 * l2 / (A[m] * A[n])), br, 0);
        x[m] = pick(root((A[m] - l1) * (A[m] - l2) / (A[m] - A[n])), br, 1);
        x[n] = pick(root((A[n] - l1) * (A[n] - l2) / (A[n] - A[m])), br, 2);
        u[l] = sign_of(x[l]);
    } else {
        throw FeasibilityError("vertex has an empty symmetry set");
    }
    return {x, u};
}

} // namespace

Reversor reversor_of_vertex(VertexMask v, const CausticType& type) {
    VertexInfo info = describe(v, type);
    return {info.family, {type.n + 1, info.axes}};
}

std::vector<VertexMask> vertices_of_reversor(const Reversor& r, const CausticType& type) {
    std::vector<VertexMask> out;
    if (r.sigma.dim != type.n + 1) throw InvalidArgument("reversor dimension mismatch");
    for (VertexMask v = 0; v < (1u << (type.n + 1)); ++v)
        if (reversor_of_vertex(v, type) == r) out.push_back(v);
    return out;
}

Side side_of_vertex(VertexMask v, const CausticType& type) {
    auto bp = symbolic_breakpoints(type);
    for (std::size_t i = 0; i <= type.n; ++i) {
        if (bp[2 * i].kind == Breakpoint::Kind::Caustic &&
            bp[2 * i + 1].kind == Breakpoint::Kind::Caustic)
            return ((v >> i) & 1u) ? Side::Inner : Side::Outer;
    }
    return Side::Any;
}

VertexMask vertex_of_reversor(const Reversor& r, const CausticType& type, Side side) {
    auto vs = vertices_of_reversor(r, type);
    if (vs.empty())
        throw FeasibilityError(r.name() + " is not feasible for caustic type " + type.name());
    for (VertexMask v : vs) {
        Side s = side_of_vertex(v, type);
        if (side == Side::Any || s == Side::Any || s == side) return v;
    }
    throw FeasibilityError("requested side is not available for " + r.name());
}

std::vector<Reversor> feasible_reversors(const CausticType& type) {
    std::vector<Reversor> out;
    for (const auto& r : all_reversors(type.n + 1))
        if (!vertices_of_reversor(r, type).empty()) out.push_back(r);
    return out;
}

bool symmetry_set_contains(const Reversor& r, const PhasePoint& m, const Ellipsoid& ell, double tol) {
    if (r.has_empty_fixed_set()) return false;
    const double ptol = tol * ell.scale();
    Vec sq = r.sigma.apply(m.q);
    Vec sp = r.sigma.apply(m.p);
    if (r.family == Reversor::Family::Tilde) {
        Vec pt = -(m.p + reflection_step(m.q, m.p, ell) * ell.apply_D(m.q));
        return max_abs_diff(sq, m.q) <= ptol && max_abs_diff(sp, pt) <= tol;
    }
    Vec qh = m.q + chord_step(m.q, m.p, ell) * m.p;
    return max_abs_diff(sq, qh) <= ptol && norm(sp + m.p) <= tol;
}

PhasePoint seed_at_vertex(VertexMask v, const CausticParams& caustic, const Ellipsoid& ell,
                          unsigned branch) {
    const std::size_t n = ell.n();
    if (caustic.type.n != n) throw InvalidArgument("caustic dimension mismatch");
    if (n > 2) throw UnsupportedDimension("symmetric seeds are tabulated for planar and spatial billiards");
    if (branch >= branch_count(n + 1)) throw BranchOutOfRange("seed branch mask out of range");
    if (v >= (1u << (n + 1))) throw InvalidArgument("vertex mask out of range");
    VertexInfo info = describe(v, caustic.type);
    PhasePoint m = n == 1 ? planar_seed(info, caustic.lambda[0], ell, branch)
                          : spatial_seed(info, caustic.lambda, ell, branch);
    m.p = (1.0 / norm(m.p)) * m.p;
    if (dot(ell.apply_D(m.q), m.p) < 0) {
        if (info.family == Reversor::Family::Tilde) {
            m.p = -m.p;
        } else {
            m.q = m.q + chord_step(m.q, m.p, ell) * m.p;
        }
    }
    check_phase_point(m, ell, 1e-9);
    return m;
}

PhasePoint seed_point(const Reversor& r, const CausticParams& caustic, const Ellipsoid& ell,
                      unsigned branch, Side side) {
    return seed_at_vertex(vertex_of_reversor(r, caustic.type, side), caustic, ell, branch);
}

} // namespace spt
