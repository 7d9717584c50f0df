#include "spt/dynamics.hpp"

#include <cmath>

#include "spt/errors.hpp"

namespace spt {

namespace {

// One Newton step back onto the ellipsoid along the normal.
Vec project(Vec q, const Ellipsoid& ell) {
    Vec dq = ell.apply_D(q);
    double g = dot(dq, q) - 1.0;
    q -= (g / (2.0 * dot(dq, dq))) * dq;
    return q;
}

Vec normalized(Vec v) { return (1.0 / norm(v)) * v; }

std::string subscript(std::uint32_t flips, std::size_t dim) {
    std::string s;
    if (dim == 2) {
        if (flips & 2u) s += 'x';
        if (flips & 1u) s += 'y';
        return s;
    }
    for (std::size_t j = 0; j < dim; ++j)
        if ((flips >> j) & 1u) s += std::to_string(j + 1);
    return s;
}

} // namespace

std::string Reversor::name() const {
    return std::string(family == Family::Hat ? "fR" : "R") + subscript(sigma.flips, sigma.dim);
}

Reversor Reversor::parse(const std::string& name, std::size_t dim) {
    for (const auto& r : all_reversors(dim))
        if (r.name() == name) return r;
    throw InvalidArgument("unknown reversor '" + name + "'");
}

std::vector<Reversor> all_reversors(std::size_t dim) {
    std::vector<Reversor> out;
    for (auto fam : {Reversor::Family::Tilde, Reversor::Family::Hat})
        for (std::uint32_t m = 0; m < (1u << dim); ++m) out.push_back({fam, {dim, m}});
    return out;
}

std::vector<Reversor> nonempty_reversors(std::size_t dim) {
    std::vector<Reversor> out;
    for (const auto& r : all_reversors(dim))
        if (!r.has_empty_fixed_set()) out.push_back(r);
    return out;
}

double chord_step(const Vec& q, const Vec& p, const Ellipsoid& ell) {
    return -2.0 * dot(ell.apply_D(q), p) / dot(ell.apply_D(p), p);
}

double reflection_step(const Vec& q, const Vec& p, const Ellipsoid& ell) {
    Vec dq = ell.apply_D(q);
    return -2.0 * dot(dq, p) / dot(dq, dq);
}

void check_phase_point(const PhasePoint& m, const Ellipsoid& ell, double tol) {
    if (m.q.size() != ell.dim() || m.p.size() != ell.dim())
        throw InvalidArgument("phase point dimension mismatch");
    if (std::fabs(ell.level(m.q) - 1.0) > tol) throw DegenerateImpact("impact point is off the ellipsoid");
    if (std::fabs(norm(m.p) - 1.0) > tol) throw DegenerateImpact("velocity is not a unit vector");
    Vec dq = ell.apply_D(m.q);
    if (!(dot(dq, m.p) > 1e-14 * norm(dq))) throw DegenerateImpact("velocity is not outward");
}

PhasePoint billiard_map(const PhasePoint& m, const Ellipsoid& ell) {
    Vec dq = ell.apply_D(m.q);
    double s = dot(dq, m.p);
    if (!(s > 1e-14 * norm(dq))) throw DegenerateImpact("grazing or inward impact");
    Vec p1 = normalized(m.p + reflection_step(m.q, m.p, ell) * dq);
    Vec q1 = project(m.q + chord_step(m.q, p1, ell) * p1, ell);
    return {q1, p1};
}

PhasePoint billiard_map_inverse(const PhasePoint& m, const Ellipsoid& ell) {
    Reversor r{Reversor::Family::Tilde, {ell.dim(), 0}};
    return apply_reversor(r, billiard_map(apply_reversor(r, m, ell), ell), ell);
}

PhasePoint apply_symmetry(const Reflection& s, const PhasePoint& m) {
    return {s.apply(m.q), s.apply(m.p)};
}

PhasePoint apply_reversor(const Reversor& r, const PhasePoint& m, const Ellipsoid& ell) {
    if (r.family == Reversor::Family::Tilde) {
        Vec pt = -(m.p + reflection_step(m.q, m.p, ell) * ell.apply_D(m.q));
        return {r.sigma.apply(m.q), r.sigma.apply(pt)};
    }
    Vec qh = project(m.q + chord_step(m.q, m.p, ell) * m.p, ell);
    return {r.sigma.apply(qh), r.sigma.apply(-m.p)};
}

PhasePoint dual_map(const PhasePoint& m, const Ellipsoid& ell) {
    Vec p1 = m.p + reflection_step(m.q, m.p, ell) * ell.apply_D(m.q);
    PhasePoint out{Vec(ell.dim()), Vec(ell.dim())};
    for (std::size_t j = 0; j < ell.dim(); ++j) {
        double c = std::sqrt(ell.a(j));
        out.q[j] = c * p1[j];
        out.p[j] = -m.q[j] / c;
    }
    return out;
}

std::vector<PhasePoint> orbit(const PhasePoint& m, const Ellipsoid& ell, std::size_t steps) {
    std::vector<PhasePoint> out;
    out.reserve(steps + 1);
    out.push_back(m);
    for (std::size_t k = 0; k < steps; ++k) out.push_back(billiard_map(out.back(), ell));
    return out;
}

PhasePoint tangent_phase_point(const Ellipsoid& ell, const Vec& lambda, const Vec& face,
                               std::uint32_t x_signs, std::uint32_t p_signs) {
    const std::size_t d = ell.dim();
    if (face.size() != d - 1 || lambda.size() != d - 1)
        throw InvalidArgument("face and caustic need n entries each");
    Vec mu(d);
    for (std::size_t i = 1; i < d; ++i) mu[i] = face[i - 1];
    Vec q = elliptic_to_cartesian(mu, ell, x_signs);
    for (std::size_t j = 0; j < d; ++j)
        if (q[j] == 0) throw NonGenericPoint("tangent seeds need a point off the coordinate planes");

    Vec p(d);
    for (std::size_t i = 0; i < d; ++i) {
        double c2 = 1;
        for (std::size_t k = 0; k + 1 < d; ++k) c2 *= mu[i] - lambda[k];
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) c2 /= mu[i] - mu[j];
        if (c2 < -1e-12) throw NegativeRadicand("face point is outside the caustic cuboid");
        double ci = std::sqrt(std::fmax(c2, 0.0));
        if (i > 0 && ((p_signs >> (i - 1)) & 1u)) ci = -ci;
        Vec frame(d);
        for (std::size_t j = 0; j < d; ++j) frame[j] = q[j] / (ell.a(j) - mu[i]);
        p += (ci / norm(frame)) * frame;
    }
    return {q, normalized(p)};
}

} // namespace spt
