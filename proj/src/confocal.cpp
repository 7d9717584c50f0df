#include "spt/confocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spt/errors.hpp"

namespace spt {

namespace {

constexpr double kPlaneSnap = 1e-12;
constexpr double kCollision = 1e-12;

// Bisection for an increasing function on the open interval (l, r).
template <class F>
double bisect_increasing(F&& f, double l, double r) {
    for (int it = 0; it < 400; ++it) {
        double m = 0.5 * (l + r);
        if (m <= l || m >= r) break;
        double v = f(m);
        if (v == 0) return m;
        (v < 0 ? l : r) = m;
    }
    return 0.5 * (l + r);
}


} // namespace

Ellipsoid::Ellipsoid(Vec axes) : a_(axes) {
    if (a_.size() < 2) throw UnsupportedDimension("ellipsoid needs at least two axes");
    if (a_[0] <= 0) throw InvalidArgument("squared semiaxes must be positive");
    for (std::size_t j = 1; j < a_.size(); ++j)
        if (!(a_[j] > a_[j - 1]))
            throw InvalidArgument("squared semiaxes must be strictly increasing");
    scale_ = std::sqrt(a_[a_.size() - 1]);
}

Vec Ellipsoid::apply_D(const Vec& x) const {
    Vec r(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] / a_[j];
    return r;
}

namespace detail {

Vec secular_roots(const Vec& a, const Vec& w, double c) {
    std::vector<std::size_t> live;
    Vec roots;
    double wsum = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (w[j] > 0) {
            live.push_back(j);
            wsum += w[j];
        } else {
            roots.push_back(a[j]);
        }
    }
    auto phi = [&](double s) {
        double v = -c;
        for (std::size_t j : live) v += w[j] / (a[j] - s);
        return v;
    };
    if (!live.empty()) {
        if (c > 0) {
            double hi = a[live.front()];
            double lo = hi - 2.0 * wsum / c - 1e-3 * std::fabs(hi) - 1e-300;
            roots.push_back(bisect_increasing(phi, lo, hi));
        }
        for (std::size_t k = 0; k + 1 < live.size(); ++k)
            roots.push_back(bisect_increasing(phi, a[live[k]], a[live[k + 1]]));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

Vec symmetric_eigenvalues(double (&A)[kMaxDim][kMaxDim], std::size_t n) {
    // Cyclic Jacobi rotations.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0, diag = 0;
        for (std::size_t i = 0; i < n; ++i) {
            diag += A[i][i] * A[i][i];
            for (std::size_t j = i + 1; j < n; ++j) off += A[i][j] * A[i][j];
        }
        if (off <= 1e-36 * diag || off == 0) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (A[p][q] == 0) continue;
                double theta = (A[q][q] - A[p][p]) / (2 * A[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t r = 0; r < n; ++r) {
                    double arp = A[r][p], arq = A[r][q];
                    A[r][p] = c * arp - s * arq;
                    A[r][q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    double apr = A[p][r], aqr = A[q][r];
                    A[p][r] = c * apr - s * aqr;
                    A[q][r] = s * apr + c * aqr;
                }
            }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = A[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace detail

EllipticPoint cartesian_to_elliptic(const Vec& x, const Ellipsoid& ell) {
    if (x.size() != ell.dim()) throw InvalidArgument("point dimension mismatch");
    EllipticPoint out;
    Vec w(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (std::fabs(x[j]) <= kPlaneSnap * ell.scale()) {
            out.plane_mask |= 1u << j;
            w[j] = 0;
        } else {
            w[j] = x[j] * x[j];
        }
    }
    out.mu = detail::secular_roots(ell.axes(), w, 1.0);
    return out;
}

Vec elliptic_to_cartesian(const Vec& mu, const Ellipsoid& ell, std::uint32_t sign_mask) {
    const std::size_t d = ell.dim();
    if (mu.size() != d) throw InvalidArgument("elliptic coordinate dimension mismatch");
    const double tol = kCollision * ell.a(d - 1);
    for (std::size_t i = 0; i < d; ++i) {
        if (i > 0 && mu[i] < ell.a(i - 1) - tol)
            throw NegativeRadicand("elliptic coordinates violate the interleaving");
        if (mu[i] > ell.a(i) + tol)
            throw NegativeRadicand("elliptic coordinates violate the interleaving");
    }
    Vec x(d);
    for (std::size_t j = 0; j < d; ++j) {
        double num = 1, den = 1;
        for (std::size_t i = 0; i < d; ++i) {
            num *= ell.a(j) - mu[i];
            if (i != j) den *= ell.a(j) - ell.a(i);
        }
        double x2 = std::max(0.0, num / den);
        x[j] = ((sign_mask >> j) & 1u) ? -std::sqrt(x2) : std::sqrt(x2);
    }
    return x;
}

std::string CausticType::name() const {
    if (n == 1) return (mask & 1u) ? "H" : "E";
    std::string s;
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t gap = ((mask >> (i - 1)) & 1u) ? i : i - 1;
        s += gap == 0 ? "E" : "H" + std::to_string(gap);
    }
    return s;
}

std::vector<CausticType> CausticType::all(std::size_t n) {
    std::vector<CausticType> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) out.push_back({n, m});
    return out;
}

CausticType CausticType::parse(const std::string& name, std::size_t n) {
    for (const auto& t : all(n))
        if (t.name() == name) return t;
    throw InvalidArgument("unknown caustic type '" + name + "'");
}

CausticParams make_caustic(const Vec& lambda, const Ellipsoid& ell) {
    const std::size_t n = ell.n();
    if (lambda.size() != n) throw InvalidArgument("need exactly n caustic parameters");
    const double tol = kCollision * ell.a(n);
    CausticType type{n, 0};
    for (std::size_t i = 1; i <= n; ++i) {
        double l = lambda[i - 1];
        if (!std::isfinite(l)) throw InvalidArgument("caustic parameter is not finite");
        if (i > 1 && !(l > lambda[i - 2]))
            throw InvalidArgument("caustic parameters must be strictly increasing");
        double below = i >= 2 ? ell.a(i - 2) : 0.0;
        if (std::fabs(l) <= tol) throw SingularCaustic("caustic parameter collides with 0");
        for (std::size_t j = 0; j <= n; ++j)
            if (std::fabs(l - ell.a(j)) <= tol)
                throw SingularCaustic("caustic parameter collides with a squared semiaxis");
        if (l > below && l < ell.a(i - 1)) continue;
        if (l > ell.a(i - 1) && l < ell.a(i)) {
            type.mask |= 1u << (i - 1);
            continue;
        }
        throw InvalidArgument("caustic parameter outside its admissible intervals");
    }
    return {lambda, type};
}

CausticParams caustic_params_of_line(const Vec& q, const Vec& p_in, const Ellipsoid& ell) {
    const std::size_t d = ell.dim();
    const std::size_t n = ell.n();
    if (q.size() != d || p_in.size() != d) throw InvalidArgument("line dimension mismatch");
    double pn = norm(p_in);
    if (!(pn > 0)) throw InvalidArgument("line direction is zero");
    Vec p = (1.0 / pn) * p_in;
    const Vec& a = ell.axes();
    Vec foot = q - dot(q, p) * p;

    // Orthonormal basis of p^perp from the Householder reflection taking p to +-e_k.
    std::size_t k = 0;
    for (std::size_t j = 1; j < d; ++j)
        if (std::fabs(p[j]) > std::fabs(p[k])) k = j;
    Vec v = p;
    v[k] += p[k] >= 0 ? 1.0 : -1.0;
    const double vv = dot(v, v);
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < d; ++j) {
        if (j == k) continue;
        Vec e(d);
        e[j] = 1.0;
        basis.push_back(e - (2.0 * v[j] / vv) * v);
    }

    // Compression of diag(a) - m m^T; its eigenvalues are the caustic parameters.
    double B[kMaxDim][kMaxDim];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            double s = -dot(basis[r], foot) * dot(basis[c], foot);
            for (std::size_t j = 0; j < d; ++j) s += basis[r][j] * a[j] * basis[c][j];
            B[r][c] = s;
        }
    Vec lambda = detail::symmetric_eigenvalues(B, n);
    const double tol = kCollision * a[n];
    if (lambda[0] <= tol) throw NonTransverse("line does not cross the ellipsoid transversally");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (std::fabs(lambda[i] - a[j]) <= tol)
                throw SingularLine("caustic parameter of the line collides with an axis");
    for (std::size_t i = 1; i < n; ++i)
        if (lambda[i] - lambda[i - 1] <= tol)
            throw SingularLine("line has a repeated caustic parameter");
    return make_caustic(lambda, ell);
}

std::vector<Breakpoint> symbolic_breakpoints(const CausticType& type) {
    const std::size_t n = type.n;
    std::vector<Breakpoint> seq{{Breakpoint::Kind::Origin, 0}};
    for (std::size_t g = 0; g <= n; ++g) {
        if (g >= 1) seq.push_back({Breakpoint::Kind::Axis, g - 1});
        for (std::size_t i = 1; i <= n; ++i) {
            std::size_t gap = ((type.mask >> (i - 1)) & 1u) ? i : i - 1;
            if (gap == g) seq.push_back({Breakpoint::Kind::Caustic, i - 1});
        }
    }
    seq.push_back({Breakpoint::Kind::Axis, n});
    return seq;
}

std::size_t Cuboid::index_of_axis(std::size_t j) const {
    for (std::size_t k = 0; k < kinds.size(); ++k)
        if (kinds[k].kind == Breakpoint::Kind::Axis && kinds[k].index == j) return k;
    throw InvalidArgument("axis not found among breakpoints");
}

std::size_t Cuboid::index_of_caustic(std::size_t i) const {
    for (std::size_t k = 0; k < kinds.size(); ++k)
        if (kinds[k].kind == Breakpoint::Kind::Caustic && kinds[k].index == i) return k;
    throw InvalidArgument("caustic not found among breakpoints");
}

Cuboid cuboid(const CausticParams& caustic, const Ellipsoid& ell) {
    Cuboid box;
    box.kinds = symbolic_breakpoints(caustic.type);
    for (const auto& b : box.kinds) {
        switch (b.kind) {
        case Breakpoint::Kind::Origin: box.c.push_back(0.0); break;
        case Breakpoint::Kind::Axis: box.c.push_back(ell.a(b.index)); break;
        case Breakpoint::Kind::Caustic: box.c.push_back(caustic.lambda[b.index]); break;
        }
    }
    for (std::size_t k = 1; k < box.c.size(); ++k)
        if (!(box.c[k] > box.c[k - 1]))
            throw InvalidArgument("caustic parameters inconsistent with their type");
    return box;
}

double cuboid_excursion(const Vec& mu, const Cuboid& box) {
    double e = 0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        e = std::max({e, box.lo(i) - mu[i], mu[i] - box.hi(i)});
    return e;
}

} // namespace spt
