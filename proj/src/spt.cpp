#include "spt/spt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "spt/errors.hpp"

namespace spt {

std::string winding_kind(const std::vector<int>& w) {
    bool any_odd = std::any_of(w.begin(), w.end(), [](int m) { return m % 2 != 0; });
    std::string s;
    for (int m : w) s += any_odd ? (m % 2 ? 'o' : 'e') : (m % 4 == 2 ? 't' : 'f');
    return s;
}

std::uint32_t vertex_delta_of_kind(const std::vector<int>& w) {
    bool any_odd = std::any_of(w.begin(), w.end(), [](int m) { return m % 2 != 0; });
    std::uint32_t d = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (any_odd ? (w[i] % 2 != 0) : (w[i] % 4 == 2)) d |= 1u << i;
    if (d == 0) throw InvalidArgument("winding numbers all divisible by 4 do not define a class");
    return d;
}

std::uint32_t even_winding_mask(const CausticType& type) {
    auto bp = symbolic_breakpoints(type);
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i <= type.n; ++i)
        if (bp[2 * i].kind == Breakpoint::Kind::Axis || bp[2 * i + 1].kind == Breakpoint::Kind::Axis)
            mask |= 1u << i;
    return mask;
}

bool winding_admissible(const CausticType& type, const std::vector<int>& w) {
    if (w.size() != type.n + 1) return false;
    if (w[0] < 2) return false;
    bool all4 = true;
    const std::uint32_t even = even_winding_mask(type);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 1) return false;
        if (((even >> i) & 1u) && w[i] % 2 != 0) return false;
        if (w[i] % 4 != 0) all4 = false;
    }
    return !all4;
}

namespace {

bool search_tail(const CausticType& type, std::uint32_t delta, std::vector<int>& w, std::size_t i) {
    const std::size_t n = type.n;
    if (i > n) return winding_admissible(type, w) && vertex_delta_of_kind(w) == delta;
    int lo = 2 + int(n - i);
    for (int m = lo; m < w[i - 1]; ++m) {
        w[i] = m;
        if (search_tail(type, delta, w, i + 1)) return true;
    }
    return false;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? sep : "") + xs[k];
    return s;
}

// Positions are compared in units of the largest semiaxis.
double phase_distance(const PhasePoint& x, const PhasePoint& y, const Ellipsoid& ell) {
    return norm(x.q - y.q) / ell.scale() + norm(x.p - y.p);
}

} // namespace

std::vector<int> minimal_winding(const CausticType& type, std::uint32_t delta) {
    if (delta == 0 || delta >= (1u << (type.n + 1))) throw InvalidArgument("vertex delta out of range");
    std::vector<int> w(type.n + 1);
    for (int m0 = int(type.n) + 2; m0 < 256; ++m0) {
        w[0] = m0;
        if (search_tail(type, delta, w, 1)) return w;
    }
    throw InvalidArgument("no admissible winding vector found");
}

std::string SptClass::id() const {
    const std::string r1 = first().name(), r2 = second().name();
    const Side s1 = side_of_vertex(v1, type), s2 = side_of_vertex(v2, type);
    if (s1 == Side::Any) return type.name() + ":" + r1 + "+" + r2;
    std::vector<std::string> outer, inner;
    (s1 == Side::Outer ? outer : inner).push_back(r1);
    (s2 == Side::Outer ? outer : inner).push_back(r2);
    return type.name() + ":" + join(outer, ",") + "|" + join(inner, ",");
}

std::uint64_t class_count(std::size_t n) {
    if (n == 0 || n > 20) throw UnsupportedDimension("class count needs 1 <= n <= 20");
    return (std::uint64_t(1) << (2 * n)) * ((std::uint64_t(1) << (n + 1)) - 1);
}

std::vector<SptClass> enumerate_classes(const CausticType& type) {
    std::vector<SptClass> out;
    const VertexMask nv = 1u << (type.n + 1);
    for (std::uint32_t delta = 1; delta < nv; ++delta)
        for (VertexMask v = 0; v < nv; ++v)
            if (v < (v ^ delta)) out.push_back({type, v, v ^ delta});
    return out;
}

std::vector<SptClass> enumerate_classes(std::size_t n) {
    if (n == 0 || n > 8) throw UnsupportedDimension("class enumeration needs 1 <= n <= 8");
    std::vector<SptClass> out;
    for (const auto& t : CausticType::all(n)) {
        auto cs = enumerate_classes(t);
        out.insert(out.end(), cs.begin(), cs.end());
    }
    return out;
}

SptClass parse_class(const std::string& id, std::size_t n) {
    auto canon = [](std::string s) {
        // Members on one side of '|' or around '+' are unordered.
        auto colon = s.find(':');
        if (colon == std::string::npos) return s;
        std::string head = s.substr(0, colon + 1), body = s.substr(colon + 1);
        auto sort_list = [](const std::string& part, char sep) {
            std::vector<std::string> items;
            std::size_t pos = 0;
            while (true) {
                auto next = part.find(sep, pos);
                items.push_back(part.substr(pos, next - pos));
                if (next == std::string::npos) break;
                pos = next + 1;
            }
            std::sort(items.begin(), items.end());
            return join(items, std::string(1, sep).c_str());
        };
        auto bar = body.find('|');
        if (bar == std::string::npos) return head + sort_list(body, '+');
        return head + sort_list(body.substr(0, bar), ',') + "|" + sort_list(body.substr(bar + 1), ',');
    };
    const std::string key = canon(id);
    for (const auto& c : enumerate_classes(n))
        if (canon(c.id()) == key) return c;
    throw InvalidArgument("unknown class '" + id + "'");
}

double closure_residual(const PhasePoint& m, const Ellipsoid& ell, std::size_t period) {
    PhasePoint x = m;
    for (std::size_t k = 0; k < period; ++k) x = billiard_map(x, ell);
    return phase_distance(x, m, ell);
}

namespace {

std::vector<double> closure_vector(const CausticParams& c, VertexMask v, unsigned branch,
                                   const Ellipsoid& ell, std::size_t period) {
    PhasePoint m = seed_at_vertex(v, c, ell, branch);
    PhasePoint x = m;
    for (std::size_t k = 0; k < period; ++k) x = billiard_map(x, ell);
    std::vector<double> r;
    for (std::size_t j = 0; j < ell.dim(); ++j) r.push_back((x.q[j] - m.q[j]) / ell.scale());
    for (std::size_t j = 0; j < ell.dim(); ++j) r.push_back(x.p[j] - m.p[j]);
    return r;
}

double l2(const std::vector<double>& r) {
    double s = 0;
    for (double x : r) s += x * x;
    return std::sqrt(s);
}

// Gauss-Newton on the caustic parameters to shrink the closure residual.
CausticParams polish(CausticParams c, VertexMask v, unsigned branch, const Ellipsoid& ell,
                     std::size_t period) {
    const std::size_t n = ell.n();
    auto r = closure_vector(c, v, branch, ell, period);
    double best = l2(r);
    for (int it = 0; it < 8 && best > 1e-14; ++it) {
        const double h = 1e-9 * ell.a(n);
        std::vector<std::vector<double>> J(n);
        try {
            for (std::size_t k = 0; k < n; ++k) {
                Vec lp = c.lambda;
                lp[k] += h;
                auto rp = closure_vector(make_caustic(lp, ell), v, branch, ell, period);
                J[k].resize(r.size());
                for (std::size_t i = 0; i < r.size(); ++i) J[k][i] = (rp[i] - r[i]) / h;
            }
        } catch (const Error&) {
            break;
        }
        // Normal equations (J^T J) d = -J^T r, n <= 2.
        double A[2][2] = {{0, 0}, {0, 0}}, b[2] = {0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t i = 0; i < r.size(); ++i) A[k][l] += J[k][i] * J[l][i];
            for (std::size_t i = 0; i < r.size(); ++i) b[k] -= J[k][i] * r[i];
        }
        Vec d(n);
        if (n == 1) {
            if (A[0][0] == 0) break;
            d[0] = b[0] / A[0][0];
        } else {
            double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
            if (det == 0) break;
            d[0] = (b[0] * A[1][1] - A[0][1] * b[1]) / det;
            d[1] = (A[0][0] * b[1] - A[1][0] * b[0]) / det;
        }
        bool improved = false;
        for (double damp = 1.0; damp > 1e-3; damp *= 0.5) {
            try {
                CausticParams trial = make_caustic(c.lambda + damp * d, ell);
                auto rt = closure_vector(trial, v, branch, ell, period);
                if (l2(rt) < best) {
                    c = trial, r = rt, best = l2(rt);
                    improved = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!improved) break;
    }
    return c;
}

} // namespace

Trajectory find_spt(const SptClass& cls, const Ellipsoid& ell, std::vector<int> winding,
                    unsigned branch, const FindOptions& opts) {
    if (cls.type.n != ell.n()) throw InvalidArgument("class and ellipsoid dimensions differ");
    if (winding.empty()) winding = cls.minimal_winding();
    if (!winding_admissible(cls.type, winding))
        throw InvalidArgument("winding numbers are not admissible for " + cls.type.name());
    if (vertex_delta_of_kind(winding) != cls.delta())
        throw InvalidArgument("winding kind does not connect the vertices of " + cls.id());

    CausticParams caustic = invert_frequency(winding, cls.type, ell, opts.spectral);
    const std::size_t period = std::size_t(winding[0]);

    Trajectory best;
    double best_res = INFINITY;
    for (VertexMask v : {cls.v1, cls.v2}) {
        CausticParams c = caustic;
        double res = closure_residual(seed_at_vertex(v, c, ell, branch), ell, period);
        if (opts.polish && res > 1e-13) {
            CausticParams p = polish(c, v, branch, ell, period);
            double rp = closure_residual(seed_at_vertex(v, p, ell, branch), ell, period);
            if (rp < res) c = p, res = rp;
        }
        if (res < best_res) {
            best_res = res;
            best.ell = ell;
            best.caustic = c;
            best.seed_vertex = v;
        }
        if (res <= opts.closure_tol) break;
    }
    if (!(best_res <= opts.closure_tol))
        throw DegenerateOrbit("orbit of " + cls.id() + " does not close after " + std::to_string(period) +
                              " bounces");
    best.class_id = cls.id();
    best.winding = winding;
    best.branch = branch;
    best.points = orbit(seed_at_vertex(best.seed_vertex, best.caustic, ell, branch), ell, period);
    best.closure_residual = best_res;
    return best;
}

std::size_t distinct_impacts(const Trajectory& traj, double tol) {
    std::vector<Vec> seen;
    const double t = tol * traj.ell.scale();
    for (std::size_t j = 0; j < traj.period(); ++j) {
        const Vec& q = traj.points[j].q;
        bool dup = std::any_of(seen.begin(), seen.end(), [&](const Vec& s) { return norm(s - q) <= t; });
        if (!dup) seen.push_back(q);
    }
    return seen.size();
}

namespace {

std::optional<VertexMask> snap_vertex(const Vec& mu, const Cuboid& box, double tol, bool impact) {
    VertexMask v = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (i == 0 && impact) continue;
        if (std::fabs(mu[i] - box.hi(i)) <= tol) v |= 1u << i;
        else if (std::fabs(mu[i] - box.lo(i)) > tol) return std::nullopt;
    }
    if (!impact && !(v & 1u)) return std::nullopt;
    return v;
}

} // namespace

VerificationReport verify_trajectory(const Trajectory& traj, const VerifyOptions& opts) {
    VerificationReport rep;
    const Ellipsoid& ell = traj.ell;
    const std::size_t period = traj.period();
    const std::size_t dim = ell.dim();
    if (period < 2) throw DegenerateOrbit("trajectory needs at least two bounces");
    auto fail = [&](std::string why) { rep.failures.push_back(std::move(why)); };

    rep.closure_residual = closure_residual(traj.points[0], ell, period);
    if (!(rep.closure_residual <= opts.closure_tol)) fail("closure residual above tolerance");
    {
        PhasePoint x = traj.points[0];
        for (std::size_t j = 1; j <= period; ++j) {
            x = billiard_map(x, ell);
            rep.consistency = std::max(rep.consistency, phase_distance(x, traj.points[j], ell));
        }
        if (!(rep.consistency <= opts.closure_tol)) fail("stored points are not an orbit of the map");
    }

    for (std::size_t j = 0; j < period; ++j) {
        CausticParams c = caustic_params_of_line(traj.points[j].q, traj.points[j + 1].p, ell);
        if (!(c.type == traj.caustic.type)) fail("chord has a different caustic type");
        rep.caustic_residual = std::max(rep.caustic_residual, max_abs_diff(c.lambda, traj.caustic.lambda));
    }
    if (!(rep.caustic_residual <= opts.caustic_tol)) fail("chords are not tangent to the caustics");

    rep.excursion = max_cuboid_excursion(traj.points, traj.caustic, ell, opts.samples_per_chord);
    if (!(rep.excursion <= opts.excursion_tol)) fail("elliptic coordinates leave the cuboid");

    auto tp = turning_points(traj.points, traj.caustic, ell, true);
    for (long t : tp) rep.measured_winding.push_back(int(t / 2));
    rep.winding_ok = rep.measured_winding == traj.winding;
    if (!rep.winding_ok) fail("measured winding numbers differ from the prescribed ones");

    rep.conjecture_ok = rep.measured_winding.back() >= 2;
    for (std::size_t i = 1; i < rep.measured_winding.size(); ++i)
        if (!(rep.measured_winding[i] < rep.measured_winding[i - 1])) rep.conjecture_ok = false;

    // Symmetry sets met by the orbit and the two point law.
    std::set<std::string> sets;
    for (std::size_t j = 0; j < period; ++j)
        for (const auto& r : nonempty_reversors(dim))
            if (symmetry_set_contains(r, traj.points[j], ell, opts.membership_tol)) {
                rep.hits.push_back({j, r});
                sets.insert(r.name());
            }
    rep.doubly_symmetric = sets.size() >= 2;
    rep.two_point_law = !rep.hits.empty();
    std::size_t families = 0;
    for (std::uint32_t s = 0; s < (1u << dim); ++s) {
        int tilde = 0, hat = 0;
        for (const auto& h : rep.hits)
            if (h.reversor.sigma.flips == s) (h.reversor.family == Reversor::Family::Tilde ? tilde : hat)++;
        if (tilde + hat == 0) continue;
        ++families;
        if (tilde + hat != 2) rep.two_point_law = false;
        if (period % 2 == 1 && !(tilde == 1 && hat == 1)) rep.two_point_law = false;
        if (period % 2 == 0 && !(tilde == 2 || hat == 2)) rep.two_point_law = false;
    }
    if (period % 2 == 1 && families != 1) rep.two_point_law = false;
    if (!rep.two_point_law) fail("symmetry set intersections violate the two point law");

    // Vertices reached at impacts (tilde family) and at chord midpoints (hat family).
    Cuboid box = cuboid(traj.caustic, ell);
    const double vtol = 1e-7 * ell.a(dim - 1);
    std::set<VertexMask> vs;
    for (std::size_t j = 0; j < period; ++j) {
        if (auto v = snap_vertex(cartesian_to_elliptic(traj.points[j].q, ell).mu, box, vtol, true)) vs.insert(*v);
        Vec mid = 0.5 * (traj.points[j].q + traj.points[j + 1].q);
        if (auto v = snap_vertex(cartesian_to_elliptic(mid, ell).mu, box, vtol, false)) vs.insert(*v);
    }
    rep.vertices.assign(vs.begin(), vs.end());
    rep.vertices_ok = true;
    if (!traj.class_id.empty()) {
        SptClass cls = parse_class(traj.class_id, ell.n());
        rep.vertices_ok = vs.count(cls.v1) && vs.count(cls.v2);
        try {
            if (vertex_delta_of_kind(traj.winding) != cls.delta()) rep.vertices_ok = false;
        } catch (const Error&) {
            rep.vertices_ok = false;
        }
    }
    if (!rep.vertices_ok) fail("trajectory does not connect the vertices of its class");

    rep.distinct_impacts = distinct_impacts(traj);
    return rep;
}

GeometricWinding geometric_winding(const Trajectory& traj) {
    const Ellipsoid& ell = traj.ell;
    const std::size_t dim = ell.dim(), period = traj.period();
    const double tol = 1e-9 * ell.scale();
    GeometricWinding g;
    for (std::size_t l = 0; l < dim; ++l) {
        std::vector<int> signs;
        for (std::size_t j = 0; j < period; ++j) {
            double x = traj.points[j].q[l];
            if (std::fabs(x) > tol) signs.push_back(x > 0 ? 1 : -1);
        }
        long c = 0;
        for (std::size_t k = 0; k < signs.size(); ++k)
            if (signs[k] != signs[(k + 1) % signs.size()]) ++c;
        g.plane_crossings.push_back(c);
    }
    for (std::size_t i = 0; i < ell.n(); ++i) {
        const double lam = traj.caustic.lambda[i];
        std::set<std::size_t> at_impact;
        long inner = 0;
        for (std::size_t j = 0; j < period; ++j) {
            const Vec& q = traj.points[j].q;
            const Vec& d = traj.points[j + 1].p;
            double len = norm(traj.points[j + 1].q - q);
            double alpha = 0, beta = 0, size = 0;
            for (std::size_t k = 0; k < dim; ++k) {
                alpha += d[k] * d[k] / (ell.a(k) - lam);
                beta += q[k] * d[k] / (ell.a(k) - lam);
                size += d[k] * d[k] / std::fabs(ell.a(k) - lam);
            }
            if (std::fabs(alpha) <= 1e-10 * size) continue;
            double t = -beta / alpha;
            if (std::fabs(t) <= 1e-7) at_impact.insert(j);
            else if (std::fabs(t - len) <= 1e-7) at_impact.insert((j + 1) % period);
            else if (t > 0 && t < len) ++inner;
        }
        g.caustic_touches.push_back(inner + long(at_impact.size()));
    }
    for (std::size_t l = 0; l < dim && dim == 3; ++l) {
        std::size_t m = (l + 1) % 3, n = (l + 2) % 3;
        double total = 0;
        bool ok = true;
        for (std::size_t j = 0; j < period; ++j) {
            const Vec& a = traj.points[j].q;
            const Vec& b = traj.points[j + 1].q;
            // A chord through the axis makes the turn ambiguous.
            double cross = a[m] * b[n] - a[n] * b[m];
            double dotp = a[m] * b[m] + a[n] * b[n];
            if (std::fabs(cross) <= tol * tol && dotp < 0) ok = false;
            total += std::atan2(cross, dotp);
        }
        g.axis_turns.push_back(ok ? total / (2 * std::numbers::pi) : NAN);
    }
    return g;
}

AtlasConfig AtlasConfig::stock() {
    AtlasConfig cfg;
    cfg.planar = Ellipsoid(Vec{0.2, 1.0});
    cfg.flat = {Ellipsoid(Vec{0.13, 0.8, 1.0}), Ellipsoid(Vec{0.05, 0.95, 1.0}),
                Ellipsoid(Vec{0.02, 0.5, 1.0})};
    cfg.thin = {Ellipsoid(Vec{0.13, 0.45, 1.0}), Ellipsoid(Vec{0.2, 0.3969, 1.0}),
                Ellipsoid(Vec{0.25, 0.49, 1.0}), Ellipsoid(Vec{0.05, 0.2, 1.0})};
    return cfg;
}

std::vector<Ellipsoid> AtlasConfig::candidates(const CausticType& type) const {
    if (type.n == 1) return {planar};
    // lambda_2 above a_2 (EH2, H1H2) wants thin shapes; the other list is the fallback.
    const bool thin_first = (type.mask >> 1) & 1u;
    std::vector<Ellipsoid> out = thin_first ? thin : flat;
    const auto& rest = thin_first ? flat : thin;
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

AtlasEntry solve_class(const SptClass& cls, const AtlasConfig& cfg) {
    AtlasEntry e;
    e.cls = cls;
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& ell : cfg.candidates(cls.type)) {
        try {
            Trajectory t = find_spt(cls, ell, {}, 0, cfg.find);
            VerificationReport r = verify_trajectory(t, cfg.verify);
            e.trajectory = t;
            e.report = r;
            if (r.passed()) break;
            e.error = r.failures.front();
        } catch (const Error& err) {
            e.error = err.kind() + ": " + err.what();
        }
    }
    if (e.ok()) e.error.clear();
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

namespace {

std::vector<SptClass> atlas_classes() {
    auto cs = enumerate_classes(1);
    auto c3 = enumerate_classes(2);
    cs.insert(cs.end(), c3.begin(), c3.end());
    return cs;
}

} // namespace

std::vector<AtlasEntry> minimal_atlas(const AtlasConfig& cfg) {
    const auto classes = atlas_classes();
    std::vector<AtlasEntry> out(classes.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < classes.size(); ++k) out[k] = solve_class(classes[k], cfg);
    return out;
}

std::vector<AtlasEntry> minimal_atlas_serial(const AtlasConfig& cfg) {
    std::vector<AtlasEntry> out;
    for (const auto& c : atlas_classes()) out.push_back(solve_class(c, cfg));
    return out;
}

} // namespace spt
