// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spt/errors.hpp"
#include "spt/parallel.hpp"
#include "spt/spt.hpp"
#include "spt/symmetry.hpp"

using namespace spt;

namespace {

constexpr double kGoldenTol = 1e-5;
constexpr double kClosureTol = 1e-8;
constexpr double kClassSeconds = 10.0;
constexpr double kAtlasSeconds = 900.0;
constexpr double kIdentityTol = 1e-12;
constexpr double kInvarianceTol = 1e-10;
constexpr double kExcursionTol = 1e-9;
constexpr double kOracleTol = 1e-4;
constexpr double kPonceletTol = 1e-7;

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Runs a criterion, turning an escaped exception into a failure line.
void criterion(int id, const char* title, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        report(id, title, ok, detail);
    } catch (const std::exception& e) {
        report(id, title, false, std::string("exception: ") + e.what());
    }
}

struct Golden {
    const char* type;
    std::vector<int> w;
    Vec axes, lambda;
    bool unordered;
};

const std::vector<Golden> kGolden = {
    {"H1H1", {4, 3, 2}, {0.13, 0.8, 1.0}, {0.130077, 0.648376}, false},
    {"EH2", {5, 4, 2}, {0.2, 0.3969, 1.0}, {0.199523, 0.762965}, false},
    {"EH1", {5, 4, 2}, {0.25, 0.49, 1.0}, {0.231635, 0.260266}, false},
    {"H1H2", {6, 4, 2}, {0.13, 0.45, 1.0}, {0.133273, 0.967756}, false},
    {"EH2", {6, 4, 2}, {0.13, 0.45, 1.0}, {0.126968, 0.962896}, false},
    {"EH1", {6, 4, 2}, {0.13, 0.8, 1.0}, {0.126231, 0.403278}, false},
    {"H1H1", {8, 4, 2}, {0.05, 0.95, 1.0}, {0.056134, 0.457414}, true},
    {"H1H1", {8, 6, 2}, {0.05, 0.95, 1.0}, {0.050041, 0.229595}, true},
};

double golden_error(const Vec& got, const Golden& g) {
    double direct = max_abs_diff(got, g.lambda);
    if (!g.unordered) return direct;
    return std::fmin(direct, max_abs_diff(got, Vec{g.lambda[1], g.lambda[0]}));
}

const Ellipsoid kPlane(Vec{0.5, 1.0});
const Ellipsoid kSpace(Vec{0.13, 0.8, 1.0});

// Uniform caustic parameters in the open component of a type.
Vec random_lambda(oracle::Rng& rng, const CausticType& t, const Ellipsoid& ell) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (;;) {
        Vec l(t.n);
        for (std::size_t i = 0; i < t.n; ++i) {
            bool upper = (t.mask >> i) & 1u;
            double lo = upper ? ell.a(i) : (i == 0 ? 0.0 : ell.a(i - 1)), hi = upper ? ell.a(i + 1) : ell.a(i);
            l[i] = lo + u(rng) * (hi - lo);
        }
        std::sort(l.begin(), l.end());
        try {
            if (make_caustic(l, ell).type == t) return l;
        } catch (const Error&) {
        }
    }
}

PhasePoint random_tangent_point(oracle::Rng& rng, const CausticParams& c, const Ellipsoid& ell) {
    Cuboid box = cuboid(c, ell);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Vec face(ell.n());
    for (std::size_t i = 1; i <= ell.n(); ++i)
        face[i - 1] = box.c[2 * i] + u(rng) * (box.c[2 * i + 1] - box.c[2 * i]);
    std::uint32_t xs = std::uint32_t(rng() % (1u << ell.dim())), ps = std::uint32_t(rng() % (1u << ell.n()));
    return tangent_phase_point(ell, c.lambda, face, xs, ps);
}

std::vector<std::pair<const Ellipsoid*, CausticType>> all_types() {
    std::vector<std::pair<const Ellipsoid*, CausticType>> out;
    for (const auto& t : CausticType::all(1)) out.push_back({&kPlane, t});
    for (const auto& t : CausticType::all(2)) out.push_back({&kSpace, t});
    return out;
}

// Point-count law recomputed from the recorded symmetry hits.
bool point_count_law(const Trajectory& t, const VerificationReport& r) {
    std::map<std::uint32_t, std::pair<int, int>> fam; // sigma -> (tilde, hat) hits
    for (const auto& h : r.hits) {
        auto& e = fam[h.reversor.sigma.flips];
        (h.reversor.family == Reversor::Family::Tilde ? e.first : e.second) += 1;
    }
    if (fam.empty()) return false;
    if (t.period() % 2 == 1) {
        if (fam.size() != 1) return false;
        return fam.begin()->second == std::pair{1, 1};
    }
    for (const auto& [s, e] : fam)
        if (e.first + e.second != 2) return false;
    return true;
}

} // namespace

int main() {
    std::printf("acceptance: %d worker thread(s)\n", worker_threads());

    criterion(1, "golden caustic parameters", [] {
        double worst = 0;
        std::string detail;
        for (const Golden& g : kGolden) {
            CausticParams c = invert_frequency(g.w, CausticType::parse(g.type, 2), Ellipsoid(g.axes));
            double err = golden_error(c.lambda, g);
            worst = std::fmax(worst, err);
            detail += fmt("%s(%d,%d,%d)=%.2e ", g.type, g.w[0], g.w[1], g.w[2], err);
        }
        return std::pair{worst <= kGoldenTol, detail + fmt("worst %.2e tol %.0e", worst, kGoldenTol)};
    });

    criterion(2, "catalog counts", [] {
        bool ok = enumerate_classes(1).size() == 12 && enumerate_classes(2).size() == 112;
        for (std::size_t n = 1; n <= 6; ++n)
            ok = ok && class_count(n) == (1ull << (2 * n)) * ((1ull << (n + 1)) - 1);
        return std::pair{ok, fmt("n=1: %zu, n=2: %zu, class_count(6)=%llu", enumerate_classes(1).size(),
                                 enumerate_classes(2).size(), (unsigned long long)class_count(6))};
    });

    auto t0 = std::chrono::steady_clock::now();
    std::vector<AtlasEntry> atlas;
    std::string atlas_error;
    try {
        atlas = minimal_atlas_serial();
    } catch (const std::exception& e) {
        atlas_error = e.what();
    }
    const double atlas_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    criterion(3, "atlas realizability", [&] {
        if (!atlas_error.empty()) return std::pair{false, "atlas threw: " + atlas_error};
        int verified = 0;
        bool periods = true;
        double worst_closure = 0, slowest = 0;
        std::string bad;
        for (const AtlasEntry& e : atlas) {
            slowest = std::fmax(slowest, e.seconds);
            if (!e.ok()) {
                bad += " " + e.cls.id();
                continue;
            }
            ++verified;
            std::size_t p = e.trajectory->period();
            bool in = e.cls.dim() == 2 ? (p == 3 || p == 4 || p == 6)
                                       : (p == 4 || p == 5 || p == 6 || p == 8 || p == 10);
            periods = periods && in;
            worst_closure = std::fmax(worst_closure, e.report.closure_residual);
        }
        bool ok = atlas.size() == 124 && verified == 124 && periods && worst_closure <= kClosureTol &&
                  slowest <= kClassSeconds && atlas_seconds <= kAtlasSeconds;
        return std::pair{ok, fmt("%d/%zu verified, periods %s, closure %.2e, slowest %.2f s, total %.1f s%s",
                                 verified, atlas.size(), periods ? "ok" : "out of range", worst_closure, slowest,
                                 atlas_seconds, bad.empty() ? "" : (" failed:" + bad).c_str())};
    });

    criterion(4, "algebraic identities", [] {
        oracle::Rng rng(20261014);
        double worst = 0;
        for (const Ellipsoid* ell : {&kPlane, &kSpace}) {
            const std::size_t d = ell->dim();
            for (int k = 0; k < 1000; ++k) {
                PhasePoint m = oracle::random_phase_point(rng, *ell);
                PhasePoint fm = billiard_map(m, *ell);
                auto dist = [&](const PhasePoint& a, const PhasePoint& b) {
                    worst = std::fmax(worst, oracle::phase_distance(a, b, *ell));
                };
                for (const Reversor& r : all_reversors(d)) dist(apply_reversor(r, apply_reversor(r, m, *ell), *ell), m);
                for (std::uint32_t s = 0; s < (1u << d); ++s) {
                    Reversor tilde{Reversor::Family::Tilde, {d, s}}, hat{Reversor::Family::Hat, {d, s}};
                    dist(apply_reversor(hat, apply_reversor(tilde, m, *ell), *ell), fm);
                    Reflection sigma{d, s};
                    dist(billiard_map(apply_symmetry(sigma, m), *ell), apply_symmetry(sigma, fm));
                }
                PhasePoint g = dual_map(m, *ell);
                dist(dual_map(g, *ell), {-fm.q, -fm.p});
                dist(billiard_map(g, *ell), dual_map(fm, *ell));
            }
        }
        // Dual images of symmetric seeds.
        int seeds = 0, inside = 0;
        for (auto [ell, type] : all_types())
            for (int k = 0; k < 1000 / 6 + 1; ++k) {
                CausticParams c = make_caustic(random_lambda(rng, type, *ell), *ell);
                for (const Reversor& r : feasible_reversors(type)) {
                    if (r.family != Reversor::Family::Tilde) continue;
                    PhasePoint g = dual_map(seed_point(r, c, *ell), *ell);
                    ++seeds;
                    inside += symmetry_set_contains({Reversor::Family::Hat, r.sigma.negated()}, g, *ell, kIdentityTol);
                }
            }
        return std::pair{worst <= kIdentityTol && inside == seeds,
                         fmt("worst residual %.2e tol %.0e, dual seeds %d/%d", worst, kIdentityTol, inside, seeds)};
    });

    criterion(5, "caustic invariance", [] {
        oracle::Rng rng(5);
        double worst = 0;
        bool types = true;
        for (auto [ell, type] : all_types())
            for (int s = 0; s < 100; ++s) {
                CausticParams c = make_caustic(random_lambda(rng, type, *ell), *ell);
                PhasePoint m = random_tangent_point(rng, c, *ell);
                CausticParams prev = caustic_params_of_line(m.q, m.p, *ell);
                for (int k = 0; k < 100; ++k) {
                    m = billiard_map(m, *ell);
                    CausticParams cur = caustic_params_of_line(m.q, m.p, *ell);
                    worst = std::fmax(worst, max_abs_diff(cur.lambda, prev.lambda));
                    types = types && cur.type == type;
                    prev = cur;
                }
            }
        return std::pair{worst <= kInvarianceTol && types,
                         fmt("worst consecutive difference %.2e tol %.0e, types %s", worst, kInvarianceTol,
                             types ? "kept" : "changed")};
    });

    criterion(6, "oscillation law", [&] {
        oracle::Rng rng(6);
        double worst = 0;
        for (auto [ell, type] : all_types())
            for (int s = 0; s < 20; ++s) {
                CausticParams c = make_caustic(random_lambda(rng, type, *ell), *ell);
                auto pts = orbit(random_tangent_point(rng, c, *ell), *ell, 200);
                worst = std::fmax(worst, max_cuboid_excursion(pts, c, *ell, 32));
            }
        int exact = 0, checked = 0;
        for (const AtlasEntry& e : atlas) {
            if (!e.trajectory) continue;
            const Trajectory& t = *e.trajectory;
            ++checked;
            worst = std::fmax(worst, max_cuboid_excursion(t.points, t.caustic, t.ell, 64));
            auto tp = turning_points(t.points, t.caustic, t.ell, true);
            bool same = true;
            for (std::size_t i = 0; i < t.winding.size(); ++i) same = same && tp[i] == 2 * t.winding[i];
            exact += same;
        }
        return std::pair{worst < kExcursionTol && exact == checked && checked == 124,
                         fmt("worst excursion %.2e tol %.0e, exact windings %d/%d", worst, kExcursionTol, exact,
                             checked)};
    });

    criterion(7, "frequency map against empirical frequencies", [] {
        double worst = 0;
        int points = 0;
        for (auto [ell, type] : all_types()) {
            auto lams = caustic_grid(type, *ell, ell->n() == 1 ? 20 : 5);
            auto fm = frequency_grid(lams, *ell);
            auto emp = empirical_grid(lams, *ell, 100000);
            for (std::size_t k = 0; k < lams.size(); ++k) {
                ++points;
                if (!fm[k].ok() || !emp[k].ok()) return std::pair{false, "grid point failed at " + type.name()};
                worst = std::fmax(worst, max_abs_diff(fm[k].omega, emp[k].omega));
            }
        }
        return std::pair{worst <= kOracleTol, fmt("%d points, worst %.2e tol %.0e", points, worst, kOracleTol)};
    });

    criterion(8, "symmetry point-count law", [&] {
        int ok = 0, even = 0, odd = 0;
        for (const AtlasEntry& e : atlas) {
            if (!e.trajectory) continue;
            (e.trajectory->period() % 2 ? odd : even) += 1;
            ok += point_count_law(*e.trajectory, e.report);
        }
        return std::pair{ok == 124, fmt("%d/124 (even %d, odd %d)", ok, even, odd)};
    });

    criterion(9, "Poncelet closure", [] {
        oracle::Rng rng(9);
        double worst = 0;
        for (const Golden& g : kGolden) {
            Ellipsoid ell(g.axes);
            CausticParams c = invert_frequency(g.w, CausticType::parse(g.type, 2), ell);
            for (int s = 0; s < 10; ++s) {
                PhasePoint m0 = random_tangent_point(rng, c, ell), m = m0;
                for (int k = 0; k < g.w[0]; ++k) m = billiard_map(m, ell);
                worst = std::fmax(worst, oracle::phase_distance(m, m0, ell));
            }
        }
        return std::pair{worst <= kPonceletTol, fmt("80 seeds, worst residual %.2e tol %.0e", worst, kPonceletTol)};
    });

    criterion(10, "special trajectories", [&] {
        auto find = [&](const std::string& id) -> const AtlasEntry* {
            for (const AtlasEntry& e : atlas)
                if (e.cls.id() == id) return &e;
            return nullptr;
        };
        const AtlasEntry* h12 = find(parse_class("H1H2:R+fR13", 2).id());
        const AtlasEntry* h = find(parse_class("H:R+fRxy", 1).id());
        if (!h12 || !h12->trajectory || !h || !h->trajectory) return std::pair{false, std::string("missing SPT")};
        const int k = 1;
        std::size_t n12 = distinct_impacts(*h12->trajectory), nh = distinct_impacts(*h->trajectory);
        bool ok = n12 == 4 && nh == std::size_t(k + 2) && h->trajectory->winding == std::vector<int>{4 * k + 2, 2};
        return std::pair{ok, fmt("H1H2 (6,4,2) {R,fR13}: %zu impacts (expected 4); H (6,2) R-SPT: %zu impacts "
                                 "(expected k+2 = %d)",
                                 n12, nh, k + 2)};
    });

    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
