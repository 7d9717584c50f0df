#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spt/errors.hpp"
#include "spt/quadrature.hpp"
#include "spt/spectral.hpp"

using namespace spt;

namespace {

std::vector<double> linspace_open(double lo, double hi, int m) {
    std::vector<double> out;
    for (int k = 1; k <= m; ++k) out.push_back(lo + (hi - lo) * k / (m + 1));
    return out;
}

double closure(PhasePoint m, const Ellipsoid& ell, std::size_t period) {
    PhasePoint start = m;
    for (std::size_t k = 0; k < period; ++k) m = billiard_map(m, ell);
    return oracle::phase_distance(m, start, ell);
}

} // namespace

TEST_CASE("tanh-sinh handles inverse square root endpoints") {
    auto f = [](double, double dlo, double dhi) { return std::array<double, 1>{1.0 / std::sqrt(dlo * dhi)}; };
    auto r = tanh_sinh<1>(f, 0.0, 1.0, 1e-14);
    CHECK(std::fabs(r.value[0] - std::numbers::pi) < 1e-13);

    auto g = [](double s, double, double) { return std::array<double, 2>{std::exp(s), s * s}; };
    auto q = tanh_sinh<2>(g, -1.0, 2.0, 1e-14);
    CHECK(std::fabs(q.value[0] - (std::exp(2.0) - std::exp(-1.0))) < 1e-13);
    CHECK(std::fabs(q.value[1] - 3.0) < 1e-13);
}

TEST_CASE("rotation number matches Legendre integrals") {
    for (Vec axes : {Vec{0.5, 1.0}, Vec{1.0, 2.0}, Vec{0.2, 1.0}}) {
        Ellipsoid ell(axes);
        const double b = ell.a(0), a = ell.a(1);
        double worst = 0;
        for (double lam : linspace_open(0, b, 20)) worst = std::fmax(worst, std::fabs(rotation_number(lam, ell) - oracle::rotation_number(lam, b, a)));
        for (double lam : linspace_open(b, a, 20)) worst = std::fmax(worst, std::fabs(rotation_number(lam, ell) - oracle::rotation_number(lam, b, a)));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("halving the quadrature tolerance stays within the error estimate") {
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    SpectralOptions loose{1e-10, 12}, tight{5e-11, 12};
    for (Vec lam : {Vec{0.1, 0.5}, Vec{0.2, 0.5}, Vec{0.1, 0.9}, Vec{0.2, 0.9}}) {
        FrequencyValue a = frequency_map(lam, ell, loose), b = frequency_map(lam, ell, tight);
        CHECK(max_abs_diff(a.omega, b.omega) <= std::fmax(a.error_estimate, 1e-14));
    }
}

TEST_CASE("frequency map at published periodic caustics") {
    struct Row {
        Vec axes, lambda, omega;
    };
    for (const Row& r : {Row{{0.13, 0.8, 1.0}, {0.130077, 0.648376}, {0.375, 0.25}},
                         Row{{0.2, 0.3969, 1.0}, {0.199523, 0.762965}, {0.4, 0.2}},
                         Row{{0.25, 0.49, 1.0}, {0.231635, 0.260266}, {0.4, 0.2}}}) {
        FrequencyValue f = frequency_map(r.lambda, Ellipsoid(r.axes));
        CHECK(max_abs_diff(f.omega, r.omega) < 1e-4);
    }
}

TEST_CASE("frequency inversion reproduces published caustic parameters") {
    struct Row {
        const char* type;
        std::vector<int> w;
        Vec axes, lambda;
    };
    for (const Row& r : {Row{"H1H1", {4, 3, 2}, {0.13, 0.8, 1.0}, {0.130077, 0.648376}},
                         Row{"H1H2", {6, 4, 2}, {0.13, 0.45, 1.0}, {0.133273, 0.967756}},
                         Row{"EH1", {6, 4, 2}, {0.13, 0.8, 1.0}, {0.126231, 0.403278}}}) {
        CAPTURE(r.type);
        Ellipsoid ell(r.axes);
        InversionResult inv = invert_frequency_detailed(r.w, CausticType::parse(r.type, 2), ell);
        CHECK(max_abs_diff(inv.caustic.lambda, r.lambda) < 1e-5);
        CHECK(inv.residual <= 1e-10);
        CHECK(max_abs_diff(frequency_map(inv.caustic.lambda, ell).omega, winding_target(r.w)) <= 1e-10);
    }
}

TEST_CASE("planar inversion yields closing orbits") {
    Ellipsoid ell(Vec{0.2, 1.0});
    struct Row {
        const char* type;
        std::vector<int> w;
    };
    for (const Row& r : {Row{"E", {3, 2}}, Row{"E", {4, 2}}, Row{"E", {6, 2}}, Row{"H", {4, 2}}, Row{"H", {6, 2}},
                         Row{"H", {6, 4}}}) {
        CAPTURE(r.type);
        CAPTURE(r.w[0]);
        CausticParams c = invert_frequency(r.w, CausticType::parse(r.type, 1), ell);
        CHECK(std::fabs(rotation_number(c.lambda[0], ell) - winding_target(r.w)[0]) < 1e-10);
        CHECK(closure(generic_tangent_seed(c, ell, 3), ell, std::size_t(r.w[0])) < 1e-8);
    }
    // Hyperbolic caustics only carry even periods.
    CHECK_THROWS_AS(invert_frequency({3, 2}, CausticType::parse("H", 1), ell), InvalidArgument);
    CHECK_THROWS_AS(invert_frequency({5, 3, 2}, CausticType::parse("EH1", 2), Ellipsoid(Vec{0.13, 0.8, 1.0})),
                    InvalidArgument);
}

TEST_CASE("empirical frequencies") {
    Ellipsoid plane(Vec{0.5, 1.0});
    for (double lam : {0.1, 0.3, 0.7, 0.9}) {
        Vec emp = empirical_frequency(Vec{lam}, plane, 100000);
        CHECK(std::fabs(emp[0] - oracle::rotation_number(lam, 0.5, 1.0)) < 1e-4);
    }

    // A periodic caustic gives exact counts.
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    CausticParams c = invert_frequency({4, 3, 2}, CausticType::parse("H1H1", 2), ell);
    const std::size_t bounces = 4000;
    Vec emp = empirical_frequency(c.lambda, ell, bounces);
    CHECK(max_abs_diff(emp, Vec{0.375, 0.25}) <= 2.0 / bounces);
    Vec sampled = empirical_frequency(c.lambda, ell, bounces, 64);
    CHECK(max_abs_diff(sampled, Vec{0.375, 0.25}) <= 2.0 / bounces);
}

TEST_CASE("event and sampled turning point counts agree") {
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    for (Vec lam : {Vec{0.1, 0.5}, Vec{0.2, 0.5}, Vec{0.1, 0.9}, Vec{0.2, 0.9}}) {
        CausticParams c = make_caustic(lam, ell);
        auto pts = orbit(generic_tangent_seed(c, ell, 1), ell, 300);
        auto exact = turning_points(pts, c, ell, false);
        auto sampled = sampled_turning_points(pts, c, ell, 256);
        CHECK(exact[0] == 2 * 300 + 1); // one extremum per chord plus every impact
        for (std::size_t i = 1; i < 3; ++i) CHECK(std::labs(exact[i] - sampled[i]) <= 2);
        CHECK(max_cuboid_excursion(pts, c, ell, 64) < 1e-9);
    }
}

TEST_CASE("spectral errors") {
    Ellipsoid plane(Vec{0.5, 1.0});
    CHECK_THROWS_AS(rotation_number(0.5 + 1e-14, plane), SingularCaustic);
    CHECK_THROWS_AS(rotation_number(0.1, Ellipsoid(Vec{0.1, 0.5, 1.0})), UnsupportedDimension);
    CHECK_THROWS_AS(winding_target({1, 1}), InvalidArgument);
    CHECK_THROWS_AS(invert_frequency({4, 3}, CausticType::parse("H1H1", 2), Ellipsoid(Vec{0.13, 0.8, 1.0})),
                    InvalidArgument);
}
