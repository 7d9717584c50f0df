#include <doctest.h>

#include "spt/errors.hpp"
#include "spt/parallel.hpp"

using namespace spt;

TEST_CASE("caustic grids stay inside their component") {
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    for (const CausticType& t : CausticType::all(2)) {
        auto g = caustic_grid(t, ell, 5);
        CHECK(g.size() == 25);
        for (const Vec& l : g) CHECK(make_caustic(l, ell).type == t);
    }
    Ellipsoid plane(Vec{0.5, 1.0});
    for (const CausticType& t : CausticType::all(1)) {
        auto g = caustic_grid(t, plane, 20);
        CHECK(g.size() == 20);
        for (const Vec& l : g) CHECK(make_caustic(l, plane).type == t);
    }
    CHECK_THROWS_AS(caustic_grid(CausticType::parse("E", 1), ell, 3), InvalidArgument);
    CHECK_THROWS_AS(caustic_grid(CausticType::parse("E", 1), plane, 0), InvalidArgument);
}

TEST_CASE("parallel grids reproduce the serial kernels") {
    CHECK(worker_threads() >= 1);
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    std::vector<Vec> lams;
    for (const CausticType& t : CausticType::all(2))
        for (const Vec& l : caustic_grid(t, ell, 3)) lams.push_back(l);
    lams.push_back(Vec{0.13, 0.5}); // singular: reported, not thrown

    auto par = frequency_grid(lams, ell), ser = frequency_grid_serial(lams, ell);
    REQUIRE(par.size() == ser.size());
    for (std::size_t k = 0; k < par.size(); ++k) {
        CHECK(par[k].omega == ser[k].omega);
        CHECK(par[k].error_estimate == ser[k].error_estimate);
        CHECK(par[k].failure == ser[k].failure);
    }
    CHECK_FALSE(par.back().ok());
    CHECK(par.back().failure == "SingularCaustic");

    std::vector<Vec> few(lams.begin(), lams.begin() + 8);
    auto epar = empirical_grid(few, ell, 2000), eser = empirical_grid_serial(few, ell, 2000);
    for (std::size_t k = 0; k < few.size(); ++k) {
        CHECK(epar[k].ok());
        CHECK(epar[k].omega == eser[k].omega);
    }
}
