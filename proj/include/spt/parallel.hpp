#pragma once

//! \file parallel.hpp
//! Grid evaluations of the frequency map and of the empirical frequencies.
//! Each kernel has a serial twin with identical per-point results.

#include <string>
#include <vector>

#include "spt/spectral.hpp"

namespace spt {

struct GridValue {
    Vec omega;
    double error_estimate = 0;
    std::string failure; // error kind when the point could not be evaluated
    bool ok() const { return failure.empty(); }
};

std::vector<GridValue> frequency_grid(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                      const SpectralOptions& opts = {});
std::vector<GridValue> frequency_grid_serial(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                             const SpectralOptions& opts = {});

std::vector<GridValue> empirical_grid(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                      std::size_t bounces = 100000);
std::vector<GridValue> empirical_grid_serial(const std::vector<Vec>& lambdas, const Ellipsoid& ell,
                                             std::size_t bounces = 100000);

//! Caustic parameters on an m x m grid strictly inside the component of type.
std::vector<Vec> caustic_grid(const CausticType& type, const Ellipsoid& ell, std::size_t m);

int worker_threads();

} // namespace spt
