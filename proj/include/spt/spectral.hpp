#pragma once

//! \file spectral.hpp
//! Rotation number, frequency map, empirical frequencies and inversion.

#include <cstdint>
#include <vector>

#include "spt/dynamics.hpp"

namespace spt {

struct SpectralOptions {
    double quad_tol = 1e-12;
    int max_level = 12;
};

struct FrequencyValue {
    Vec omega;
    double error_estimate = 0;
};

/*!
 * Period integrals K[i][k] of s^k ds / sqrt|P(s)| over the cuboid interval
 * I_i, with P(s) = prod (a_j - s) prod (lambda_i - s).
 */
struct PeriodIntegrals {
    std::vector<std::vector<double>> K;
    double error = 0;
};

PeriodIntegrals period_integrals(const CausticParams& caustic, const Ellipsoid& ell,
                                 const SpectralOptions& opts = {});

//! Planar rotation number, in (0, 1/2).
double rotation_number(double lambda, const Ellipsoid& ell, const SpectralOptions& opts = {});

//! omega = (m_1, ..., m_n) / (2 m_0) on periodic caustics; n must be 1 or 2.
FrequencyValue frequency_map(const Vec& lambda, const Ellipsoid& ell, const SpectralOptions& opts = {});

/*!
 * Counts turning points of each elliptic coordinate along consecutive chords.
 *
 * A turning point of mu_i happens exactly when the trajectory hits an
 * endpoint of I_i: an impact (mu_0 = 0), a crossing of a coordinate plane
 * (mu = a_j) or a tangency with a caustic (mu = lambda_k). Events falling on
 * a shared impact point are merged so each is counted once.
 */
class TurningPointCounter {
  public:
    TurningPointCounter(const Cuboid& box, const Ellipsoid& ell, double endpoint_tol = 1e-7);

    //! Chord from q with unit direction d and length len.
    void add_chord(const Vec& q, const Vec& d, double len);
    //! Merges the end of the last chord with the start of the first.
    void close_loop();
    //! Flushes the open ends of a non-periodic stream.
    void finish();

    const std::vector<long>& counts() const { return counts_; }

  private:
    void flush(std::uint32_t mask);

    Cuboid box_;
    Ellipsoid ell_;
    double tol_;
    std::vector<std::size_t> axis_bp_, caustic_bp_;
    std::vector<long> counts_;
    std::uint32_t first_start_ = 0, pending_end_ = 0;
    bool started_ = false;
};

//! Turning point counts over the chords of a phase point sequence.
std::vector<long> turning_points(const std::vector<PhasePoint>& points, const CausticParams& caustic,
                                 const Ellipsoid& ell, bool periodic);

//! Same counts from sampled coordinates and sign changes of the discrete derivative.
std::vector<long> sampled_turning_points(const std::vector<PhasePoint>& points,
                                         const CausticParams& caustic, const Ellipsoid& ell,
                                         std::size_t samples_per_chord);

//! Largest excursion of sampled elliptic coordinates outside the cuboid.
double max_cuboid_excursion(const std::vector<PhasePoint>& points, const CausticParams& caustic,
                            const Ellipsoid& ell, std::size_t samples_per_chord);

//! Generic starting point with given caustics, used by the empirical estimator.
PhasePoint generic_tangent_seed(const CausticParams& caustic, const Ellipsoid& ell,
                                std::uint64_t salt = 0);

/*!
 * Frequencies measured by iterating the map and counting oscillations.
 *
 * With samples_per_chord = 0 turning points are located exactly on each
 * chord; otherwise they are detected from sampled coordinates.
 */
Vec empirical_frequency(const Vec& lambda, const Ellipsoid& ell, std::size_t bounces = 100000,
                        std::size_t samples_per_chord = 0, std::uint64_t salt = 0);

struct InversionResult {
    CausticParams caustic;
    Vec omega;
    double residual = 0;
    int iterations = 0;
};

//! Frequency target (m_1, ..., m_n) / (2 m_0) of a winding vector.
Vec winding_target(const std::vector<int>& winding);

InversionResult invert_frequency_detailed(const std::vector<int>& winding, const CausticType& type,
                                          const Ellipsoid& ell, const SpectralOptions& opts = {});
CausticParams invert_frequency(const std::vector<int>& winding, const CausticType& type,
                               const Ellipsoid& ell, const SpectralOptions& opts = {});

} // namespace spt
