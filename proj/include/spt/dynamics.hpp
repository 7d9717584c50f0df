#pragma once

//! \file dynamics.hpp
//! Billiard map, its reversors and the dual map.

#include <cstdint>
#include <string>
#include <vector>

#include "spt/confocal.hpp"

namespace spt {

/*!
 * Phase point (q, p): impact q on the ellipsoid and the unit velocity p of
 * the chord arriving at q, so that <Dq, p> > 0.
 */
struct PhasePoint {
    Vec q;
    Vec p;
};

//! Involution flipping the coordinates whose bit is set.
struct Reflection {
    std::size_t dim = 0;
    std::uint32_t flips = 0;

    Vec apply(const Vec& x) const {
        Vec y = x;
        for (std::size_t j = 0; j < dim; ++j)
            if ((flips >> j) & 1u) y[j] = -y[j];
        return y;
    }
    std::uint32_t full() const { return (1u << dim) - 1u; }
    Reflection negated() const { return {dim, flips ^ full()}; }

    friend bool operator==(const Reflection&, const Reflection&) = default;
};

/*!
 * Reversor s_sigma composed with one of the two factors of the map.
 *
 * Tilde: (q, p) -> s_sigma(q, -p - nu D q), fixing q on the subspace.
 * Hat:   (q, p) -> s_sigma(q + mu p, -p), equal to f o tilde_sigma.
 */
struct Reversor {
    enum class Family { Tilde, Hat };
    Family family = Family::Tilde;
    Reflection sigma;

    //! Names such as R, R13, fR2; planar names use x/y letters.
    std::string name() const;
    static Reversor parse(const std::string& name, std::size_t dim);

    //! Tilde with -Id and hat with Id have empty fixed sets.
    bool has_empty_fixed_set() const {
        return family == Family::Tilde ? sigma.flips == sigma.full() : sigma.flips == 0;
    }

    friend bool operator==(const Reversor&, const Reversor&) = default;
};

//! All 2^{n+2} reversors of a (n+1)-dimensional billiard, tilde family first.
std::vector<Reversor> all_reversors(std::size_t dim);
//! The reversors with non-empty fixed sets.
std::vector<Reversor> nonempty_reversors(std::size_t dim);

//! Step lengths of the map: mu advances along a chord, nu reflects.
double chord_step(const Vec& q, const Vec& p, const Ellipsoid& ell);
double reflection_step(const Vec& q, const Vec& p, const Ellipsoid& ell);

//! Throws DegenerateImpact when m is not an outward phase point of ell.
void check_phase_point(const PhasePoint& m, const Ellipsoid& ell, double tol = 1e-9);

PhasePoint billiard_map(const PhasePoint& m, const Ellipsoid& ell);
PhasePoint billiard_map_inverse(const PhasePoint& m, const Ellipsoid& ell);
PhasePoint apply_symmetry(const Reflection& s, const PhasePoint& m);
PhasePoint apply_reversor(const Reversor& r, const PhasePoint& m, const Ellipsoid& ell);
//! g(q, p) = (C p', -C^{-1} q) with C = D^{-1/2} and p' the reflected velocity.
PhasePoint dual_map(const PhasePoint& m, const Ellipsoid& ell);

//! m, f(m), ..., f^steps(m).
std::vector<PhasePoint> orbit(const PhasePoint& m, const Ellipsoid& ell, std::size_t steps);

/*!
 * Phase point on the face mu_0 = 0 whose line is tangent to the caustics.
 *
 * face gives mu_1..mu_n strictly inside their cuboid intervals; x_signs and
 * p_signs select the octant of q and the sign of each non-normal component
 * of the velocity in the elliptic frame.
 */
PhasePoint tangent_phase_point(const Ellipsoid& ell, const Vec& lambda, const Vec& face,
                               std::uint32_t x_signs, std::uint32_t p_signs);

} // namespace spt
