#pragma once

//! \file confocal.hpp
//! Ellipsoid, confocal family, elliptic coordinates and caustic parameters.
//!
//! Coordinate j is always paired with the j-th smallest squared semiaxis.
//! For planar names this means x is the second coordinate (major axis) and
//! y the first.

#include <cstdint>
#include <string>
#include <vector>

#include "spt/vec.hpp"

namespace spt {

/*!
 * Ellipsoid <Dq,q> = 1 with D = diag(1/a_1, ..., 1/a_{n+1}).
 *
 * The a_j are squared semiaxes and must be strictly increasing and positive.
 */
class Ellipsoid {
  public:
    explicit Ellipsoid(Vec axes);

    std::size_t dim() const { return a_.size(); }
    std::size_t n() const { return a_.size() - 1; }
    const Vec& axes() const { return a_; }
    double a(std::size_t j) const { return a_[j]; }
    //! Length scale sqrt(a_{n+1}) used to normalize tolerances.
    double scale() const { return scale_; }

    Vec apply_D(const Vec& x) const;
    double level(const Vec& x) const { return dot(apply_D(x), x); }

    friend bool operator==(const Ellipsoid& x, const Ellipsoid& y) { return x.a_ == y.a_; }

  private:
    Vec a_;
    double scale_ = 1.0;
};

//! Elliptic coordinates mu_0 < a_1 < mu_1 < ... < mu_n < a_{n+1}.
struct EllipticPoint {
    Vec mu;
    //! Bit j set when x_j = 0 and the limit root mu = a_j is reported exactly.
    std::uint32_t plane_mask = 0;
};

EllipticPoint cartesian_to_elliptic(const Vec& x, const Ellipsoid& ell);

//! Inverse map; bit j of sign_mask makes x_j negative.
Vec elliptic_to_cartesian(const Vec& mu, const Ellipsoid& ell, std::uint32_t sign_mask = 0);

/*!
 * Caustic type as a bit mask over lambda_1..lambda_n.
 *
 * Bit i-1 clear means lambda_i lies in (a_{i-1}, a_i) (with a_0 = 0), set
 * means it lies in (a_i, a_{i+1}).
 */
struct CausticType {
    std::size_t n = 0;
    std::uint32_t mask = 0;

    std::string name() const;
    static CausticType parse(const std::string& name, std::size_t n);
    static std::vector<CausticType> all(std::size_t n);

    friend bool operator==(const CausticType&, const CausticType&) = default;
};

struct CausticParams {
    Vec lambda;
    CausticType type;
};

//! Validates lambda against the axes and classifies it.
CausticParams make_caustic(const Vec& lambda, const Ellipsoid& ell);

//! Caustic parameters of the line q + t p (p need not be normalized).
CausticParams caustic_params_of_line(const Vec& q, const Vec& p, const Ellipsoid& ell);

//! One breakpoint of the cuboid, either the origin, an axis or a caustic.
struct Breakpoint {
    enum class Kind { Origin, Axis, Caustic };
    Kind kind = Kind::Origin;
    std::size_t index = 0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

//! Ordered breakpoints c_0 = 0 < c_1 < ... < c_{2n+1} determined by the type alone.
std::vector<Breakpoint> symbolic_breakpoints(const CausticType& type);

/*!
 * Cuboid of the elliptic coordinates along trajectories with a given caustic.
 *
 * Coordinate mu_i oscillates in [c_{2i}, c_{2i+1}].
 */
struct Cuboid {
    Vec c;
    std::vector<Breakpoint> kinds;

    std::size_t n() const { return c.size() / 2 - 1; }
    double lo(std::size_t i) const { return c[2 * i]; }
    double hi(std::size_t i) const { return c[2 * i + 1]; }
    //! Value of coordinate i at a vertex; bit i of mask selects the upper endpoint.
    double vertex_coord(std::uint32_t mask, std::size_t i) const {
        return c[2 * i + ((mask >> i) & 1u)];
    }
    //! Interval index owning breakpoint k (k >= 1).
    static std::size_t owner(std::size_t k) { return k / 2; }
    //! Breakpoint index of axis j or caustic i.
    std::size_t index_of_axis(std::size_t j) const;
    std::size_t index_of_caustic(std::size_t i) const;
};

Cuboid cuboid(const CausticParams& caustic, const Ellipsoid& ell);

//! Largest distance of mu outside the cuboid, zero when inside.
double cuboid_excursion(const Vec& mu, const Cuboid& box);

namespace detail {
//! Roots of sum_j w_j / (a_j - s) = c with w_j >= 0 and c in {0, 1}.
Vec secular_roots(const Vec& a, const Vec& w, double c);
//! Eigenvalues, ascending, of the leading n x n block of a symmetric matrix; A is overwritten.
Vec symmetric_eigenvalues(double (&A)[kMaxDim][kMaxDim], std::size_t n);
} // namespace detail

} // namespace spt
