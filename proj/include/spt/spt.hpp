#pragma once

//! \file spt.hpp
//! Classes of symmetric periodic trajectories, their search and verification.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spt/spectral.hpp"
#include "spt/symmetry.hpp"

namespace spt {

//! Kind letters per winding number: o/e when some entry is odd, else t (2 mod 4) / f (0 mod 4).
std::string winding_kind(const std::vector<int>& winding);

//! Coordinates in which the two vertices of a trajectory differ.
std::uint32_t vertex_delta_of_kind(const std::vector<int>& winding);

//! Parity constraints of the caustic type: bit i set when m_i must be even.
std::uint32_t even_winding_mask(const CausticType& type);

//! Winding vector compatible with type: parities respected and not all divisible by 4.
bool winding_admissible(const CausticType& type, const std::vector<int>& winding);

//! Smallest admissible winding vector (by m_0, then lexicographically) with this vertex delta.
std::vector<int> minimal_winding(const CausticType& type, std::uint32_t delta);

/*!
 * Class of symmetric periodic trajectories: a caustic type and the unordered
 * pair of cuboid vertices it connects.
 */
struct SptClass {
    CausticType type;
    VertexMask v1 = 0, v2 = 0;

    std::size_t dim() const { return type.n + 1; }
    std::uint32_t delta() const { return v1 ^ v2; }
    Reversor first() const { return reversor_of_vertex(v1, type); }
    Reversor second() const { return reversor_of_vertex(v2, type); }
    std::vector<int> minimal_winding() const { return spt::minimal_winding(type, delta()); }
    //! Identifier such as "EH1:R3+fR12" or, with an outer | inner split, "H1H1:R3|fR12".
    std::string id() const;

    friend bool operator==(const SptClass&, const SptClass&) = default;
};

std::uint64_t class_count(std::size_t n);
std::vector<SptClass> enumerate_classes(std::size_t n);
std::vector<SptClass> enumerate_classes(const CausticType& type);
SptClass parse_class(const std::string& id, std::size_t n);

struct Trajectory {
    Ellipsoid ell{Vec{1.0, 2.0}};
    CausticParams caustic;
    std::string class_id;
    std::vector<int> winding;
    VertexMask seed_vertex = 0;
    unsigned branch = 0;
    //! m_0 + 1 phase points; the last one closes the orbit.
    std::vector<PhasePoint> points;
    double closure_residual = 0;

    std::size_t period() const { return points.empty() ? 0 : points.size() - 1; }
};

struct FindOptions {
    double closure_tol = 1e-8;
    SpectralOptions spectral{};
    bool polish = true;
};

Trajectory find_spt(const SptClass& cls, const Ellipsoid& ell, std::vector<int> winding = {},
                    unsigned branch = 0, const FindOptions& opts = {});

//! Closure residual ||f^m0(m) - m|| in position plus velocity, positions scaled.
double closure_residual(const PhasePoint& m, const Ellipsoid& ell, std::size_t period);

struct SymmetryHit {
    std::size_t index = 0;
    Reversor reversor;
};

struct VerificationReport {
    double closure_residual = 0;
    double consistency = 0;      // stored points versus re-iteration
    double caustic_residual = 0; // worst chord caustic deviation
    double excursion = 0;        // worst sampled cuboid excursion
    std::vector<int> measured_winding;
    bool winding_ok = false;
    std::vector<SymmetryHit> hits;
    bool two_point_law = false;
    std::vector<VertexMask> vertices;
    bool vertices_ok = false;
    bool doubly_symmetric = false;
    bool conjecture_ok = false;
    std::size_t distinct_impacts = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty(); }
};

struct VerifyOptions {
    double closure_tol = 1e-8;
    double caustic_tol = 1e-9;
    double excursion_tol = 1e-9;
    double membership_tol = 1e-7;
    std::size_t samples_per_chord = 16;
};

VerificationReport verify_trajectory(const Trajectory& traj, const VerifyOptions& opts = {});

//! Impact points distinct up to tol scaled by the largest semiaxis.
std::size_t distinct_impacts(const Trajectory& traj, double tol = 1e-9);

/*!
 * Geometric reading of winding numbers: crossings of each coordinate plane,
 * tangential touches with each caustic and signed turns around each axis
 * over one period.
 */
struct GeometricWinding {
    std::vector<long> plane_crossings;
    std::vector<long> caustic_touches;
    std::vector<double> axis_turns;
};
GeometricWinding geometric_winding(const Trajectory& traj);

struct AtlasConfig {
    Ellipsoid planar{Vec{0.2, 1.0}};
    std::vector<Ellipsoid> flat;
    std::vector<Ellipsoid> thin;
    FindOptions find{};
    VerifyOptions verify{};

    //! Stock shapes: flat ones for EH1 and H1H1, thin ones for EH2 and H1H2.
    static AtlasConfig stock();
    //! Shapes tried in order for a caustic type.
    std::vector<Ellipsoid> candidates(const CausticType& type) const;
};

struct AtlasEntry {
    SptClass cls;
    std::optional<Trajectory> trajectory;
    VerificationReport report;
    double seconds = 0;
    std::string error;

    bool ok() const { return trajectory.has_value() && report.passed(); }
};

//! Solves one class on the first candidate shape where it verifies.
AtlasEntry solve_class(const SptClass& cls, const AtlasConfig& cfg);

//! Minimal-period representative of every planar and spatial class.
std::vector<AtlasEntry> minimal_atlas(const AtlasConfig& cfg = AtlasConfig::stock());
std::vector<AtlasEntry> minimal_atlas_serial(const AtlasConfig& cfg = AtlasConfig::stock());

} // namespace spt
