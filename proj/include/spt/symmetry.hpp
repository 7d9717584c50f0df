#pragma once

//! \file symmetry.hpp
//! Symmetry sets, cuboid vertices and symmetric seeds.

#include <cstdint>
#include <vector>

#include "spt/dynamics.hpp"

namespace spt {

/*!
 * Vertex of the caustic cuboid as a bit mask: bit i selects the upper
 * endpoint of the interval of mu_i.
 */
using VertexMask = std::uint32_t;

//! Which caustic a vertex touches when an interval has caustics at both ends.
enum class Side { Any, Outer, Inner };

Reversor reversor_of_vertex(VertexMask v, const CausticType& type);
std::vector<VertexMask> vertices_of_reversor(const Reversor& r, const CausticType& type);
//! Throws FeasibilityError when r has no vertex; Any picks the outer vertex.
VertexMask vertex_of_reversor(const Reversor& r, const CausticType& type, Side side = Side::Any);
Side side_of_vertex(VertexMask v, const CausticType& type);

//! Reversors whose symmetry set meets the phase space of this caustic type.
std::vector<Reversor> feasible_reversors(const CausticType& type);

bool symmetry_set_contains(const Reversor& r, const PhasePoint& m, const Ellipsoid& ell,
                           double tol = 1e-10);

//! Number of sign branches accepted by the seed constructors.
inline unsigned branch_count(std::size_t dim) { return 1u << dim; }

/*!
 * Phase point in the symmetry set attached to vertex v whose line is tangent
 * to the caustics. Implemented for planar and spatial billiards.
 */
PhasePoint seed_at_vertex(VertexMask v, const CausticParams& caustic, const Ellipsoid& ell,
                          unsigned branch = 0);
PhasePoint seed_point(const Reversor& r, const CausticParams& caustic, const Ellipsoid& ell,
                      unsigned branch = 0, Side side = Side::Any);

} // namespace spt
