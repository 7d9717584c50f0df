#pragma once

//! \file io.hpp
//! Trajectory documents (JSON), point dumps (CSV) and SVG projections.
//!
//! Vectors are stored in the internal ordering: coordinate j pairs with the
//! j-th smallest squared semiaxis. For planar billiards that is (y, x).

#include <optional>
#include <string>

#include <json.hpp>

#include "spt/spt.hpp"

namespace spt {

inline constexpr int kSchemaVersion = 1;

struct TrajectoryDocument {
    Trajectory trajectory;
    std::optional<VerificationReport> report;
};

//! 17 significant digits, always in exponent form so that reading and
//! writing again reproduces the same bytes.
std::string format_double(double x);

nlohmann::ordered_json report_to_json(const VerificationReport& r);
nlohmann::ordered_json to_json(const TrajectoryDocument& doc);
TrajectoryDocument document_from_json(const nlohmann::ordered_json& j);

//! Compact-indented serialization with format_double for every float.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string write_document(const TrajectoryDocument& doc);
TrajectoryDocument read_document(const std::string& text);

//! index, q_0..q_d, p_0..p_d per phase point.
std::string points_csv(const Trajectory& t);

enum class Plane { Iso3D, Pi1, Pi2, Pi3, Planar, Elliptic };
Plane parse_plane(const std::string& name);
std::string plane_name(Plane p);

//! Deterministic SVG 1.1 drawing of a trajectory in the chosen projection.
std::string plot_svg(const Trajectory& t, Plane plane);

//! Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace spt
