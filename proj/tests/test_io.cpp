#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <regex>

#include "spt/errors.hpp"
#include "spt/io.hpp"

using namespace spt;

namespace {

TrajectoryDocument solved(const std::string& id, std::size_t n) {
    AtlasEntry e = solve_class(parse_class(id, n), AtlasConfig::stock());
    REQUIRE(e.ok());
    return {*e.trajectory, e.report};
}

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t k = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++k;
    return k;
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(format_double(0.5) == "5.0000000000000000e-01");
    CHECK(format_double(-0.0) == "-0.0000000000000000e+00");
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 0.967756}) CHECK(std::stod(format_double(x)) == x);
    CHECK_THROWS_AS(format_double(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
    CHECK_THROWS_AS(format_double(INFINITY), InvalidArgument);
}

TEST_CASE("documents survive a write and read cycle byte for byte") {
    for (auto [id, n] : {std::pair{"EH1:R3+fR12", 2u}, std::pair{"H1H1:R2|fR13", 2u}, std::pair{"E:Rx+fRy", 1u}}) {
        CAPTURE(id);
        TrajectoryDocument doc = solved(id, n);
        std::string text = write_document(doc);
        TrajectoryDocument back = read_document(text);
        CHECK(write_document(back) == text);
        CHECK(back.trajectory.points.size() == doc.trajectory.points.size());
        for (std::size_t k = 0; k < back.trajectory.points.size(); ++k) {
            CHECK(back.trajectory.points[k].q == doc.trajectory.points[k].q);
            CHECK(back.trajectory.points[k].p == doc.trajectory.points[k].p);
        }
        // Re-verification of the stored points gives the stored report.
        VerificationReport again = verify_trajectory(back.trajectory);
        REQUIRE(back.report);
        CHECK(dump_json(report_to_json(again)) == dump_json(report_to_json(*back.report)));
        CHECK(again.passed());
    }
}

TEST_CASE("malformed documents") {
    TrajectoryDocument doc = solved("E:Rx+fRx", 1);
    auto j = to_json(doc);
    CHECK_THROWS_AS(read_document("{"), InvalidArgument);
    CHECK_THROWS_AS(read_document("[]"), InvalidArgument);

    auto bad = j;
    bad["schema_version"] = kSchemaVersion + 1;
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
    bad = j;
    bad["caustic_type"] = "H";
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
    bad = j;
    bad["winding"] = {4, 2};
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
    bad = j;
    bad["points"][0]["q"] = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
    bad = j;
    bad.erase("axes");
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
    bad = j;
    bad["axes"] = {2.0, 1.0};
    CHECK_THROWS_AS(document_from_json(bad), InvalidArgument);
}

TEST_CASE("point dumps") {
    TrajectoryDocument doc = solved("E:Rx+fRx", 1);
    std::string csv = points_csv(doc.trajectory);
    CHECK(csv.rfind("index,q0,q1,p0,p1\n", 0) == 0);
    CHECK(count(csv, "\n") == doc.trajectory.points.size() + 1);
}

TEST_CASE("svg projections") {
    TrajectoryDocument tri = solved("E:Rx+fRx", 1);
    std::string svg = plot_svg(tri.trajectory, Plane::Planar);
    CHECK(svg == plot_svg(tri.trajectory, Plane::Planar));
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, std::regex("class=\"trajectory\"[^>]*points=\"([^\"]*)\"")));
    std::string pts = m[1];
    CHECK(count(pts, " ") + 1 == 4); // closed triangle
    CHECK(count(svg, "<circle") == 3);
    CHECK(svg.find("class=\"outline\"") != std::string::npos);
    CHECK(plot_svg(tri.trajectory, Plane::Elliptic).find("class=\"cuboid\"") != std::string::npos);
    CHECK_THROWS_AS(plot_svg(tri.trajectory, Plane::Pi1), InvalidArgument);

    TrajectoryDocument space = solved("H1H2:R+fR13", 2);
    for (Plane p : {Plane::Iso3D, Plane::Pi1, Plane::Pi2, Plane::Pi3}) {
        std::string s = plot_svg(space.trajectory, p);
        CHECK(s == plot_svg(space.trajectory, p));
        CHECK(s.find("caustic-h1") != std::string::npos);
        CHECK(s.find("caustic-h2") != std::string::npos);
    }
    CHECK_THROWS_AS(plot_svg(space.trajectory, Plane::Planar), InvalidArgument);

    for (const char* name : {"3d", "pi1", "pi2", "pi3", "xy", "elliptic"}) CHECK(plane_name(parse_plane(name)) == name);
    CHECK_THROWS_AS(parse_plane("xz"), InvalidArgument);
}

TEST_CASE("atomic file writes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "spt_io_test";
    fs::create_directories(dir);
    std::string path = (dir / "doc.json").string();
    write_file_atomic(path, "first");
    write_file_atomic(path, "second\n");
    CHECK(read_file(path) == "second\n");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    fs::remove_all(dir);
    CHECK_THROWS_AS(read_file(path), InvalidArgument);
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x").string(), "x"), InvalidArgument);
}
