#include "spt/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spt/errors.hpp"

namespace spt {

using nlohmann::ordered_json;

std::string format_double(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("cannot serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

namespace {

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Vec json_vec(const ordered_json& j) {
    if (!j.is_array() || j.size() > kMaxDim) throw InvalidArgument("expected an array of numbers");
    Vec v;
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

bool is_scalar(const ordered_json& j) { return !j.is_array() && !j.is_object(); }

void dump_rec(const ordered_json& j, int indent, int depth, std::string& out) {
    const std::string pad(std::size_t(indent * (depth + 1)), ' ');
    const std::string close(std::size_t(indent * depth), ' ');
    switch (j.type()) {
    case ordered_json::value_t::number_float: {
        double x = j.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
        break;
    }
    case ordered_json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            break;
        }
        bool flat = std::all_of(j.begin(), j.end(), is_scalar);
        if (flat) {
            out += '[';
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                dump_rec(j[k], indent, depth + 1, out);
            }
            out += ']';
            break;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            dump_rec(j[k], indent, depth + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
        break;
    }
    case ordered_json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += pad + ordered_json(it.key()).dump() + ": ";
            dump_rec(it.value(), indent, depth + 1, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
        break;
    }
    default: out += j.dump(); break;
    }
}

VerificationReport report_from_json(const ordered_json& j, std::size_t dim) {
    VerificationReport r;
    r.closure_residual = j.at("closure_residual").get<double>();
    r.consistency = j.at("consistency").get<double>();
    r.caustic_residual = j.at("caustic_residual").get<double>();
    r.excursion = j.at("excursion").get<double>();
    r.measured_winding = j.at("measured_winding").get<std::vector<int>>();
    r.winding_ok = j.at("winding_ok").get<bool>();
    for (const auto& h : j.at("hits"))
        r.hits.push_back({h.at("index").get<std::size_t>(), Reversor::parse(h.at("reversor").get<std::string>(), dim)});
    r.two_point_law = j.at("two_point_law").get<bool>();
    r.vertices = j.at("vertices").get<std::vector<VertexMask>>();
    r.vertices_ok = j.at("vertices_ok").get<bool>();
    r.doubly_symmetric = j.at("doubly_symmetric").get<bool>();
    r.conjecture_ok = j.at("conjecture_ok").get<bool>();
    r.distinct_impacts = j.at("distinct_impacts").get<std::size_t>();
    r.failures = j.at("failures").get<std::vector<std::string>>();
    return r;
}

} // namespace

std::string dump_json(const ordered_json& j, int indent) {
    std::string out;
    dump_rec(j, indent, 0, out);
    out += '\n';
    return out;
}

ordered_json report_to_json(const VerificationReport& r) {
    ordered_json j;
    j["passed"] = r.passed();
    j["closure_residual"] = r.closure_residual;
    j["consistency"] = r.consistency;
    j["caustic_residual"] = r.caustic_residual;
    j["excursion"] = r.excursion;
    j["measured_winding"] = r.measured_winding;
    j["winding_ok"] = r.winding_ok;
    ordered_json hits = ordered_json::array();
    for (const auto& h : r.hits) hits.push_back({{"index", h.index}, {"reversor", h.reversor.name()}});
    j["hits"] = hits;
    j["two_point_law"] = r.two_point_law;
    j["vertices"] = r.vertices;
    j["vertices_ok"] = r.vertices_ok;
    j["doubly_symmetric"] = r.doubly_symmetric;
    j["conjecture_ok"] = r.conjecture_ok;
    j["distinct_impacts"] = r.distinct_impacts;
    j["failures"] = r.failures;
    return j;
}

ordered_json to_json(const TrajectoryDocument& doc) {
    const Trajectory& t = doc.trajectory;
    ordered_json j;
    j["schema"] = "spt-trajectory";
    j["schema_version"] = kSchemaVersion;
    j["axes"] = vec_json(t.ell.axes());
    j["caustic_type"] = t.caustic.type.name();
    j["lambda"] = vec_json(t.caustic.lambda);
    j["class"] = t.class_id;
    j["winding"] = t.winding;
    j["seed_vertex"] = t.seed_vertex;
    j["branch"] = t.branch;
    j["closure_residual"] = t.closure_residual;
    ordered_json pts = ordered_json::array();
    for (const auto& m : t.points) pts.push_back({{"q", vec_json(m.q)}, {"p", vec_json(m.p)}});
    j["points"] = pts;
    if (doc.report) j["report"] = report_to_json(*doc.report);
    return j;
}

TrajectoryDocument document_from_json(const ordered_json& j) {
    try {
        if (j.at("schema").get<std::string>() != "spt-trajectory")
            throw InvalidArgument("not a trajectory document");
        if (j.at("schema_version").get<int>() != kSchemaVersion)
            throw InvalidArgument("unsupported schema version");
        TrajectoryDocument doc;
        Trajectory& t = doc.trajectory;
        t.ell = Ellipsoid(json_vec(j.at("axes")));
        t.caustic = make_caustic(json_vec(j.at("lambda")), t.ell);
        if (t.caustic.type.name() != j.at("caustic_type").get<std::string>())
            throw InvalidArgument("caustic type does not match its parameters");
        t.class_id = j.at("class").get<std::string>();
        t.winding = j.at("winding").get<std::vector<int>>();
        t.seed_vertex = j.at("seed_vertex").get<VertexMask>();
        t.branch = j.at("branch").get<unsigned>();
        t.closure_residual = j.at("closure_residual").get<double>();
        for (const auto& m : j.at("points")) {
            PhasePoint pp{json_vec(m.at("q")), json_vec(m.at("p"))};
            if (pp.q.size() != t.ell.dim() || pp.p.size() != t.ell.dim())
                throw InvalidArgument("phase point dimension mismatch");
            t.points.push_back(pp);
        }
        if (t.points.size() < 2) throw InvalidArgument("document needs at least two phase points");
        if (t.winding.size() != t.ell.dim() || std::size_t(t.winding[0]) != t.period())
            throw InvalidArgument("winding vector does not match the stored points");
        if (j.contains("report")) doc.report = report_from_json(j.at("report"), t.ell.dim());
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed trajectory document: ") + e.what());
    }
}

std::string write_document(const TrajectoryDocument& doc) { return dump_json(to_json(doc)); }

TrajectoryDocument read_document(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid JSON: ") + e.what());
    }
    return document_from_json(j);
}

std::string points_csv(const Trajectory& t) {
    const std::size_t d = t.ell.dim();
    std::string out = "index";
    for (std::size_t j = 0; j < d; ++j) out += ",q" + std::to_string(j);
    for (std::size_t j = 0; j < d; ++j) out += ",p" + std::to_string(j);
    out += '\n';
    char buf[40];
    for (std::size_t k = 0; k < t.points.size(); ++k) {
        out += std::to_string(k);
        for (const Vec* v : {&t.points[k].q, &t.points[k].p})
            for (double x : *v) {
                std::snprintf(buf, sizeof buf, ",%.17g", x);
                out += buf;
            }
        out += '\n';
    }
    return out;
}

Plane parse_plane(const std::string& name) {
    if (name == "3d") return Plane::Iso3D;
    if (name == "pi1") return Plane::Pi1;
    if (name == "pi2") return Plane::Pi2;
    if (name == "pi3") return Plane::Pi3;
    if (name == "xy") return Plane::Planar;
    if (name == "elliptic") return Plane::Elliptic;
    throw InvalidArgument("unknown plane '" + name + "'");
}

std::string plane_name(Plane p) {
    switch (p) {
    case Plane::Iso3D: return "3d";
    case Plane::Pi1: return "pi1";
    case Plane::Pi2: return "pi2";
    case Plane::Pi3: return "pi3";
    case Plane::Planar: return "xy";
    case Plane::Elliptic: return "elliptic";
    }
    return "";
}

namespace {

struct P2 {
    double x, y;
};

struct Layer {
    std::string css_class, stroke;
    double width;
    std::vector<std::vector<P2>> lines;
};

constexpr double kSize = 512, kMargin = 16;
constexpr std::size_t kCausticSamples = 512;

P2 project(const Vec& x, Plane plane) {
    const double c = std::sqrt(3.0) / 2;
    switch (plane) {
    case Plane::Iso3D: return {c * (x[1] - x[2]), -x[0] + 0.5 * (x[1] + x[2])};
    case Plane::Pi1: return {x[2], -x[1]};
    case Plane::Pi2: return {-x[2], -x[0]};
    case Plane::Pi3: return {x[1], -x[0]};
    case Plane::Planar: return {x[1], -x[0]};
    case Plane::Elliptic: break;
    }
    return {0, 0};
}

std::vector<P2> outline(const Ellipsoid& ell, Plane plane) {
    std::vector<P2> pts;
    const std::size_t k = 256;
    for (std::size_t s = 0; s <= k; ++s) {
        double th = 2 * std::numbers::pi * double(s % k) / double(k);
        double co = std::cos(th), si = std::sin(th);
        if (plane == Plane::Planar) {
            pts.push_back(project(Vec{std::sqrt(ell.a(0)) * si, std::sqrt(ell.a(1)) * co}, plane));
            continue;
        }
        if (plane == Plane::Iso3D) {
            // Image of the ellipsoid: the ellipse with matrix P diag(a) P^T.
            const double c = std::sqrt(3.0) / 2;
            const double P[2][3] = {{0, c, -c}, {-1, 0.5, 0.5}};
            double M[2][2] = {{0, 0}, {0, 0}};
            for (int r = 0; r < 2; ++r)
                for (int q = 0; q < 2; ++q)
                    for (int j = 0; j < 3; ++j) M[r][q] += P[r][j] * ell.a(j) * P[q][j];
            double sd = std::sqrt(M[0][0] * M[1][1] - M[0][1] * M[1][0]);
            double den = std::sqrt(M[0][0] + M[1][1] + 2 * sd);
            double S[2][2] = {{(M[0][0] + sd) / den, M[0][1] / den}, {M[1][0] / den, (M[1][1] + sd) / den}};
            pts.push_back({S[0][0] * co + S[0][1] * si, S[1][0] * co + S[1][1] * si});
            continue;
        }
        // Coordinate planes project the ellipsoid onto its central section.
        std::size_t l = plane == Plane::Pi1 ? 0 : plane == Plane::Pi2 ? 1 : 2;
        std::size_t m = (l + 1) % 3, n = (l + 2) % 3;
        Vec x(3);
        x[m] = std::sqrt(ell.a(m)) * co;
        x[n] = std::sqrt(ell.a(n)) * si;
        pts.push_back(project(x, plane));
    }
    return pts;
}

// Intersection of the billiard table with a confocal caustic, one polyline per octant.
std::vector<std::vector<P2>> caustic_curves(const Ellipsoid& ell, double lambda, Plane plane) {
    const std::size_t d = ell.dim();
    std::vector<std::vector<P2>> lines;
    const std::size_t octants = std::size_t(1) << d;
    const std::size_t per = kCausticSamples / octants;
    // Index of the elliptic coordinate pinned to lambda, and of the free one.
    std::size_t pinned = 0;
    while (pinned < d && !(lambda < ell.a(pinned))) ++pinned;
    for (std::size_t sign = 0; sign < octants; ++sign) {
        std::vector<P2> line;
        for (std::size_t s = 0; s < per; ++s) {
            double t = 0.5 * (1 - std::cos(std::numbers::pi * double(s) / double(per - 1)));
            Vec mu(d);
            if (d == 2) {
                // E: the whole confocal ellipse; H: the hyperbola inside the table.
                if (pinned == 0) {
                    mu[0] = lambda;
                    mu[1] = ell.a(0) + t * (ell.a(1) - ell.a(0));
                } else {
                    mu[0] = t * ell.a(0);
                    mu[1] = lambda;
                }
            } else {
                mu[0] = 0;
                std::size_t free = pinned == 1 ? 2 : 1;
                mu[pinned] = lambda;
                mu[free] = ell.a(free - 1) + t * (ell.a(free) - ell.a(free - 1));
            }
            std::sort(mu.begin(), mu.end());
            line.push_back(project(elliptic_to_cartesian(mu, ell, std::uint32_t(sign)), plane));
        }
        lines.push_back(line);
    }
    return lines;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf) == "-0.000" ? "0.000" : buf;
}

} // namespace

std::string plot_svg(const Trajectory& t, Plane plane) {
    const Ellipsoid& ell = t.ell;
    const std::size_t d = ell.dim();
    const bool planar = d == 2;
    if (planar && !(plane == Plane::Planar || plane == Plane::Elliptic))
        throw InvalidArgument("planar trajectories support the xy and elliptic planes");
    if (!planar && (plane == Plane::Planar || plane == Plane::Elliptic))
        throw InvalidArgument("spatial trajectories support the 3d, pi1, pi2 and pi3 planes");
    if (t.points.size() < 2) throw InvalidArgument("trajectory has no chords");

    std::vector<Layer> layers;
    std::vector<P2> impacts;
    if (plane == Plane::Elliptic) {
        Cuboid box = cuboid(t.caustic, ell);
        layers.push_back({"cuboid", "black", 1.0,
                          {{{box.lo(0), -box.lo(1)}, {box.hi(0), -box.lo(1)}, {box.hi(0), -box.hi(1)},
                            {box.lo(0), -box.hi(1)}, {box.lo(0), -box.lo(1)}}}});
        std::vector<P2> path;
        const std::size_t per = 64;
        for (std::size_t j = 0; j + 1 < t.points.size(); ++j)
            for (std::size_t s = 0; s < per + (j + 2 == t.points.size()); ++s) {
                Vec x = t.points[j].q + (double(s) / double(per)) * (t.points[j + 1].q - t.points[j].q);
                Vec mu = cartesian_to_elliptic(x, ell).mu;
                path.push_back({mu[0], -mu[1]});
            }
        layers.push_back({"trajectory", "red", 1.5, {path}});
        for (const auto& m : t.points) {
            Vec mu = cartesian_to_elliptic(m.q, ell).mu;
            impacts.push_back({mu[0], -mu[1]});
        }
    } else {
        layers.push_back({"outline", "black", 1.0, {outline(ell, plane)}});
        for (std::size_t i = 0; i < t.caustic.lambda.size(); ++i) {
            double lam = t.caustic.lambda[i];
            if (!planar && lam < ell.a(0)) continue; // an inner ellipsoid never meets the table
            const bool h2 = !planar && lam > ell.a(1);
            layers.push_back({h2 ? "caustic-h2" : "caustic-h1", h2 ? "yellow" : "green", 1.0,
                              caustic_curves(ell, lam, plane)});
        }
        std::vector<P2> path;
        for (const auto& m : t.points) {
            path.push_back(project(m.q, plane));
            impacts.push_back(path.back());
        }
        layers.push_back({"trajectory", "red", 1.5, {path}});
    }

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& l : layers)
        for (const auto& line : l.lines)
            for (const P2& p : line) {
                x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
                y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
            }
    const double span = kSize - 2 * kMargin;
    double sx = span / std::max(x1 - x0, 1e-12), sy = span / std::max(y1 - y0, 1e-12);
    if (plane != Plane::Elliptic) sx = sy = std::min(sx, sy);
    const double ox = kMargin + 0.5 * (span - sx * (x1 - x0)), oy = kMargin + 0.5 * (span - sy * (y1 - y0));
    auto map = [&](P2 p) { return num(ox + sx * (p.x - x0)) + "," + num(oy + sy * (p.y - y0)); };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" "
           "viewBox=\"0 0 512 512\">\n"
        << "<title>" << t.class_id << " " << plane_name(plane) << "</title>\n"
        << "<rect width=\"512\" height=\"512\" fill=\"white\"/>\n";
    for (const auto& l : layers)
        for (const auto& line : l.lines) {
            svg << "<polyline class=\"" << l.css_class << "\" fill=\"none\" stroke=\"" << l.stroke
                << "\" stroke-width=\"" << num(l.width) << "\" points=\"";
            for (std::size_t k = 0; k < line.size(); ++k) svg << (k ? " " : "") << map(line[k]);
            svg << "\"/>\n";
        }
    for (std::size_t k = 0; k + 1 < impacts.size(); ++k) {
        auto xy = map(impacts[k]);
        auto comma = xy.find(',');
        svg << "<circle class=\"impact\" cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1)
            << "\" r=\"2.5\" fill=\"black\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidArgument("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw InvalidArgument("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidArgument("cannot rename onto " + path + ": " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace spt
