// Command line front end: class catalog, frequency map, SPT search, atlas,
// verification and plotting.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spt/errors.hpp"
#include "spt/io.hpp"
#include "spt/spt.hpp"

namespace {

using namespace spt;
using nlohmann::ordered_json;

int exit_code(ErrorClass c) {
    switch (c) {
    case ErrorClass::Usage: return 1;
    case ErrorClass::Numeric: return 2;
    case ErrorClass::Verification: return 3;
    }
    return 2;
}

void report_error(const std::string& kind, const std::string& msg, int code) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = msg;
    j["exit_code"] = code;
    std::cerr << j.dump() << "\n";
}

SpectralOptions spectral_from_env() {
    SpectralOptions o;
    if (const char* s = std::getenv("CONFOCAL_QUAD_TOL")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || *end != '\0' || !(v > 0) || !(v < 1))
            throw InvalidArgument("CONFOCAL_QUAD_TOL must be a number in (0, 1)");
        o.quad_tol = v;
    }
    return o;
}

Ellipsoid ellipsoid_from(const std::vector<double>& axes) {
    if (axes.size() < 2 || axes.size() > 3) throw UnsupportedDimension("--axes takes two or three values");
    Vec a;
    for (double x : axes) a.push_back(x);
    return Ellipsoid(a);
}

Vec vec_from(const std::vector<double>& xs) {
    Vec v;
    for (double x : xs) v.push_back(x);
    return v;
}

std::string join_ints(const std::vector<int>& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
    return s;
}

std::string file_stem(std::size_t index, const std::string& id) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%03zu_", index);
    std::string s = buf;
    for (char c : id) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    return s;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") std::cout << text;
    else write_file_atomic(out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric periodic trajectories of billiards inside ellipses and ellipsoids"};
    app.require_subcommand(1);

    std::vector<double> axes, lambda;
    std::vector<int> winding;
    std::string type_name, class_id, out, csv, file, plane;
    int dim = 3;
    unsigned branch = 0;
    bool serial = false;

    auto* classes = app.add_subcommand("classes", "Catalog of SPT classes");
    classes->require_subcommand(1);
    auto* classes_list = classes->add_subcommand("list", "One row per class");
    classes_list->add_option("--dim", dim, "2 or 3")->required()->check(CLI::IsMember({2, 3}));
    classes_list->add_option("--type", type_name, "Restrict to one caustic type");

    auto* freq = app.add_subcommand("freq", "Frequency map");
    freq->require_subcommand(1);
    auto* freq_eval = freq->add_subcommand("eval", "Evaluate the frequency map at --lambda");
    auto* freq_invert = freq->add_subcommand("invert", "Caustic parameters for a winding vector");
    for (auto* sc : {freq_eval, freq_invert}) {
        sc->add_option("--axes", axes, "Squared semiaxes, ascending")->required()->delimiter(',');
        sc->add_option("--type", type_name, "Caustic type (E, H, EH1, H1H1, EH2, H1H2)");
    }
    freq_eval->add_option("--lambda", lambda, "Caustic parameters")->required()->delimiter(',');
    freq_invert->add_option("--winding", winding, "m0,m1[,m2]")->required()->delimiter(',');
    freq_invert->get_option("--type")->required();

    auto* spt_cmd = app.add_subcommand("spt", "Symmetric periodic trajectories");
    spt_cmd->require_subcommand(1);
    auto* find = spt_cmd->add_subcommand("find", "Find and verify one SPT");
    find->add_option("--class", class_id, "Class id, e.g. EH1:R3+fR12 or H1H1:R2|R2")->required();
    find->add_option("--axes", axes, "Squared semiaxes, ascending")->required()->delimiter(',');
    find->add_option("--winding", winding, "m0,m1[,m2]; defaults to the minimal one")->delimiter(',');
    find->add_option("--branch", branch, "Seed sign branch");
    find->add_option("--out", out, "Trajectory document path (default stdout)");
    find->add_option("--csv", csv, "Also dump the phase points as CSV");
    auto* atlas = spt_cmd->add_subcommand("atlas", "Minimal SPT of every planar and spatial class");
    atlas->add_option("--out", out, "Output directory")->required();
    atlas->add_flag("--serial", serial, "Run the classes one after another");

    auto* verify = app.add_subcommand("verify", "Re-verify a trajectory document");
    verify->add_option("file", file)->required();

    auto* plot = app.add_subcommand("plot", "SVG projection of a trajectory document");
    plot->add_option("file", file)->required();
    plot->add_option("--plane", plane, "3d, pi1, pi2, pi3 (spatial) or xy, elliptic (planar); default 3d or xy");
    plot->add_option("--out", out, "SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("UsageError", e.what(), 1);
        return 1;
    }

    try {
        const SpectralOptions spectral = spectral_from_env();

        if (*classes_list) {
            std::size_t n = std::size_t(dim - 1);
            auto cs = type_name.empty() ? enumerate_classes(n) : enumerate_classes(CausticType::parse(type_name, n));
            std::size_t k = 0;
            for (const auto& c : cs) {
                auto w = c.minimal_winding();
                std::cout << k++ << '\t' << c.id() << '\t' << c.type.name() << '\t' << c.first().name() << '\t'
                          << c.second().name() << '\t' << join_ints(w) << '\t' << winding_kind(w) << '\n';
            }
            return 0;
        }

        if (*freq_eval) {
            Ellipsoid ell = ellipsoid_from(axes);
            CausticParams c = make_caustic(vec_from(lambda), ell);
            if (!type_name.empty() && c.type.name() != type_name)
                throw InvalidArgument("lambda is of type " + c.type.name() + ", not " + type_name);
            ordered_json j;
            j["type"] = c.type.name();
            j["lambda"] = lambda;
            if (ell.n() == 1) {
                j["omega"] = {rotation_number(c.lambda[0], ell, spectral)};
            } else {
                FrequencyValue f = frequency_map(c.lambda, ell, spectral);
                j["omega"] = {f.omega[0], f.omega[1]};
                j["error_estimate"] = f.error_estimate;
            }
            std::cout << dump_json(j);
            return 0;
        }

        if (*freq_invert) {
            Ellipsoid ell = ellipsoid_from(axes);
            CausticType type = CausticType::parse(type_name, ell.n());
            InversionResult r = invert_frequency_detailed(winding, type, ell, spectral);
            ordered_json j;
            j["type"] = type.name();
            j["winding"] = winding;
            ordered_json l = ordered_json::array(), o = ordered_json::array();
            for (double x : r.caustic.lambda) l.push_back(x);
            for (double x : r.omega) o.push_back(x);
            j["lambda"] = l;
            j["omega"] = o;
            j["residual"] = r.residual;
            j["iterations"] = r.iterations;
            std::cout << dump_json(j);
            return 0;
        }

        if (*find) {
            Ellipsoid ell = ellipsoid_from(axes);
            SptClass cls = parse_class(class_id, ell.n());
            FindOptions fo;
            fo.spectral = spectral;
            TrajectoryDocument doc;
            doc.trajectory = find_spt(cls, ell, winding, branch, fo);
            doc.report = verify_trajectory(doc.trajectory);
            emit(write_document(doc), out);
            if (!csv.empty()) write_file_atomic(csv, points_csv(doc.trajectory));
            if (!doc.report->passed()) throw VerificationFailed(doc.report->failures.front());
            return 0;
        }

        if (*atlas) {
            std::filesystem::create_directories(out);
            AtlasConfig cfg = AtlasConfig::stock();
            cfg.find.spectral = spectral;
            auto t0 = std::chrono::steady_clock::now();
            auto entries = serial ? minimal_atlas_serial(cfg) : minimal_atlas(cfg);
            double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ordered_json index = ordered_json::array();
            std::size_t failed = 0;
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto& e = entries[k];
                ordered_json row;
                row["class"] = e.cls.id();
                row["ok"] = e.ok();
                row["seconds"] = e.seconds;
                if (e.trajectory) {
                    std::string name = file_stem(k, e.cls.id()) + ".json";
                    write_file_atomic((std::filesystem::path(out) / name).string(),
                                      write_document({*e.trajectory, e.report}));
                    row["file"] = name;
                    row["winding"] = e.trajectory->winding;
                    ordered_json a = ordered_json::array();
                    for (double x : e.trajectory->ell.axes()) a.push_back(x);
                    row["axes"] = a;
                }
                if (!e.ok()) {
                    ++failed;
                    row["error"] = e.error;
                }
                index.push_back(row);
            }
            ordered_json summary;
            summary["classes"] = entries.size();
            summary["verified"] = entries.size() - failed;
            summary["seconds"] = total;
            summary["entries"] = index;
            write_file_atomic((std::filesystem::path(out) / "atlas.json").string(), dump_json(summary));
            std::cout << entries.size() - failed << "/" << entries.size() << " classes verified in " << total
                      << " s\n";
            if (failed) throw VerificationFailed(std::to_string(failed) + " classes failed verification");
            return 0;
        }

        if (*verify) {
            TrajectoryDocument doc = read_document(read_file(file));
            VerificationReport r = verify_trajectory(doc.trajectory);
            std::cout << dump_json(report_to_json(r));
            if (!r.passed()) throw VerificationFailed(r.failures.front());
            return 0;
        }

        if (*plot) {
            TrajectoryDocument doc = read_document(read_file(file));
            if (plane.empty()) plane = doc.trajectory.ell.dim() == 2 ? "xy" : "3d";
            write_file_atomic(out, plot_svg(doc.trajectory, parse_plane(plane)));
            return 0;
        }
    } catch (const Error& e) {
        int code = exit_code(e.error_class());
        report_error(e.kind(), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        report_error("InternalError", e.what(), 2);
        return 2;
    }
    return 0;
}
