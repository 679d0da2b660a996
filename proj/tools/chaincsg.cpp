#include <cctype>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chaincsg/csg.hpp"
#include "chaincsg/errors.hpp"
#include "chaincsg/io.hpp"
#include "chaincsg/lar.hpp"
#include "chaincsg/pipeline.hpp"

using namespace chaincsg;

namespace {

struct Common {
    double epsilon = kVertexEps;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string report = "text";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--epsilon", c.epsilon, "vertex identification tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "seed for the ray directions of point classification");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--report", c.report, "report format")
        ->check(CLI::IsMember({"text", "json"}));
}

PipelineOptions options(const Common& c) { return {c.epsilon, c.seed, c.threads}; }

void emit(const nlohmann::ordered_json& j, const std::string& format) {
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << render_text(j);
}

std::string extension(const std::string& path) {
    std::size_t dot = path.rfind('.');
    std::size_t slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = char(std::tolower(unsigned(c)));
    return ext;
}

Scene3 load_scene(const std::string& path) {
    Lar3Data data = parse_lar3(read_file(path));
    Scene3 s;
    s.cx = std::move(data.cx);
    s.bm = std::move(data.bm);
    return s;
}

nlohmann::ordered_json check_file(const std::string& path) {
    nlohmann::ordered_json j;
    j["file"] = path;
    std::string ext = extension(path);
    if (ext == "lar" || ext == "obj") {
        LarModel m = ext == "lar" ? parse_lar(read_file(path)) : parse_obj(read_file(path));
        validate_model(m, path);
        j["kind"] = "model";
        j["dim"] = m.dim;
        j["vertices"] = m.V.size();
        j["edges"] = m.EV.size();
        j["faces"] = m.FV.size();
        if (m.dim == 3 && !m.FV.empty()) {
            validate_watertight(m, path);
            j["watertight"] = true;
            long long counts[3] = {
                static_cast<long long>(m.V.size()),
                static_cast<long long>(m.EV.empty() ? edges_from_faces(m.FV).size()
                                                    : m.EV.size()),
                static_cast<long long>(m.FV.size())};
            j["euler"] = euler_characteristic(counts);
        }
    } else if (ext == "csg") {
        Assembly a = parse_assembly(read_file(path));
        PlacedModels pm = evaluate_assembly(a);
        j["kind"] = "scene";
        j["placements"] = pm.models.size();
        for (std::size_t i = 0; i < pm.models.size(); ++i) {
            validate_model(pm.models[i], pm.names[i]);
            validate_watertight(pm.models[i], pm.names[i]);
        }
        j["watertight"] = true;
        j["names"] = pm.names;
        if (a.has_expr) j["expr"] = format_csg(a.expr);
    } else if (ext == "lar3") {
        Lar3Data data = parse_lar3(read_file(path));
        j["kind"] = "arrangement";
        j["vertices"] = data.cx.V.size();
        j["edges"] = data.cx.d1.cols();
        j["faces"] = data.cx.d2.cols();
        j["atoms"] = data.cx.bounded_cols.size();
        j["names"] = data.bm.names;
    } else {
        throw ValidationError("unknown extension '" + ext + "': " + path);
    }
    j["ok"] = true;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"variadic booleans over arrangements of solid boundaries"};
    app.require_subcommand(1);

    Common c3;
    std::string in3, out3;
    auto* a3 = app.add_subcommand("arrange3d", "arrange a scene and classify its atoms");
    a3->add_option("--in", in3, "scene file (.csg, .lar, .obj)")->required();
    a3->add_option("--out", out3, "arrangement container to write (.lar3)");
    add_common(a3, c3);

    Common c2;
    std::vector<std::string> in2, names2;
    std::string expr2, out2;
    auto* a2 = app.add_subcommand("arrange2d", "arrange plane drawings and classify");
    a2->add_option("--in", in2, "svg drawings, one solid each")->required();
    a2->add_option("--name", names2, "solid names matching the --in order");
    a2->add_option("--expr", expr2, "formula over the drawing names");
    a2->add_option("--out", out2, "svg to write with the result boundary");
    add_common(a2, c2);

    Common ce;
    std::string comp, expre, oute;
    auto* ev = app.add_subcommand("eval", "evaluate a formula over a stored arrangement");
    ev->add_option("--complex", comp, "arrangement container (.lar3)")->required();
    ev->add_option("--expr", expre, "formula; defaults to the union of all names");
    ev->add_option("--out", oute, "obj to write with the result boundary");
    add_common(ev, ce);

    Common ca;
    std::string compa;
    auto* at = app.add_subcommand("atoms", "list the atoms of a stored arrangement");
    at->add_option("--complex", compa, "arrangement container (.lar3)")->required();
    add_common(at, ca);

    Common ck;
    std::string inc;
    auto* ch = app.add_subcommand("check", "validate a model, scene or container file");
    ch->add_option("--in", inc, "file to check (.lar, .obj, .csg, .lar3)")->required();
    add_common(ch, ck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*a3) {
            Scene3 s = build_scene(load_placements(in3), options(c3));
            if (!out3.empty()) write_file(out3, format_lar3(s.cx, s.bm));
            emit(scene_report(s), c3.report);
        } else if (*a2) {
            std::vector<Solid2> solids;
            std::vector<std::string> names;
            for (std::size_t i = 0; i < in2.size(); ++i) {
                solids.push_back({parse_svg(read_file(in2[i]))});
                names.push_back(i < names2.size() ? names2[i] : "X" + std::to_string(i + 1));
            }
            if (names2.size() > in2.size())
                throw ValidationError("more --name values than --in drawings");
            Scene2 s = build_scene2d(solids, names, options(c2));
            nlohmann::ordered_json rep = scene_report2d(s);
            if (!expr2.empty()) {
                CsgExpr e = parse_csg(expr2);
                EvalResult2 r = evaluate_expr2d(s, e);
                nlohmann::ordered_json er;
                er["expr"] = format_csg(e);
                er.update(eval_report2d(s, r));
                rep["result"] = er;
                if (!out2.empty()) write_file(out2, format_svg(r.segments));
            } else if (!out2.empty()) {
                throw ValidationError("--out needs --expr to know what to draw");
            }
            emit(rep, c2.report);
        } else if (*ev) {
            Scene3 s = load_scene(comp);
            CsgExpr e = expre.empty() ? union_of_names(s.bm) : parse_csg(expre);
            EvalResult r = evaluate_expr(s, e);
            nlohmann::ordered_json rep;
            rep["expr"] = format_csg(e);
            rep.update(eval_report(s, r));
            if (!oute.empty()) write_file(oute, format_obj(r.brep));
            emit(rep, ce.report);
        } else if (*at) {
            emit(atoms_report(load_scene(compa), ca.seed), ca.report);
        } else if (*ch) {
            emit(check_file(inc), ck.report);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
