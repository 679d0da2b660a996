#include "chaincsg/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "chaincsg/errors.hpp"
#include "chaincsg/io.hpp"

namespace chaincsg {

namespace {

std::string fmt(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, p);
}

std::string extension(const std::string& path) {
    std::size_t dot = path.rfind('.');
    std::size_t slash = path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = char(std::tolower(unsigned(c)));
    return ext;
}

// columns sharing a name describe placements of one solid: a point is inside
// when it is inside any of them
BoolMatrix merge_named(const BoolMatrix& bm) {
    BoolMatrix out;
    out.n_atoms = bm.n_atoms;
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < bm.names.size(); ++i) {
        auto [it, fresh] = seen.insert({bm.names[i], out.names.size()});
        if (fresh) {
            out.names.push_back(bm.names[i]);
            out.columns.push_back(bm.columns[i]);
        } else {
            out.columns[it->second] = out.columns[it->second] | bm.columns[i];
        }
    }
    return out;
}

}  // namespace

SceneSource load_placements(const std::string& path) {
    std::string ext = extension(path);
    SceneSource src;
    if (ext == "csg") {
        Assembly a = parse_assembly(read_file(path));
        src.placed = evaluate_assembly(a);
        src.expr = a.expr;
        src.has_expr = a.has_expr;
    } else if (ext == "lar" || ext == "obj") {
        LarModel m = ext == "lar" ? parse_lar(read_file(path)) : parse_obj(read_file(path));
        if (m.dim != 3) throw ValidationError("scene input must be 3-dimensional: " + path);
        src.placed.models.push_back(std::move(m));
        src.placed.names.push_back("X1");
    } else {
        throw ValidationError("unknown scene extension '" + ext + "': " + path);
    }
    if (src.placed.models.empty()) throw ValidationError("scene places no models: " + path);
    return src;
}

Scene3 build_scene(const SceneSource& src, const PipelineOptions& opt) {
    Scene3 s = build_scene(src.placed, opt);
    s.expr = src.expr;
    s.has_expr = src.has_expr;
    return s;
}

Scene3 build_scene(const PlacedModels& pm, const PipelineOptions& opt) {
    if (pm.models.empty()) throw ValidationError("scene places no models");
    Scene3 s;
    s.cx = arrangement3d(merge_models(pm.models), opt.epsilon, opt.threads);
    std::vector<SolidMesh> solids;
    solids.reserve(pm.models.size());
    for (const LarModel& m : pm.models) solids.push_back(solid_mesh(m));
    s.bm = merge_named(classify_atoms(s.cx, solids, pm.names, opt.seed, opt.threads));
    return s;
}

CsgExpr union_of_names(const BoolMatrix& bm) {
    if (bm.names.empty()) throw ValidationError("no names to take a union of");
    if (bm.names.size() == 1) {
        CsgExpr leaf;
        leaf.name = bm.names[0];
        return leaf;
    }
    CsgExpr e;
    e.kind = CsgExpr::Kind::Union;
    for (const std::string& n : bm.names) {
        CsgExpr leaf;
        leaf.name = n;
        e.args.push_back(leaf);
    }
    return e;
}

EvalResult evaluate_expr(const Scene3& s, const CsgExpr& e) {
    EvalResult r;
    r.atoms = eval_bitwise(e, s.bm.bindings());
    r.chain = boundary_chain(r.atoms, s.cx.d3);
    r.brep = brep_extract(r.chain, s.cx);
    r.counts = boundary_counts(r.chain, s.cx);
    for (int i : r.atoms.members()) r.volume += s.cx.cell_volume[s.cx.bounded_cols[i]];
    return r;
}

Scene2 build_scene2d(std::span<const Solid2> solids, std::span<const std::string> names,
                     const PipelineOptions& opt) {
    if (solids.empty()) throw ValidationError("scene places no models");
    if (solids.size() != names.size())
        throw ValidationError("every 2D input needs exactly one name");
    std::vector<std::array<Vec2, 2>> segments;
    for (const Solid2& s : solids)
        segments.insert(segments.end(), s.segments.begin(), s.segments.end());
    Scene2 s;
    s.cx = planar_arrangement(segments, opt.epsilon);
    s.bm = merge_named(classify_atoms2d(s.cx, solids, names));
    return s;
}

EvalResult2 evaluate_expr2d(const Scene2& s, const CsgExpr& e) {
    EvalResult2 r;
    r.atoms = eval_bitwise(e, s.bm.bindings());
    if (r.atoms.omega())
        throw ValidationError("unbounded result: the outer cell has no boundary to export");
    std::vector<int> x(std::size_t(s.cx.d2.cols()), 0);
    for (int i : r.atoms.members()) x[std::size_t(i)] = 1;
    r.chain = s.cx.d2.apply(x);
    for (std::size_t e2 = 0; e2 < r.chain.size(); ++e2) {
        int c = r.chain[e2];
        if (c == 0) continue;
        Vec2 a = s.cx.V[s.cx.EV[e2][0]];
        Vec2 b = s.cx.V[s.cx.EV[e2][1]];
        r.segments.push_back(c > 0 ? std::array<Vec2, 2>{a, b} : std::array<Vec2, 2>{b, a});
    }
    for (const auto& seg : r.segments) r.area += cross(seg[0], seg[1]) / 2;
    return r;
}

std::string format_svg(std::span<const std::array<Vec2, 2>> segments) {
    Box2 box;
    for (const auto& s : segments) {
        box.expand(s[0]);
        box.expand(s[1]);
    }
    if (segments.empty()) box = {{0, 0}, {1, 1}};
    Vec2 size = box.hi - box.lo;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(box.lo.x) +
                      " " + fmt(box.lo.y) + " " + fmt(size.x > 0 ? size.x : 1) + " " +
                      fmt(size.y > 0 ? size.y : 1) + "\">\n";
    for (const auto& s : segments)
        out += "  <line x1=\"" + fmt(s[0].x) + "\" y1=\"" + fmt(s[0].y) + "\" x2=\"" +
               fmt(s[1].x) + "\" y2=\"" + fmt(s[1].y) + "\"/>\n";
    out += "</svg>\n";
    return out;
}

namespace {

nlohmann::ordered_json atoms_per_name(const BoolMatrix& bm) {
    nlohmann::ordered_json per;
    for (std::size_t i = 0; i < bm.names.size(); ++i)
        per[bm.names[i]] = bm.columns[i].count();
    return per;
}

}  // namespace

nlohmann::ordered_json scene_report(const Scene3& s) {
    nlohmann::ordered_json j;
    j["vertices"] = s.cx.V.size();
    j["edges"] = s.cx.d1.cols();
    j["faces"] = s.cx.d2.cols();
    j["cycles"] = s.cx.d3_plus.cols();
    j["atoms"] = s.cx.bounded_cols.size();
    j["components"] = s.cx.n_components;
    j["cavities_folded"] = s.cx.cavities_folded;
    double vol = 0;
    for (int c : s.cx.bounded_cols) vol += s.cx.cell_volume[c];
    j["volume_total"] = vol;
    j["names"] = s.bm.names;
    j["atoms_per_name"] = atoms_per_name(s.bm);
    if (s.has_expr) j["expr"] = format_csg(s.expr);
    if (!s.cx.log.empty()) j["log"] = s.cx.log;
    return j;
}

nlohmann::ordered_json scene_report2d(const Scene2& s) {
    nlohmann::ordered_json j;
    j["vertices"] = s.cx.V.size();
    j["edges"] = s.cx.EV.size();
    j["cycles"] = s.cx.d2_plus.cols();
    j["atoms"] = s.cx.bounded_cols.size();
    j["components"] = s.cx.n_components;
    std::vector<int> euler;
    for (const auto& c : s.cx.component_counts) euler.push_back(c.verts - c.edges + c.faces);
    j["euler_per_component"] = euler;
    j["names"] = s.bm.names;
    j["atoms_per_name"] = atoms_per_name(s.bm);
    return j;
}

nlohmann::ordered_json eval_report(const Scene3& s, const EvalResult& r) {
    nlohmann::ordered_json j;
    j["atoms_in_result"] = r.atoms.count();
    j["atoms_total"] = r.atoms.size();
    j["volume"] = r.volume;
    j["boundary_vertices"] = r.counts.chi0;
    j["boundary_edges"] = r.counts.chi1;
    j["boundary_faces"] = r.counts.chi2;
    j["boundary_euler"] = r.counts.chi0 - r.counts.chi1 + r.counts.chi2;
    j["triangles"] = r.brep.tris.size();
    (void)s;
    return j;
}

nlohmann::ordered_json eval_report2d(const Scene2& s, const EvalResult2& r) {
    nlohmann::ordered_json j;
    j["atoms_in_result"] = r.atoms.count();
    j["atoms_total"] = r.atoms.size();
    j["area"] = r.area;
    j["boundary_segments"] = r.segments.size();
    (void)s;
    return j;
}

nlohmann::ordered_json atoms_report(const Scene3& s, std::uint64_t seed) {
    std::vector<Vec3> w = atom_witnesses(s.cx, seed);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.cx.bounded_cols.size(); ++i) {
        nlohmann::ordered_json row;
        row["atom"] = i;
        row["volume"] = s.cx.cell_volume[s.cx.bounded_cols[i]];
        row["witness"] = {w[i].x, w[i].y, w[i].z};
        std::vector<std::string> inside;
        for (std::size_t k = 0; k < s.bm.names.size(); ++k)
            if (s.bm.columns[k].get(int(i))) inside.push_back(s.bm.names[k]);
        row["inside"] = inside;
        rows.push_back(row);
    }
    nlohmann::ordered_json j;
    j["atoms"] = rows;
    return j;
}

namespace {

void render(std::string& out, const std::string& prefix, const nlohmann::ordered_json& j) {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out += prefix + key + ":\n";
            render(out, prefix + "  ", value);
        } else if (value.is_array() && !value.empty() && value[0].is_object()) {
            out += prefix + key + ":\n";
            for (const auto& el : value) {
                out += prefix + "-\n";
                render(out, prefix + "  ", el);
            }
        } else if (value.is_string()) {
            out += prefix + key + ": " + value.get<std::string>() + "\n";
        } else {
            out += prefix + key + ": " + value.dump() + "\n";
        }
    }
}

}  // namespace

std::string render_text(const nlohmann::ordered_json& j) {
    std::string out;
    render(out, "", j);
    return out;
}

}  // namespace chaincsg
