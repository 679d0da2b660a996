#include "chaincsg/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chaincsg/errors.hpp"

namespace chaincsg {

namespace {

std::string fmt(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, p);
}

// meaningful lines with their 1-based numbers; '#' starts a comment
struct Lines {
    std::vector<std::pair<int, std::string>> rows;
    std::size_t pos = 0;

    explicit Lines(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            std::size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            std::size_t b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            std::size_t e = line.find_last_not_of(" \t\r");
            rows.push_back({no, line.substr(b, e - b + 1)});
        }
    }
    bool done() const { return pos >= rows.size(); }
    const std::pair<int, std::string>& peek() const { return rows[pos]; }
    std::pair<int, std::string> take() { return rows[pos++]; }
};

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

[[noreturn]] void fail(const std::string& what, int lineno, const std::string& msg) {
    throw IoError(what + ": line " + std::to_string(lineno) + ": " + msg);
}

double to_double(const std::string& what, int lineno, const std::string& s) {
    const char* b = s.c_str();
    char* end = nullptr;
    double v = std::strtod(b, &end);
    if (end != b + s.size() || s.empty()) fail(what, lineno, "expected a number, got '" + s + "'");
    return v;
}

long to_long(const std::string& what, int lineno, const std::string& s) {
    const char* b = s.c_str();
    char* end = nullptr;
    long v = std::strtol(b, &end, 10);
    if (end != b + s.size() || s.empty())
        fail(what, lineno, "expected an integer, got '" + s + "'");
    return v;
}

}  // namespace

std::string format_lar(const LarModel& m) {
    std::string out = "LAR " + std::to_string(m.dim) + " " + std::to_string(m.V.size()) + "\n";
    for (const Vec3& p : m.V) {
        out += fmt(p.x) + " " + fmt(p.y);
        if (m.dim == 3) out += " " + fmt(p.z);
        out += "\n";
    }
    if (!m.EV.empty()) {
        out += "EV " + std::to_string(m.EV.size()) + "\n";
        for (const auto& e : m.EV)
            out += std::to_string(e[0] + 1) + " " + std::to_string(e[1] + 1) + "\n";
    }
    if (!m.FV.empty()) {
        out += "FV " + std::to_string(m.FV.size()) + "\n";
        for (const auto& f : m.FV) {
            std::string row;
            for (int v : f) {
                if (!row.empty()) row += " ";
                row += std::to_string(v + 1);
            }
            out += row + "\n";
        }
    }
    return out;
}

LarModel parse_lar(const std::string& text) {
    const std::string what = "lar parse";
    Lines ls(text);
    if (ls.done()) throw IoError(what + ": empty input");
    auto [hline, header] = ls.take();
    auto h = split_ws(header);
    if (h.size() != 3 || h[0] != "LAR") fail(what, hline, "expected header 'LAR d n'");
    long d = to_long(what, hline, h[1]);
    long n = to_long(what, hline, h[2]);
    if (d != 2 && d != 3) fail(what, hline, "dimension must be 2 or 3");
    if (n < 0) fail(what, hline, "negative vertex count");

    LarModel m;
    m.dim = int(d);
    for (long i = 0; i < n; ++i) {
        if (ls.done()) throw IoError(what + ": unexpected end of input in vertex list");
        auto [no, line] = ls.take();
        auto t = split_ws(line);
        if (long(t.size()) != d) fail(what, no, "expected " + std::to_string(d) + " coordinates");
        Vec3 p{to_double(what, no, t[0]), to_double(what, no, t[1]), 0.0};
        if (d == 3) p.z = to_double(what, no, t[2]);
        m.V.push_back(p);
    }

    auto index = [&](int lineno, const std::string& s) {
        long v = to_long(what, lineno, s);
        if (v < 1 || v > n) fail(what, lineno, "vertex index " + s + " out of range");
        return int(v - 1);
    };
    while (!ls.done()) {
        auto [no, line] = ls.take();
        auto t = split_ws(line);
        if (t.size() == 2 && t[0] == "EV") {
            long k = to_long(what, no, t[1]);
            for (long i = 0; i < k; ++i) {
                if (ls.done()) throw IoError(what + ": unexpected end of input in EV");
                auto [eno, eline] = ls.take();
                auto et = split_ws(eline);
                if (et.size() != 2) fail(what, eno, "an edge needs exactly 2 vertices");
                m.EV.push_back({index(eno, et[0]), index(eno, et[1])});
            }
        } else if (t.size() == 2 && t[0] == "FV") {
            long k = to_long(what, no, t[1]);
            for (long i = 0; i < k; ++i) {
                if (ls.done()) throw IoError(what + ": unexpected end of input in FV");
                auto [fno, fline] = ls.take();
                auto ft = split_ws(fline);
                if (ft.size() < 3) fail(what, fno, "a face needs at least 3 vertices");
                std::vector<int> row;
                for (const auto& s : ft) row.push_back(index(fno, s));
                m.FV.push_back(std::move(row));
            }
        } else {
            fail(what, no, "expected an 'EV k' or 'FV k' section header");
        }
    }
    return m;
}

std::string format_obj(const Brep& b) {
    std::set<int> used;
    for (const auto& t : b.tris) used.insert(t.begin(), t.end());
    std::map<int, int> remap;
    std::string out;
    int next = 1;
    for (int v : used) {
        remap[v] = next++;
        out += "v " + fmt(b.V[v].x) + " " + fmt(b.V[v].y) + " " + fmt(b.V[v].z) + "\n";
    }
    for (const auto& t : b.tris)
        out += "f " + std::to_string(remap[t[0]]) + " " + std::to_string(remap[t[1]]) + " " +
               std::to_string(remap[t[2]]) + "\n";
    return out;
}

LarModel parse_obj(const std::string& text) {
    const std::string what = "obj parse";
    LarModel m;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto t = split_ws(line);
        if (t.empty() || t[0][0] == '#') continue;
        if (t[0] == "v") {
            if (t.size() < 4) fail(what, no, "vertex needs 3 coordinates");
            m.V.push_back({to_double(what, no, t[1]), to_double(what, no, t[2]),
                           to_double(what, no, t[3])});
        } else if (t[0] == "f") {
            if (t.size() < 4) fail(what, no, "face needs at least 3 vertices");
            std::vector<int> row;
            for (std::size_t i = 1; i < t.size(); ++i) {
                std::string s = t[i].substr(0, t[i].find('/'));
                long v = to_long(what, no, s);
                if (v < 0) fail(what, no, "negative indices are not supported");
                if (v < 1 || v > long(m.V.size()))
                    fail(what, no, "vertex index " + s + " out of range");
                row.push_back(int(v - 1));
            }
            m.FV.push_back(std::move(row));
        }
        // other statements (vn, vt, o, g, s, mtl...) are ignored
    }
    m.dim = 3;
    m.EV = edges_from_faces(m.FV);
    return m;
}

namespace {

// attribute map of one tag body; quoted values only
std::map<std::string, std::string> svg_attrs(const std::string& body) {
    std::map<std::string, std::string> out;
    std::size_t i = 0;
    while (i < body.size()) {
        while (i < body.size() && !std::isalpha(unsigned(body[i]))) ++i;
        std::size_t b = i;
        while (i < body.size() && (std::isalnum(unsigned(body[i])) || body[i] == '-' ||
                                   body[i] == '_' || body[i] == ':'))
            ++i;
        if (b == i) break;
        std::string name = body.substr(b, i - b);
        while (i < body.size() && std::isspace(unsigned(body[i]))) ++i;
        if (i >= body.size() || body[i] != '=') continue;
        ++i;
        while (i < body.size() && std::isspace(unsigned(body[i]))) ++i;
        if (i >= body.size() || (body[i] != '"' && body[i] != '\'')) continue;
        char q = body[i++];
        std::size_t e = body.find(q, i);
        if (e == std::string::npos) throw IoError("svg parse: unterminated attribute value");
        out.insert({name, body.substr(i, e - i)});
        i = e + 1;
    }
    return out;
}

std::vector<double> svg_numbers(const std::string& s, const std::string& ctx) {
    std::vector<double> out;
    const char* p = s.c_str();
    const char* end = p + s.size();
    while (p < end) {
        while (p < end && (std::isspace(unsigned(*p)) || *p == ',')) ++p;
        if (p >= end) break;
        char* stop = nullptr;
        double v = std::strtod(p, &stop);
        if (stop == p) throw IoError("svg parse: malformed number list in " + ctx);
        out.push_back(v);
        p = stop;
    }
    return out;
}

double svg_attr_number(const std::map<std::string, std::string>& attrs, const std::string& name,
                       const std::string& tag) {
    auto it = attrs.find(name);
    if (it == attrs.end())
        throw IoError("svg parse: <" + tag + "> is missing attribute '" + name + "'");
    auto nums = svg_numbers(it->second, "<" + tag + "> " + name);
    if (nums.size() != 1)
        throw IoError("svg parse: <" + tag + "> attribute '" + name + "' is not a number");
    return nums[0];
}

void svg_path_segments(const std::string& d, std::vector<std::array<Vec2, 2>>& out) {
    std::size_t i = 0;
    Vec2 cur{}, start{};
    bool open = false;
    char cmd = 0;
    auto skip = [&] {
        while (i < d.size() && (std::isspace(unsigned(d[i])) || d[i] == ',')) ++i;
    };
    auto number = [&]() -> double {
        skip();
        const char* p = d.c_str() + i;
        char* stop = nullptr;
        double v = std::strtod(p, &stop);
        if (stop == p) throw IoError("svg parse: expected a number in path data");
        i += std::size_t(stop - p);
        return v;
    };
    auto emit = [&](Vec2 to) {
        if (norm(to - cur) > 0) out.push_back({cur, to});
        cur = to;
    };
    while (true) {
        skip();
        if (i >= d.size()) break;
        if (std::isalpha(unsigned(d[i]))) cmd = d[i++];
        if (cmd == 0) throw IoError("svg parse: path data must start with a command");
        bool rel = std::islower(unsigned(cmd)) != 0;
        switch (std::toupper(unsigned(cmd))) {
            case 'M': {
                double x = number(), y = number();
                cur = rel && open ? cur + Vec2{x, y} : Vec2{x, y};
                start = cur;
                open = true;
                // subsequent pairs are implicit linetos
                cmd = rel ? 'l' : 'L';
                break;
            }
            case 'L': {
                double x = number(), y = number();
                emit(rel ? cur + Vec2{x, y} : Vec2{x, y});
                break;
            }
            case 'H': {
                double x = number();
                emit({rel ? cur.x + x : x, cur.y});
                break;
            }
            case 'V': {
                double y = number();
                emit({cur.x, rel ? cur.y + y : y});
                break;
            }
            case 'Z': {
                if (norm(start - cur) > 0) out.push_back({cur, start});
                cur = start;
                open = false;
                break;
            }
            default:
                throw IoError(std::string("svg parse: unsupported path command '") + cmd + "'");
        }
    }
}

}  // namespace

std::vector<std::array<Vec2, 2>> parse_svg(const std::string& text) {
    std::string src = text;
    for (;;) {
        std::size_t b = src.find("<!--");
        if (b == std::string::npos) break;
        std::size_t e = src.find("-->", b + 4);
        if (e == std::string::npos) throw IoError("svg parse: unterminated comment");
        src.erase(b, e + 3 - b);
    }

    std::vector<std::array<Vec2, 2>> out;
    std::size_t i = 0;
    while ((i = src.find('<', i)) != std::string::npos) {
        std::size_t b = i + 1;
        std::size_t e = src.find('>', b);
        if (e == std::string::npos) throw IoError("svg parse: unterminated tag");
        std::string body = src.substr(b, e - b);
        i = e + 1;
        auto name_end = body.find_first_of(" \t\r\n/");
        std::string name = body.substr(0, name_end);
        if (name != "rect" && name != "polygon" && name != "line" && name != "path") continue;
        auto attrs = svg_attrs(body);
        if (attrs.count("transform"))
            throw IoError("svg parse: transform attributes are not supported");
        if (name == "rect") {
            double x = attrs.count("x") ? svg_attr_number(attrs, "x", name) : 0.0;
            double y = attrs.count("y") ? svg_attr_number(attrs, "y", name) : 0.0;
            double w = svg_attr_number(attrs, "width", name);
            double h = svg_attr_number(attrs, "height", name);
            if (w <= 0 || h <= 0) throw IoError("svg parse: <rect> needs positive width/height");
            Vec2 a{x, y}, bq{x + w, y}, c{x + w, y + h}, dq{x, y + h};
            out.push_back({a, bq});
            out.push_back({bq, c});
            out.push_back({c, dq});
            out.push_back({dq, a});
        } else if (name == "polygon") {
            auto it = attrs.find("points");
            if (it == attrs.end()) throw IoError("svg parse: <polygon> is missing 'points'");
            auto nums = svg_numbers(it->second, "<polygon> points");
            if (nums.size() < 6 || nums.size() % 2)
                throw IoError("svg parse: <polygon> needs at least 3 coordinate pairs");
            std::vector<Vec2> pts;
            for (std::size_t k = 0; k + 1 < nums.size(); k += 2)
                pts.push_back({nums[k], nums[k + 1]});
            for (std::size_t k = 0; k < pts.size(); ++k)
                out.push_back({pts[k], pts[(k + 1) % pts.size()]});
        } else if (name == "line") {
            Vec2 a{svg_attr_number(attrs, "x1", name), svg_attr_number(attrs, "y1", name)};
            Vec2 c{svg_attr_number(attrs, "x2", name), svg_attr_number(attrs, "y2", name)};
            out.push_back({a, c});
        } else {
            auto it = attrs.find("d");
            if (it == attrs.end()) throw IoError("svg parse: <path> is missing 'd'");
            svg_path_segments(it->second, out);
        }
    }
    return out;
}

namespace {

void dump_triplets(std::string& out, const std::string& tag, const SparseMatrix& m) {
    std::vector<Triplet> ts = m.triplets();
    out += tag + " " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + " " +
           std::to_string(ts.size()) + "\n";
    for (const Triplet& t : ts)
        out += std::to_string(t.row + 1) + " " + std::to_string(t.col + 1) + " " +
               std::to_string(t.val) + "\n";
}

SparseMatrix load_triplets(Lines& ls, const std::string& tag) {
    const std::string what = "lar3 parse";
    if (ls.done()) throw IoError(what + ": missing section " + tag);
    auto [no, line] = ls.take();
    auto t = split_ws(line);
    if (t.size() != 4 || t[0] != tag)
        fail(what, no, "expected section header '" + tag + " rows cols nnz'");
    long rows = to_long(what, no, t[1]);
    long cols = to_long(what, no, t[2]);
    long nnz = to_long(what, no, t[3]);
    if (rows < 0 || cols < 0 || nnz < 0) fail(what, no, "negative section sizes");
    std::vector<Triplet> ts;
    ts.reserve(std::size_t(nnz));
    for (long i = 0; i < nnz; ++i) {
        if (ls.done()) throw IoError(what + ": unexpected end of input in " + tag);
        auto [tno, tline] = ls.take();
        auto tt = split_ws(tline);
        if (tt.size() != 3) fail(what, tno, "expected 'row col value'");
        long r = to_long(what, tno, tt[0]);
        long c = to_long(what, tno, tt[1]);
        long v = to_long(what, tno, tt[2]);
        if (r < 1 || r > rows || c < 1 || c > cols) fail(what, tno, "triplet index out of range");
        if (v < -127 || v > 127) fail(what, tno, "triplet value out of range");
        ts.push_back({int(r - 1), int(c - 1), int(v)});
    }
    return SparseMatrix::from_triplets(int(rows), int(cols), ts);
}

}  // namespace

std::string format_lar3(const ChainComplex3& cx, const BoolMatrix& bm) {
    if (bm.names.size() != bm.columns.size())
        throw ValidationError("classification table has mismatched names and columns");
    if (!bm.names.empty() && bm.n_atoms != int(cx.bounded_cols.size()))
        throw ValidationError("classification table does not match the complex");

    std::string out = "LAR3\n";
    out += "V " + std::to_string(cx.V.size()) + "\n";
    for (const Vec3& p : cx.V) out += fmt(p.x) + " " + fmt(p.y) + " " + fmt(p.z) + "\n";
    dump_triplets(out, "D0", cx.d1.transpose());
    dump_triplets(out, "D1", cx.d2.transpose());
    dump_triplets(out, "D2", cx.d3_plus.transpose());
    out += "OUTER " + std::to_string(cx.outer_cols.size()) + "\n";
    std::string oline;
    for (int c : cx.outer_cols) {
        if (!oline.empty()) oline += " ";
        oline += std::to_string(c + 1);
    }
    out += oline + "\n";
    out += "NAMES " + std::to_string(bm.names.size()) + "\n";
    for (const auto& n : bm.names) out += n + "\n";
    if (!bm.names.empty()) {
        out += "BOOLMATRIX " + std::to_string(bm.n_atoms + 1) + " " +
               std::to_string(bm.names.size() + 1) + "\n";
        for (const auto& row : bm.rows()) {
            std::string r;
            for (bool b : row) {
                if (!r.empty()) r += " ";
                r += b ? "1" : "0";
            }
            out += r + "\n";
        }
    }
    out += "END\n";
    return out;
}

Lar3Data parse_lar3(const std::string& text) {
    const std::string what = "lar3 parse";
    Lines ls(text);
    if (ls.done()) throw IoError(what + ": empty input");
    auto [hno, header] = ls.take();
    if (header != "LAR3") fail(what, hno, "expected 'LAR3' header");

    if (ls.done()) throw IoError(what + ": missing V section");
    auto [vno, vline] = ls.take();
    auto vt = split_ws(vline);
    if (vt.size() != 2 || vt[0] != "V") fail(what, vno, "expected 'V n'");
    long n = to_long(what, vno, vt[1]);

    Lar3Data data;
    ChainComplex3& cx = data.cx;
    for (long i = 0; i < n; ++i) {
        if (ls.done()) throw IoError(what + ": unexpected end of input in V");
        auto [no, line] = ls.take();
        auto t = split_ws(line);
        if (t.size() != 3) fail(what, no, "expected 3 coordinates");
        cx.V.push_back({to_double(what, no, t[0]), to_double(what, no, t[1]),
                        to_double(what, no, t[2])});
    }

    SparseMatrix delta0 = load_triplets(ls, "D0");
    SparseMatrix delta1 = load_triplets(ls, "D1");
    SparseMatrix delta2 = load_triplets(ls, "D2");
    if (delta0.cols() != int(cx.V.size()) || delta1.cols() != delta0.rows() ||
        delta2.cols() != delta1.rows())
        throw IoError(what + ": section dimensions do not chain together");
    cx.d1 = delta0.transpose();
    cx.d2 = delta1.transpose();
    cx.d3_plus = delta2.transpose();
    if (!delta1.multiply(delta0).is_zero() || !cx.d2.multiply(cx.d3_plus).is_zero())
        throw IoError(what + ": boundary products are not zero; the complex is corrupt");

    if (ls.done()) throw IoError(what + ": missing OUTER section");
    auto [ono, oline] = ls.take();
    auto ot = split_ws(oline);
    if (ot.size() != 2 || ot[0] != "OUTER") fail(what, ono, "expected 'OUTER k'");
    long k = to_long(what, ono, ot[1]);
    std::vector<int> outer;
    if (k > 0) {
        if (ls.done()) throw IoError(what + ": unexpected end of input in OUTER");
        auto [no, line] = ls.take();
        for (const auto& s : split_ws(line)) {
            long c = to_long(what, no, s);
            if (c < 1 || c > cx.d3_plus.cols()) fail(what, no, "outer cell index out of range");
            outer.push_back(int(c - 1));
        }
        if (long(outer.size()) != k) fail(what, no, "OUTER count does not match its line");
    }

    try {
        cx.faces = face_geometry(cx.d1, cx.d2, cx.V);
        cycles_to_boundaries(cx);
    } catch (const Error& e) {
        throw IoError(what + ": stored complex is not a valid arrangement: " + e.what());
    }
    std::vector<int> got = cx.outer_cols, want = outer;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    if (got != want) throw IoError(what + ": OUTER section does not match the complex");

    if (ls.done()) throw IoError(what + ": missing NAMES section");
    auto [nno, nline] = ls.take();
    auto nt = split_ws(nline);
    if (nt.size() != 2 || nt[0] != "NAMES") fail(what, nno, "expected 'NAMES m'");
    long m = to_long(what, nno, nt[1]);
    BoolMatrix& bm = data.bm;
    bm.n_atoms = int(cx.bounded_cols.size());
    for (long i = 0; i < m; ++i) {
        if (ls.done()) throw IoError(what + ": unexpected end of input in NAMES");
        bm.names.push_back(ls.take().second);
    }

    if (m > 0) {
        if (ls.done()) throw IoError(what + ": missing BOOLMATRIX section");
        auto [bno, bline] = ls.take();
        auto bt = split_ws(bline);
        if (bt.size() != 3 || bt[0] != "BOOLMATRIX") fail(what, bno, "expected 'BOOLMATRIX r c'");
        long rows = to_long(what, bno, bt[1]);
        long cols = to_long(what, bno, bt[2]);
        if (rows != bm.n_atoms + 1 || cols != m + 1)
            fail(what, bno, "classification size does not match the complex");
        for (long j = 0; j < m; ++j) bm.columns.push_back(BitChain(bm.n_atoms));
        for (long r = 0; r < rows; ++r) {
            if (ls.done()) throw IoError(what + ": unexpected end of input in BOOLMATRIX");
            auto [no, line] = ls.take();
            auto t = split_ws(line);
            if (long(t.size()) != cols) fail(what, no, "wrong number of row entries");
            for (long c = 0; c < cols; ++c) {
                long b = to_long(what, no, t[c]);
                if (b != 0 && b != 1) fail(what, no, "entries must be 0 or 1");
                bool expect_outer = (r == 0 && c == 0);
                if (c == 0 && bool(b) != expect_outer)
                    fail(what, no, "the outer indicator column is malformed");
                if (r == 0 && c > 0 && b != 0)
                    fail(what, no, "the outer row must be false for every solid");
                if (r > 0 && c > 0 && b) bm.columns[c - 1].set(int(r - 1));
            }
        }
    }

    if (ls.done() || ls.take().second != "END") throw IoError(what + ": missing END marker");
    return data;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read file: " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write file: " + path);
}

}  // namespace chaincsg
