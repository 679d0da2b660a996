#include "chaincsg/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>

#include "chaincsg/errors.hpp"
#include "chaincsg/parallel.hpp"
#include "chaincsg/triangulate.hpp"

namespace chaincsg {

BitChain::BitChain(int n, bool omega) : n_(n), omega_(omega) {
    if (n < 0) throw ValidationError("bit chain length must be non-negative");
    words_.assign((std::size_t(n) + 63) / 64, 0);
}

void BitChain::set(int i, bool v) {
    if (i < 0 || i >= n_) throw ValidationError("bit chain index out of range");
    std::uint64_t mask = std::uint64_t(1) << (i % 64);
    if (v)
        words_[i / 64] |= mask;
    else
        words_[i / 64] &= ~mask;
}

bool BitChain::get(int i) const {
    if (i < 0 || i >= n_) throw ValidationError("bit chain index out of range");
    return (words_[i / 64] >> (i % 64)) & 1;
}

int BitChain::count() const {
    int c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

bool BitChain::any() const {
    for (std::uint64_t w : words_)
        if (w) return true;
    return false;
}

std::vector<int> BitChain::members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (get(i)) out.push_back(i);
    return out;
}

BitChain BitChain::complement() const {
    BitChain r(n_, !omega_);
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = ~words_[k];
    if (n_ % 64) r.words_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
    return r;
}

void BitChain::check_match(const BitChain& a, const BitChain& b) {
    if (a.n_ != b.n_)
        throw ValidationError("bit chain length mismatch: " + std::to_string(a.n_) + " vs " +
                              std::to_string(b.n_));
}

BitChain operator|(const BitChain& a, const BitChain& b) {
    BitChain::check_match(a, b);
    BitChain r(a.n_, a.omega_ || b.omega_);
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] = a.words_[k] | b.words_[k];
    return r;
}

BitChain operator&(const BitChain& a, const BitChain& b) {
    BitChain::check_match(a, b);
    BitChain r(a.n_, a.omega_ && b.omega_);
    for (std::size_t k = 0; k < r.words_.size(); ++k) r.words_[k] = a.words_[k] & b.words_[k];
    return r;
}

bool BitChain::operator==(const BitChain& o) const {
    return n_ == o.n_ && omega_ == o.omega_ && words_ == o.words_;
}

BitChain eval_bitwise(const CsgExpr& expr, const std::map<std::string, BitChain>& env) {
    switch (expr.kind) {
        case CsgExpr::Kind::Leaf: {
            auto it = env.find(expr.name);
            if (it == env.end()) {
                std::string bound;
                for (const auto& [k, v] : env) {
                    (void)v;
                    if (!bound.empty()) bound += ", ";
                    bound += k;
                }
                throw ValidationError("name '" + expr.name +
                                      "' is not bound (bound names: " + bound + ")");
            }
            return it->second;
        }
        case CsgExpr::Kind::Complement: {
            if (expr.args.size() != 1)
                throw ValidationError("complement takes exactly one argument");
            return eval_bitwise(expr.args[0], env).complement();
        }
        case CsgExpr::Kind::Union:
        case CsgExpr::Kind::Intersect:
        case CsgExpr::Kind::Diff: {
            if (expr.args.size() < 2)
                throw ValidationError("variadic operator needs at least two arguments");
            BitChain acc = eval_bitwise(expr.args[0], env);
            for (std::size_t i = 1; i < expr.args.size(); ++i) {
                BitChain b = eval_bitwise(expr.args[i], env);
                if (expr.kind == CsgExpr::Kind::Union)
                    acc = acc | b;
                else if (expr.kind == CsgExpr::Kind::Intersect)
                    acc = acc & b;
                else
                    acc = acc & b.complement();
            }
            return acc;
        }
    }
    throw ValidationError("malformed expression node");
}

const BitChain& BoolMatrix::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    std::string bound;
    for (const auto& n : names) {
        if (!bound.empty()) bound += ", ";
        bound += n;
    }
    throw ValidationError("name '" + name + "' is not bound (bound names: " + bound + ")");
}

std::map<std::string, BitChain> BoolMatrix::bindings() const {
    std::map<std::string, BitChain> env;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!env.insert({names[i], columns[i]}).second)
            throw ValidationError("duplicate solid name '" + names[i] + "'");
    }
    return env;
}

std::vector<std::vector<bool>> BoolMatrix::rows() const {
    std::vector<std::vector<bool>> out;
    std::vector<bool> outer(names.size() + 1, false);
    outer[0] = true;
    out.push_back(outer);
    for (int k = 0; k < n_atoms; ++k) {
        std::vector<bool> row(names.size() + 1, false);
        for (std::size_t j = 0; j < columns.size(); ++j) row[j + 1] = columns[j].get(k);
        out.push_back(row);
    }
    return out;
}

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (;;) {
        Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
        double n = norm(d);
        if (n > 1e-3) return d / n;
    }
}

// parity of p against an explicit triangle list, recasting on grazing rays
bool tri_parity(const Vec3& p, std::span<const std::array<int, 3>> tris, std::span<const Vec3> V,
                std::mt19937_64& rng, double len_tol) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vec3 dir = random_unit(rng);
        int hits = 0;
        bool clean = true;
        for (const auto& t : tris) {
            RayHit h = ray_triangle(p, dir, V[t[0]], V[t[1]], V[t[2]], len_tol);
            if (h == RayHit::Hit) ++hits;
            if (h == RayHit::Degenerate) {
                clean = false;
                break;
            }
        }
        if (clean) return (hits & 1) != 0;
    }
    throw GeometryError("point classification still degenerate after 8 ray casts");
}

std::vector<std::array<int, 2>> edge_endpoints(const SparseMatrix& d1) {
    SparseMatrix d1t = d1.transpose();
    std::vector<std::array<int, 2>> ev(d1t.rows());
    for (int e = 0; e < d1t.rows(); ++e) {
        auto r = d1t.row(e);
        if (r.size != 2) throw ValidationError("edge " + std::to_string(e + 1) + " is malformed");
        ev[e] = {r.cols[0], r.cols[1]};
    }
    return ev;
}

}  // namespace

SolidMesh solid_mesh(const LarModel& m) {
    validate_model(m, "solid");
    if (m.FV.empty()) throw ValidationError("solid has no faces");
    SolidMesh s;
    s.V = m.V;
    s.face_tris.resize(m.FV.size());
    s.face_boxes.resize(m.FV.size());
    for (std::size_t f = 0; f < m.FV.size(); ++f) {
        const std::vector<int>& fv = m.FV[f];
        std::vector<Vec3> loop;
        loop.reserve(fv.size());
        for (int v : fv) {
            loop.push_back(m.V[v]);
            s.face_boxes[f].expand(m.V[v]);
            s.box.expand(m.V[v]);
        }
        PlaneFrame frame = plane_frame(loop);
        std::vector<Vec2> chart;
        chart.reserve(loop.size());
        for (const Vec3& q : loop) chart.push_back(frame.project(q));
        std::vector<std::vector<Vec2>> loops{chart};
        for (const auto& t : triangulate_face(loops))
            s.face_tris[f].push_back({fv[t[0]], fv[t[1]], fv[t[2]]});
    }
    s.index = IntervalTreeSet::build(s.face_boxes);
    return s;
}

bool smc_point_in_solid(const Vec3& p, const SolidMesh& solid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double reach = solid.box.diagonal() + norm(p - (solid.box.lo + solid.box.hi) / 2.0) + 1.0;
    double len_tol = kPredicateTol * std::max(1.0, reach);
    for (int attempt = 0; attempt < 8; ++attempt) {
        Vec3 dir = random_unit(rng);
        Box3 ray_box;
        ray_box.expand(p);
        ray_box.expand(p + dir * reach);
        int hits = 0;
        bool clean = true;
        for (int f : solid.index.query(ray_box)) {
            for (const auto& t : solid.face_tris[f]) {
                RayHit h = ray_triangle(p, dir, solid.V[t[0]], solid.V[t[1]], solid.V[t[2]],
                                        len_tol);
                if (h == RayHit::Hit) ++hits;
                if (h == RayHit::Degenerate) {
                    clean = false;
                    break;
                }
            }
            if (!clean) break;
        }
        if (clean) return (hits & 1) != 0;
    }
    throw GeometryError("point classification still degenerate after 8 ray casts");
}

std::vector<Vec3> atom_witnesses(const ChainComplex3& cx, std::uint64_t seed) {
    const int nb = cx.d3.cols();
    SparseMatrix d3t = cx.d3.transpose();
    std::vector<Vec3> out(nb);
    for (int c = 0; c < nb; ++c) {
        auto r = d3t.row(c);
        Box3 box;
        std::vector<std::array<int, 3>> tris;
        for (int k = 0; k < r.size; ++k) {
            box.merge(cx.faces[r.cols[k]].box);
            for (const auto& t : cx.faces[r.cols[k]].tris) tris.push_back(t);
        }
        double tau0 = 1e-4 * std::max(box.diagonal(), 1e-30);
        double len_tol = kPredicateTol * std::max(1.0, box.diagonal());
        bool found = false;
        for (int k = 0; k < r.size && !found; ++k) {
            const FaceInfo& fi = cx.faces[r.cols[k]];
            if (fi.tris.empty()) continue;
            const auto& t = fi.tris[0];
            Vec3 centroid = (cx.V[t[0]] + cx.V[t[1]] + cx.V[t[2]]) / 3.0;
            Vec3 inward = fi.normal * double(-r.vals[k]);
            double tau = tau0;
            for (int shrink = 0; shrink < 5 && !found; ++shrink, tau /= 10.0) {
                Vec3 cand = centroid + inward * tau;
                std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(c + 1)));
                try {
                    if (tri_parity(cand, tris, cx.V, rng, len_tol)) {
                        out[c] = cand;
                        found = true;
                    }
                } catch (const GeometryError&) {
                    // grazing from this candidate; shrink and retry
                }
            }
        }
        if (!found)
            throw GeometryError("atom " + std::to_string(c + 1) + ": no valid witness point");
    }
    return out;
}

BoolMatrix classify_atoms(const ChainComplex3& cx, std::span<const SolidMesh> solids,
                          std::span<const std::string> names, std::uint64_t seed, int threads) {
    if (solids.size() != names.size())
        throw ValidationError("classify_atoms: one name per solid required");
    std::vector<Vec3> witnesses = atom_witnesses(cx, seed);
    const int nb = int(witnesses.size());
    BoolMatrix bm;
    bm.n_atoms = nb;
    bm.names.assign(names.begin(), names.end());
    for (std::size_t j = 0; j < solids.size(); ++j) {
        std::vector<char> bits(nb, 0);
        const SolidMesh& solid = solids[j];
        parallel_for(nb, threads, [&](int k) {
            std::uint64_t mix = seed ^ (0x9E3779B97F4A7C15ULL * std::uint64_t(k + 1)) ^
                                (0xBF58476D1CE4E5B9ULL * std::uint64_t(j + 1));
            try {
                bits[k] = smc_point_in_solid(witnesses[k], solid, mix) ? 1 : 0;
            } catch (const GeometryError& e) {
                throw GeometryError("atom " + std::to_string(k + 1) + ": " + e.what());
            }
        });
        BitChain col(nb);
        for (int k = 0; k < nb; ++k)
            if (bits[k]) col.set(k);
        bm.columns.push_back(std::move(col));
    }
    return bm;
}

std::vector<Vec2> atom_witnesses2d(const ChainComplex2& cx) {
    const int nb = cx.d2.cols();
    std::vector<Vec2> out(nb);
    for (int c = 0; c < nb; ++c) {
        std::vector<std::pair<int, int>> ent = column_entries(cx.d2, c);
        std::vector<std::vector<int>> loops = cycle_loops(cx.V, cx.EV, ent);
        std::vector<std::vector<Vec2>> polys;
        std::vector<double> areas;
        for (const auto& lp : loops) {
            std::vector<Vec2> poly;
            for (int v : lp) poly.push_back(cx.V[v]);
            areas.push_back(signed_area(poly));
            polys.push_back(std::move(poly));
        }
        std::size_t outer = 0;
        for (std::size_t i = 1; i < polys.size(); ++i)
            if (areas[i] > areas[outer]) outer = i;
        std::swap(polys[0], polys[outer]);
        std::vector<Vec2> concat;
        for (const auto& poly : polys) concat.insert(concat.end(), poly.begin(), poly.end());
        bool found = false;
        for (const auto& t : triangulate_face(polys)) {
            Vec2 cand = (concat[t[0]] + concat[t[1]] + concat[t[2]]) / 3.0;
            if (point_vs_cycle(cand, cx.V, cx.EV, ent) == PointSide::Inside) {
                out[c] = cand;
                found = true;
                break;
            }
        }
        if (!found)
            throw GeometryError("atom " + std::to_string(c + 1) + ": no valid witness point");
    }
    return out;
}

BoolMatrix classify_atoms2d(const ChainComplex2& cx, std::span<const Solid2> solids,
                            std::span<const std::string> names) {
    if (solids.size() != names.size())
        throw ValidationError("classify_atoms2d: one name per solid required");
    std::vector<Vec2> witnesses = atom_witnesses2d(cx);
    BoolMatrix bm;
    bm.n_atoms = int(witnesses.size());
    bm.names.assign(names.begin(), names.end());
    for (std::size_t j = 0; j < solids.size(); ++j) {
        BitChain col(bm.n_atoms);
        for (int k = 0; k < bm.n_atoms; ++k) {
            PointSide side = point_in_loops(witnesses[k], solids[j].segments);
            if (side == PointSide::OnBoundary)
                throw GeometryError("atom " + std::to_string(k + 1) +
                                    ": witness lies on the boundary of input " +
                                    std::to_string(j + 1));
            if (side == PointSide::Inside) col.set(k);
        }
        bm.columns.push_back(std::move(col));
    }
    return bm;
}

std::vector<int> boundary_chain(const BitChain& result, const SparseMatrix& d3) {
    if (result.omega())
        throw ValidationError("unbounded result: the outer cell has no boundary to export");
    if (result.size() != d3.cols())
        throw ValidationError("bit chain length " + std::to_string(result.size()) +
                              " does not match " + std::to_string(d3.cols()) + " atoms");
    std::vector<int> x(result.size(), 0);
    for (int i = 0; i < result.size(); ++i) x[i] = result.get(i) ? 1 : 0;
    return d3.apply(x);
}

Brep brep_extract(std::span<const int> chain, const ChainComplex3& cx) {
    if (int(chain.size()) != cx.d2.cols())
        throw ValidationError("face chain length does not match the complex");
    std::vector<int> residual = cx.d2.apply(chain);
    for (std::size_t e = 0; e < residual.size(); ++e)
        if (residual[e] != 0)
            throw GeometryError("face chain is not a cycle: residual at edge " +
                                std::to_string(e + 1));
    Brep b;
    b.V = cx.V;
    for (std::size_t f = 0; f < chain.size(); ++f) {
        if (chain[f] == 0) continue;
        int c = chain[f] > 0 ? 1 : -1;
        b.faces.push_back(int(f));
        b.coeffs.push_back(c);
        std::vector<std::vector<int>> loops = cx.faces[f].loops;
        if (c < 0)
            for (auto& lp : loops) std::reverse(lp.begin(), lp.end());
        b.loops.push_back(std::move(loops));
        for (const auto& t : cx.faces[f].tris) {
            if (c > 0)
                b.tris.push_back(t);
            else
                b.tris.push_back({t[0], t[2], t[1]});
        }
    }
    return b;
}

BoundaryCounts boundary_counts(std::span<const int> chain, const ChainComplex3& cx) {
    if (int(chain.size()) != cx.d2.cols())
        throw ValidationError("face chain length does not match the complex");
    std::vector<int> residual = cx.d2.apply(chain);
    for (std::size_t e = 0; e < residual.size(); ++e)
        if (residual[e] != 0)
            throw GeometryError("face chain is not a cycle: residual at edge " +
                                std::to_string(e + 1));
    BoundaryCounts bc;
    SparseMatrix d2t = cx.d2.transpose();
    std::vector<std::array<int, 2>> ev = edge_endpoints(cx.d1);
    std::set<int> verts;
    for (std::size_t f = 0; f < chain.size(); ++f) {
        if (chain[f] == 0) continue;
        ++bc.chi2;
        auto r = d2t.row(int(f));
        for (int k = 0; k < r.size; ++k) {
            if (int(r.vals[k]) * chain[f] != 1) continue;
            ++bc.chi1;
            verts.insert(ev[r.cols[k]][0]);
            verts.insert(ev[r.cols[k]][1]);
        }
    }
    bc.chi0 = int(verts.size());
    return bc;
}

}  // namespace chaincsg
