#include "chaincsg/arrange3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "chaincsg/errors.hpp"
#include "chaincsg/interval_tree.hpp"
#include "chaincsg/kdtree.hpp"
#include "chaincsg/parallel.hpp"
#include "chaincsg/planar.hpp"
#include "chaincsg/triangulate.hpp"

namespace chaincsg {

namespace {

// (tail, head) per edge from the signed vertex-edge boundary
std::vector<std::array<int, 2>> edge_table(const SparseMatrix& d1) {
    SparseMatrix d1t = d1.transpose();
    const int ne = d1t.rows();
    std::vector<std::array<int, 2>> ev(ne);
    for (int e = 0; e < ne; ++e) {
        auto r = d1t.row(e);
        int tail = -1, head = -1;
        for (int k = 0; k < r.size; ++k) {
            if (r.vals[k] == -1) tail = r.cols[k];
            if (r.vals[k] == 1) head = r.cols[k];
        }
        if (r.size != 2 || tail < 0 || head < 0)
            throw ValidationError("edge " + std::to_string(e + 1) + " is not a (-1,+1) column");
        ev[e] = {tail, head};
    }
    return ev;
}

// fixed generic directions for parity probes; none is near an axis plane
const std::array<Vec3, 8>& probe_dirs() {
    static const std::array<Vec3, 8> dirs = [] {
        std::array<Vec3, 8> d{{{1, 2, 3},
                               {3, -1, 2},
                               {-2, 3, 1},
                               {1, -3, -2},
                               {5, 1, -1},
                               {-1, 5, 2},
                               {2, -1, 5},
                               {-3, -2, 5}}};
        for (Vec3& v : d) v = normalized(v);
        return d;
    }();
    return dirs;
}

// odd/even crossing parity of a point against a set of triangulated faces
bool parity_inside(const Vec3& p, const std::vector<std::pair<int, int>>& colent,
                   std::span<const FaceInfo> faces, std::span<const Vec3> V, double len_tol) {
    for (const Vec3& dir : probe_dirs()) {
        int count = 0;
        bool clean = true;
        for (const auto& [f, s] : colent) {
            (void)s;
            for (const auto& tr : faces[f].tris) {
                RayHit h = ray_triangle(p, dir, V[tr[0]], V[tr[1]], V[tr[2]], len_tol);
                if (h == RayHit::Hit) ++count;
                if (h == RayHit::Degenerate) {
                    clean = false;
                    break;
                }
            }
            if (!clean) break;
        }
        if (clean) return (count & 1) != 0;
    }
    throw GeometryError("containment probe hit degenerate rays in every direction");
}

}  // namespace

FacePre precompute_face(const LarModel& m, int face) {
    FacePre p;
    const std::vector<int>& fv = m.FV[face];
    p.loop.reserve(fv.size());
    for (int v : fv) p.loop.push_back(m.V[v]);
    try {
        p.frame = plane_frame(p.loop);
    } catch (const GeometryError& e) {
        throw GeometryError("face " + std::to_string(face + 1) + ": " + e.what());
    }
    p.loop2.reserve(fv.size());
    for (const Vec3& q : p.loop) {
        p.loop2.push_back(p.frame.project(q));
        p.box.expand(q);
    }
    return p;
}

LocalComplex fragment_face(int face, std::span<const FacePre> pre,
                           std::span<const int> candidates, double eps) {
    const FacePre& sigma = pre[face];
    std::vector<std::array<Vec2, 2>> segs;
    const std::size_t n = sigma.loop2.size();
    for (std::size_t i = 0; i < n; ++i)
        segs.push_back({sigma.loop2[i], sigma.loop2[(i + 1) % n]});

    for (int cand : candidates) {
        if (cand == face) continue;
        const FacePre& tau = pre[cand];
        const std::size_t k = tau.loop.size();
        std::vector<double> h(k);
        double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
        for (std::size_t i = 0; i < k; ++i) {
            h[i] = sigma.frame.height(tau.loop[i]);
            hmin = std::min(hmin, h[i]);
            hmax = std::max(hmax, h[i]);
        }
        if (hmin > eps || hmax < -eps) continue;  // entirely off the plane
        if (hmax <= eps && hmin >= -eps) {
            // coplanar candidate contributes its whole edge set
            for (std::size_t i = 0; i < k; ++i)
                segs.push_back({sigma.frame.project(tau.loop[i]),
                                sigma.frame.project(tau.loop[(i + 1) % k])});
            continue;
        }
        // trace the candidate's boundary through the plane: vertices on it
        // plus strict crossings, then keep spans interior to the candidate
        std::vector<Vec3> cut;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = (i + 1) % k;
            if (std::abs(h[i]) <= eps) cut.push_back(tau.loop[i]);
            bool straddle = (h[i] > eps && h[j] < -eps) || (h[i] < -eps && h[j] > eps);
            if (straddle) {
                double t = h[i] / (h[i] - h[j]);
                cut.push_back(tau.loop[i] + (tau.loop[j] - tau.loop[i]) * t);
            }
        }
        if (cut.size() < 2) continue;
        Box3 cb;
        for (const Vec3& q : cut) cb.expand(q);
        if (cb.diagonal() <= eps) continue;  // single touch point
        Vec3 dir = normalized(cb.hi - cb.lo);
        std::sort(cut.begin(), cut.end(),
                  [&](const Vec3& a, const Vec3& b) { return dot(a, dir) < dot(b, dir); });
        for (std::size_t i = 0; i + 1 < cut.size(); ++i) {
            const Vec3& a = cut[i];
            const Vec3& b = cut[i + 1];
            if (norm(b - a) <= eps) continue;
            Vec3 mid = (a + b) / 2.0;
            if (point_in_polygon(tau.frame.project(mid), tau.loop2, eps) == PointSide::Outside)
                continue;
            segs.push_back({sigma.frame.project(a), sigma.frame.project(b)});
        }
    }

    PlanarGraph g = intersect_segments(segs, eps);
    PlanarGraph clipped;
    clipped.V = std::move(g.V);
    for (const auto& e : g.EV) {
        Vec2 mid = (clipped.V[e[0]] + clipped.V[e[1]]) / 2.0;
        if (point_in_polygon(mid, sigma.loop2, eps) == PointSide::Outside) continue;
        clipped.EV.push_back(e);
    }
    ChainComplex2 cx = planar_arrangement(std::move(clipped));
    if (cx.d2.cols() < 1)
        throw GeometryError("face " + std::to_string(face + 1) + " vanished while fragmenting");

    // fragments tile the face: their areas must add back up
    double target = std::abs(signed_area(sigma.loop2));
    SparseMatrix d2t = cx.d2.transpose();
    double got = 0;
    for (int c = 0; c < d2t.rows(); ++c) {
        auto r = d2t.row(c);
        std::vector<std::pair<int, int>> ent;
        for (int i = 0; i < r.size; ++i) ent.push_back({r.cols[i], r.vals[i]});
        got += cycle_area(cx.V, cx.EV, ent);
    }
    if (std::abs(got - target) > 1e-6 * std::max(1.0, target))
        throw GeometryError("face " + std::to_string(face + 1) +
                            ": fragments do not tile the face");

    LocalComplex out;
    out.V.reserve(cx.V.size());
    for (const Vec2& q : cx.V) out.V.push_back(sigma.frame.unproject(q));
    out.delta0 = cx.d1.transpose();
    out.delta1 = std::move(d2t);
    return out;
}

Accumulated accumulate(std::span<const LocalComplex> locals) {
    long long nv = 0, ne = 0, nf = 0;
    for (const LocalComplex& l : locals) {
        nv += l.V.size();
        ne += l.delta0.rows();
        nf += l.delta1.rows();
    }
    if (nv > std::numeric_limits<int>::max() || ne > std::numeric_limits<int>::max() ||
        nf > std::numeric_limits<int>::max())
        throw ValidationError("accumulated complex exceeds index range");

    Accumulated acc;
    acc.V.reserve(std::size_t(nv));
    std::vector<Triplet> t0, t1;
    int vo = 0, eo = 0, fo = 0;
    for (const LocalComplex& l : locals) {
        for (const Triplet& t : l.delta0.triplets()) t0.push_back({t.row + eo, t.col + vo, t.val});
        for (const Triplet& t : l.delta1.triplets()) t1.push_back({t.row + fo, t.col + eo, t.val});
        acc.V.insert(acc.V.end(), l.V.begin(), l.V.end());
        vo += int(l.V.size());
        eo += l.delta0.rows();
        fo += l.delta1.rows();
    }
    acc.delta0 = SparseMatrix::from_triplets(eo, vo, t0);
    acc.delta1 = SparseMatrix::from_triplets(fo, eo, t1);
    return acc;
}

Congruent chain_congruence(const Accumulated& acc, double eps) {
    Congruent out;
    const int ne = acc.delta0.rows();
    const int nf = acc.delta1.rows();

    ClusterResult cl = kd_nearest_within(acc.V, eps);
    for (const std::string& w : cl.warnings) out.log.push_back("vertex merge: " + w);
    const int nv2 = int(cl.representatives.size());

    // edges to canonical (min, max) pairs
    std::vector<int> emap(ne, -1), esign(ne, 1);
    std::map<std::pair<int, int>, int> edict;
    std::vector<std::pair<int, int>> new_edges;
    int dead_edges = 0;
    for (int e = 0; e < ne; ++e) {
        auto r = acc.delta0.row(e);
        int a = -1, b = -1;
        for (int k = 0; k < r.size; ++k) {
            if (r.vals[k] == -1) a = cl.point_cluster[r.cols[k]];
            if (r.vals[k] == 1) b = cl.point_cluster[r.cols[k]];
        }
        if (a < 0 || b < 0) throw ValidationError("congruence: malformed edge row");
        if (a == b) {
            ++dead_edges;
            continue;
        }
        std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        auto [it, fresh] = edict.insert({key, int(new_edges.size())});
        if (fresh) new_edges.push_back(key);
        emap[e] = it->second;
        esign[e] = (a == key.first) ? 1 : -1;
    }
    if (dead_edges)
        out.log.push_back(std::to_string(dead_edges) + " edges collapsed during vertex merge");

    // faces: remap edges, cancel slit pairs, drop slivers, dedupe up to sign
    std::vector<std::vector<std::pair<int, int>>> frows;
    std::map<std::vector<std::pair<int, int>>, int> fdict;
    int dead_faces = 0, merged_faces = 0;
    for (int f = 0; f < nf; ++f) {
        auto r = acc.delta1.row(f);
        std::map<int, int> sum;
        for (int k = 0; k < r.size; ++k) {
            if (emap[r.cols[k]] < 0) continue;
            sum[emap[r.cols[k]]] += int(r.vals[k]) * esign[r.cols[k]];
        }
        std::vector<std::pair<int, int>> row;
        for (auto [e, v] : sum) {
            if (v == 0) continue;
            if (v < -1 || v > 1)
                throw GeometryError("congruence: a face traverses edge " + std::to_string(e + 1) +
                                    " twice the same way");
            row.push_back({e, v});
        }
        if (row.size() < 3) {
            ++dead_faces;
            continue;
        }
        if (row[0].second < 0)
            for (auto& [e, v] : row) v = -v;
        auto [it, fresh] = fdict.insert({row, int(frows.size())});
        (void)it;
        if (fresh)
            frows.push_back(std::move(row));
        else
            ++merged_faces;
    }
    if (dead_faces) out.log.push_back(std::to_string(dead_faces) + " degenerate faces dropped");
    if (merged_faces) out.log.push_back(std::to_string(merged_faces) + " congruent faces merged");

    // compact away edges with no surviving face, then unused vertices
    std::vector<char> eused(new_edges.size(), 0);
    for (const auto& row : frows)
        for (const auto& [e, v] : row) {
            (void)v;
            eused[e] = 1;
        }
    std::vector<int> ecomp(new_edges.size(), -1);
    int ne2 = 0;
    for (std::size_t e = 0; e < new_edges.size(); ++e)
        if (eused[e]) ecomp[e] = ne2++;
    if (int(new_edges.size()) != ne2)
        out.log.push_back(std::to_string(int(new_edges.size()) - ne2) + " faceless edges dropped");

    std::vector<char> vused(nv2, 0);
    for (std::size_t e = 0; e < new_edges.size(); ++e)
        if (eused[e]) vused[new_edges[e].first] = vused[new_edges[e].second] = 1;
    std::vector<int> vcomp(nv2, -1);
    int nv3 = 0;
    for (int v = 0; v < nv2; ++v)
        if (vused[v]) {
            vcomp[v] = nv3++;
            out.V.push_back(cl.representatives[v]);
        }

    std::vector<Triplet> t0;
    for (std::size_t e = 0; e < new_edges.size(); ++e) {
        if (!eused[e]) continue;
        t0.push_back({ecomp[e], vcomp[new_edges[e].first], -1});
        t0.push_back({ecomp[e], vcomp[new_edges[e].second], 1});
    }
    out.delta0 = SparseMatrix::from_triplets(ne2, nv3, t0);

    std::vector<Triplet> t1;
    for (std::size_t f = 0; f < frows.size(); ++f)
        for (const auto& [e, v] : frows[f]) t1.push_back({int(f), ecomp[e], v});
    out.delta1 = SparseMatrix::from_triplets(int(frows.size()), ne2, t1);

    if (!out.delta1.multiply(out.delta0).is_zero())
        throw GeometryError("congruence broke the boundary-of-boundary identity");
    return out;
}

std::vector<FaceInfo> face_geometry(const SparseMatrix& d1, const SparseMatrix& d2,
                                    std::span<const Vec3> V) {
    const int nf = d2.cols();
    std::vector<std::array<int, 2>> ev = edge_table(d1);
    SparseMatrix d2t = d2.transpose();
    std::vector<FaceInfo> out(nf);
    for (int f = 0; f < nf; ++f) {
        auto r = d2t.row(f);
        FaceInfo& fi = out[f];
        Vec3 nrm{};
        std::set<int> vs;
        for (int k = 0; k < r.size; ++k) {
            int e = r.cols[k];
            const Vec3& a = V[ev[e][0]];
            const Vec3& b = V[ev[e][1]];
            nrm = nrm + cross(a, b) * double(r.vals[k]);
            fi.box.expand(a);
            fi.box.expand(b);
            vs.insert(ev[e][0]);
            vs.insert(ev[e][1]);
        }
        nrm = nrm * 0.5;
        fi.area = norm(nrm);
        double scale = std::max(1.0, fi.box.diagonal());
        if (fi.area <= 1e-12 * scale * scale)
            throw GeometryError("face " + std::to_string(f + 1) + " has vanishing area");
        fi.normal = nrm / fi.area;

        Vec3 centroid{};
        for (int v : vs) centroid = centroid + V[v];
        fi.frame.origin = centroid / double(vs.size());
        fi.frame.n = fi.normal;
        int axis = 0;
        Vec3 an{std::abs(fi.normal.x), std::abs(fi.normal.y), std::abs(fi.normal.z)};
        if (an.y <= an.x && an.y <= an.z) axis = 1;
        if (an.z <= an.x && an.z <= an.y) axis = 2;
        Vec3 seed{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
        fi.frame.u = normalized(cross(fi.normal, seed));
        fi.frame.v = cross(fi.normal, fi.frame.u);

        // loops in the chart, outer (largest positive area) first
        std::map<int, int> vloc;
        std::vector<Vec2> pts2;
        std::vector<int> vglob;
        std::vector<std::array<int, 2>> lev;
        std::vector<std::pair<int, int>> lent;
        for (int k = 0; k < r.size; ++k) {
            int e = r.cols[k];
            std::array<int, 2> le{};
            for (int s = 0; s < 2; ++s) {
                int gv = ev[e][s];
                auto [it, fresh] = vloc.insert({gv, int(pts2.size())});
                if (fresh) {
                    pts2.push_back(fi.frame.project(V[gv]));
                    vglob.push_back(gv);
                }
                le[s] = it->second;
            }
            lev.push_back(le);
            lent.push_back({int(lev.size()) - 1, r.vals[k]});
        }
        std::vector<std::vector<int>> loops = cycle_loops(pts2, lev, lent);
        std::vector<double> larea(loops.size());
        int outer = 0;
        for (std::size_t i = 0; i < loops.size(); ++i) {
            std::vector<Vec2> poly;
            for (int v : loops[i]) poly.push_back(pts2[v]);
            larea[i] = signed_area(poly);
            if (larea[i] > larea[outer]) outer = int(i);
        }
        if (larea[outer] <= 0)
            throw GeometryError("face " + std::to_string(f + 1) + " has no positive outer loop");
        std::swap(loops[0], loops[outer]);

        std::vector<std::vector<Vec2>> tloops;
        std::vector<int> concat;
        for (const auto& lp : loops) {
            std::vector<Vec2> poly;
            for (int v : lp) {
                poly.push_back(pts2[v]);
                concat.push_back(vglob[v]);
            }
            tloops.push_back(std::move(poly));
        }
        std::vector<std::array<int, 3>> tris;
        try {
            tris = triangulate_face(tloops);
        } catch (const GeometryError& e) {
            throw GeometryError("face " + std::to_string(f + 1) + ": " + e.what());
        }
        fi.tris.reserve(tris.size());
        for (const auto& t : tris)
            fi.tris.push_back({concat[t[0]], concat[t[1]], concat[t[2]]});
        fi.loops.reserve(loops.size());
        for (const auto& lp : loops) {
            std::vector<int> gl;
            for (int v : lp) gl.push_back(vglob[v]);
            fi.loops.push_back(std::move(gl));
        }
    }
    return out;
}

SparseMatrix tgw3d(const SparseMatrix& d1, const SparseMatrix& d2, std::span<const Vec3> V,
                   std::span<const FaceInfo> faces) {
    const int ne = d2.rows();
    const int nf = d2.cols();
    if (int(faces.size()) != nf) throw ValidationError("tgw3d: face geometry size mismatch");
    std::vector<std::array<int, 2>> ev = edge_table(d1);
    for (int e = 0; e < ne; ++e)
        if (d2.row_nnz(e) < 2)
            throw GeometryError("arrangement is not watertight at edge " + std::to_string(e + 1));
    SparseMatrix d2t = d2.transpose();
    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    // the face across edge e from side (g, sg): sweep from g toward the cell
    // and stop at the first face met; its matching side keeps the cycle closed
    auto next_around = [&](int e, int g, int cg, int sg) -> std::pair<int, int> {
        Vec3 t = normalized(V[ev[e][1]] - V[ev[e][0]]);
        Vec3 x = normalized(cross(faces[g].normal, t) * double(cg));
        Vec3 y = cross(t, x);
        bool ccw = (-sg * cg) > 0;  // cell sits on the +y side of g
        auto r = d2.row(e);
        int best = -1, bestc = 0;
        double besta = std::numeric_limits<double>::infinity(), seconda = besta;
        for (int k = 0; k < r.size; ++k) {
            int h = r.cols[k];
            if (h == g) continue;
            Vec3 uh = cross(faces[h].normal, t) * double(r.vals[k]);
            double th = std::atan2(dot(uh, y), dot(uh, x));
            double a = std::fmod(ccw ? th : -th, kTwoPi);
            if (a <= 1e-12) a += kTwoPi;
            if (a < besta) {
                seconda = besta;
                besta = a;
                best = h;
                bestc = r.vals[k];
            } else if (a < seconda) {
                seconda = a;
            }
        }
        if (best < 0)
            throw GeometryError("tgw3d: no continuation around edge " + std::to_string(e + 1));
        if (seconda - besta < 1e-9)
            throw GeometryError("tgw3d: coincident faces at edge " + std::to_string(e + 1));
        return {best, -sg * cg * bestc};
    };

    std::vector<std::array<char, 2>> used(nf, {0, 0});
    std::vector<int> colsign(nf, 0);
    std::vector<Triplet> trips;
    int ncols = 0;
    for (int fseed = 0; fseed < nf; ++fseed) {
        for (int sseed : {1, -1}) {
            if (used[fseed][sseed > 0 ? 0 : 1]) continue;
            used[fseed][sseed > 0 ? 0 : 1] = 1;
            colsign[fseed] = sseed;
            std::vector<std::pair<int, int>> stack{{fseed, sseed}};
            std::vector<int> members{fseed};
            while (!stack.empty()) {
                auto [g, sg] = stack.back();
                stack.pop_back();
                auto gr = d2t.row(g);
                for (int k = 0; k < gr.size; ++k) {
                    int e = gr.cols[k];
                    auto [h, sh] = next_around(e, g, gr.vals[k], sg);
                    if (colsign[h] == 0) {
                        int si = sh > 0 ? 0 : 1;
                        if (used[h][si])
                            throw GeometryError("tgw3d: face side claimed by two cells at edge " +
                                                std::to_string(e + 1));
                        used[h][si] = 1;
                        colsign[h] = sh;
                        members.push_back(h);
                        stack.push_back({h, sh});
                    } else if (colsign[h] != sh) {
                        throw GeometryError("tgw3d: inconsistent pairing around edge " +
                                            std::to_string(e + 1));
                    }
                }
            }
            for (int f : members) {
                trips.push_back({f, ncols, colsign[f]});
                colsign[f] = 0;
            }
            ++ncols;
        }
    }
    SparseMatrix d3p = SparseMatrix::from_triplets(nf, ncols, trips);
    if (!d2.multiply(d3p).is_zero()) throw GeometryError("tgw3d: extracted cells are not cycles");
    return d3p;
}

double cycle_volume(const SparseMatrix& d3cols, int col, std::span<const FaceInfo> faces,
                    std::span<const Vec3> V) {
    double v6 = 0;
    for (const auto& [f, s] : column_entries(d3cols, col))
        for (const auto& t : faces[f].tris)
            v6 += s * dot(V[t[0]], cross(V[t[1]], V[t[2]]));
    return v6 / 6.0;
}

void cycles_to_boundaries(ChainComplex3& cx) {
    const int nf = cx.d3_plus.rows();
    const int nc = cx.d3_plus.cols();

    // shell components: faces joined whenever they share an edge
    std::vector<int> parent(nf);
    for (int f = 0; f < nf; ++f) parent[f] = f;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int e = 0; e < cx.d2.rows(); ++e) {
        auto r = cx.d2.row(e);
        for (int k = 1; k < r.size; ++k) parent[find(r.cols[k])] = find(r.cols[0]);
    }
    std::vector<int> comp_of_root(nf, -1);
    std::vector<int> fcomp(nf, -1);
    cx.n_components = 0;
    for (int f = 0; f < nf; ++f) {
        int r = find(f);
        if (comp_of_root[r] == -1) comp_of_root[r] = cx.n_components++;
        fcomp[f] = comp_of_root[r];
    }

    SparseMatrix d3t = cx.d3_plus.transpose();
    std::vector<std::vector<std::pair<int, int>>> colent(nc);
    cx.cell_volume.assign(nc, 0.0);
    cx.col_component.assign(nc, -1);
    double scene_scale = 1.0;
    for (const Vec3& p : cx.V) scene_scale = std::max(scene_scale, norm(p));
    for (int c = 0; c < nc; ++c) {
        auto r = d3t.row(c);
        double v6 = 0;
        for (int k = 0; k < r.size; ++k) {
            colent[c].push_back({r.cols[k], r.vals[k]});
            for (const auto& t : cx.faces[r.cols[k]].tris)
                v6 += r.vals[k] * dot(cx.V[t[0]], cross(cx.V[t[1]], cx.V[t[2]]));
        }
        cx.cell_volume[c] = v6 / 6.0;
        if (!colent[c].empty()) cx.col_component[c] = fcomp[colent[c][0].first];
    }

    cx.outer_cols.assign(cx.n_components, -1);
    for (int c = 0; c < nc; ++c) {
        if (cx.cell_volume[c] >= 0) continue;
        int k = cx.col_component[c];
        if (cx.outer_cols[k] != -1)
            throw GeometryError("cell extraction: shell component " + std::to_string(k + 1) +
                                " has two outward cycles");
        cx.outer_cols[k] = c;
    }
    for (int k = 0; k < cx.n_components; ++k)
        if (cx.outer_cols[k] == -1)
            throw GeometryError("cell extraction: shell component " + std::to_string(k + 1) +
                                " has no outward cycle");

    cx.bounded_cols.clear();
    for (int c = 0; c < nc; ++c)
        if (c != cx.outer_cols[cx.col_component[c]]) cx.bounded_cols.push_back(c);

    std::vector<Triplet> trips;
    const int nb = int(cx.bounded_cols.size());
    for (int bi = 0; bi < nb; ++bi)
        for (const auto& [f, s] : colent[cx.bounded_cols[bi]]) trips.push_back({f, bi, s});

    if (cx.n_components > 1) {
        // a shell floating inside another cell hollows it out: add the
        // shell's outward cycle to the smallest bounded cell containing it
        std::vector<Vec3> witness(cx.n_components);
        std::vector<char> haswit(cx.n_components, 0);
        for (int f = 0; f < nf; ++f) {
            int k = fcomp[f];
            if (haswit[k] || cx.faces[f].tris.empty()) continue;
            const auto& t = cx.faces[f].tris[0];
            witness[k] = (cx.V[t[0]] + cx.V[t[1]] + cx.V[t[2]]) / 3.0;
            haswit[k] = 1;
        }
        double len_tol = kPredicateTol * scene_scale;
        std::vector<std::pair<int, int>> folds;  // (host cell column, outward cycle column)
        for (int k = 0; k < cx.n_components; ++k) {
            int best = -1;
            double best_vol = std::numeric_limits<double>::infinity();
            for (int bi = 0; bi < nb; ++bi) {
                int c = cx.bounded_cols[bi];
                if (cx.col_component[c] == k) continue;
                if (std::abs(cx.cell_volume[c]) >= best_vol) continue;
                if (parity_inside(witness[k], colent[c], cx.faces, cx.V, len_tol)) {
                    best = bi;
                    best_vol = std::abs(cx.cell_volume[c]);
                }
            }
            if (best != -1) {
                for (const auto& [f, s] : colent[cx.outer_cols[k]]) trips.push_back({f, best, s});
                folds.push_back({cx.bounded_cols[best], cx.outer_cols[k]});
                cx.cavities_folded = true;
                cx.log.push_back("shell component " + std::to_string(k + 1) +
                                 " folded into a containing cell as a cavity");
            }
        }
        // the outward cycle's volume is negative, so this hollows the host
        for (auto [host, cycle] : folds) cx.cell_volume[host] += cx.cell_volume[cycle];
    }
    cx.d3 = SparseMatrix::from_triplets(nf, nb, trips);
    if (!cx.d2.multiply(cx.d3).is_zero())
        throw GeometryError("cell extraction: cavity folding broke the cycle property");
}

ChainComplex3 arrangement3d(const LarModel& input, double eps, int threads) {
    validate_model(input, "arrangement input");
    if (input.FV.empty()) throw ValidationError("arrangement input has no faces");
    const int nf_in = int(input.FV.size());

    std::vector<FacePre> pre(nf_in);
    parallel_for(nf_in, threads, [&](int f) { pre[f] = precompute_face(input, f); });

    std::vector<Box3> boxes(nf_in);
    for (int f = 0; f < nf_in; ++f) boxes[f] = pre[f].box.inflated(eps);
    IntervalTreeSet index = IntervalTreeSet::build(boxes);

    std::vector<LocalComplex> locals(nf_in);
    parallel_for(nf_in, threads, [&](int f) {
        std::vector<int> cand = index.query(boxes[f]);
        locals[f] = fragment_face(f, pre, cand, eps);
    });

    Accumulated acc = accumulate(locals);
    Congruent cc = chain_congruence(acc, eps);

    ChainComplex3 cx;
    cx.V = std::move(cc.V);
    cx.log = std::move(cc.log);
    cx.d1 = cc.delta0.transpose();
    cx.d2 = cc.delta1.transpose();
    cx.faces = face_geometry(cx.d1, cx.d2, cx.V);
    cx.d3_plus = tgw3d(cx.d1, cx.d2, cx.V, cx.faces);
    cycles_to_boundaries(cx);
    return cx;
}

}  // namespace chaincsg
