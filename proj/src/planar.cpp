#include "chaincsg/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "chaincsg/errors.hpp"
#include "chaincsg/interval_tree.hpp"
#include "chaincsg/kdtree.hpp"

namespace chaincsg {

namespace {

struct Seg {
    Vec2 a, d;
    double len = 0;
};

// Cut parameters contributed by one candidate pair; each side records where
// the other segment crosses it. Near-endpoint hits are accepted within the
// vertex resolution so T-junctions on perturbed data still connect.
void pairwise_cuts(const Seg& s, const Seg& t, std::vector<double>& cs, std::vector<double>& ct,
                   double eps) {
    const Vec2 tb = t.a + t.d;
    const double denom = cross(s.d, t.d);
    if (std::abs(denom) <= kPredicateTol * s.len * t.len) {
        // parallel; collinear within eps splits both at projected endpoints
        double off_a = std::abs(cross(s.d, t.a - s.a)) / s.len;
        double off_b = std::abs(cross(s.d, tb - s.a)) / s.len;
        if (std::max(off_a, off_b) > eps) return;
        auto proj = [](const Seg& base, const Vec2& p) {
            return dot(p - base.a, base.d) / (base.len * base.len);
        };
        for (const Vec2& p : {t.a, tb}) {
            double v = proj(s, p);
            if (v > 0.0 && v < 1.0) cs.push_back(v);
        }
        for (const Vec2& p : {s.a, s.a + s.d}) {
            double v = proj(t, p);
            if (v > 0.0 && v < 1.0) ct.push_back(v);
        }
        return;
    }
    const Vec2 w = t.a - s.a;
    double u = cross(w, t.d) / denom;  // along s
    double v = cross(w, s.d) / denom;  // along t
    const double su = std::max(1e-9, eps / s.len);
    const double sv = std::max(1e-9, eps / t.len);
    if (u < -su || u > 1.0 + su || v < -sv || v > 1.0 + sv) return;
    cs.push_back(std::clamp(u, 0.0, 1.0));
    ct.push_back(std::clamp(v, 0.0, 1.0));
}

}  // namespace

PlanarGraph intersect_segments(std::span<const std::array<Vec2, 2>> segments, double eps) {
    std::vector<Seg> segs;
    segs.reserve(segments.size());
    for (const auto& s : segments) {
        Vec2 d = s[1] - s[0];
        double len = norm(d);
        if (len > eps) segs.push_back({s[0], d, len});
    }
    const int n = static_cast<int>(segs.size());

    PlanarGraph g;
    if (n == 0) return g;

    std::vector<Box2> boxes(n);
    for (int i = 0; i < n; ++i) {
        boxes[i].expand(segs[i].a);
        boxes[i].expand(segs[i].a + segs[i].d);
        boxes[i].lo = boxes[i].lo - Vec2{eps, eps};
        boxes[i].hi = boxes[i].hi + Vec2{eps, eps};
    }
    IntervalTreeSet index = IntervalTreeSet::build(boxes);

    std::vector<std::vector<double>> cuts(n);
    for (int i = 0; i < n; ++i) {
        for (int j : index.query(boxes[i])) {
            if (j <= i) continue;
            pairwise_cuts(segs[i], segs[j], cuts[i], cuts[j], eps);
        }
    }

    // sub-segment endpoints; identification happens through clustering below
    std::vector<Vec3> pts;
    std::vector<std::array<int, 2>> pieces;
    for (int i = 0; i < n; ++i) {
        const double ptol = eps / segs[i].len;
        std::vector<double>& t = cuts[i];
        t.push_back(0.0);
        t.push_back(1.0);
        for (double& v : t) {
            if (v < ptol) v = 0.0;
            if (v > 1.0 - ptol) v = 1.0;
        }
        std::sort(t.begin(), t.end());
        std::vector<double> u;
        for (double v : t)
            if (u.empty() || v - u.back() > ptol) u.push_back(v);
        for (std::size_t k = 0; k + 1 < u.size(); ++k) {
            Vec2 p = segs[i].a + segs[i].d * u[k];
            Vec2 q = segs[i].a + segs[i].d * u[k + 1];
            int ip = static_cast<int>(pts.size());
            pts.push_back({p.x, p.y, 0.0});
            pts.push_back({q.x, q.y, 0.0});
            pieces.push_back({ip, ip + 1});
        }
    }

    ClusterResult cl = kd_nearest_within(pts, eps);
    g.V.reserve(cl.representatives.size());
    for (const Vec3& r : cl.representatives) g.V.push_back({r.x, r.y});

    std::set<std::array<int, 2>> seen;
    for (const auto& pc : pieces) {
        int a = cl.point_cluster[pc[0]];
        int b = cl.point_cluster[pc[1]];
        if (a == b) continue;
        std::array<int, 2> e{std::min(a, b), std::max(a, b)};
        if (seen.insert(e).second) g.EV.push_back(e);
    }
    return g;
}

PlanarGraph regularize(const PlanarGraph& g) {
    const int nv = static_cast<int>(g.V.size());
    const int ne = static_cast<int>(g.EV.size());
    std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbor, edge)
    for (int e = 0; e < ne; ++e) {
        adj[g.EV[e][0]].push_back({g.EV[e][1], e});
        adj[g.EV[e][1]].push_back({g.EV[e][0], e});
    }

    // iterative lowlink pass marking bridges
    std::vector<int> disc(nv, -1), low(nv, 0);
    std::vector<char> is_bridge(ne, 0);
    int timer = 0;
    struct Frame {
        int v;
        int parent_edge;
        std::size_t it;
    };
    std::vector<Frame> stack;
    for (int s = 0; s < nv; ++s) {
        if (disc[s] != -1 || adj[s].empty()) continue;
        disc[s] = low[s] = timer++;
        stack.push_back({s, -1, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.it < adj[f.v].size()) {
                auto [w, e] = adj[f.v][f.it++];
                if (e == f.parent_edge) continue;
                if (disc[w] == -1) {
                    disc[w] = low[w] = timer++;
                    stack.push_back({w, e, 0});
                } else {
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
            } else {
                int v = f.v;
                int pe = f.parent_edge;
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().v;
                    low[p] = std::min(low[p], low[v]);
                    if (low[v] > disc[p]) is_bridge[pe] = 1;
                }
            }
        }
    }

    std::vector<char> vkeep(nv, 0);
    for (int e = 0; e < ne; ++e) {
        if (is_bridge[e]) continue;
        if (g.EV[e][0] == g.EV[e][1]) continue;  // drop self loops outright
        vkeep[g.EV[e][0]] = vkeep[g.EV[e][1]] = 1;
    }
    PlanarGraph out;
    std::vector<int> vmap(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (!vkeep[v]) continue;
        vmap[v] = static_cast<int>(out.V.size());
        out.V.push_back(g.V[v]);
    }
    for (int e = 0; e < ne; ++e) {
        if (is_bridge[e] || g.EV[e][0] == g.EV[e][1]) continue;
        out.EV.push_back({vmap[g.EV[e][0]], vmap[g.EV[e][1]]});
    }
    return out;
}

SparseMatrix tgw2d(const SparseMatrix& d1, std::span<const Vec2> V) {
    const int nv = d1.rows();
    const int ne = d1.cols();
    if (nv != static_cast<int>(V.size()))
        throw ValidationError("tgw2d: vertex count does not match boundary rows");

    SparseMatrix d1t = d1.transpose();
    std::vector<std::array<int, 2>> ev(ne);  // tail, head
    for (int e = 0; e < ne; ++e) {
        auto r = d1t.row(e);
        int tail = -1, head = -1;
        for (int k = 0; k < r.size; ++k) {
            if (r.vals[k] == -1) tail = r.cols[k];
            if (r.vals[k] == 1) head = r.cols[k];
        }
        if (r.size != 2 || tail < 0 || head < 0)
            throw ValidationError("tgw2d: edge " + std::to_string(e + 1) +
                                  " is not a (-1,+1) column");
        ev[e] = {tail, head};
    }

    // directed edge ids: 2e runs tail->head, 2e+1 the reverse
    auto de_src = [&](int de) { return (de & 1) ? ev[de >> 1][1] : ev[de >> 1][0]; };
    auto de_dst = [&](int de) { return (de & 1) ? ev[de >> 1][0] : ev[de >> 1][1]; };

    std::vector<double> ang(2 * ne);
    for (int de = 0; de < 2 * ne; ++de) {
        Vec2 d = V[de_dst(de)] - V[de_src(de)];
        ang[de] = std::atan2(d.y, d.x);
    }
    std::vector<std::vector<int>> fan(nv);
    for (int de = 0; de < 2 * ne; ++de) fan[de_src(de)].push_back(de);
    std::vector<int> pos(2 * ne, 0);
    for (int v = 0; v < nv; ++v) {
        std::sort(fan[v].begin(), fan[v].end(), [&](int a, int b) {
            if (ang[a] != ang[b]) return ang[a] < ang[b];
            return a < b;
        });
        for (int k = 0; k < static_cast<int>(fan[v].size()); ++k) pos[fan[v][k]] = k;
    }
    // face to the left: after arriving along de, leave by the clockwise-next
    // outgoing edge relative to the reversed direction
    auto successor = [&](int de) {
        const std::vector<int>& f = fan[de_dst(de)];
        int k = pos[de ^ 1];
        return f[(k + f.size() - 1) % f.size()];
    };

    std::vector<char> used(2 * ne, 0);
    std::vector<int> edge_stamp(ne, -1);
    std::vector<Triplet> trips;
    int ncols = 0;
    for (int seed = 0; seed < 2 * ne; ++seed) {
        if (used[seed]) continue;
        int de = seed;
        do {
            used[de] = 1;
            int e = de >> 1;
            if (edge_stamp[e] == ncols)
                throw GeometryError("tgw2d: dangling edge " + std::to_string(e + 1) +
                                    " lies on no cycle");
            edge_stamp[e] = ncols;
            trips.push_back({e, ncols, (de & 1) ? -1 : 1});
            de = successor(de);
        } while (!used[de]);
        if (de != seed) throw GeometryError("tgw2d: traversal re-entered mid-orbit");
        ++ncols;
    }
    return SparseMatrix::from_triplets(ne, ncols, trips);
}

double cycle_area(std::span<const Vec2> V, std::span<const std::array<int, 2>> ev,
                  std::span<const std::pair<int, int>> entries) {
    double a2 = 0.0;
    for (const auto& [e, s] : entries) a2 += s * cross(V[ev[e][0]], V[ev[e][1]]);
    return 0.5 * a2;
}

PointSide point_vs_cycle(const Vec2& p, std::span<const Vec2> V,
                         std::span<const std::array<int, 2>> ev,
                         std::span<const std::pair<int, int>> entries, double tol) {
    std::vector<std::array<Vec2, 2>> segs;
    segs.reserve(entries.size());
    for (const auto& [e, s] : entries) segs.push_back({V[ev[e][0]], V[ev[e][1]]});
    return point_in_loops(p, segs, tol);
}

std::vector<std::vector<int>> cycle_loops(std::span<const Vec2> pts,
                                          std::span<const std::array<int, 2>> ev,
                                          std::span<const std::pair<int, int>> entries) {
    struct De {
        int src, dst;
    };
    std::vector<De> des;
    des.reserve(entries.size());
    for (const auto& [e, s] : entries) {
        if (s != 1 && s != -1) throw ValidationError("cycle coefficients must be +1 or -1");
        if (s > 0)
            des.push_back({ev[e][0], ev[e][1]});
        else
            des.push_back({ev[e][1], ev[e][0]});
    }
    const int m = static_cast<int>(des.size());
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return des[a].src < des[b].src; });

    auto angle = [&](int i) {
        Vec2 d = pts[des[i].dst] - pts[des[i].src];
        return std::atan2(d.y, d.x);
    };
    auto fan_begin = [&](int v) {
        return std::lower_bound(order.begin(), order.end(), v,
                                [&](int i, int key) { return des[i].src < key; });
    };

    std::vector<char> used(m, 0);
    std::vector<std::vector<int>> loops;
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    for (int start = 0; start < m; ++start) {
        if (used[start]) continue;
        std::vector<int> loop;
        int cur = start;
        while (true) {
            used[cur] = 1;
            loop.push_back(des[cur].src);
            int v = des[cur].dst;
            // clockwise-nearest unused outgoing edge from the reversed
            // direction; a pinched loop keeps walking through its own start
            // vertex until nothing is left to leave by
            double back = std::atan2(pts[des[cur].src].y - pts[v].y,
                                     pts[des[cur].src].x - pts[v].x);
            int next = -1;
            double best = std::numeric_limits<double>::infinity();
            for (auto it = fan_begin(v); it != order.end() && des[*it].src == v; ++it) {
                int cand = *it;
                if (used[cand]) continue;
                double d = std::fmod(back - angle(cand), kTwoPi);
                if (d <= 0.0) d += kTwoPi;
                if (d < best) {
                    best = d;
                    next = cand;
                }
            }
            if (next == -1) {
                if (v != des[start].src)
                    throw GeometryError("cycle is not closed at vertex " + std::to_string(v + 1));
                break;
            }
            cur = next;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::pair<int, int>> column_entries(const SparseMatrix& m, int col) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        const int* b = row.cols;
        const int* e = row.cols + row.size;
        const int* it = std::lower_bound(b, e, col);
        if (it != e && *it == col) out.push_back({r, row.vals[it - b]});
    }
    return out;
}

ChainComplex2 planar_arrangement(std::span<const std::array<Vec2, 2>> segments, double eps) {
    return planar_arrangement(intersect_segments(segments, eps));
}

ChainComplex2 planar_arrangement(PlanarGraph graph) {
    ChainComplex2 cx;
    PlanarGraph g = regularize(graph);
    cx.V = std::move(g.V);
    cx.EV = std::move(g.EV);
    const int nv = static_cast<int>(cx.V.size());
    const int ne = static_cast<int>(cx.EV.size());
    cx.d1 = boundary1(cx.EV, nv);
    cx.d2_plus = tgw2d(cx.d1, cx.V);
    const int nc2 = cx.d2_plus.cols();

    // connected components over the regularized graph
    std::vector<int> parent(nv);
    for (int v = 0; v < nv; ++v) parent[v] = v;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& e : cx.EV) parent[find(e[0])] = find(e[1]);
    std::vector<int> comp_of_root(nv, -1);
    cx.vertex_component.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        int r = find(v);
        if (comp_of_root[r] == -1) comp_of_root[r] = cx.n_components++;
        cx.vertex_component[v] = comp_of_root[r];
    }

    SparseMatrix d2pt = cx.d2_plus.transpose();
    std::vector<std::vector<std::pair<int, int>>> colent(nc2);
    std::vector<double> area(nc2, 0.0);
    cx.col_component.assign(nc2, -1);
    for (int c = 0; c < nc2; ++c) {
        auto r = d2pt.row(c);
        for (int k = 0; k < r.size; ++k) colent[c].push_back({r.cols[k], r.vals[k]});
        area[c] = cycle_area(cx.V, cx.EV, colent[c]);
        if (!colent[c].empty()) cx.col_component[c] = cx.vertex_component[cx.EV[colent[c][0].first][0]];
    }

    cx.outer_cols.assign(cx.n_components, -1);
    for (int c = 0; c < nc2; ++c) {
        if (area[c] >= 0.0) continue;
        int k = cx.col_component[c];
        if (cx.outer_cols[k] != -1)
            throw GeometryError("planar arrangement: component " + std::to_string(k + 1) +
                                " has two outward cycles");
        cx.outer_cols[k] = c;
    }
    for (int k = 0; k < cx.n_components; ++k)
        if (cx.outer_cols[k] == -1)
            throw GeometryError("planar arrangement: component " + std::to_string(k + 1) +
                                " has no outward cycle");

    for (int c = 0; c < nc2; ++c)
        if (c != cx.outer_cols[cx.col_component[c]]) cx.bounded_cols.push_back(c);

    cx.component_counts.assign(cx.n_components, {});
    for (int v = 0; v < nv; ++v) cx.component_counts[cx.vertex_component[v]].verts++;
    for (const auto& e : cx.EV) cx.component_counts[cx.vertex_component[e[0]]].edges++;
    for (int c = 0; c < nc2; ++c) cx.component_counts[cx.col_component[c]].faces++;

    // d2 starts as the bounded columns; islands then fold their outward cycle
    // into the smallest bounded cell of another component containing them
    std::vector<Triplet> trips;
    const int nb = static_cast<int>(cx.bounded_cols.size());
    for (int bi = 0; bi < nb; ++bi)
        for (const auto& [e, s] : colent[cx.bounded_cols[bi]]) trips.push_back({e, bi, s});

    if (cx.n_components > 1) {
        std::vector<Vec2> witness(cx.n_components);
        std::vector<char> haswit(cx.n_components, 0);
        for (int v = 0; v < nv; ++v) {
            int k = cx.vertex_component[v];
            if (!haswit[k]) {
                witness[k] = cx.V[v];
                haswit[k] = 1;
            }
        }
        for (int k = 0; k < cx.n_components; ++k) {
            int best = -1;
            double best_area = std::numeric_limits<double>::infinity();
            for (int bi = 0; bi < nb; ++bi) {
                int c = cx.bounded_cols[bi];
                if (cx.col_component[c] == k) continue;
                if (std::abs(area[c]) >= best_area) continue;
                if (point_vs_cycle(witness[k], cx.V, cx.EV, colent[c]) == PointSide::Inside) {
                    best = bi;
                    best_area = std::abs(area[c]);
                }
            }
            if (best != -1)
                for (const auto& [e, s] : colent[cx.outer_cols[k]]) trips.push_back({e, best, s});
        }
    }
    cx.d2 = SparseMatrix::from_triplets(ne, nb, trips);
    return cx;
}

}  // namespace chaincsg
