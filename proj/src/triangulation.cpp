#include "foliar/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "foliar/error.hpp"

namespace foliar {

int tet_edge_index(int a, int b) {
    static constexpr int kIndex[4][4] = {
        {-1, 0, 1, 2},
        {0, -1, 3, 4},
        {1, 3, -1, 5},
        {2, 4, 5, -1},
    };
    return kIndex[a][b];
}

std::array<int, 2> tet_edge_vertices(int index) {
    static constexpr std::array<std::array<int, 2>, 6> kEnds = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    return kEnds[index];
}

Triangulation::Triangulation(std::vector<std::array<Gluing, 4>> gluings,
                             std::optional<std::vector<PeripheralRows>> cusp_rows)
    : gluings_(std::move(gluings)), cusp_rows_(std::move(cusp_rows)) {
    const int n = size();
    if (n == 0) throw InvalidInput("triangulation has no tetrahedra");
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            if (g.tet < 0 || g.tet >= n || g.face < 0 || g.face > 3)
                throw InvalidInput("gluing of tet " + std::to_string(t) + " face " + std::to_string(f) +
                                   " points outside the triangulation");
            if (!g.perm.is_valid()) throw InvalidInput("invalid permutation");
            if (g.perm[f] != g.face)
                throw InvolutionError("tet " + std::to_string(t) + " face " + std::to_string(f) +
                                      ": permutation does not carry the face to face " + std::to_string(g.face));
            const Gluing& back = gluings_[g.tet][g.face];
            if (back.tet != t || back.face != f || !(back.perm == g.perm.inverse()))
                throw InvolutionError("gluing of tet " + std::to_string(t) + " face " + std::to_string(f) +
                                      " is not matched by the reverse gluing");
            if (g.tet == t && g.face == f) {
                bool fixes_face = true;
                for (int v = 0; v < 4; ++v)
                    if (v != f && g.perm[v] != v) fixes_face = false;
                if (fixes_face)
                    throw SelfGluingError("tet " + std::to_string(t) + " face " + std::to_string(f) +
                                          " glued to itself by the identity");
            }
        }
    }
    build_faces();
    build_edges();
    build_cusps();
    check_orientability();

    if (cusp_rows_) {
        if (static_cast<int>(cusp_rows_->size()) != cusp_count())
            throw InvalidInput("cusp rows given for " + std::to_string(cusp_rows_->size()) +
                               " cusps but the triangulation has " + std::to_string(cusp_count()));
        for (const auto& r : *cusp_rows_)
            if (static_cast<int>(r.meridian.size()) != 3 * n || static_cast<int>(r.longitude.size()) != 3 * n)
                throw InvalidInput("cusp rows must have 3 * tet_count entries");
    }
}

const std::vector<PeripheralRows>& Triangulation::cusp_rows() const {
    if (!cusp_rows_) throw MissingCuspRows("triangulation carries no cusp rows");
    return *cusp_rows_;
}

bool Triangulation::is_face_rep(int tet, int face) const {
    const auto& r = face_reps_[face_class_[tet][face]];
    return r[0] == tet && r[1] == face;
}

void Triangulation::build_faces() {
    const int n = size();
    face_class_.assign(n, {-1, -1, -1, -1});
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            if (face_class_[t][f] >= 0) continue;
            const int id = static_cast<int>(face_reps_.size());
            face_reps_.push_back({t, f});
            face_class_[t][f] = id;
            const Gluing& g = gluings_[t][f];
            face_class_[g.tet][g.face] = id;
        }
    }
}

void Triangulation::build_edges() {
    const int n = size();
    edge_of_.assign(n, {-1, -1, -1, -1, -1, -1});
    for (int t = 0; t < n; ++t) {
        for (int e = 0; e < 6; ++e) {
            if (edge_of_[t][e] >= 0) continue;
            const auto ends = tet_edge_vertices(e);
            std::array<int, 4> v{ends[0], ends[1], 0, 0};
            int k = 2;
            for (int x = 0; x < 4; ++x)
                if (x != ends[0] && x != ends[1]) v[k++] = x;

            const int id = static_cast<int>(edges_.size());
            EdgeClass cls;
            EdgeSlot slot{t, v};
            while (true) {
                const int idx = tet_edge_index(slot.v[0], slot.v[1]);
                if (edge_of_[slot.tet][idx] >= 0) {
                    const EdgeSlot& start = cls.slots.front();
                    if (edge_of_[slot.tet][idx] != id || slot.tet != start.tet || slot.v != start.v)
                        throw NonManifoldGluing("edge class starting at tet " + std::to_string(t) +
                                                " closes up inconsistently");
                    break;
                }
                edge_of_[slot.tet][idx] = id;
                cls.slots.push_back(slot);
                const Gluing& g = gluings_[slot.tet][slot.exit_face()];
                const Perm4& p = g.perm;
                slot = EdgeSlot{g.tet, {p[slot.v[0]], p[slot.v[1]], p[slot.v[3]], p[slot.v[2]]}};
            }
            edges_.push_back(std::move(cls));
        }
    }
}

void Triangulation::build_cusps() {
    const int n = size();
    std::vector<int> parent(4 * n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                int a = find(4 * t + v), b = find(4 * g.tet + g.perm[v]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }

    cusp_of_.assign(n, {-1, -1, -1, -1});
    std::vector<int> root_to_cusp(4 * n, -1);
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            int r = find(4 * t + v);
            if (root_to_cusp[r] < 0) {
                root_to_cusp[r] = static_cast<int>(links_.size());
                links_.push_back(CuspLink{static_cast<int>(links_.size())});
            }
            cusp_of_[t][v] = root_to_cusp[r];
            links_[cusp_of_[t][v]].triangles++;
        }

    // chi = V - E + F on each link; F triangles, E = 3F/2, V = edge ends.
    std::vector<int> ends(links_.size(), 0);
    for (const auto& e : edges_) {
        const EdgeSlot& s = e.slots.front();
        ends[cusp_of_[s.tet][s.v[0]]]++;
        ends[cusp_of_[s.tet][s.v[1]]]++;
    }
    for (auto& link : links_) {
        int faces = link.triangles;
        int edges = 3 * faces / 2;
        link.euler_characteristic = ends[link.cusp] - edges + faces;
    }

    // Link orientability: 2-colour the link triangles (tet, vertex).
    std::vector<int> side(4 * n, 0);
    for (int start = 0; start < 4 * n; ++start) {
        if (side[start] != 0) continue;
        side[start] = 1;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            int cur = q.front();
            q.pop();
            int t = cur / 4, v = cur % 4;
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const Gluing& g = gluings_[t][f];
                int nxt = 4 * g.tet + g.perm[v];
                int want = -g.perm.sign() * side[cur];
                if (side[nxt] == 0) {
                    side[nxt] = want;
                    q.push(nxt);
                } else if (side[nxt] != want) {
                    links_[cusp_of_[t][v]].orientable = false;
                }
            }
        }
    }
}

void Triangulation::check_orientability() {
    const int n = size();
    std::vector<int> sign(n, 0);
    sign[0] = 1;
    std::queue<int> q;
    q.push(0);
    int seen = 1;
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            int want = -g.perm.sign() * sign[t];
            if (sign[g.tet] == 0) {
                sign[g.tet] = want;
                ++seen;
                q.push(g.tet);
            } else if (sign[g.tet] != want) {
                orientable_ = false;
            }
        }
    }
    connected_ = seen == n;
}

bool Triangulation::is_oriented() const {
    for (const auto& row : gluings_)
        for (const auto& g : row)
            if (g.perm.sign() != -1) return false;
    return true;
}

bool Triangulation::is_valid_manifold() const { return flag_reason().empty(); }

std::string Triangulation::flag_reason() const {
    if (!connected_) return "triangulation is disconnected";
    if (!orientable_) return "triangulation is non-orientable";
    for (const auto& l : links_)
        if (!l.is_torus())
            return "cusp " + std::to_string(l.cusp) + " link is not a torus (euler characteristic " +
                   std::to_string(l.euler_characteristic) + (l.orientable ? "" : ", non-orientable") + ")";
    return {};
}

Triangulation Triangulation::oriented() const {
    if (is_oriented()) return *this;
    if (!orientable_ || !connected_) throw InvalidInput("cannot orient: " + flag_reason());
    const int n = size();
    std::vector<int> sign(n, 0);
    sign[0] = 1;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            if (sign[g.tet] == 0) {
                sign[g.tet] = -g.perm.sign() * sign[t];
                q.push(g.tet);
            }
        }
    }
    Isomorphism iso;
    iso.tet_image.resize(n);
    std::iota(iso.tet_image.begin(), iso.tet_image.end(), 0);
    for (int t = 0; t < n; ++t) iso.vertex_map.push_back(sign[t] > 0 ? Perm4() : Perm4(0, 1, 3, 2));
    if (cusp_rows_ && std::any_of(sign.begin(), sign.end(), [](int s) { return s < 0; }))
        throw InvalidInput("cannot orient a triangulation carrying cusp rows without reversing a tetrahedron");
    return relabel(*this, iso);
}

Triangulation relabel(const Triangulation& tri, const Isomorphism& iso) {
    const int n = tri.size();
    std::vector<std::array<Gluing, 4>> out(n);
    for (int t = 0; t < n; ++t) {
        const Perm4& s = iso.vertex_map[t];
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            const Perm4& s2 = iso.vertex_map[g.tet];
            out[iso.tet_image[t]][s[f]] = Gluing{iso.tet_image[g.tet], s2[g.face], s2 * g.perm * s.inverse()};
        }
    }
    bool all_even = std::all_of(iso.vertex_map.begin(), iso.vertex_map.end(), [](const Perm4& p) { return p.sign() == 1; });
    if (!tri.has_cusp_rows() || !all_even) return Triangulation(std::move(out));

    // Even relabelings keep the orientation, so the parameter on edge {a,b}
    // moves to edge {s(a), s(b)} unchanged.
    auto move_row = [&](const std::vector<int>& row) {
        std::vector<int> r(3 * n, 0);
        for (int t = 0; t < n; ++t) {
            const Perm4& s = iso.vertex_map[t];
            for (int k = 0; k < 3; ++k) {
                auto ends = tet_edge_vertices(k);  // 01, 02, 03 represent the three classes
                int dest = edge_pair_class(s[ends[0]], s[ends[1]]);
                r[3 * iso.tet_image[t] + dest] = row[3 * t + k];
            }
        }
        return r;
    };
    std::vector<PeripheralRows> rows;
    for (const auto& pr : tri.cusp_rows()) rows.push_back({move_row(pr.meridian), move_row(pr.longitude)});
    return Triangulation(std::move(out), std::move(rows));
}

bool is_isomorphism(const Triangulation& a, const Triangulation& b, const Isomorphism& iso) {
    const int n = a.size();
    if (b.size() != n || static_cast<int>(iso.tet_image.size()) != n || static_cast<int>(iso.vertex_map.size()) != n)
        return false;
    std::vector<bool> hit(n, false);
    for (int t = 0; t < n; ++t) {
        int img = iso.tet_image[t];
        if (img < 0 || img >= n || hit[img] || !iso.vertex_map[t].is_valid()) return false;
        hit[img] = true;
    }
    for (int t = 0; t < n; ++t) {
        const Perm4& s = iso.vertex_map[t];
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = a.gluing(t, f);
            const Perm4& s2 = iso.vertex_map[g.tet];
            const Gluing& h = b.gluing(iso.tet_image[t], s[f]);
            if (h.tet != iso.tet_image[g.tet] || h.face != s2[g.face] || !(h.perm == s2 * g.perm * s.inverse()))
                return false;
        }
    }
    return true;
}

std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b) {
    const int n = a.size();
    if (b.size() != n || !a.is_connected() || !b.is_connected()) return std::nullopt;
    for (int base = 0; base < n; ++base) {
        for (const Perm4& start : Perm4::all()) {
            Isomorphism iso;
            iso.tet_image.assign(n, -1);
            iso.vertex_map.assign(n, Perm4());
            std::vector<int> pre(n, -1);
            iso.tet_image[0] = base;
            iso.vertex_map[0] = start;
            pre[base] = 0;
            std::queue<int> q;
            q.push(0);
            bool ok = true;
            while (ok && !q.empty()) {
                int t = q.front();
                q.pop();
                const Perm4& s = iso.vertex_map[t];
                for (int f = 0; f < 4 && ok; ++f) {
                    const Gluing& g = a.gluing(t, f);
                    const Gluing& h = b.gluing(iso.tet_image[t], s[f]);
                    // s2 must satisfy h.perm = s2 * g.perm * s^-1
                    Perm4 s2 = h.perm * s * g.perm.inverse();
                    if (iso.tet_image[g.tet] < 0) {
                        if (pre[h.tet] >= 0) {
                            ok = false;
                            break;
                        }
                        iso.tet_image[g.tet] = h.tet;
                        iso.vertex_map[g.tet] = s2;
                        pre[h.tet] = g.tet;
                        q.push(g.tet);
                    } else if (iso.tet_image[g.tet] != h.tet || !(iso.vertex_map[g.tet] == s2)) {
                        ok = false;
                    }
                }
            }
            if (ok && is_isomorphism(a, b, iso)) return iso;
        }
    }
    return std::nullopt;
}

}  // namespace foliar
