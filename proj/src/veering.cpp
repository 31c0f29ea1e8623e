#include "foliar/veering.hpp"

#include <queue>
#include <sstream>

#include "foliar/error.hpp"
#include "foliar/parity_union_find.hpp"

namespace foliar {

// ---------------------------------------------------------------------------
// Serialization helpers

Coorientation Coorientation::flipped() const {
    Coorientation c = *this;
    for (auto& b : c.bits) b ^= 1;
    return c;
}

std::string Coorientation::to_string() const {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

Coorientation Coorientation::from_string(const std::string& s) {
    Coorientation c;
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw InvalidInput("coorientation must be a 0/1 string");
        c.bits.push_back(ch == '1');
    }
    return c;
}

EdgeColoring EdgeColoring::swapped() const {
    EdgeColoring c = *this;
    for (auto& col : c.colors) col = col == Color::Red ? Color::Blue : Color::Red;
    return c;
}

std::string EdgeColoring::to_string() const {
    std::string s;
    for (auto c : colors) s += c == Color::Red ? 'r' : 'b';
    return s;
}

EdgeColoring EdgeColoring::from_string(const std::string& s) {
    EdgeColoring c;
    for (char ch : s) {
        if (ch != 'r' && ch != 'b') throw InvalidInput("colouring must be an r/b string");
        c.colors.push_back(ch == 'r' ? Color::Red : Color::Blue);
    }
    return c;
}

char to_char(Chirality c) { return c == Chirality::R ? 'R' : 'L'; }

Chirality chirality_from_char(char c) {
    if (c == 'R') return Chirality::R;
    if (c == 'L') return Chirality::L;
    throw InvalidInput(std::string("chirality must be R or L, got '") + c + "'");
}

std::string VeeringStructure::to_string() const {
    return coorientation.to_string() + " " + coloring.to_string() + " " + to_char(chirality);
}

VeeringStructure VeeringStructure::from_string(const std::string& s) {
    std::istringstream in(s);
    std::string a, b, c;
    if (!(in >> a >> b >> c) || c.size() != 1) throw InvalidInput("expected '<bits> <colours> <R|L>'");
    return {Coorientation::from_string(a), EdgeColoring::from_string(b), chirality_from_char(c[0])};
}

std::string VeeringReport::to_string() const {
    if (ok) return "pass";
    return "fail: " + condition + " condition at " + location;
}

// ---------------------------------------------------------------------------

bool points_out(const Triangulation& tri, const Coorientation& co, int tet, int face) {
    const int bit = co.bits[tri.face_class(tet, face)];
    return tri.is_face_rep(tet, face) ? bit == 0 : bit == 1;
}

std::vector<int> tet_orientations(const Triangulation& tri) {
    if (!tri.is_orientable() || !tri.is_connected())
        throw InvalidInput("orientations need a connected orientable triangulation");
    std::vector<int> sign(tri.size(), 0);
    sign[0] = 1;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            if (sign[g.tet] == 0) {
                sign[g.tet] = -g.perm.sign() * sign[t];
                q.push(g.tet);
            }
        }
    }
    return sign;
}

namespace {

// Backtracking search state for transverse taut coorientations.
class TautSearch {
public:
    explicit TautSearch(const Triangulation& tri) : tri_(tri) {
        const int n = tri.size();
        const int nf = tri.face_class_count();
        sides_.resize(nf);
        for (int t = 0; t < n; ++t)
            for (int f = 0; f < 4; ++f) {
                auto& s = sides_[tri.face_class(t, f)];
                if (std::find(s.begin(), s.end(), std::array<int, 2>{t, f}) == s.end()) s.push_back({t, f});
            }
        const auto& edges = tri.edge_classes();
        face_slots_.assign(n, {});
        for (int e = 0; e < static_cast<int>(edges.size()); ++e)
            for (const auto& slot : edges[e].slots) {
                int id = static_cast<int>(slots_.size());
                slots_.push_back({e, slot.tet, slot.entry_face(), slot.exit_face()});
                face_slots_[slot.tet][slot.entry_face()].push_back(id);
                if (slot.exit_face() != slot.entry_face()) face_slots_[slot.tet][slot.exit_face()].push_back(id);
            }
        State s;
        s.bits.assign(nf, -1);
        s.out.assign(n, 0);
        s.in.assign(n, 0);
        s.free.assign(n, 4);
        s.pi.assign(edges.size(), 0);
        s.open.assign(edges.size(), 0);
        for (const auto& sl : slots_) s.open[sl.edge]++;
        s.slot_done.assign(slots_.size(), 0);
        root_ = std::move(s);
    }

    std::vector<Coorientation> run() {
        std::vector<Coorientation> out;
        dfs(root_, out);
        return out;
    }

private:
    struct Slot {
        int edge, tet, entry, exit;
    };
    struct State {
        std::vector<int> bits;
        std::vector<int> out, in, free;
        std::vector<int> pi, open;
        std::vector<std::uint8_t> slot_done;
    };

    int out_dir(const State& s, int t, int f) const {
        int b = s.bits[tri_.face_class(t, f)];
        if (b < 0) return -1;
        return tri_.is_face_rep(t, f) ? (b == 0) : (b == 1);
    }

    bool assign(State& s, int cls, int bit) const {
        std::queue<std::pair<int, int>> pending;
        pending.push({cls, bit});
        while (!pending.empty()) {
            auto [c, b] = pending.front();
            pending.pop();
            if (s.bits[c] >= 0) {
                if (s.bits[c] != b) return false;
                continue;
            }
            s.bits[c] = b;
            for (const auto& side : sides_[c]) {
                const int t = side[0], f = side[1];
                const bool o = out_dir(s, t, f);
                (o ? s.out[t] : s.in[t])++;
                s.free[t]--;
                if (s.out[t] > 2 || s.in[t] > 2) return false;
                // forced faces of this tetrahedron
                if (s.free[t] > 0 && (s.out[t] == 2 || s.in[t] == 2)) {
                    const bool want_out = s.in[t] == 2;
                    for (int g = 0; g < 4; ++g) {
                        int gc = tri_.face_class(t, g);
                        if (s.bits[gc] >= 0) continue;
                        int gb = tri_.is_face_rep(t, g) ? (want_out ? 0 : 1) : (want_out ? 1 : 0);
                        pending.push({gc, gb});
                    }
                }
                for (int id : face_slots_[t][f]) {
                    const Slot& sl = slots_[id];
                    if (s.slot_done[id]) continue;
                    int a = out_dir(s, sl.tet, sl.entry), z = out_dir(s, sl.tet, sl.exit);
                    if (a < 0 || z < 0) {
                        // one side known: if the edge already has both switches the
                        // other face is forced to continue the rotation
                        if (s.pi[sl.edge] == 2) {
                            int unknown_face = a < 0 ? sl.entry : sl.exit;
                            int known = a < 0 ? z : a;
                            int gc = tri_.face_class(sl.tet, unknown_face);
                            bool want_out = !known;
                            int gb = tri_.is_face_rep(sl.tet, unknown_face) ? (want_out ? 0 : 1) : (want_out ? 1 : 0);
                            pending.push({gc, gb});
                        }
                        continue;
                    }
                    s.slot_done[id] = 1;
                    s.open[sl.edge]--;
                    if (a == z) s.pi[sl.edge]++;
                    if (s.pi[sl.edge] > 2) return false;
                    if (s.pi[sl.edge] + s.open[sl.edge] < 2) return false;
                }
            }
        }
        return true;
    }

    void dfs(const State& s, std::vector<Coorientation>& out) const {
        int next = -1;
        for (int c = 0; c < static_cast<int>(s.bits.size()); ++c)
            if (s.bits[c] < 0) {
                next = c;
                break;
            }
        if (next < 0) {
            Coorientation co;
            for (int b : s.bits) co.bits.push_back(static_cast<std::uint8_t>(b));
            out.push_back(std::move(co));
            return;
        }
        for (int b = 0; b < 2; ++b) {
            State child = s;
            if (assign(child, next, b)) dfs(child, out);
        }
    }

    const Triangulation& tri_;
    std::vector<std::vector<std::array<int, 2>>> sides_;
    std::vector<Slot> slots_;
    std::vector<std::array<std::vector<int>, 4>> face_slots_;
    State root_;
};

std::array<Color, 4> equator_pattern(Chirality c) {
    if (c == Chirality::R) return {Color::Red, Color::Blue, Color::Red, Color::Blue};
    return {Color::Blue, Color::Red, Color::Blue, Color::Red};
}

double orientation_det(const std::array<std::array<double, 3>, 4>& p) {
    double a[3], b[3], c[3];
    for (int i = 0; i < 3; ++i) {
        a[i] = p[1][i] - p[0][i];
        b[i] = p[2][i] - p[0][i];
        c[i] = p[3][i] - p[0][i];
    }
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

}  // namespace

std::vector<Coorientation> search_transverse_taut(const Triangulation& tri) { return TautSearch(tri).run(); }

TautAngles angles_from_coorientation(const Triangulation& tri, const Coorientation& co) {
    if (static_cast<int>(co.bits.size()) != tri.face_class_count())
        throw NotTaut("coorientation has the wrong number of faces");
    TautAngles angles;
    for (int t = 0; t < tri.size(); ++t) {
        std::vector<int> outs, ins;
        for (int f = 0; f < 4; ++f) (points_out(tri, co, t, f) ? outs : ins).push_back(f);
        if (outs.size() != 2) throw NotTaut("tet " + std::to_string(t) + " does not have two outward faces");
        // the outward faces are opposite the bottom diagonal's endpoints
        angles.top.push_back({ins[0], ins[1]});
        angles.bottom.push_back({outs[0], outs[1]});
    }
    const auto& edges = tri.edge_classes();
    for (size_t e = 0; e < edges.size(); ++e) {
        int pi = 0;
        for (const auto& s : edges[e].slots) {
            const auto& top = angles.top[s.tet];
            const auto& bot = angles.bottom[s.tet];
            int a = std::min(s.v[0], s.v[1]), b = std::max(s.v[0], s.v[1]);
            if ((a == top[0] && b == top[1]) || (a == bot[0] && b == bot[1])) ++pi;
        }
        if (pi != 2) throw NotTaut("edge " + std::to_string(e) + " carries " + std::to_string(pi) + " angles pi");
    }
    return angles;
}

std::array<std::array<int, 2>, 4> equator(const Triangulation& tri, const TautAngles& angles, int tet) {
    const int sign = tet_orientations(tri)[tet];
    const int k = angles.top[tet][0], l = angles.top[tet][1];
    int i = angles.bottom[tet][0], j = angles.bottom[tet][1];
    // Flatten the tetrahedron: top diagonal k-l above, bottom diagonal i-j
    // below; the square k, i, l, j is then positively ordered seen from above.
    auto place = [&](int ii, int jj) {
        std::array<std::array<double, 3>, 4> p{};
        p[k] = {-1, 0, 1};
        p[l] = {1, 0, 1};
        p[ii] = {0, -1, -1};
        p[jj] = {0, 1, -1};
        return p;
    };
    if (orientation_det(place(i, j)) * sign < 0) std::swap(i, j);
    return {{{k, i}, {i, l}, {l, j}, {j, k}}};
}

std::optional<EdgeColoring> solve_coloring(const Triangulation& tri, const Coorientation& co, Chirality chirality) {
    const TautAngles angles = angles_from_coorientation(tri, co);
    const int ne = static_cast<int>(tri.edge_classes().size());
    const int anchor = ne;  // parity 0 relative to the anchor = red
    ParityUnionFind uf(ne + 1);
    const auto pattern = equator_pattern(chirality);
    for (int t = 0; t < tri.size(); ++t) {
        const auto eq = equator(tri, angles, t);
        for (int q = 0; q < 4; ++q) {
            int e = tri.edge_class(t, eq[q][0], eq[q][1]);
            if (!uf.unite(e, anchor, pattern[q] == Color::Red ? 0 : 1)) return std::nullopt;
        }
    }
    EdgeColoring col;
    auto [ra, pa] = uf.find(anchor);
    for (int e = 0; e < ne; ++e) {
        auto [r, p] = uf.find(e);
        col.colors.push_back(r == ra && (p ^ pa) == 0 ? Color::Red : Color::Blue);
    }
    return col;
}

std::vector<VeeringStructure> all_veering(const Triangulation& tri) {
    if (!tri.is_valid_manifold()) throw InvalidInput("veering search refused: " + tri.flag_reason());
    std::vector<VeeringStructure> out;
    for (const auto& co : search_transverse_taut(tri))
        for (Chirality ch : {Chirality::R, Chirality::L}) {
            auto col = solve_coloring(tri, co, ch);
            if (!col) continue;
            VeeringStructure vs{co, *col, ch};
            if (verify_veering(tri, vs)) out.push_back(std::move(vs));
        }
    return out;
}

std::optional<VeeringStructure> find_veering(const Triangulation& tri) {
    if (!tri.is_valid_manifold()) throw InvalidInput("veering search refused: " + tri.flag_reason());
    for (const auto& co : search_transverse_taut(tri))
        for (Chirality ch : {Chirality::R, Chirality::L}) {
            auto col = solve_coloring(tri, co, ch);
            if (!col) continue;
            VeeringStructure vs{co, *col, ch};
            if (verify_veering(tri, vs)) return vs;
        }
    return std::nullopt;
}

VeeringReport verify_veering(const Triangulation& tri, const VeeringStructure& vs) {
    const auto& edges = tri.edge_classes();
    if (static_cast<int>(vs.coorientation.bits.size()) != tri.face_class_count())
        return {false, "size", "coorientation length"};
    if (vs.coloring.colors.size() != edges.size()) return {false, "size", "colouring length"};
    if (!tri.is_orientable() || !tri.is_connected()) return {false, "size", "triangulation not connected and orientable"};

    // Inward/outward count per tetrahedron, straight from the face bits.
    std::vector<std::array<bool, 4>> out(tri.size());
    for (int t = 0; t < tri.size(); ++t) {
        int n_out = 0;
        for (int f = 0; f < 4; ++f) {
            const int cls = tri.face_class(t, f);
            const bool rep = tri.face_rep(cls) == std::array<int, 2>{t, f};
            out[t][f] = rep ? vs.coorientation.bits[cls] == 0 : vs.coorientation.bits[cls] == 1;
            n_out += out[t][f];
        }
        if (n_out != 2) return {false, "tet", "tet " + std::to_string(t)};
    }

    // Around each edge, follow the faces in cyclic order and count the places
    // where two consecutive faces are not cooriented the same way round.
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& slots = edges[e].slots;
        const int d = static_cast<int>(slots.size());
        std::vector<bool> forward(d);
        for (int k = 0; k < d; ++k) forward[k] = out[slots[k].tet][slots[k].exit_face()];
        int switches = 0;
        for (int k = 0; k < d; ++k)
            if (forward[k] != forward[(k + d - 1) % d]) ++switches;
        if (switches != 2) return {false, "edge", "edge " + std::to_string(e)};
    }

    // Colours of the equatorial square.
    const auto sign = tet_orientations(tri);
    const auto pattern = equator_pattern(vs.chirality);
    for (int t = 0; t < tri.size(); ++t) {
        std::vector<int> top, bottom;
        for (int f = 0; f < 4; ++f) (out[t][f] ? bottom : top).push_back(f);
        const int k = top[0], l = top[1];
        int i = bottom[0], j = bottom[1];
        // (k, i, l, j) is the positive cyclic order seen from above exactly
        // when it is an odd relabeling of a positive tetrahedron.
        if (Perm4(k, i, l, j).sign() != -sign[t]) std::swap(i, j);
        const std::array<std::array<int, 2>, 4> sq = {{{k, i}, {i, l}, {l, j}, {j, k}}};
        for (int q = 0; q < 4; ++q)
            if (vs.coloring.colors[tri.edge_class(t, sq[q][0], sq[q][1])] != pattern[q])
                return {false, "colour", "tet " + std::to_string(t)};
    }
    return {};
}

bool is_edge_orientable(const Triangulation& tri, const VeeringStructure& vs) {
    const TautAngles angles = angles_from_coorientation(tri, vs.coorientation);
    const int n = tri.size();
    const int ne = static_cast<int>(tri.edge_classes().size());

    // Direction of each tetrahedron edge relative to its edge class.
    std::vector<std::array<int, 16>> along(n);
    for (const auto& cls : tri.edge_classes())
        for (const auto& s : cls.slots) {
            along[s.tet][4 * s.v[0] + s.v[1]] = 0;
            along[s.tet][4 * s.v[1] + s.v[0]] = 1;
        }

    // Nodes: edge classes, then one reversal bit per tetrahedron.
    ParityUnionFind uf(ne + n);
    auto colour = [&](int t, int a, int b) { return vs.coloring.colors[tri.edge_class(t, a, b)]; };
    for (int t = 0; t < n; ++t) {
        const int src = angles.top[t][0], snk = angles.top[t][1];
        const int x = angles.bottom[t][0], y = angles.bottom[t][1];
        std::vector<std::array<int, 2>> directed = {{src, snk}, {src, x}, {src, y}, {x, snk}, {y, snk}};
        // The bottom diagonal leaves the endpoint whose edge to the source
        // differs in colour from the diagonal itself.
        if (colour(t, src, x) != colour(t, x, y))
            directed.push_back({x, y});
        else
            directed.push_back({y, x});
        for (const auto& d : directed) {
            int e = tri.edge_class(t, d[0], d[1]);
            if (!uf.unite(e, ne + t, along[t][4 * d[0] + d[1]])) return false;
        }
    }
    return true;
}

VeeringStructure lift_veering(const Triangulation& base, const Triangulation& cover,
                              const std::vector<int>& projection, const VeeringStructure& vs) {
    VeeringStructure out;
    out.chirality = vs.chirality;
    out.coorientation.bits.resize(cover.face_class_count());
    for (int c = 0; c < cover.face_class_count(); ++c) {
        auto [t, f] = cover.face_rep(c);
        out.coorientation.bits[c] = points_out(base, vs.coorientation, projection[t], f) ? 0 : 1;
    }
    for (const auto& cls : cover.edge_classes()) {
        const auto& s = cls.slots.front();
        out.coloring.colors.push_back(vs.coloring.colors[base.edge_class(projection[s.tet], s.v[0], s.v[1])]);
    }
    return out;
}

}  // namespace foliar
