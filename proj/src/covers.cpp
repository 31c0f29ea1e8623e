#include "foliar/covers.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "foliar/error.hpp"

namespace foliar {

bool CocycleZ2::is_zero() const {
    return std::all_of(bits.begin(), bits.end(), [](auto b) { return b == 0; });
}

std::string CocycleZ2::to_string() const {
    std::string s;
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

bool is_cocycle(const Triangulation& tri, const CocycleZ2& c) {
    if (static_cast<int>(c.bits.size()) != tri.face_class_count()) return false;
    for (const auto& cls : tri.edge_classes()) {
        int sum = 0;
        for (const auto& s : cls.slots) sum ^= c.bits[tri.face_class(s.tet, s.exit_face())] & 1;
        if (sum) return false;
    }
    return true;
}

std::vector<int> dual_tree_faces(const Triangulation& tri) {
    std::vector<int> faces;
    std::vector<bool> seen(tri.size(), false);
    seen[0] = true;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            if (seen[g.tet]) continue;
            seen[g.tet] = true;
            faces.push_back(tri.face_class(t, f));
            q.push(g.tet);
        }
    }
    return faces;
}

std::vector<CocycleZ2> z2_cohomology_basis(const Triangulation& tri) {
    if (!tri.is_connected()) throw DisconnectedInput("cohomology of a disconnected triangulation");
    const int nf = tri.face_class_count();
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& cls : tri.edge_classes()) {
        std::vector<std::uint8_t> r(nf, 0);
        for (const auto& s : cls.slots) r[tri.face_class(s.tet, s.exit_face())] ^= 1;
        rows.push_back(std::move(r));
    }
    for (int f : dual_tree_faces(tri)) {
        std::vector<std::uint8_t> r(nf, 0);
        r[f] = 1;
        rows.push_back(std::move(r));
    }
    // reduced row echelon form over GF(2)
    std::vector<int> pivot_col;
    size_t rank = 0;
    for (int col = 0; col < nf && rank < rows.size(); ++col) {
        size_t p = rank;
        while (p < rows.size() && !rows[p][col]) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[rank], rows[p]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != rank && rows[i][col])
                for (int j = 0; j < nf; ++j) rows[i][j] ^= rows[rank][j];
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(nf, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<CocycleZ2> basis;
    for (int free = 0; free < nf; ++free) {
        if (is_pivot[free]) continue;
        CocycleZ2 v;
        v.bits.assign(nf, 0);
        v.bits[free] = 1;
        for (size_t i = 0; i < pivot_col.size(); ++i)
            if (rows[i][free]) v.bits[pivot_col[i]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

CocycleZ2 cohomology_class(const std::vector<CocycleZ2>& basis, std::uint64_t mask) {
    CocycleZ2 c;
    if (basis.empty()) return c;
    c.bits.assign(basis[0].bits.size(), 0);
    for (size_t i = 0; i < basis.size(); ++i)
        if (mask >> i & 1)
            for (size_t j = 0; j < c.bits.size(); ++j) c.bits[j] ^= basis[i].bits[j];
    return c;
}

std::vector<int> DoubleCover::base_tets() const {
    std::vector<int> out;
    for (const auto& p : projection) out.push_back(p[0]);
    return out;
}

std::string DoubleCover::projection_table() const {
    std::ostringstream out;
    for (size_t t = 0; t < projection.size(); ++t) out << t << " -> " << projection[t][0] << "," << projection[t][1] << "\n";
    return out.str();
}

DoubleCover build_double_cover(const Triangulation& tri, const CocycleZ2& c) {
    if (!is_cocycle(tri, c)) throw InvalidCocycle("bits do not sum to zero around every edge");
    const int n = tri.size();
    std::vector<std::array<Gluing, 4>> up(2 * n);
    std::vector<std::array<int, 2>> proj(2 * n);
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < 2; ++s) {
            proj[2 * t + s] = {t, s};
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.gluing(t, f);
                const int flip = c.bits[tri.face_class(t, f)] & 1;
                up[2 * t + s][f] = Gluing{2 * g.tet + (s ^ flip), g.face, g.perm};
            }
        }
    return DoubleCover{tri.without_cusp_rows(), Triangulation(std::move(up)), std::move(proj), c};
}

bool verify_covering(const DoubleCover& dc) {
    const Triangulation& base = dc.base;
    const Triangulation& cover = dc.cover;
    const int n = base.size();
    if (cover.size() != 2 * n || static_cast<int>(dc.projection.size()) != 2 * n) return false;
    if (!is_cocycle(base, dc.cocycle)) return false;
    std::vector<int> hits(2 * n, 0);
    for (const auto& p : dc.projection) {
        if (p[0] < 0 || p[0] >= n || (p[1] != 0 && p[1] != 1)) return false;
        hits[2 * p[0] + p[1]]++;
    }
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
    for (int u = 0; u < 2 * n; ++u) {
        const auto [t, s] = dc.projection[u];
        for (int f = 0; f < 4; ++f) {
            const Gluing& gu = cover.gluing(u, f);
            const Gluing& gb = base.gluing(t, f);
            const auto [t2, s2] = dc.projection[gu.tet];
            if (t2 != gb.tet || gu.face != gb.face || gu.perm != gb.perm) return false;
            if ((s ^ s2) != (dc.cocycle.bits[base.face_class(t, f)] & 1)) return false;
        }
    }
    // the sheet swap is a deck transformation
    Isomorphism deck;
    std::vector<int> where(2 * n);
    for (int u = 0; u < 2 * n; ++u) where[2 * dc.projection[u][0] + dc.projection[u][1]] = u;
    for (int u = 0; u < 2 * n; ++u) {
        const auto [t, s] = dc.projection[u];
        deck.tet_image.push_back(where[2 * t + (1 - s)]);
        deck.vertex_map.push_back(Perm4());
    }
    return is_isomorphism(cover, cover, deck);
}

Shapes lift_shapes(const DoubleCover& dc, const Shapes& base_shapes) {
    Shapes z;
    for (const auto& p : dc.projection) z.push_back(base_shapes.at(p[0]));
    return z;
}

std::vector<std::vector<long>> cover_homology(const Triangulation& tri) {
    const auto basis = z2_cohomology_basis(tri);
    if (basis.size() > 20) throw InvalidInput("too many cohomology classes");
    std::vector<std::vector<long>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << basis.size()); ++mask)
        out.push_back(h1_invariants(build_double_cover(tri, cohomology_class(basis, mask)).cover));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CoverEntry> enumerate_double_covers(const Triangulation& tri, const SolverOptions& opts, double match_tol) {
    if (!tri.is_valid_manifold()) throw InvalidInput("cover enumeration refused: " + tri.flag_reason());
    const auto basis = z2_cohomology_basis(tri);
    if (basis.size() > 20) throw InvalidInput("too many cohomology classes");

    std::optional<Shapes> base_shapes;
    if (tri.has_cusp_rows()) {
        try {
            base_shapes = solve_shapes(assemble_system(tri), {}, opts);
        } catch (const NonGeometric&) {
        } catch (const SingularJacobian&) {
        }
    }

    std::vector<CoverEntry> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << basis.size()); ++mask) {
        DoubleCover dc = build_double_cover(tri, cohomology_class(basis, mask));
        std::optional<Fingerprint> fp;
        if (base_shapes) {
            Shapes z = lift_shapes(dc, *base_shapes);
            if (edge_residual(assemble_system(dc.cover, false), z) > 1e-9)
                throw IncompleteSolution("lifted shapes fail the cover's edge equations");
            fp = fingerprint_from_shapes(dc.cover, z);
            fp->cover_h1 = cover_homology(dc.cover);
        }
        bool merged = false;
        if (fp)
            for (auto& e : out)
                if (e.fingerprint && e.fingerprint->matches(*fp, match_tol)) {
                    e.masks.push_back(mask);
                    merged = true;
                    break;
                }
        if (!merged) out.push_back(CoverEntry{std::move(dc), {mask}, std::move(fp)});
    }
    return out;
}

}  // namespace foliar
