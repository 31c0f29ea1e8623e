#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foliar/perm.hpp"

namespace foliar {

/// Where face `face` of some tetrahedron is glued: onto face `face` of
/// `tet`, with `perm` carrying the source vertex labels to the target ones.
struct Gluing {
    int tet = -1;
    int face = -1;
    Perm4 perm;

    bool operator==(const Gluing&) const = default;
};

/// Meridian and longitude exponent rows of one cusp, each of length
/// 3 * tet_count, ordered (a_0, b_0, c_0, a_1, ...) against
/// (log z, log z', log z'') of each tetrahedron.
struct PeripheralRows {
    std::vector<int> meridian;
    std::vector<int> longitude;

    bool operator==(const PeripheralRows&) const = default;
};

/// One passage of an edge class through a tetrahedron.
///
/// The edge joins `v[0]` and `v[1]`. The traversal enters the tetrahedron
/// through the face opposite `v[2]` and leaves through the face opposite
/// `v[3]`.
struct EdgeSlot {
    int tet = 0;
    std::array<int, 4> v{};

    int entry_face() const { return v[2]; }
    int exit_face() const { return v[3]; }
    /// Parity of the vertex ordering v as a permutation of 0123.
    int sign() const { return Perm4(v[0], v[1], v[2], v[3]).sign(); }
    /// Which of z, z', z'' sits on this edge (0, 1, 2).
    int param() const { return edge_pair_class(v[0], v[1]); }
};

/// Cyclically ordered slots around one edge of the triangulation.
///
/// Traversal starts at the lexicographically least (tet, vertex pair) slot
/// with v[0] < v[1] and v[2] < v[3], and first leaves through the face
/// opposite v[3] (the face holding the smaller third vertex).
struct EdgeClass {
    std::vector<EdgeSlot> slots;
    int degree() const { return static_cast<int>(slots.size()); }
};

struct CuspLink {
    int cusp = 0;
    int euler_characteristic = 0;
    bool orientable = true;
    int triangles = 0;
    bool is_torus() const { return euler_characteristic == 0 && orientable; }
};

/// Tetrahedron relabeling: tet t goes to tet_image[t] with its vertex v
/// going to vertex_map[t][v].
struct Isomorphism {
    std::vector<int> tet_image;
    std::vector<Perm4> vertex_map;
};

/// Index 0..5 of edge {a,b} inside a tetrahedron: 01,02,03,12,13,23.
int tet_edge_index(int a, int b);
/// Endpoints of tetrahedron edge `index`, smaller label first.
std::array<int, 2> tet_edge_vertices(int index);

/// An ideal triangulation with every face glued. Immutable; the
/// combinatorial data (face classes, edge classes, cusps) is derived once at
/// construction.
class Triangulation {
public:
    /// Validates the involution and self-gluing invariants; throws
    /// InvolutionError, SelfGluingError, NonManifoldGluing or InvalidInput.
    explicit Triangulation(std::vector<std::array<Gluing, 4>> gluings,
                           std::optional<std::vector<PeripheralRows>> cusp_rows = std::nullopt);

    int size() const { return static_cast<int>(gluings_.size()); }
    const Gluing& gluing(int tet, int face) const { return gluings_[tet][face]; }
    const std::vector<std::array<Gluing, 4>>& gluings() const { return gluings_; }

    bool has_cusp_rows() const { return cusp_rows_.has_value(); }
    const std::vector<PeripheralRows>& cusp_rows() const;
    Triangulation without_cusp_rows() const { return Triangulation(gluings_); }

    // Faces. Each face class has a representative side: the (tet, face)
    // pair met first in index order.
    int face_class_count() const { return static_cast<int>(face_reps_.size()); }
    int face_class(int tet, int face) const { return face_class_[tet][face]; }
    bool is_face_rep(int tet, int face) const;
    std::array<int, 2> face_rep(int cls) const { return face_reps_[cls]; }

    // Edges.
    const std::vector<EdgeClass>& edge_classes() const { return edges_; }
    int edge_class(int tet, int a, int b) const { return edge_of_[tet][tet_edge_index(a, b)]; }

    // Cusps (vertex classes), numbered by first occurrence.
    int cusp_count() const { return static_cast<int>(links_.size()); }
    int cusp_of(int tet, int vertex) const { return cusp_of_[tet][vertex]; }
    const std::vector<CuspLink>& cusp_links() const { return links_; }

    bool is_connected() const { return connected_; }
    /// True when gluings can be made orientation-reversing by relabeling.
    bool is_orientable() const { return orientable_; }
    /// True when every gluing permutation is odd (tets coherently oriented).
    bool is_oriented() const;
    /// Orientable, connected and every cusp link a torus: the inputs the
    /// downstream modules accept.
    bool is_valid_manifold() const;
    /// Human-readable reason when !is_valid_manifold().
    std::string flag_reason() const;

    /// Copy relabeled so that every gluing is odd. Throws InvalidInput when
    /// non-orientable, or when cusp rows are present and relabeling would
    /// have to reverse a tetrahedron.
    Triangulation oriented() const;

    bool operator==(const Triangulation& o) const {
        return gluings_ == o.gluings_ && cusp_rows_ == o.cusp_rows_;
    }

private:
    void build_faces();
    void build_edges();
    void build_cusps();
    void check_orientability();

    std::vector<std::array<Gluing, 4>> gluings_;
    std::optional<std::vector<PeripheralRows>> cusp_rows_;

    std::vector<std::array<int, 4>> face_class_;
    std::vector<std::array<int, 2>> face_reps_;
    std::vector<EdgeClass> edges_;
    std::vector<std::array<int, 6>> edge_of_;
    std::vector<std::array<int, 4>> cusp_of_;
    std::vector<CuspLink> links_;
    bool connected_ = true;
    bool orientable_ = true;
};

/// Applies `iso` to `tri`. Cusp rows are carried along when every vertex map
/// is even and dropped otherwise.
Triangulation relabel(const Triangulation& tri, const Isomorphism& iso);

/// Exhaustive search (base tet x 24 perms, with propagation). Requires
/// connected inputs; returns the first isomorphism a -> b found.
std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b);

/// True when `iso` carries the gluings of `a` exactly onto those of `b`.
bool is_isomorphism(const Triangulation& a, const Triangulation& b, const Isomorphism& iso);

// TRI-v1 text format.
Triangulation parse_triangulation(std::string_view text);
std::string serialize(const Triangulation& tri);

/// Reads a TRI-v1 file, or decodes an isomorphism signature when `input`
/// starts with "isosig:".
Triangulation load_triangulation(const std::string& input);

}  // namespace foliar
