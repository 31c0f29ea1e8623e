#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foliar/triangulation.hpp"

namespace foliar {

/// Transverse orientation of every face class. Bit 0 ("up") means the
/// coorientation points out of the tetrahedron on the representative side
/// of the face (see Triangulation::face_rep); bit 1 means it points into it.
struct Coorientation {
    std::vector<std::uint8_t> bits;

    bool operator==(const Coorientation&) const = default;
    auto operator<=>(const Coorientation&) const = default;

    Coorientation flipped() const;
    std::string to_string() const;
    static Coorientation from_string(const std::string& s);
};

/// Whether face `face` of tet `tet` is cooriented out of that tetrahedron.
bool points_out(const Triangulation& tri, const Coorientation& co, int tet, int face);

/// Per tetrahedron: the diagonal shared by the two outward faces (top) and
/// the one shared by the two inward faces (bottom). These carry angle pi.
struct TautAngles {
    std::vector<std::array<int, 2>> top;
    std::vector<std::array<int, 2>> bottom;

    /// 0, 1, 2: which opposite-edge pair carries pi in tet t.
    int pi_pair(int t) const { return edge_pair_class(top[t][0], top[t][1]); }
};

enum class Color : std::uint8_t { Blue = 0, Red = 1 };

struct EdgeColoring {
    std::vector<Color> colors;  // indexed by edge class

    bool operator==(const EdgeColoring&) const = default;
    EdgeColoring swapped() const;
    std::string to_string() const;
    static EdgeColoring from_string(const std::string& s);
};

/// The two mirror conventions for the colours of the equatorial square.
/// R: going around the equator in the positive sense (viewed from above)
/// from an endpoint of the top diagonal, the edges read red, blue, red,
/// blue. L is the mirror image.
enum class Chirality : std::uint8_t { R = 0, L = 1 };

char to_char(Chirality c);
Chirality chirality_from_char(char c);

struct VeeringStructure {
    Coorientation coorientation;
    EdgeColoring coloring;
    Chirality chirality = Chirality::R;

    bool operator==(const VeeringStructure&) const = default;
    /// "<bits> <colors> <chirality>"
    std::string to_string() const;
    static VeeringStructure from_string(const std::string& s);
};

struct VeeringReport {
    bool ok = true;
    std::string condition;  // "size", "tet", "edge" or "colour"
    std::string location;   // e.g. "tet 3", "edge 1"

    explicit operator bool() const { return ok; }
    std::string to_string() const;
};

/// Every coorientation with two outward faces per tet and exactly two
/// switches around every edge, in lexicographic order of the face bits.
std::vector<Coorientation> search_transverse_taut(const Triangulation& tri);

/// Throws NotTaut if `co` violates the tet or edge condition.
TautAngles angles_from_coorientation(const Triangulation& tri, const Coorientation& co);

/// Equatorial edges of tet t in positive cyclic order starting from the
/// endpoint top[0] of the top diagonal: {k,i}, {i,l}, {l,j}, {j,k}.
std::array<std::array<int, 2>, 4> equator(const Triangulation& tri, const TautAngles& angles, int tet);

/// Colouring forced by the taut structure and chirality, if any. Edges that
/// no tetrahedron constrains default to blue.
std::optional<EdgeColoring> solve_coloring(const Triangulation& tri, const Coorientation& co, Chirality chirality);

/// First veering structure in (coorientation, R before L) order. Throws
/// InvalidInput for flagged triangulations.
std::optional<VeeringStructure> find_veering(const Triangulation& tri);

/// Every veering structure on `tri`, in the same order as find_veering.
std::vector<VeeringStructure> all_veering(const Triangulation& tri);

/// Re-checks the three local conditions slot by slot.
VeeringReport verify_veering(const Triangulation& tri, const VeeringStructure& vs);

/// Whether edges can be oriented so that in every tetrahedron the top
/// diagonal runs from a source to a sink of the tetrahedron's edges.
bool is_edge_orientable(const Triangulation& tri, const VeeringStructure& vs);

/// Pulls a structure on `base` back along the projection of a cover
/// (cover tet -> base tet, cover tet vertex labels equal base labels).
VeeringStructure lift_veering(const Triangulation& base, const Triangulation& cover,
                              const std::vector<int>& projection, const VeeringStructure& vs);

/// Orientation sign (+1/-1) of every tetrahedron with tet 0 positive.
std::vector<int> tet_orientations(const Triangulation& tri);

}  // namespace foliar
