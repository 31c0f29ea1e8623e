#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foliar/geometry.hpp"
#include "foliar/triangulation.hpp"

namespace foliar {

/// A GF(2) 1-cocycle on the dual spine: one bit per face class.
struct CocycleZ2 {
    std::vector<std::uint8_t> bits;

    bool operator==(const CocycleZ2&) const = default;
    bool is_zero() const;
    std::string to_string() const;
};

/// Whether the bits around every edge class sum to zero.
bool is_cocycle(const Triangulation& tri, const CocycleZ2& c);

/// Face classes crossed by the dual spanning tree (BFS from tet 0).
std::vector<int> dual_tree_faces(const Triangulation& tri);

/// Basis of H^1(M; Z/2), each vector vanishing on the dual spanning tree.
/// Throws DisconnectedInput.
std::vector<CocycleZ2> z2_cohomology_basis(const Triangulation& tri);

/// XOR of the basis vectors selected by `mask`.
CocycleZ2 cohomology_class(const std::vector<CocycleZ2>& basis, std::uint64_t mask);

struct DoubleCover {
    Triangulation base;
    Triangulation cover;
    /// cover tet -> (base tet, sheet); cover tet 2t+s sits over t on sheet s.
    std::vector<std::array<int, 2>> projection;
    CocycleZ2 cocycle;

    std::vector<int> base_tets() const;
    /// Sidecar table, one `<cover_tet> -> <base_tet>,<sheet>` line per tet.
    std::string projection_table() const;
};

/// The sheet flips across a face exactly when its cocycle bit is 1.
/// Throws InvalidCocycle.
DoubleCover build_double_cover(const Triangulation& tri, const CocycleZ2& c);

/// Independent slot-by-slot check of the covering invariants, including the
/// sheet swap being an automorphism of the cover.
bool verify_covering(const DoubleCover& dc);

/// Shapes of the base pulled back to the cover.
Shapes lift_shapes(const DoubleCover& dc, const Shapes& base_shapes);

/// H1 of every connected double cover, one entry per nonzero class,
/// sorted. Purely combinatorial.
std::vector<std::vector<long>> cover_homology(const Triangulation& tri);

struct CoverEntry {
    DoubleCover cover;
    std::vector<std::uint64_t> masks;       // cohomology classes giving this cover
    std::optional<Fingerprint> fingerprint;  // none when the base is non-geometric
    int multiplicity() const { return static_cast<int>(masks.size()); }
};

/// One entry per fingerprint-distinct connected double cover, ordered by
/// the first class mask. The base must carry cusp rows for fingerprints;
/// without a geometric base solution every class is kept separately.
std::vector<CoverEntry> enumerate_double_covers(const Triangulation& tri, const SolverOptions& opts = {},
                                                double match_tol = 1e-6);

}  // namespace foliar
