#pragma once

#include <string>
#include <string_view>

#include "foliar/triangulation.hpp"

namespace foliar {

/// Decodes an isomorphism signature (the classic packing over the
/// alphabet a-z A-Z 0-9 + -). Throws BadCharacter, TruncatedSignature or
/// NonManifoldGluing (boundary faces, inconsistent joins).
Triangulation decode_isosig(std::string_view sig);

/// Lexicographically least signature over every starting tetrahedron and
/// starting vertex labeling. Requires a connected triangulation.
std::string encode_isosig(const Triangulation& tri);

/// The signature obtained from one particular starting point, together with
/// the relabeling it induces (used to move data onto the canonical labeling).
struct IsosigLabeling {
    std::string sig;
    Isomorphism iso;  // tri -> decode_isosig(sig)
};
IsosigLabeling canonical_labeling(const Triangulation& tri);

}  // namespace foliar
