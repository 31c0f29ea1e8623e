#include "foliar/perm.hpp"

#include "foliar/error.hpp"

namespace foliar {

namespace {

// Lexicographic order; this is the order the isomorphism-signature
// packing refers to.
constexpr std::array<Perm4, 24> kS4 = {{
    {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1},
    {0, 3, 1, 2}, {0, 3, 2, 1}, {1, 0, 2, 3}, {1, 0, 3, 2},
    {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
    {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0},
    {2, 3, 0, 1}, {2, 3, 1, 0}, {3, 0, 1, 2}, {3, 0, 2, 1},
    {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0},
}};

}  // namespace

Perm4 Perm4::from_digits(std::string_view digits) {
    if (digits.size() != 4) throw InvalidInput("permutation must have 4 digits: '" + std::string(digits) + "'");
    Perm4 p;
    for (int i = 0; i < 4; ++i) {
        char c = digits[i];
        if (c < '0' || c > '3') throw InvalidInput("bad permutation digit in '" + std::string(digits) + "'");
        p.img_[i] = static_cast<std::uint8_t>(c - '0');
    }
    if (!p.is_valid()) throw InvalidInput("not a permutation: '" + std::string(digits) + "'");
    return p;
}

Perm4 Perm4::from_s4_index(int index) {
    if (index < 0 || index >= 24) throw InvalidInput("S4 index out of range");
    return kS4[index];
}

int Perm4::s4_index() const {
    for (int i = 0; i < 24; ++i)
        if (kS4[i] == *this) return i;
    return -1;
}

std::string Perm4::digits() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + img_[i]);
    return s;
}

const std::array<Perm4, 24>& Perm4::all() { return kS4; }

}  // namespace foliar
