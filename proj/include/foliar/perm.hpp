#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace foliar {

/// A permutation of the four vertex labels {0,1,2,3}.
class Perm4 {
public:
    constexpr Perm4() : img_{0, 1, 2, 3} {}
    constexpr Perm4(int a, int b, int c, int d)
        : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
               static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

    /// Parses four digits such as "0132"; throws InvalidInput on anything else.
    static Perm4 from_digits(std::string_view digits);

    /// Element of S4 in the sign-alternating order used by isomorphism signatures.
    static Perm4 from_s4_index(int index);

    constexpr int operator[](int i) const { return img_[i]; }

    constexpr int pre_image(int v) const {
        for (int i = 0; i < 4; ++i)
            if (img_[i] == v) return i;
        return -1;
    }

    constexpr Perm4 inverse() const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
        return r;
    }

    /// Composition: (p * q)[i] == p[q[i]].
    constexpr Perm4 operator*(const Perm4& q) const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.img_[i] = img_[q.img_[i]];
        return r;
    }

    constexpr bool operator==(const Perm4&) const = default;

    /// +1 for even permutations, -1 for odd ones.
    constexpr int sign() const {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img_[i] > img_[j]) ++inversions;
        return inversions % 2 == 0 ? 1 : -1;
    }

    constexpr bool is_valid() const {
        unsigned seen = 0;
        for (auto v : img_) {
            if (v > 3) return false;
            seen |= 1u << v;
        }
        return seen == 0xF;
    }

    int s4_index() const;
    std::string digits() const;

    /// All 24 permutations in s4_index order.
    static const std::array<Perm4, 24>& all();

private:
    std::array<std::uint8_t, 4> img_;
};

/// Index 0..2 of the opposite-edge pair containing edge {a,b}:
/// 0 for 01/23, 1 for 02/13, 2 for 03/12.
constexpr int edge_pair_class(int a, int b) {
    int lo = a < b ? a : b;
    int hi = a < b ? b : a;
    if (lo == 0) return hi - 1;
    // {1,2} pairs with {0,3}; {1,3} with {0,2}; {2,3} with {0,1}
    if (lo == 1) return hi == 2 ? 2 : 1;
    return 0;
}

}  // namespace foliar
