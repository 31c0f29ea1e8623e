#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace foliar {

/// A Dehn filling slope p/q: p meridians plus q longitudes. Always stored
/// normalized: gcd(p, q) = 1 and q > 0, or (1, 0) for infinity.
class Slope {
public:
    /// Throws InvalidInput for (0, 0).
    Slope(long p, long q);

    /// Accepts "p/q", "n" (meaning n/1) and "inf".
    static Slope parse(std::string_view text);

    long p() const { return p_; }
    long q() const { return q_; }
    bool is_infinite() const { return q_ == 0; }

    /// "inf", "n" when q = 1, otherwise "p/q".
    std::string to_string() const;

    auto operator<=>(const Slope&) const = default;

private:
    long p_;
    long q_;
};

/// One entry per cusp: a slope, or nullopt for a cusp left unfilled.
using PartialFilling = std::vector<std::optional<Slope>>;

/// Parses "(-1/3)", "(1/2;2)", "(*;1/2;2)" etc.
PartialFilling parse_filling(std::string_view text);
std::string to_string(const PartialFilling& f);

}  // namespace foliar
