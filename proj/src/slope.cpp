#include "foliar/slope.hpp"

#include <cctype>
#include <numeric>

#include "foliar/error.hpp"

namespace foliar {

Slope::Slope(long p, long q) {
    if (p == 0 && q == 0) throw InvalidInput("slope 0/0 is undefined");
    long g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    p_ = p;
    q_ = q;
}

namespace {

long parse_long(std::string_view s) {
    if (s.empty()) throw InvalidInput("empty number in slope");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw InvalidInput("bad number '" + std::string(s) + "'");
    long v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw InvalidInput("bad number '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Slope Slope::parse(std::string_view text) {
    text = trim(text);
    if (text == "inf" || text == "Inf" || text == "infinity") return Slope(1, 0);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Slope(parse_long(text), 1);
    return Slope(parse_long(trim(text.substr(0, slash))), parse_long(trim(text.substr(slash + 1))));
}

std::string Slope::to_string() const {
    if (q_ == 0) return "inf";
    if (q_ == 1) return std::to_string(p_);
    return std::to_string(p_) + "/" + std::to_string(q_);
}

PartialFilling parse_filling(std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw InvalidInput("filling must be parenthesized: '" + std::string(text) + "'");
    text = text.substr(1, text.size() - 2);
    PartialFilling out;
    size_t pos = 0;
    while (true) {
        size_t semi = text.find(';', pos);
        std::string_view part = trim(text.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
        if (part == "*")
            out.push_back(std::nullopt);
        else
            out.push_back(Slope::parse(part));
        if (semi == std::string_view::npos) break;
        pos = semi + 1;
    }
    return out;
}

std::string to_string(const PartialFilling& f) {
    std::string s = "(";
    for (size_t i = 0; i < f.size(); ++i) {
        if (i) s += ";";
        s += f[i] ? f[i]->to_string() : "*";
    }
    return s + ")";
}

}  // namespace foliar
