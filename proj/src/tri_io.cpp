#include <fstream>
#include <sstream>

#include "foliar/error.hpp"
#include "foliar/isosig.hpp"
#include "foliar/triangulation.hpp"

namespace foliar {

namespace {

struct Line {
    int number;
    std::string text;
};

std::string strip(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++number;
        std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        // The header line starts with '%'; '#' starts a comment anywhere.
        size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string s = strip(raw);
        if (!s.empty()) out.push_back({number, std::move(s)});
        if (nl == text.size()) break;
    }
    return out;
}

int parse_int(const std::string& tok, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw SyntaxError(line, "expected an integer, got '" + tok + "'");
    }
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// "<keyword> <c>: <ints...>"
std::vector<int> parse_row(const Line& l, const std::string& keyword, int cusp, int width) {
    auto colon = l.text.find(':');
    if (colon == std::string::npos) throw SyntaxError(l.number, "missing ':' in " + keyword + " row");
    auto head = split_ws(l.text.substr(0, colon));
    if (head.size() != 2 || head[0] != keyword)
        throw SyntaxError(l.number, "expected '" + keyword + " " + std::to_string(cusp) + ":'");
    if (parse_int(head[1], l.number) != cusp)
        throw SyntaxError(l.number, keyword + " row for cusp " + head[1] + " out of order");
    auto toks = split_ws(l.text.substr(colon + 1));
    if (static_cast<int>(toks.size()) != width)
        throw SyntaxError(l.number, keyword + " row needs " + std::to_string(width) + " integers");
    std::vector<int> row;
    for (const auto& t : toks) row.push_back(parse_int(t, l.number));
    return row;
}

}  // namespace

Triangulation parse_triangulation(std::string_view text) {
    auto lines = content_lines(text);
    size_t i = 0;
    auto next = [&](const char* what) -> const Line& {
        if (i >= lines.size())
            throw SyntaxError(lines.empty() ? 1 : lines.back().number + 1, std::string("unexpected end of input, expected ") + what);
        return lines[i++];
    };

    const Line& header = next("header");
    if (split_ws(header.text) != std::vector<std::string>{"%", "TRI", "v1"})
        throw SyntaxError(header.number, "expected header '% TRI v1'");

    const Line& tl = next("tets line");
    auto tt = split_ws(tl.text);
    if (tt.size() != 2 || tt[0] != "tets") throw SyntaxError(tl.number, "expected 'tets <T>'");
    int n = parse_int(tt[1], tl.number);
    if (n <= 0) throw SyntaxError(tl.number, "tetrahedron count must be positive");

    std::vector<std::array<Gluing, 4>> gluings(n);
    for (int t = 0; t < n; ++t) {
        const Line& l = next("tetrahedron line");
        auto toks = split_ws(l.text);
        if (toks.size() != 5 || toks[0].empty() || toks[0].back() != ':')
            throw SyntaxError(l.number, "expected '<i>: <t>:<perm> x4'");
        if (parse_int(toks[0].substr(0, toks[0].size() - 1), l.number) != t)
            throw SyntaxError(l.number, "tetrahedron lines must be numbered 0.." + std::to_string(n - 1) + " in order");
        for (int f = 0; f < 4; ++f) {
            const std::string& e = toks[f + 1];
            auto colon = e.find(':');
            if (colon == std::string::npos) throw SyntaxError(l.number, "bad gluing entry '" + e + "'");
            int dest = parse_int(e.substr(0, colon), l.number);
            if (dest < 0 || dest >= n) throw SyntaxError(l.number, "gluing target " + std::to_string(dest) + " out of range");
            Perm4 p;
            try {
                p = Perm4::from_digits(e.substr(colon + 1));
            } catch (const InvalidInput& err) {
                throw SyntaxError(l.number, err.what());
            }
            gluings[t][f] = Gluing{dest, p[f], p};
        }
    }

    std::optional<std::vector<PeripheralRows>> rows;
    if (i < lines.size()) {
        const Line& cl = next("cusps line");
        auto ct = split_ws(cl.text);
        if (ct.size() != 2 || ct[0] != "cusps") throw SyntaxError(cl.number, "expected 'cusps <k>'");
        int k = parse_int(ct[1], cl.number);
        if (k <= 0) throw SyntaxError(cl.number, "cusp count must be positive");
        rows.emplace();
        for (int c = 0; c < k; ++c) {
            PeripheralRows pr;
            pr.meridian = parse_row(next("meridian row"), "meridian", c, 3 * n);
            pr.longitude = parse_row(next("longitude row"), "longitude", c, 3 * n);
            rows->push_back(std::move(pr));
        }
    }
    if (i < lines.size()) throw SyntaxError(lines[i].number, "trailing content");
    return Triangulation(std::move(gluings), std::move(rows));
}

std::string serialize(const Triangulation& tri) {
    std::ostringstream out;
    out << "% TRI v1\n";
    out << "tets " << tri.size() << "\n";
    for (int t = 0; t < tri.size(); ++t) {
        out << t << ":";
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            out << " " << g.tet << ":" << g.perm.digits();
        }
        out << "\n";
    }
    if (tri.has_cusp_rows()) {
        const auto& rows = tri.cusp_rows();
        out << "cusps " << rows.size() << "\n";
        auto emit = [&](const char* kw, size_t c, const std::vector<int>& row) {
            out << kw << " " << c << ":";
            for (int v : row) out << " " << v;
            out << "\n";
        };
        for (size_t c = 0; c < rows.size(); ++c) {
            emit("meridian", c, rows[c].meridian);
            emit("longitude", c, rows[c].longitude);
        }
    }
    return out.str();
}

Triangulation load_triangulation(const std::string& input) {
    constexpr std::string_view kPrefix = "isosig:";
    if (input.rfind(kPrefix, 0) == 0) return decode_isosig(input.substr(kPrefix.size()));
    std::ifstream in(input);
    if (!in) throw InvalidInput("cannot open triangulation file '" + input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_triangulation(buf.str());
}

}  // namespace foliar
