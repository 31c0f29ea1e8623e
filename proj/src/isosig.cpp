#include "foliar/isosig.hpp"

#include "foliar/error.hpp"

namespace foliar {

namespace {

char to_char(int v) {
    if (v < 26) return static_cast<char>('a' + v);
    if (v < 52) return static_cast<char>('A' + v - 26);
    if (v < 62) return static_cast<char>('0' + v - 52);
    return v == 62 ? '+' : '-';
}

int from_char(char c) {
    if (c >= 'a' && c <= 'z') return c - 'a';
    if (c >= 'A' && c <= 'Z') return c - 'A' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '-') return 63;
    return -1;
}

void append_value(std::string& s, long value, int chars) {
    for (int i = 0; i < chars; ++i) {
        s += to_char(static_cast<int>(value & 0x3F));
        value >>= 6;
    }
}

struct Reader {
    std::string_view sig;
    size_t pos = 0;

    int next_char() {
        if (pos >= sig.size()) throw TruncatedSignature("isomorphism signature ends early");
        return from_char(sig[pos++]);
    }
    long value(int chars) {
        long v = 0;
        for (int i = 0; i < chars; ++i) v |= static_cast<long>(next_char()) << (6 * i);
        return v;
    }
};

// Signature of the labeling that sends `start_tet` to 0 with vertex map
// `start_perm`; fills `iso` with the induced relabeling.
std::string signature_from(const Triangulation& tri, int start_tet, const Perm4& start_perm, Isomorphism* iso) {
    const int n = tri.size();
    std::vector<int> image(n, -1), pre_image(n, -1);
    std::vector<Perm4> vmap(n);
    image[start_tet] = 0;
    pre_image[0] = start_tet;
    vmap[start_tet] = start_perm;
    int next_unused = 1;

    std::vector<int> actions;
    std::vector<int> join_dest, join_gluing;
    for (int simp_img = 0; simp_img < n; ++simp_img) {
        int src = pre_image[simp_img];
        for (int facet_img = 0; facet_img < 4; ++facet_img) {
            int facet_src = vmap[src].pre_image(facet_img);
            const Gluing& g = tri.gluing(src, facet_src);
            int dest = g.tet;
            if (image[dest] >= 0) {
                int dest_img = image[dest];
                int facet_dest_img = vmap[dest][g.face];
                if (dest_img < simp_img || (dest_img == simp_img && facet_dest_img < facet_img)) continue;
            }
            if (image[dest] < 0) {
                image[dest] = next_unused;
                pre_image[next_unused++] = dest;
                vmap[dest] = vmap[src] * g.perm.inverse();
                actions.push_back(1);
                continue;
            }
            actions.push_back(2);
            join_dest.push_back(image[dest]);
            join_gluing.push_back((vmap[dest] * g.perm * vmap[src].inverse()).s4_index());
        }
    }

    std::string out;
    int n_chars = 1;
    if (n < 63) {
        out += to_char(n);
    } else {
        n_chars = 0;
        for (long tmp = n; tmp > 0; tmp >>= 6) ++n_chars;
        out += to_char(63);
        out += to_char(n_chars);
        append_value(out, n, n_chars);
    }
    for (size_t i = 0; i < actions.size(); i += 3) {
        int v = 0;
        for (size_t j = 0; j < 3 && i + j < actions.size(); ++j) v |= actions[i + j] << (2 * j);
        out += to_char(v);
    }
    for (int d : join_dest) append_value(out, d, n_chars);
    for (int gl : join_gluing) append_value(out, gl, 1);

    if (iso) {
        iso->tet_image = image;
        iso->vertex_map = vmap;
    }
    return out;
}

}  // namespace

Triangulation decode_isosig(std::string_view sig) {
    for (char c : sig)
        if (from_char(c) < 0) throw BadCharacter(std::string("character '") + c + "' is not in the signature alphabet");
    if (sig.empty()) throw TruncatedSignature("empty isomorphism signature");

    Reader r{sig};
    long n = r.next_char();
    int n_chars = 1;
    if (n == 63) {
        n_chars = r.next_char();
        n = r.value(n_chars);
    }
    if (n <= 0) throw NonManifoldGluing("signature encodes no tetrahedra");

    // Facet actions: 0 boundary (one facet), 1 and 2 each pair two facets.
    std::vector<int> actions;
    long facets_left = 4 * n;
    while (facets_left > 0) {
        int packed = r.next_char();
        for (int j = 0; j < 3 && facets_left > 0; ++j) {
            int a = (packed >> (2 * j)) & 3;
            if (a == 3) throw NonManifoldGluing("invalid facet action");
            actions.push_back(a);
            facets_left -= a == 0 ? 1 : 2;
        }
        if (facets_left < 0) throw NonManifoldGluing("facet actions overrun the facet count");
    }
    size_t joins = 0;
    for (int a : actions) joins += a == 2;
    std::vector<long> dest(joins);
    std::vector<int> glue(joins);
    for (auto& d : dest) d = r.value(n_chars);
    for (auto& g : glue) {
        g = r.next_char();
        if (g >= 24) throw NonManifoldGluing("gluing index out of range");
    }
    if (r.pos != sig.size()) throw NonManifoldGluing("trailing characters after signature");

    std::vector<std::array<Gluing, 4>> gl(n);
    std::vector<std::array<bool, 4>> done(n, {false, false, false, false});
    size_t apos = 0, jpos = 0;
    long next_unused = 1;
    for (long s = 0; s < n; ++s) {
        for (int f = 0; f < 4; ++f) {
            if (done[s][f]) continue;
            int a = actions[apos++];
            if (a == 0) throw NonManifoldGluing("signature has boundary faces; ideal triangulations must be closed");
            long d;
            int df;
            Perm4 p;
            if (a == 1) {
                if (next_unused >= n) throw NonManifoldGluing("signature introduces too many tetrahedra");
                d = next_unused++;
                df = f;
                p = Perm4();
            } else {
                d = dest[jpos];
                p = Perm4::from_s4_index(glue[jpos]);
                ++jpos;
                df = p[f];
                if (d < 0 || d >= n || done[d][df] || (d == s && df == f))
                    throw NonManifoldGluing("signature joins onto an occupied face");
            }
            gl[s][f] = Gluing{static_cast<int>(d), df, p};
            gl[d][df] = Gluing{static_cast<int>(s), f, p.inverse()};
            done[s][f] = done[d][df] = true;
        }
    }
    if (apos != actions.size() || jpos != joins || next_unused != n)
        throw NonManifoldGluing("signature is inconsistent with its tetrahedron count");
    return Triangulation(std::move(gl));
}

IsosigLabeling canonical_labeling(const Triangulation& tri) {
    if (!tri.is_connected()) throw InvalidInput("isomorphism signatures need a connected triangulation");
    IsosigLabeling best;
    for (int t = 0; t < tri.size(); ++t) {
        for (const Perm4& p : Perm4::all()) {
            Isomorphism iso;
            std::string s = signature_from(tri, t, p, &iso);
            if (best.sig.empty() || s < best.sig) {
                best.sig = std::move(s);
                best.iso = std::move(iso);
            }
        }
    }
    return best;
}

std::string encode_isosig(const Triangulation& tri) { return canonical_labeling(tri).sig; }

}  // namespace foliar
