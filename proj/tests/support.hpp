#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foliar/isosig.hpp"
#include "foliar/triangulation.hpp"

namespace fixtures {

inline std::string data_dir() { return FOLIAR_TEST_DATA; }

inline foliar::Triangulation bundled(const std::string& name) {
    return foliar::load_triangulation(data_dir() + "/tri/" + name + ".tri");
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct VeeringRow {
    std::string name, isosig, taut;
    bool edge_orientable = false;
};

inline std::vector<VeeringRow> veering_census() {
    std::ifstream in(data_dir() + "/veering_census.csv");
    std::vector<VeeringRow> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        VeeringRow r;
        std::string eo;
        std::getline(ss, r.name, ',');
        std::getline(ss, r.isosig, ',');
        std::getline(ss, r.taut, ',');
        std::getline(ss, eo, ',');
        r.edge_orientable = eo == "yes";
        rows.push_back(r);
    }
    return rows;
}

/// The 20 manifolds of the first hundred that appear in the veering census.
inline const std::vector<std::string>& veering_names() {
    static const std::vector<std::string> names = {
        "m003", "m004", "m009", "m010", "m016", "m022", "m023", "m036", "m038", "m039",
        "m040", "m052", "m083", "m115", "m119", "m120", "m125", "m135", "m136", "m140"};
    return names;
}

/// The 19 manifolds of the first hundred with no veering triangulation.
inline const std::vector<std::string>& obstructed_names() {
    static const std::vector<std::string> names = {
        "m006", "m007", "m011", "m029", "m030", "m037", "m047", "m049", "m060", "m064",
        "m081", "m082", "m095", "m116", "m117", "m129", "m130", "m142", "m143"};
    return names;
}

/// Random tet permutation and vertex relabeling.
inline foliar::Isomorphism random_iso(int n, std::mt19937& rng, bool even_only = false) {
    foliar::Isomorphism iso;
    iso.tet_image.resize(n);
    for (int i = 0; i < n; ++i) iso.tet_image[i] = i;
    std::shuffle(iso.tet_image.begin(), iso.tet_image.end(), rng);
    const auto& all = foliar::Perm4::all();
    for (int i = 0; i < n; ++i) {
        foliar::Perm4 p;
        do {
            p = all[rng() % 24];
        } while (even_only && p.sign() != 1);
        iso.vertex_map.push_back(p);
    }
    return iso;
}

/// One tetrahedron with faces 2 and 3 folded together around edge 01, which
/// therefore has degree 1, and faces 0 and 1 glued to each other.
inline foliar::Triangulation self_folded() {
    using foliar::Gluing;
    using foliar::Perm4;
    std::vector<std::array<Gluing, 4>> g(1);
    g[0][0] = {0, 1, Perm4(1, 0, 2, 3)};
    g[0][1] = {0, 0, Perm4(1, 0, 2, 3)};
    g[0][2] = {0, 3, Perm4(0, 1, 3, 2)};
    g[0][3] = {0, 2, Perm4(0, 1, 3, 2)};
    return foliar::Triangulation(std::move(g));
}

/// Every triangulation with at most three tetrahedra the tests know about:
/// bundled census files, veering census signatures and the folded fixture.
inline std::vector<std::pair<std::string, foliar::Triangulation>> small_fixtures() {
    std::vector<std::pair<std::string, foliar::Triangulation>> out;
    for (const char* n : {"m003", "m004", "m006", "m007", "m009", "m010", "m011", "m015", "m016", "m017", "m019"})
        out.emplace_back(n, bundled(n));
    for (const auto& r : veering_census())
        if (r.taut.size() <= 3) out.emplace_back("isosig:" + r.isosig, foliar::decode_isosig(r.isosig));
    out.emplace_back("self-folded", self_folded());
    return out;
}

}  // namespace fixtures
