#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "brute_force.hpp"
#include "doctest.h"
#include "foliar/error.hpp"
#include "foliar/isosig.hpp"
#include "support.hpp"

using namespace foliar;
namespace fs = std::filesystem;

TEST_CASE("perm basics") {
    Perm4 p(1, 2, 3, 0);
    CHECK(p.sign() == -1);
    CHECK(p * p.inverse() == Perm4());
    CHECK(Perm4::from_digits("0132") == Perm4(0, 1, 3, 2));
    CHECK_THROWS_AS(Perm4::from_digits("0012"), InvalidInput);
    for (int i = 0; i < 24; ++i) CHECK(Perm4::from_s4_index(i).s4_index() == i);
    CHECK(Perm4::all()[0] == Perm4());
    CHECK(Perm4::all()[23] == Perm4(3, 2, 1, 0));
    CHECK(edge_pair_class(0, 1) == edge_pair_class(2, 3));
    CHECK(edge_pair_class(1, 3) == edge_pair_class(0, 2));
    CHECK(edge_pair_class(0, 3) == edge_pair_class(2, 1));
}

TEST_CASE("bundled m004 parses") {
    auto m004 = fixtures::bundled("m004");
    CHECK(m004.size() == 2);
    CHECK(m004.has_cusp_rows());
    CHECK(m004.cusp_count() == 1);
    CHECK(m004.is_valid_manifold());
    CHECK(m004.is_oriented());
    const auto& link = m004.cusp_links()[0];
    CHECK(link.euler_characteristic == 0);
    CHECK(link.orientable);
    CHECK(link.triangles == 8);
}

TEST_CASE("every bundled file round-trips") {
    int files = 0;
    for (const auto& entry : fs::directory_iterator(fixtures::data_dir() + "/tri")) {
        std::string text = fixtures::slurp(entry.path().string());
        auto tri = parse_triangulation(text);
        std::string canon = serialize(tri);
        CHECK(serialize(parse_triangulation(canon)) == canon);
        CHECK(parse_triangulation(canon) == tri);
        ++files;
    }
    CHECK(files > 100);
}

TEST_CASE("parse errors") {
    const std::string good = "% TRI v1\ntets 1\n0: 0:1023 0:1023 0:0132 0:0132\n";
    CHECK_NOTHROW(parse_triangulation(good));

    // face 1 claims it is glued with 0132 but face 0 says 1023
    CHECK_THROWS_AS(parse_triangulation("% TRI v1\ntets 1\n0: 0:1023 0:0132 0:0132 0:0132\n"), InvolutionError);
    CHECK_THROWS_AS(parse_triangulation("% TRI v1\ntets 1\n0: 0:0123 0:1023 0:0132 0:0132\n"), SelfGluingError);
    CHECK_THROWS_AS(parse_triangulation("% TRI v1\ntets 2\n0: 0:1023 0:1023 0:0132 0:0132\n"), SyntaxError);
    CHECK_THROWS_AS(parse_triangulation("tets 1\n0: 0:1023 0:1023 0:0132 0:0132\n"), SyntaxError);
    CHECK_THROWS_AS(parse_triangulation("% TRI v1\ntets 1\n0: 0:1023 0:1023 0:0132 0:01x2\n"), Error);
}

TEST_CASE("unmatched back-gluing") {
    // an unmatched back-gluing is rejected at construction
    std::vector<std::array<Gluing, 4>> g(2);
    for (int f = 0; f < 4; ++f) {
        g[0][f] = {1, f, Perm4(0, 2, 1, 3)};
        g[1][f] = {0, f, Perm4(0, 2, 1, 3)};
    }
    g[1][3] = {0, 2, Perm4(0, 1, 3, 2)};
    CHECK_THROWS_AS(Triangulation{g}, InvolutionError);
}

TEST_CASE("edge classes") {
    auto m004 = fixtures::bundled("m004");
    REQUIRE(m004.edge_classes().size() == 2);
    for (const auto& e : m004.edge_classes()) CHECK(e.degree() == 6);

    auto l5a1 = fixtures::bundled("L5a1");
    CHECK(l5a1.size() == 4);
    CHECK(l5a1.edge_classes().size() == 4);

    // against an independent union-find over the gluings
    for (const auto& [name, tri] : fixtures::small_fixtures()) {
        if (name == "self-folded") continue;
        CAPTURE(name);
        auto c = brute::analyse(tri);
        CHECK(c.edges == static_cast<int>(tri.edge_classes().size()));
        int total = 0;
        std::map<int, int> lib_to_oracle;
        for (const auto& e : tri.edge_classes()) {
            total += e.degree();
            for (const auto& s : e.slots) {
                int lib = tri.edge_class(s.tet, s.v[0], s.v[1]);
                int ora = c.edge_class[s.tet][brute::pair_index(s.v[0], s.v[1])];
                auto [it, fresh] = lib_to_oracle.emplace(lib, ora);
                CHECK(it->second == ora);
            }
        }
        CHECK(total == 6 * tri.size());
        for (int t = 0; t < tri.size(); ++t)
            for (int f = 0; f < 4; ++f) {
                CHECK(tri.face_class(t, f) == c.face_class[t][f]);
                CHECK(tri.is_face_rep(t, f) == c.face_rep[t][f]);
            }
    }
}

TEST_CASE("degree identity on every bundled file") {
    for (const auto& entry : fs::directory_iterator(fixtures::data_dir() + "/tri")) {
        auto tri = load_triangulation(entry.path().string());
        int total = 0;
        for (const auto& e : tri.edge_classes()) total += e.degree();
        CHECK(total == 6 * tri.size());
        CHECK(tri.edge_classes().size() == static_cast<size_t>(tri.size()));
        CHECK(tri.is_valid_manifold());
    }
}

TEST_CASE("cusp counts") {
    CHECK(fixtures::bundled("L8n5").cusp_count() == 3);
    CHECK(fixtures::bundled("t12048").cusp_count() == 2);
    CHECK(fixtures::bundled("L5a1").cusp_count() == 2);
    CHECK(fixtures::bundled("m006").cusp_count() == 1);
    auto folded = fixtures::self_folded();
    CHECK_FALSE(folded.is_valid_manifold());
    CHECK_FALSE(folded.flag_reason().empty());
}

TEST_CASE("isomorphisms") {
    std::mt19937 rng(11);
    auto m004 = fixtures::bundled("m004");
    auto self = find_isomorphism(m004, m004);
    REQUIRE(self);
    CHECK(is_isomorphism(m004, m004, *self));

    for (const char* name : {"m004", "m006", "L5a1", "m129", "t12048"}) {
        auto tri = fixtures::bundled(name);
        for (int trial = 0; trial < 10; ++trial) {
            auto iso = fixtures::random_iso(tri.size(), rng);
            auto moved = relabel(tri, iso);
            CHECK(is_isomorphism(tri, moved, iso));
            auto found = find_isomorphism(tri, moved);
            REQUIRE(found);
            CHECK(is_isomorphism(tri, moved, *found));
            auto back = find_isomorphism(moved, tri);
            REQUIRE(back);
            CHECK(is_isomorphism(moved, tri, *back));
        }
    }
    CHECK_FALSE(find_isomorphism(m004, fixtures::bundled("m006")));
    CHECK_FALSE(find_isomorphism(m004, fixtures::bundled("m003")));
}

TEST_CASE("relabel keeps cusp rows only for even maps") {
    std::mt19937 rng(5);
    auto m004 = fixtures::bundled("m004");
    auto even = relabel(m004, fixtures::random_iso(2, rng, true));
    CHECK(even.has_cusp_rows());
    Isomorphism odd{{0, 1}, {Perm4(1, 0, 2, 3), Perm4()}};
    CHECK_FALSE(relabel(m004, odd).has_cusp_rows());
}

TEST_CASE("orienting") {
    Isomorphism odd{{0, 1}, {Perm4(1, 0, 2, 3), Perm4()}};
    auto mixed = relabel(fixtures::bundled("m004"), odd);
    CHECK_FALSE(mixed.is_oriented());
    CHECK(mixed.is_orientable());
    auto fixed = mixed.oriented();
    CHECK(fixed.is_oriented());
    CHECK(find_isomorphism(fixed, mixed));
}

TEST_CASE("isomorphism signatures") {
    auto fig8 = decode_isosig("cPcbbbiht");
    CHECK(fig8.size() == 2);
    CHECK(fig8.cusp_count() == 1);
    CHECK(find_isomorphism(fig8, fixtures::bundled("m004")));
    CHECK(encode_isosig(fixtures::bundled("m004")) == "cPcbbbiht");
    CHECK(encode_isosig(fixtures::bundled("m003")) == "cPcbbbdxm");

    CHECK_THROWS_AS(decode_isosig("cPcb*bbiht"), BadCharacter);
    CHECK_THROWS_AS(decode_isosig("cPcb"), TruncatedSignature);
    CHECK_THROWS_AS(load_triangulation("isosig:cP!cbbbiht"), BadCharacter);

    for (const auto& row : fixtures::veering_census()) {
        CAPTURE(row.isosig);
        auto tri = decode_isosig(row.isosig);
        CHECK(tri.size() == static_cast<int>(row.taut.size()));
        CHECK(encode_isosig(tri) == row.isosig);
    }
}

TEST_CASE("signatures of relabeled copies agree") {
    std::mt19937 rng(3);
    for (const char* name : {"m006", "m129", "L8n5"}) {
        auto tri = fixtures::bundled(name);
        auto sig = encode_isosig(tri);
        for (int trial = 0; trial < 5; ++trial)
            CHECK(encode_isosig(relabel(tri, fixtures::random_iso(tri.size(), rng))) == sig);
        auto lab = canonical_labeling(tri);
        CHECK(is_isomorphism(tri, decode_isosig(lab.sig), lab.iso));
    }
}
