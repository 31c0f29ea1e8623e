#include <algorithm>

#include "doctest.h"
#include "foliar/catalog.hpp"
#include "foliar/error.hpp"
#include "support.hpp"

using namespace foliar;

namespace {

const std::string kPrints =
    "name,cusps,volume,shapes,h1\n"
    "s649,1,5.13794120187,0.1+1.5i,Z/5+Z\n"
    "t12048,2,7.32772475342,0+1i;0+1i,Z/4+Z+Z\n"
    "s778,1,5.3334895669,0.5+1.3i,Z/12+Z\n";

const TriangulationStore& store() {
    static const TriangulationStore tris(fixtures::data_dir());
    return tris;
}

}  // namespace

TEST_CASE("slopes") {
    CHECK(Slope::parse("-3") == Slope::parse("-3/1"));
    CHECK(Slope::parse("2/-4") == Slope(-1, 2));
    CHECK(Slope::parse("inf") == Slope(1, 0));
    CHECK(Slope(-1, 0) == Slope(1, 0));
    CHECK(Slope(6, 3).to_string() == "2");
    CHECK(Slope(-2, 6).to_string() == "-1/3");
    CHECK_THROWS_AS(Slope(0, 0), InvalidInput);
    auto f = parse_filling("(*;1/2;2)");
    REQUIRE(f.size() == 3);
    CHECK_FALSE(f[0]);
    CHECK(*f[1] == Slope(1, 2));
    CHECK(to_string(f) == "(*;1/2;2)");
}

TEST_CASE("bundled data loads") {
    auto facts = load_catalog_dir(fixtures::data_dir());
    CHECK(facts.record("m004"));
    CHECK(facts.record("s649"));
    CHECK(facts.has_fact("nontaut:s649(-1/3)"));
    CHECK(facts.has_fact("nontaut:s649(-1/4)"));
    CHECK(facts.has_fact("ident:t12048(2;*)=s778"));
    CHECK(facts.has_fact("ident:L8n5(*;1/2;2)=m149"));
    CHECK(facts.has_fact("universal:L8n5(*;inf;*)"));
    CHECK(facts.has_fact("universal:L8n5(*;*;inf)"));
    CHECK(facts.has_fact("nontaut:m035(-2/3)"));
    CHECK(facts.has_fact("nontaut:m307(-1/4)"));
    CHECK(facts.cusp_count("L8n5") == 3);
    CHECK(facts.identifications().size() == 10);
    CHECK(facts.facts_for("s649").size() == 2);
    // cover homology attaches to the records
    REQUIRE(facts.record("m037"));
    CHECK(facts.record("m037")->fingerprint.cover_h1);
}

TEST_CASE("arity and names are checked") {
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"facts", "name,slopes,status\ns649,(1;2),non-taut\n"}}),
                    SlopeArityMismatch);
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"facts", "name,slopes,status\nm999,(1),non-taut\n"}}),
                    DanglingName);
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"ids", "base,partial,result\nt12048,(2;3),s778\n"}}), ParseError);
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"ids", "base,partial,result\nt12048,(*;*),s778\n"}}),
                    SlopeArityMismatch);
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"facts", "name,slopes\ns649,(1)\n"}}), ParseError);
    CHECK_THROWS_AS(parse_catalog({{"fp", kPrints}, {"facts", "name,slopes,status\ns649,(1),maybe\n"}}), ParseError);
    CHECK_THROWS_AS(parse_catalog({{"fp", "name,cusps,volume,shapes,h1\ns649,2,5.1,0+1i,Z\n"}}), ParseError);
    CHECK_THROWS_AS(parse_catalog({{"x", "what,is,this\n"}}), ParseError);
}

TEST_CASE("empty input") {
    CHECK(parse_catalog({}).empty());
    CHECK(parse_catalog({{"a", ""}, {"b", "# nothing\n"}}).empty());
    CHECK(parse_catalog({{"fp", "name,cusps,volume,shapes,h1\n"}, {"f", "name,slopes,status\n"}}).empty());
}

TEST_CASE("loading is idempotent and order independent") {
    const std::string facts = "name,slopes,status\ns649,(-1/3),non-taut\ns649,(-1/4),non-taut\n";
    const std::string ids = "base,partial,result\nt12048,(2;*),s778\n";
    auto a = parse_catalog({{"fp", kPrints}, {"f", facts}, {"i", ids}});
    auto b = parse_catalog({{"i", ids}, {"f", facts}, {"fp", kPrints}, {"f", facts}});
    CHECK(a.facts() == b.facts());
    CHECK(a.identifications() == b.identifications());
    CHECK(a.records().size() == b.records().size());
    auto c = parse_catalog({{"fp", kPrints}, {"f", "name,slopes,status\ns649,(-1/4),non-taut\ns649,(-1/3),non-taut\n"}});
    CHECK(a.facts() == c.facts());
    // integer spellings normalize
    auto d = parse_catalog({{"fp", kPrints}, {"f", "name,slopes,status\ns649,(-1/3),non-taut\ns649,(-1/4),non-taut\ns649,(-3),non-taut\n"}});
    auto e = parse_catalog({{"fp", kPrints}, {"f", "name,slopes,status\ns649,(-1/3),non-taut\ns649,(-1/4),non-taut\ns649,(-3/1),non-taut\n"}});
    CHECK(d.facts() == e.facts());
}

TEST_CASE("identifications") {
    auto facts = load_catalog_dir(fixtures::data_dir());
    for (const auto& id : facts.identifications()) {
        CAPTURE(id.id());
        auto r = verify_identification(id, facts, store());
        CHECK(r.status == IdentificationReport::Status::Pass);
    }

    IdentificationFact s778{"t12048", {Slope(2, 1), std::nullopt}, "s778"};
    CHECK(verify_identification(s778, facts, store()).status == IdentificationReport::Status::Pass);
    IdentificationFact t07936{"t12048", {Slope(3, 1), std::nullopt}, "t07936"};
    CHECK(verify_identification(t07936, facts, store()).status == IdentificationReport::Status::Pass);

    IdentificationFact wrong = s778;
    wrong.result = "m035";
    CHECK(verify_identification(wrong, facts, store()).status == IdentificationReport::Status::Fail);
    wrong.result = "t07936";
    CHECK(verify_identification(wrong, facts, store()).status == IdentificationReport::Status::Fail);
}

TEST_CASE("triangulation store") {
    CHECK(store().has("m006"));
    CHECK_FALSE(store().has("nope"));
    CHECK(store().get("m006").size() == 3);
    CHECK(&store().get("m006") == &store().get("m006"));
    CHECK_THROWS_AS(store().get("nope"), MissingTriangulation);
}

TEST_CASE("fact subsets") {
    auto facts = load_catalog_dir(fixtures::data_dir());
    std::vector<bool> keep(facts.fact_count(), false);
    auto none = facts.subset(keep);
    CHECK(none.fact_count() == 0);
    CHECK(none.records().size() == facts.records().size());
    std::fill(keep.begin(), keep.end(), true);
    CHECK(facts.subset(keep).fact_count() == facts.fact_count());
    keep.pop_back();
    CHECK_THROWS_AS(facts.subset(keep), InvalidInput);
}
