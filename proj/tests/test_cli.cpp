#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "foliar/cli.hpp"
#include "support.hpp"

using namespace foliar;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.push_back("--data");
    args.push_back(fixtures::data_dir());
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "foliar_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"veering"}).code == 2);
    CHECK(run_cli({"veering", "search", "no/such/file.tri"}).code == 2);
    CHECK(run_cli({"veering", "search", "isosig:c*cbbbiht"}).code == 2);
    CHECK(run_cli({"geom", "solve", "m004", "--tol-solver", "-1"}).code == 2);
    CHECK(run_cli({"obstruct", "report", "--range", "no-such-range"}).code == 2);
    auto r = run_cli({"obstruct", "certify"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("tri validate") {
    auto good = run_cli({"tri", "validate", fixtures::data_dir() + "/tri/m004.tri", "isosig:cPcbbbdxm"});
    CHECK(good.code == 0);
    auto bad = scratch("bad.tri");
    std::ofstream(bad) << "% TRI v1\ntets 1\n0: 0:1023 0:0132 0:0132 0:0132\n";
    CHECK(run_cli({"tri", "validate", bad.string()}).code == 2);
    auto folded = scratch("folded.tri");
    std::ofstream(folded) << serialize(fixtures::self_folded());
    CHECK(run_cli({"tri", "validate", folded.string()}).code == 1);
}

TEST_CASE("veering commands") {
    auto r = run_cli({"veering", "search", "isosig:cPcbbbiht"});
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
    CHECK(run_cli({"veering", "search", "m006"}).code == 1);

    auto all = run_cli({"veering", "search", "m004", "--all"});
    CHECK(all.code == 0);
    std::istringstream lines(all.out);
    std::string first;
    std::getline(lines, first);
    auto check = run_cli({"veering", "check", "m004", first});
    CHECK(check.code == 0);
    std::string broken = first;
    broken[broken.size() - 1] = broken.back() == 'R' ? 'L' : 'R';
    CHECK(run_cli({"veering", "check", "m004", broken}).code == 1);

    CHECK(run_cli({"veering", "edge-orientable", "isosig:cPcbbbdxm"}).code == 1);
    CHECK(run_cli({"veering", "edge-orientable", "isosig:cPcbbbiht"}).code == 0);
}

TEST_CASE("covers and geometry") {
    auto dir = scratch("export");
    fs::remove_all(dir);
    auto r = run_cli({"covers", "list", "m006", "--export", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("s649") != std::string::npos);
    CHECK(fs::exists(dir / "cover0.tri"));
    CHECK(fs::exists(dir / "cover0.proj"));
    CHECK(load_triangulation((dir / "cover0.tri").string()).size() == 6);

    auto vol = run_cli({"geom", "volume", "m004"});
    CHECK(vol.code == 0);
    CHECK(vol.out.find("2.02988321") != std::string::npos);
    auto fp = run_cli({"geom", "fingerprint", "m004"});
    CHECK(fp.out.rfind("m004,1,2.02988321282,0.000000000000+3.464101615138i,Z\n", 0) == 0);
    CHECK(fp.out.find("matches: m004") != std::string::npos);
    auto filled = run_cli({"geom", "fingerprint", "t12048", "--fill", "(2;*)"});
    CHECK(filled.code == 0);
    CHECK(filled.out.find("s778") != std::string::npos);
    CHECK(run_cli({"geom", "solve", "m004", "--fill", "(0)"}).code == 1);
    CHECK(run_cli({"geom", "solve", "m004", "--fill", "(1;2)"}).code == 2);
}

TEST_CASE("catalog and obstruction commands") {
    auto ids = run_cli({"catalog", "verify-idents"});
    CHECK(ids.code == 0);

    auto cert = scratch("m006.cert");
    auto m006 = run_cli({"obstruct", "certify", "m006", "--out", cert.string()});
    CHECK(m006.code == 0);
    CHECK(m006.out.find("s649") != std::string::npos);
    CHECK(m006.out.find("l0=-1/3") != std::string::npos);
    CHECK(m006.out.find("l0=-1/4") != std::string::npos);
    CHECK(run_cli({"obstruct", "verify", cert.string()}).code == 0);

    std::string text = fixtures::slurp(cert.string());
    auto cut = text.rfind("  clause");
    REQUIRE(cut != std::string::npos);
    auto tampered = scratch("tampered.cert");
    std::ofstream(tampered) << text.substr(0, cut);
    CHECK(run_cli({"obstruct", "verify", tampered.string()}).code == 1);

    CHECK(run_cli({"obstruct", "certify", "m004"}).code == 1);
    CHECK(run_cli({"obstruct", "certify", "x999"}).code == 2);
}

TEST_CASE("output is deterministic") {
    for (std::vector<std::string> args : {std::vector<std::string>{"obstruct", "certify", "m129"},
                                          std::vector<std::string>{"covers", "list", "L5a1"},
                                          std::vector<std::string>{"veering", "search", "m009", "--all"}}) {
        auto a = run_cli(args), b = run_cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
    auto manifest = scratch("small.txt");
    std::ofstream(manifest) << "m004 " << fixtures::data_dir() << "/tri/m004.tri\n"
                            << "m006 " << fixtures::data_dir() << "/tri/m006.tri\n"
                            << "m129 " << fixtures::data_dir() << "/tri/m129.tri\n";
    auto one = run_cli({"obstruct", "report", "--range", manifest.string(), "--jobs", "1"});
    auto four = run_cli({"obstruct", "report", "--range", manifest.string(), "--jobs", "4"});
    CHECK(one.out == four.out);
    auto csv = run_cli({"obstruct", "report", "--range", manifest.string(), "--format", "csv"});
    CHECK(csv.out.rfind("name,classes,covers,no_pA_flow_complement,no_veering,no_edge_orientable_veering\n", 0) == 0);
}
