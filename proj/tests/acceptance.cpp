// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "brute_force.hpp"
#include "foliar/cli.hpp"
#include "foliar/obstruction.hpp"
#include "foliar/veering.hpp"
#include "support.hpp"

using namespace foliar;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const FactBase& facts() {
    static const FactBase f = load_catalog_dir(fixtures::data_dir());
    return f;
}

std::set<std::string> resolved(const std::vector<CoverEntry>& covers) {
    std::set<std::string> out;
    for (const auto& c : covers)
        if (c.fingerprint)
            for (const auto& n : facts().resolve(*c.fingerprint)) out.insert(n);
    return out;
}

Outcome veering_controls() {
    Outcome o;
    auto t0 = Clock::now();
    auto rows = fixtures::veering_census();
    int passed = 0;
    for (const auto& name : fixtures::veering_names()) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.name == name; });
        o.require(it != rows.end(), name + " has no bundled veering triangulation");
        if (it == rows.end()) continue;
        auto tri = decode_isosig(it->isosig);
        auto vs = find_veering(tri);
        o.require(vs.has_value(), name + ": no veering structure found");
        if (!vs) continue;
        auto report = verify_veering(tri, *vs);
        o.require(static_cast<bool>(report), name + ": " + report.to_string());
        passed += static_cast<bool>(report);
    }
    double dt = seconds_since(t0);
    o.require(dt < 60, "took " + std::to_string(dt) + " s");
    if (o.ok) o.detail = std::to_string(passed) + "/20 verified in " + std::to_string(dt) + " s";
    return o;
}

Outcome obstruction_table() {
    Outcome o;
    auto t0 = Clock::now();
    auto entries = load_manifest(fixtures::data_dir() + "/census100.txt");
    o.require(entries.size() == 100, "manifest has " + std::to_string(entries.size()) + " entries");
    BatchOptions opts;
    opts.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto verdicts = obstruct_batch(entries, facts(), opts);
    auto names = certified_names(verdicts, facts());
    o.require(names == fixtures::obstructed_names(), "certified names differ from the expected 19");
    for (const auto& v : verdicts) {
        if (!v.no_veering) continue;
        for (const auto& c : v.covers) {
            o.require(c.certificate.has_value(), v.name + ": cover without certificate");
            if (c.certificate) o.require(static_cast<bool>(verify_certificate(*c.certificate, facts())),
                                         v.name + ": cover certificate fails verification");
        }
    }
    double dt = seconds_since(t0);
    o.require(dt < 600, "took " + std::to_string(dt) + " s");
    if (o.ok) o.detail = std::to_string(names.size()) + " names certified in " + std::to_string(dt) + " s";
    return o;
}

Outcome m006_pipeline() {
    Outcome o;
    auto m006 = fixtures::bundled("m006");
    o.require(z2_cohomology_basis(m006).size() == 1, "H^1 dimension is not 1");
    auto covers = enumerate_double_covers(m006);
    o.require(covers.size() == 1, "expected one cover");
    if (!o.ok) return o;
    const auto& fp = covers[0].fingerprint;
    o.require(fp.has_value(), "cover has no fingerprint");
    if (!fp) return o;
    double base = fingerprint(m006).volume;
    o.require(std::abs(fp->volume - 2 * base) < 1e-8, "cover volume is not twice the base volume");
    o.require(fp->matches(facts().record("s649")->fingerprint, 1e-6), "cover does not match s649");
    auto cert = certify_npf("s649", facts());
    o.require(cert.has_value(), "s649 not certified");
    if (!cert) return o;
    std::set<std::string> clauses;
    for (const auto& c : cert->root().clauses) {
        std::string s;
        for (const auto& l : c.literals) s += l.to_string() + " ";
        clauses.insert(s);
    }
    o.require(clauses == std::set<std::string>{"l0=-1/3 ", "l0=-1/4 "}, "unexpected clauses");
    o.require(static_cast<bool>(verify_certificate(*cert, facts())), "certificate fails verification");
    if (o.ok) o.detail = "cover s649, clauses {l=-1/3},{l=-1/4}";
    return o;
}

Outcome whitehead_pipeline() {
    Outcome o;
    auto l5a1 = fixtures::bundled("L5a1");
    o.require(z2_cohomology_basis(l5a1).size() == 2, "H^1 dimension is not 2");
    auto covers = enumerate_double_covers(l5a1);
    o.require(covers.size() == 2, "expected 2 fingerprint-distinct covers");
    int classes = 0;
    for (const auto& c : covers) classes += c.multiplicity();
    o.require(classes == 3, "expected 3 cohomology classes");
    auto names = resolved(covers);
    o.require(names.count("L8n5") && names.count("t12048"), "covers do not match L8n5 and t12048");

    TriangulationStore store(fixtures::data_dir());
    for (const char* id : {"ident:t12048(2;*)=s778", "ident:t12048(3;*)=t07936", "ident:L8n5(*;1/2;2)=m149"}) {
        auto it = std::find_if(facts().identifications().begin(), facts().identifications().end(),
                               [&](const auto& f) { return f.id() == id; });
        o.require(it != facts().identifications().end(), std::string(id) + " missing");
        if (it == facts().identifications().end()) continue;
        auto r = verify_identification(*it, facts(), store);
        o.require(r.status == IdentificationReport::Status::Pass, std::string(id) + ": " + r.status_text());
    }
    auto verdict = obstruct_manifold("L5a1", l5a1, facts());
    o.require(verdict.no_veering, "L5a1 not certified");
    if (o.ok) o.detail = "3 classes, 2 covers, 3 identifications, no veering";
    return o;
}

// Clausen function by its Bernoulli expansion.
double clausen2(double theta) {
    const int N = 60;
    std::vector<long double> B(N + 1, 0);
    B[0] = 1;
    for (int m = 1; m <= N; ++m) {
        long double s = 0, binom = 1;
        for (int k = 0; k < m; ++k) {
            s += binom * B[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        B[m] = -s / (m + 1);
    }
    long double t = theta, sum = t - t * std::log(std::fabs(t)), fact = 1, power = t;
    for (int k = 1; 2 * k <= N; ++k) {
        fact *= (2 * k) * (2 * k + 1);
        power *= t * t;
        sum += std::fabs(B[2 * k]) / (2 * k * fact) * power;
    }
    return static_cast<double>(sum);
}

double catalan() {
    long double s = 0, binom = 1;
    for (int k = 0; k < 40; ++k) {
        s += 1.0L / ((2 * k + 1) * (long double)(2 * k + 1) * binom);
        binom = binom * (2 * k + 1) * (2 * k + 2) / ((k + 1) * (long double)(k + 1));
    }
    return static_cast<double>(std::numbers::pi / 8 * std::log(2 + std::sqrt(3.0L)) + 3.0L / 8 * s);
}

Outcome numeric_kernel() {
    Outcome o;
    auto z = solve_shapes(assemble_system(fixtures::bundled("m004")), {});
    const Complex w = std::polar(1.0, std::numbers::pi / 3);
    for (const auto& s : z) o.require(std::abs(s - w) < 1e-10, "m004 shape is not exp(i pi/3)");
    double v = volume(z);
    o.require(std::abs(v - 2 * clausen2(std::numbers::pi / 3)) < 1e-9, "m004 volume disagrees with series oracle");
    o.require(std::abs(v - 2.029883212819) < 1e-9, "m004 volume is not 2.029883212819");
    double wv = volume(solve_shapes(assemble_system(fixtures::bundled("L5a1")), {}));
    o.require(std::abs(wv - 4 * catalan()) < 1e-9, "L5a1 volume disagrees with 4 Catalan");
    o.require(std::abs(wv - 3.663862376709) < 1e-9, "L5a1 volume is not 3.663862376709");
    if (o.ok) {
        std::ostringstream s;
        s.precision(12);
        s << "vol(m004) = " << v << ", vol(L5a1) = " << wv;
        o.detail = s.str();
    }
    return o;
}

Outcome brute_force_equivalence() {
    Outcome o;
    std::map<int, Chirality> label;  // oracle handedness -> chirality
    int fixtures_checked = 0;
    for (const auto& [name, tri] : fixtures::small_fixtures()) {
        auto c = brute::analyse(tri);
        auto taut = brute::taut_structures(c);
        std::vector<Coorientation> expected;
        for (const auto& bits : taut) expected.push_back({bits});
        o.require(search_transverse_taut(tri) == expected, name + ": taut structures differ");
        ++fixtures_checked;
        if (!tri.is_valid_manifold()) continue;

        std::vector<int> emap(tri.edge_classes().size());
        for (int t = 0; t < tri.size(); ++t)
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) emap[tri.edge_class(t, a, b)] = c.edge_class[t][brute::pair_index(a, b)];
        auto to_oracle = [&](const EdgeColoring& col) {
            std::vector<std::uint8_t> out(col.colors.size());
            for (size_t e = 0; e < col.colors.size(); ++e) out[emap[e]] = col.colors[e] == Color::Red;
            return out;
        };

        auto table = brute::veering_structures(c);
        auto all = all_veering(tri);
        o.require(all.size() == table.size(), name + ": structure count differs");
        for (const auto& vs : all) {
            bool placed = false;
            for (int h : {1, -1}) {
                auto it = table.find({vs.coorientation.bits, h});
                if (it == table.end() || !it->second.count(to_oracle(vs.coloring))) continue;
                auto [known, fresh] = label.emplace(h, vs.chirality);
                o.require(known->second == vs.chirality, name + ": inconsistent chirality");
                placed = true;
            }
            o.require(placed, name + ": structure unknown to the oracle");
        }
        // first structure in (coorientation, R before L) order
        std::optional<std::pair<std::vector<std::uint8_t>, Chirality>> first;
        for (const auto& bits : taut) {
            for (Chirality ch : {Chirality::R, Chirality::L})
                for (const auto& [h, l] : label)
                    if (l == ch && table.count({bits, h}) && !first) first = {bits, ch};
            if (first) break;
        }
        auto found = find_veering(tri);
        o.require(found.has_value() == !table.empty(), name + ": find_veering disagrees on existence");
        if (found && first)
            o.require(found->coorientation.bits == first->first && found->chirality == first->second,
                      name + ": find_veering is not the first structure");
    }
    o.require(label.size() == 2, "chirality labels not both exercised");
    if (o.ok) o.detail = std::to_string(fixtures_checked) + " fixtures with <= 3 tetrahedra";
    return o;
}

Outcome certificate_soundness() {
    Outcome o;
    std::vector<Certificate> valid;
    for (const char* n : {"s649", "L8n5", "v3222", "t12048", "t12066", "m035", "m307", "s778", "m149", "t07936"})
        if (auto c = certify_npf(n, facts())) valid.push_back(*c);
    o.require(valid.size() >= 6, "too few certificates to tamper with");
    for (const auto& c : valid) o.require(static_cast<bool>(verify_certificate(c, facts())), c.target + " fails verification");

    std::mt19937 rng(7);
    int rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto cert = valid[rng() % valid.size()];
        std::vector<std::string> names;
        for (const auto& [n, r] : cert.records) names.push_back(n);
        auto& rec = cert.records.at(names[rng() % names.size()]);
        size_t k = rng() % rec.clauses.size();
        auto& clause = rec.clauses[k];
        if (trial % 3 == 0) {
            rec.clauses.erase(rec.clauses.begin() + static_cast<long>(k));
        } else if (trial % 3 == 1) {
            auto& l = clause.literals[rng() % clause.literals.size()];
            l.slope = Slope(l.slope.p() + 1 + static_cast<long>(rng() % 5), l.slope.q() == 0 ? 1 : l.slope.q());
        } else {
            clause.from = "nontaut:" + cert.target + "(" + std::to_string(100 + trial) + ")";
        }
        rejected += !verify_certificate(cert, facts());
    }
    o.require(rejected == 100, std::to_string(100 - rejected) + " tampered certificates accepted");

    std::vector<std::string> names;
    for (const auto& r : facts().records()) names.push_back(r.name);
    int violations = 0;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<bool> small(facts().fact_count()), large(facts().fact_count());
        for (size_t i = 0; i < small.size(); ++i) {
            small[i] = rng() % 2;
            large[i] = small[i] || rng() % 2;
        }
        auto a = facts().subset(small), b = facts().subset(large);
        NpfEngine ea(a), eb(b);
        for (const auto& n : names)
            if (ea.is_npf(n) && !eb.is_npf(n)) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " monotonicity violations");
    if (o.ok) o.detail = "100/100 tamperings rejected, 30 subset pairs monotone";
    return o;
}

Outcome negative_control() {
    Outcome o;
    auto v = obstruct_manifold("m004", fixtures::bundled("m004"), facts());
    o.require(!v.no_veering && !v.no_pA_flow_complement, "m004 was certified");
    o.require(v.status() == "unknown", "status is " + v.status());
    if (o.ok) o.detail = "m004 unknown";
    return o;
}

Outcome edge_orientability() {
    Outcome o;
    auto rows = fixtures::veering_census();
    auto m003 = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.name == "m003"; });
    o.require(m003 != rows.end(), "m003 missing from the veering census");
    if (m003 == rows.end()) return o;
    o.require(!m003->edge_orientable, "bundled flag says m003 is edge-orientable");
    auto tri = decode_isosig(m003->isosig);
    auto all = all_veering(tri);
    o.require(!all.empty(), "m003 has no veering structure");
    for (const auto& vs : all) o.require(!is_edge_orientable(tri, vs), "m003 flagged edge-orientable");

    int sampled = 0, eo = 0;
    for (const auto& r : rows) {
        auto t = decode_isosig(r.isosig);
        auto vs = find_veering(t);
        o.require(vs.has_value(), r.name + ": no veering structure");
        if (!vs) continue;
        o.require(is_edge_orientable(t, *vs) == r.edge_orientable, r.name + ": flag mismatch");
        ++sampled;
        eo += r.edge_orientable;
    }
    if (o.ok) o.detail = "m003 not edge-orientable; " + std::to_string(sampled) + " census entries match (" +
                         std::to_string(eo) + " edge-orientable)";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"veering positive controls", veering_controls},
        {"obstruction table", obstruction_table},
        {"m006 pipeline", m006_pipeline},
        {"Whitehead pipeline", whitehead_pipeline},
        {"numeric kernel", numeric_kernel},
        {"brute-force equivalence", brute_force_equivalence},
        {"certificate soundness", certificate_soundness},
        {"negative control", negative_control},
        {"edge-orientability consistency", edge_orientability},
    };
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.ok;
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << "\n";
    }
    return failures ? 1 : 0;
}
