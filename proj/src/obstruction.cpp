#include "foliar/obstruction.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "foliar/error.hpp"

namespace foliar {

std::string Literal::to_string() const { return "l" + std::to_string(cusp) + "=" + slope.to_string(); }

std::string Clause::to_string() const {
    std::string s;
    for (size_t i = 0; i < literals.size(); ++i) {
        if (i) s += " | ";
        s += literals[i].to_string();
    }
    return s + " ; from " + from;
}

namespace {

// disjunction over the cusps that `filling` fills
std::vector<Literal> filled_literals(const PartialFilling& filling) {
    std::vector<Literal> lits;
    for (size_t c = 0; c < filling.size(); ++c)
        if (filling[c]) lits.push_back({static_cast<int>(c), *filling[c]});
    std::sort(lits.begin(), lits.end());
    return lits;
}

}  // namespace

std::vector<Clause> clauses_from_facts(const std::string& name, const FactBase& facts, const NpfOracle& npf) {
    std::vector<Clause> out;
    for (const auto* f : facts.facts_for(name)) out.push_back({filled_literals(f->slopes), f->id()});
    for (const auto* u : facts.universals_for(name)) out.push_back({filled_literals(u->partial), u->id()});
    for (const auto* id : facts.identifications_for(name))
        if (npf(id->result)) out.push_back({filled_literals(id->partial), id->id()});
    return out;
}

SatResult clause_set_satisfiable(const std::vector<Clause>& clauses, int cusp_count) {
    // candidate values per cusp: every slope named for it, then "fresh"
    std::vector<std::vector<std::optional<Slope>>> candidates(cusp_count);
    for (const auto& cl : clauses)
        for (const auto& lit : cl.literals) {
            if (lit.cusp < 0 || lit.cusp >= cusp_count) throw InvalidInput("literal cusp out of range");
            auto& cand = candidates[lit.cusp];
            if (std::find(cand.begin(), cand.end(), std::optional<Slope>(lit.slope)) == cand.end()) cand.push_back(lit.slope);
        }
    for (auto& cand : candidates) {
        std::sort(cand.begin(), cand.end());
        cand.push_back(std::nullopt);
    }
    std::vector<std::optional<Slope>> assign(cusp_count);
    auto satisfied = [&](const Clause& cl) {
        return std::any_of(cl.literals.begin(), cl.literals.end(),
                           [&](const Literal& l) { return assign[l.cusp] && *assign[l.cusp] == l.slope; });
    };
    std::function<bool(int)> search = [&](int c) {
        if (c == cusp_count) return std::all_of(clauses.begin(), clauses.end(), satisfied);
        for (const auto& v : candidates[c]) {
            assign[c] = v;
            // prune: clauses whose cusps are all assigned must already hold
            bool dead = false;
            for (const auto& cl : clauses) {
                bool decided = std::all_of(cl.literals.begin(), cl.literals.end(), [&](const Literal& l) { return l.cusp <= c; });
                if (decided && !satisfied(cl)) {
                    dead = true;
                    break;
                }
            }
            if (!dead && search(c + 1)) return true;
        }
        assign[c] = std::nullopt;
        return false;
    };
    SatResult r;
    r.satisfiable = search(0);
    if (r.satisfiable) r.witness = assign;
    return r;
}

// ---------------------------------------------------------------------------
// Certificate text

std::string Certificate::to_text() const {
    std::vector<std::string> order;
    std::set<std::string> done;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        if (done.count(n)) return;
        done.insert(n);
        auto it = records.find(n);
        if (it == records.end()) return;
        for (const auto& u : it->second.uses) visit(u);
        order.push_back(n);
    };
    visit(target);
    std::ostringstream out;
    for (const auto& n : order) {
        const auto& r = records.at(n);
        out << "npf " << n << "\n";
        for (const auto& cl : r.clauses) out << "  clause " << cl.to_string() << "\n";
        for (const auto& u : r.uses) out << "  uses " << u << "\n";
    }
    return out.str();
}

namespace {

Literal parse_literal(const std::string& text, int line) {
    auto eq = text.find('=');
    if (text.size() < 4 || text[0] != 'l' || eq == std::string::npos) throw SyntaxError(line, "bad literal '" + text + "'");
    try {
        int cusp = std::stoi(text.substr(1, eq - 1));
        return {cusp, Slope::parse(text.substr(eq + 1))};
    } catch (const SyntaxError&) {
        throw;
    } catch (const std::exception&) {
        throw SyntaxError(line, "bad literal '" + text + "'");
    }
}

}  // namespace

Certificate parse_certificate(const std::string& text) {
    Certificate cert;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    CertificateRecord* cur = nullptr;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "npf") {
            std::string name;
            if (!(ls >> name)) throw SyntaxError(number, "npf needs a name");
            if (cert.records.count(name)) throw SyntaxError(number, "duplicate record for " + name);
            cur = &cert.records[name];
            cur->target = name;
            cert.target = name;
        } else if (kw == "clause") {
            if (!cur) throw SyntaxError(number, "clause outside a record");
            std::string rest;
            std::getline(ls, rest);
            auto semi = rest.find(';');
            if (semi == std::string::npos) throw SyntaxError(number, "clause without '; from'");
            std::istringstream lits(rest.substr(0, semi));
            std::istringstream tail(rest.substr(semi + 1));
            Clause cl;
            std::string tok;
            bool expect_lit = true;
            while (lits >> tok) {
                if (expect_lit) {
                    cl.literals.push_back(parse_literal(tok, number));
                } else if (tok != "|") {
                    throw SyntaxError(number, "expected '|' between literals");
                }
                expect_lit = !expect_lit;
            }
            if (cl.literals.empty() || expect_lit) throw SyntaxError(number, "malformed clause");
            std::string from;
            if (!(tail >> tok) || tok != "from" || !(tail >> from)) throw SyntaxError(number, "expected 'from <fact-id>'");
            cl.from = from;
            cur->clauses.push_back(std::move(cl));
        } else if (kw == "uses") {
            if (!cur) throw SyntaxError(number, "uses outside a record");
            std::string name;
            if (!(ls >> name)) throw SyntaxError(number, "uses needs a name");
            cur->uses.push_back(name);
        } else {
            throw SyntaxError(number, "unknown keyword '" + kw + "'");
        }
    }
    if (cert.records.empty()) throw SyntaxError(number + 1, "empty certificate");
    return cert;
}

// ---------------------------------------------------------------------------
// Engine

std::optional<CertificateRecord> NpfEngine::record(const std::string& name) {
    if (auto it = memo_.find(name); it != memo_.end()) return it->second;
    if (active_.count(name)) throw CyclicIdentification("identification facts cycle through " + name);
    auto cusps = facts_.cusp_count(name);
    if (!cusps) {
        memo_[name] = std::nullopt;
        return std::nullopt;
    }
    active_.insert(name);
    std::vector<Clause> clauses;
    try {
        clauses = clauses_from_facts(name, facts_, [&](const std::string& n) { return record(n).has_value(); });
    } catch (...) {
        active_.erase(name);
        throw;
    }
    active_.erase(name);

    std::optional<CertificateRecord> out;
    if (!clause_set_satisfiable(clauses, *cusps).satisfiable) {
        // greedy minimal core, so that every clause of a certificate matters
        for (size_t i = 0; i < clauses.size();) {
            auto trial = clauses;
            trial.erase(trial.begin() + static_cast<long>(i));
            if (!clause_set_satisfiable(trial, *cusps).satisfiable)
                clauses = std::move(trial);
            else
                ++i;
        }
        CertificateRecord rec{name, clauses, {}};
        for (const auto& cl : clauses)
            for (const auto* id : facts_.identifications_for(name))
                if (id->id() == cl.from && std::find(rec.uses.begin(), rec.uses.end(), id->result) == rec.uses.end())
                    rec.uses.push_back(id->result);
        out = std::move(rec);
    }
    memo_[name] = out;
    return out;
}

std::optional<Certificate> NpfEngine::certify(const std::string& name) {
    if (!record(name)) return std::nullopt;
    Certificate cert;
    cert.target = name;
    std::function<void(const std::string&)> collect = [&](const std::string& n) {
        if (cert.records.count(n)) return;
        cert.records[n] = *memo_.at(n);
        for (const auto& u : cert.records[n].uses) collect(u);
    };
    collect(name);
    return cert;
}

std::optional<Certificate> certify_npf(const std::string& name, const FactBase& facts) { return NpfEngine(facts).certify(name); }

// ---------------------------------------------------------------------------
// Verification

CertificateCheck verify_certificate(const Certificate& cert, const FactBase& facts) {
    std::map<std::string, int> state;  // 1 = in progress, 2 = verified
    std::function<CertificateCheck(const std::string&)> check = [&](const std::string& name) -> CertificateCheck {
        if (state[name] == 2) return {};
        if (state[name] == 1) return {false, "cyclic sub-certificates through " + name};
        auto it = cert.records.find(name);
        if (it == cert.records.end()) return {false, "missing record for " + name};
        const CertificateRecord& rec = it->second;
        if (rec.target != name) return {false, "record name mismatch for " + name};
        auto cusps = facts.cusp_count(name);
        if (!cusps) return {false, "unknown manifold " + name};
        state[name] = 1;
        for (const auto& u : rec.uses) {
            auto sub = check(u);
            if (!sub) return sub;
        }
        for (const auto& cl : rec.clauses) {
            if (!facts.has_fact(cl.from)) return {false, name + ": clause cites absent fact " + cl.from};
            std::optional<std::vector<Literal>> expect;
            for (const auto* f : facts.facts_for(name))
                if (f->id() == cl.from) expect = filled_literals(f->slopes);
            for (const auto* u : facts.universals_for(name))
                if (u->id() == cl.from) expect = filled_literals(u->partial);
            for (const auto* id : facts.identifications_for(name))
                if (id->id() == cl.from) {
                    if (std::find(rec.uses.begin(), rec.uses.end(), id->result) == rec.uses.end())
                        return {false, name + ": " + cl.from + " needs a sub-certificate for " + id->result};
                    expect = filled_literals(id->partial);
                }
            if (!expect) return {false, name + ": fact " + cl.from + " is not about " + name};
            if (*expect != cl.literals) return {false, name + ": clause does not follow from " + cl.from};
        }
        if (clause_set_satisfiable(rec.clauses, *cusps).satisfiable) return {false, name + ": clause set is satisfiable"};
        state[name] = 2;
        return {};
    };
    if (cert.records.empty()) return {false, "empty certificate"};
    return check(cert.target);
}

// ---------------------------------------------------------------------------

Verdict obstruct_manifold(const std::string& name, const Triangulation& tri, const FactBase& facts,
                          const SolverOptions& opts, double match_tol) {
    Verdict v;
    v.name = name;
    v.cohomology_dimension = static_cast<int>(z2_cohomology_basis(tri).size());
    NpfEngine engine(facts);
    for (auto& entry : enumerate_double_covers(tri, opts, match_tol)) {
        CoverVerdict cv;
        cv.masks = entry.masks;
        cv.fingerprint = entry.fingerprint;
        if (entry.fingerprint) cv.names = facts.resolve(*entry.fingerprint, match_tol);
        for (const auto& n : cv.names)
            if (auto cert = engine.certify(n)) {
                cv.certificate = std::move(cert);
                break;
            }
        v.covers.push_back(std::move(cv));
    }
    v.self_certificate = engine.certify(name);
    v.no_pA_flow_complement =
        !v.covers.empty() && std::all_of(v.covers.begin(), v.covers.end(), [](const CoverVerdict& c) { return c.npf(); });
    v.no_veering = v.no_pA_flow_complement;
    v.no_edge_orientable_veering = v.self_certificate.has_value() || v.no_veering;
    return v;
}

}  // namespace foliar
