#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foliar/catalog.hpp"
#include "foliar/covers.hpp"

namespace foliar {

/// "the exceptional slope of cusp `cusp` is `slope`"
struct Literal {
    int cusp = 0;
    Slope slope{1, 0};

    auto operator<=>(const Literal&) const = default;
    std::string to_string() const;  // "l0=-1/3"
};

struct Clause {
    std::vector<Literal> literals;  // sorted, distinct
    std::string from;               // id of the fact that produced it

    bool operator==(const Clause&) const = default;
    std::string to_string() const;  // "l0=-1/3 | l1=2 ; from <id>"
};

/// Whether `name` is known to be not persistently foliar.
using NpfOracle = std::function<bool(const std::string&)>;

/// (i) a non-taut full filling gives the disjunction over all cusps;
/// (ii) a universal fact and (iii) an identification whose result the
/// oracle calls NPF give the disjunction over the filled cusps.
std::vector<Clause> clauses_from_facts(const std::string& name, const FactBase& facts, const NpfOracle& npf);

struct SatResult {
    bool satisfiable = true;
    /// One slope per cusp when satisfiable; nullopt = a slope used nowhere.
    std::vector<std::optional<Slope>> witness;
};

/// Enumerates, per cusp, the slopes occurring in the clauses plus one fresh
/// symbol.
SatResult clause_set_satisfiable(const std::vector<Clause>& clauses, int cusp_count);

/// One `npf <name>` record of a certificate file.
struct CertificateRecord {
    std::string target;
    std::vector<Clause> clauses;
    std::vector<std::string> uses;

    bool operator==(const CertificateRecord&) const = default;
};

/// NPF proof for `target`; `records` holds the target's record and those of
/// every manifold it reaches through identifications.
struct Certificate {
    std::string target;
    std::map<std::string, CertificateRecord> records;

    const CertificateRecord& root() const { return records.at(target); }
    /// Records in dependency order (sub-certificates first), target last.
    std::string to_text() const;
    bool operator==(const Certificate&) const = default;
};

/// Parses the text form; the target is the last record. Throws SyntaxError.
Certificate parse_certificate(const std::string& text);

/// Memoized NPF search over a fact base.
class NpfEngine {
public:
    explicit NpfEngine(const FactBase& facts) : facts_(facts) {}

    /// Throws CyclicIdentification on malformed data.
    std::optional<Certificate> certify(const std::string& name);
    bool is_npf(const std::string& name) { return certify(name).has_value(); }

private:
    std::optional<CertificateRecord> record(const std::string& name);

    const FactBase& facts_;
    std::map<std::string, std::optional<CertificateRecord>> memo_;
    std::set<std::string> active_;
};

std::optional<Certificate> certify_npf(const std::string& name, const FactBase& facts);

struct CertificateCheck {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Independent re-derivation: every clause must come from a fact present in
/// `facts` by the rules above, every cited NPF result must have its own
/// verifying record, and the clause set must be unsatisfiable.
CertificateCheck verify_certificate(const Certificate& cert, const FactBase& facts);

struct CoverVerdict {
    std::vector<std::uint64_t> masks;
    std::optional<Fingerprint> fingerprint;
    std::vector<std::string> names;  // catalog names with a matching fingerprint
    std::optional<Certificate> certificate;
    bool npf() const { return certificate.has_value(); }
};

struct Verdict {
    std::string name;
    int cohomology_dimension = 0;
    std::vector<CoverVerdict> covers;
    std::optional<Certificate> self_certificate;
    bool no_pA_flow_complement = false;
    bool no_veering = false;
    bool no_edge_orientable_veering = false;

    /// "no veering" when certified, "unknown" otherwise.
    std::string status() const { return no_veering ? "certified" : "unknown"; }
};

/// Enumerates double covers, resolves them to catalog names by fingerprint
/// and certifies each. Unresolved or uncertified covers leave the verdict
/// unknown.
Verdict obstruct_manifold(const std::string& name, const Triangulation& tri, const FactBase& facts,
                          const SolverOptions& opts = {}, double match_tol = 1e-6);

}  // namespace foliar
