#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "foliar/geometry.hpp"
#include "foliar/slope.hpp"
#include "foliar/triangulation.hpp"

namespace foliar {

struct ManifoldRecord {
    std::string name;
    Fingerprint fingerprint;
};

/// A full filling of `name` known not to admit a coorientable taut foliation.
struct FillingFact {
    std::string name;
    PartialFilling slopes;  // every entry set
    std::string status = "non-taut";

    std::string id() const;  // "nontaut:s649(-1/3)"
    auto operator<=>(const FillingFact&) const = default;
};

/// base(partial) is homeomorphic to result.
struct IdentificationFact {
    std::string base;
    PartialFilling partial;  // at least one hole
    std::string result;

    std::string id() const;  // "ident:t12048(2;*)=s778"
    int holes() const;
    auto operator<=>(const IdentificationFact&) const = default;
};

/// Every completion of base(partial) is non-taut.
struct UniversalFact {
    std::string base;
    PartialFilling partial;
    std::string justification;

    std::string id() const;  // "universal:L8n5(*;inf;*)"
    auto operator<=>(const UniversalFact&) const = default;
};

/// Ingested data; immutable after loading. Facts are kept sorted by id and
/// deduplicated, so loading is order-independent and idempotent.
class FactBase {
public:
    const std::vector<ManifoldRecord>& records() const { return records_; }
    const std::vector<FillingFact>& facts() const { return facts_; }
    const std::vector<IdentificationFact>& identifications() const { return idents_; }
    const std::vector<UniversalFact>& universals() const { return universals_; }

    const ManifoldRecord* record(const std::string& name) const;
    std::optional<int> cusp_count(const std::string& name) const;

    /// Names whose fingerprint matches `fp`, in record order.
    std::vector<std::string> resolve(const Fingerprint& fp, double tol = 1e-6) const;

    bool has_fact(const std::string& id) const;
    std::vector<const FillingFact*> facts_for(const std::string& name) const;
    std::vector<const IdentificationFact*> identifications_for(const std::string& base) const;
    std::vector<const UniversalFact*> universals_for(const std::string& base) const;

    bool empty() const { return records_.empty() && facts_.empty() && idents_.empty() && universals_.empty(); }

    /// Copy keeping only the facts selected by `keep` (one flag per fact of
    /// every kind, in facts, identifications, universals order).
    FactBase subset(const std::vector<bool>& keep) const;
    size_t fact_count() const { return facts_.size() + idents_.size() + universals_.size(); }

private:
    friend FactBase load_catalog(const std::vector<std::string>& paths);
    friend FactBase parse_catalog(const std::vector<std::pair<std::string, std::string>>& files);
    void finish();

    std::vector<ManifoldRecord> records_;
    std::vector<FillingFact> facts_;
    std::vector<IdentificationFact> idents_;
    std::vector<UniversalFact> universals_;
};

/// Reads any of fingerprints.csv, facts.csv, idents.csv and universal.csv;
/// each file's kind is recognised by its header row. Throws ParseError,
/// DanglingName or SlopeArityMismatch.
FactBase load_catalog(const std::vector<std::string>& paths);

/// Same, from (file label, contents) pairs.
FactBase parse_catalog(const std::vector<std::pair<std::string, std::string>>& files);

/// The four standard files under `dir` (missing ones are skipped).
FactBase load_catalog_dir(const std::string& dir);

/// Triangulations `<dir>/tri/<name>.tri`, loaded on demand and cached.
class TriangulationStore {
public:
    explicit TriangulationStore(std::string data_dir) : dir_(std::move(data_dir)) {}
    bool has(const std::string& name) const;
    /// Throws MissingTriangulation.
    const Triangulation& get(const std::string& name) const;
    std::string path(const std::string& name) const;

private:
    std::string dir_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<Triangulation>> cache_;
};

struct IdentificationReport {
    enum class Status { Pass, Fail, NonGeometric } status = Status::Fail;
    std::optional<Fingerprint> computed;
    std::string detail;

    std::string status_text() const;
};

IdentificationReport verify_identification(const IdentificationFact& f, const FactBase& base,
                                           const TriangulationStore& tris, const SolverOptions& opts = {},
                                           double tol = 1e-6);

}  // namespace foliar
