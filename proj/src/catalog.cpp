#include "foliar/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "foliar/error.hpp"

namespace foliar {

std::string FillingFact::id() const { return "nontaut:" + name + to_string(slopes); }

std::string IdentificationFact::id() const { return "ident:" + base + to_string(partial) + "=" + result; }

int IdentificationFact::holes() const {
    return static_cast<int>(std::count_if(partial.begin(), partial.end(), [](const auto& s) { return !s; }));
}

std::string UniversalFact::id() const { return "universal:" + base + to_string(partial); }

std::string IdentificationReport::status_text() const {
    switch (status) {
        case Status::Pass:
            return "pass";
        case Status::Fail:
            return "fail";
        case Status::NonGeometric:
            return "nongeometric";
    }
    return "fail";
}

// ---------------------------------------------------------------------------

const ManifoldRecord* FactBase::record(const std::string& name) const {
    for (const auto& r : records_)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<int> FactBase::cusp_count(const std::string& name) const {
    if (const auto* r = record(name)) return r->fingerprint.cusps;
    return std::nullopt;
}

std::vector<std::string> FactBase::resolve(const Fingerprint& fp, double tol) const {
    std::vector<std::string> out;
    for (const auto& r : records_)
        if (r.fingerprint.matches(fp, tol)) out.push_back(r.name);
    return out;
}

bool FactBase::has_fact(const std::string& id) const {
    for (const auto& f : facts_)
        if (f.id() == id) return true;
    for (const auto& f : idents_)
        if (f.id() == id) return true;
    for (const auto& f : universals_)
        if (f.id() == id) return true;
    return false;
}

std::vector<const FillingFact*> FactBase::facts_for(const std::string& name) const {
    std::vector<const FillingFact*> out;
    for (const auto& f : facts_)
        if (f.name == name) out.push_back(&f);
    return out;
}

std::vector<const IdentificationFact*> FactBase::identifications_for(const std::string& base) const {
    std::vector<const IdentificationFact*> out;
    for (const auto& f : idents_)
        if (f.base == base) out.push_back(&f);
    return out;
}

std::vector<const UniversalFact*> FactBase::universals_for(const std::string& base) const {
    std::vector<const UniversalFact*> out;
    for (const auto& f : universals_)
        if (f.base == base) out.push_back(&f);
    return out;
}

FactBase FactBase::subset(const std::vector<bool>& keep) const {
    if (keep.size() != fact_count()) throw InvalidInput("subset mask has the wrong length");
    FactBase out;
    out.records_ = records_;
    size_t k = 0;
    for (const auto& f : facts_)
        if (keep[k++]) out.facts_.push_back(f);
    for (const auto& f : idents_)
        if (keep[k++]) out.idents_.push_back(f);
    for (const auto& f : universals_)
        if (keep[k++]) out.universals_.push_back(f);
    return out;
}

void FactBase::finish() {
    auto by_id = [](const auto& a, const auto& b) { return a.id() < b.id(); };
    auto same_id = [](const auto& a, const auto& b) { return a.id() == b.id(); };
    std::sort(facts_.begin(), facts_.end(), by_id);
    facts_.erase(std::unique(facts_.begin(), facts_.end(), same_id), facts_.end());
    std::sort(idents_.begin(), idents_.end(), by_id);
    idents_.erase(std::unique(idents_.begin(), idents_.end(), same_id), idents_.end());
    std::stable_sort(universals_.begin(), universals_.end(), by_id);
    universals_.erase(std::unique(universals_.begin(), universals_.end(), same_id), universals_.end());
    std::sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        size_t b = 0;
        while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        s.erase(0, b);
    }
    return out;
}

enum class Kind { Fingerprints, CoverHomology, Facts, Idents, Universal };

struct Row {
    std::string file;
    int line;
    std::vector<std::string> fields;
};

PartialFilling parse_slopes(const Row& r, const std::string& text) {
    try {
        return parse_filling(text);
    } catch (const InvalidInput& e) {
        throw ParseError(r.file, r.line, e.what());
    }
}

}  // namespace

FactBase parse_catalog(const std::vector<std::pair<std::string, std::string>>& files) {
    FactBase fb;
    struct Pending {
        Kind kind;
        Row row;
    };
    std::vector<Pending> rows;
    for (const auto& [label, text] : files) {
        std::istringstream in(text);
        std::string line;
        int number = 0;
        std::optional<Kind> kind;
        while (std::getline(in, line)) {
            ++number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto fields = split_csv(line);
            if (!kind) {
                if (fields == std::vector<std::string>{"name", "cusps", "volume", "shapes", "h1"})
                    kind = Kind::Fingerprints;
                else if (fields == std::vector<std::string>{"name", "slopes", "status"})
                    kind = Kind::Facts;
                else if (fields == std::vector<std::string>{"base", "partial", "result"})
                    kind = Kind::Idents;
                else if (fields == std::vector<std::string>{"name", "cover_h1"})
                    kind = Kind::CoverHomology;
                else if (fields == std::vector<std::string>{"base", "partial", "justification"})
                    kind = Kind::Universal;
                else
                    throw ParseError(label, number, "unrecognised header row");
                continue;
            }
            const size_t want = *kind == Kind::Fingerprints ? 5 : *kind == Kind::CoverHomology ? 2 : 3;
            if (fields.size() != want)
                throw ParseError(label, number, "expected " + std::to_string(want) + " fields, got " + std::to_string(fields.size()));
            rows.push_back({*kind, Row{label, number, std::move(fields)}});
        }
    }

    // records first, so that the facts can be checked against them
    for (const auto& p : rows) {
        if (p.kind != Kind::Fingerprints) continue;
        const auto& f = p.row.fields;
        ManifoldRecord rec;
        rec.name = f[0];
        try {
            rec.fingerprint.cusps = std::stoi(f[1]);
            if (f[2] == "nonhyperbolic") {
                rec.fingerprint.geometric = false;
            } else {
                rec.fingerprint.geometric = true;
                rec.fingerprint.volume = std::stod(f[2]);
            }
            rec.fingerprint.shapes = parse_shapes(f[3]);
            if (!f[4].empty()) rec.fingerprint.h1 = parse_h1(f[4]);
        } catch (const std::exception& e) {
            throw ParseError(p.row.file, p.row.line, std::string("bad fingerprint: ") + e.what());
        }
        if (rec.fingerprint.geometric && static_cast<int>(rec.fingerprint.shapes.size()) != rec.fingerprint.cusps)
            throw ParseError(p.row.file, p.row.line, "shape count differs from cusp count");
        if (const auto* old = fb.record(rec.name)) {
            if (old->fingerprint.to_string() != rec.fingerprint.to_string())
                throw ParseError(p.row.file, p.row.line, "conflicting records for " + rec.name);
            continue;
        }
        fb.records_.push_back(std::move(rec));
    }

    auto cusps_of = [&](const Row& r, const std::string& name) {
        auto c = fb.cusp_count(name);
        if (!c) throw DanglingName(r.file + ":" + std::to_string(r.line) + ": no fingerprint record for '" + name + "'");
        return *c;
    };
    auto arity = [&](const Row& r, const std::string& name, size_t got) {
        const int c = cusps_of(r, name);
        if (static_cast<int>(got) != c)
            throw SlopeArityMismatch(r.file + ":" + std::to_string(r.line) + ": " + std::to_string(got) +
                                     " slopes for " + name + " with " + std::to_string(c) + " cusps");
    };

    for (const auto& p : rows) {
        const auto& r = p.row;
        const auto& f = r.fields;
        switch (p.kind) {
            case Kind::Fingerprints:
                break;
            case Kind::CoverHomology: {
                cusps_of(r, f[0]);
                auto& rec = *std::find_if(fb.records_.begin(), fb.records_.end(),
                                          [&](const ManifoldRecord& m) { return m.name == f[0]; });
                try {
                    rec.fingerprint.cover_h1 = parse_cover_h1(f[1]);
                } catch (const std::exception& e) {
                    throw ParseError(r.file, r.line, std::string("bad cover homology: ") + e.what());
                }
                break;
            }
            case Kind::Facts: {
                FillingFact fact{f[0], parse_slopes(r, f[1]), f[2]};
                if (fact.status != "non-taut") throw ParseError(r.file, r.line, "unknown status '" + fact.status + "'");
                if (std::any_of(fact.slopes.begin(), fact.slopes.end(), [](const auto& s) { return !s; }))
                    throw ParseError(r.file, r.line, "filling facts need a slope on every cusp");
                arity(r, fact.name, fact.slopes.size());
                fb.facts_.push_back(std::move(fact));
                break;
            }
            case Kind::Idents: {
                IdentificationFact id{f[0], parse_slopes(r, f[1]), f[2]};
                arity(r, id.base, id.partial.size());
                if (id.holes() == 0) throw ParseError(r.file, r.line, "identification needs at least one '*'");
                if (cusps_of(r, id.result) != id.holes())
                    throw SlopeArityMismatch(r.file + ":" + std::to_string(r.line) + ": " + id.result + " has " +
                                             std::to_string(cusps_of(r, id.result)) + " cusps but the filling leaves " +
                                             std::to_string(id.holes()));
                fb.idents_.push_back(std::move(id));
                break;
            }
            case Kind::Universal: {
                UniversalFact u{f[0], parse_slopes(r, f[1]), f[2]};
                arity(r, u.base, u.partial.size());
                fb.universals_.push_back(std::move(u));
                break;
            }
        }
    }
    fb.finish();
    return fb;
}

FactBase load_catalog(const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw InvalidInput("cannot open '" + p + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        files.emplace_back(p, buf.str());
    }
    return parse_catalog(files);
}

FactBase load_catalog_dir(const std::string& dir) {
    std::vector<std::string> paths;
    for (const char* f : {"fingerprints.csv", "cover_homology.csv", "facts.csv", "idents.csv", "universal.csv"}) {
        auto p = std::filesystem::path(dir) / f;
        if (std::filesystem::exists(p)) paths.push_back(p.string());
    }
    return load_catalog(paths);
}

// ---------------------------------------------------------------------------

std::string TriangulationStore::path(const std::string& name) const {
    return (std::filesystem::path(dir_) / "tri" / (name + ".tri")).string();
}

bool TriangulationStore::has(const std::string& name) const { return std::filesystem::exists(path(name)); }

const Triangulation& TriangulationStore::get(const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = cache_.find(name);
    if (it != cache_.end()) return *it->second;
    if (!std::filesystem::exists(path(name))) throw MissingTriangulation("no triangulation for '" + name + "'");
    auto tri = std::make_shared<Triangulation>(load_triangulation(path(name)));
    cache_[name] = tri;
    return *tri;
}

IdentificationReport verify_identification(const IdentificationFact& f, const FactBase& base,
                                           const TriangulationStore& tris, const SolverOptions& opts, double tol) {
    const Triangulation& tri = tris.get(f.base);
    IdentificationReport rep;
    const ManifoldRecord* rec = base.record(f.result);
    if (!rec) {
        rep.detail = "no fingerprint record for " + f.result;
        return rep;
    }
    if (static_cast<int>(f.partial.size()) != tri.cusp_count()) {
        rep.detail = "filling arity differs from the triangulation's cusp count";
        return rep;
    }
    Fingerprint fp = fingerprint(tri, f.partial, opts);
    rep.computed = fp;
    if (!fp.geometric) {
        rep.status = IdentificationReport::Status::NonGeometric;
        rep.detail = "filling has no geometric solution on the bundled triangulation";
        return rep;
    }
    if (fp.matches(rec->fingerprint, tol)) {
        rep.status = IdentificationReport::Status::Pass;
        rep.detail = "matches " + f.result;
    } else {
        rep.detail = "computed " + fp.to_string() + " vs " + f.result + " " + rec->fingerprint.to_string();
    }
    return rep;
}

}  // namespace foliar
