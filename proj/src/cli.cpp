#include "foliar/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "foliar/error.hpp"
#include "foliar/isosig.hpp"
#include "foliar/veering.hpp"

#ifndef FOLIAR_DEFAULT_DATA
#define FOLIAR_DEFAULT_DATA "data"
#endif

namespace foliar {

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open manifest '" + path + "'");
    const auto dir = std::filesystem::path(path).parent_path();
    std::vector<ManifestEntry> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string name, file, extra;
        if (!(ls >> name)) continue;
        if (!(ls >> file) || (ls >> extra)) throw ParseError(path, number, "expected '<name> <tri-path>'");
        out.push_back({name, (dir / file).string()});
    }
    return out;
}

std::vector<Verdict> obstruct_batch(const std::vector<ManifestEntry>& entries, const FactBase& facts,
                                    const BatchOptions& opts) {
    std::vector<Verdict> out(entries.size());
    std::vector<std::exception_ptr> errors(entries.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < entries.size(); i = next++) {
            try {
                out[i] = obstruct_manifold(entries[i].name, load_triangulation(entries[i].path), facts, opts.solver,
                                           opts.match_tol);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(entries.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace {

std::string cover_label(const CoverVerdict& c) {
    std::string s;
    if (c.names.empty()) {
        if (!c.fingerprint) return "?(non-geometric)";
        char buf[48];
        std::snprintf(buf, sizeof buf, "?(vol %.6f)", c.fingerprint->volume);
        s = buf;
    } else {
        for (size_t i = 0; i < c.names.size(); ++i) s += (i ? "=" : "") + c.names[i];
    }
    if (c.masks.size() > 1) s += " x" + std::to_string(c.masks.size());
    return s;
}

bool verified(const Verdict& v, const FactBase& facts) {
    if (!v.no_veering) return false;
    for (const auto& c : v.covers)
        if (!c.certificate || !verify_certificate(*c.certificate, facts)) return false;
    return true;
}

}  // namespace

std::vector<std::string> certified_names(const std::vector<Verdict>& verdicts, const FactBase& facts) {
    std::vector<std::string> out;
    for (const auto& v : verdicts)
        if (verified(v, facts)) out.push_back(v.name);
    return out;
}

std::string format_report(const std::vector<Verdict>& verdicts, const FactBase& facts, bool csv) {
    std::ostringstream out;
    if (csv) {
        out << "name,classes,covers,no_pA_flow_complement,no_veering,no_edge_orientable_veering\n";
        for (const auto& v : verdicts) {
            const bool ok = verified(v, facts);
            std::string covers;
            for (size_t i = 0; i < v.covers.size(); ++i) covers += (i ? ";" : "") + cover_label(v.covers[i]);
            out << v.name << "," << ((1u << v.cohomology_dimension) - 1) << "," << covers << ","
                << (ok ? "yes" : "unknown") << "," << (ok ? "yes" : "unknown") << ","
                << (ok || v.self_certificate ? "yes" : "unknown") << "\n";
        }
        return out.str();
    }
    out << std::left << std::setw(10) << "manifold" << std::setw(9) << "classes" << std::setw(40) << "double covers"
        << "verdict\n";
    for (const auto& v : verdicts) {
        std::string covers;
        for (size_t i = 0; i < v.covers.size(); ++i) covers += (i ? ", " : "") + cover_label(v.covers[i]);
        const bool ok = verified(v, facts);
        out << std::left << std::setw(10) << v.name << std::setw(9) << ((1u << v.cohomology_dimension) - 1)
            << std::setw(40) << covers << (ok ? "no veering" : "unknown") << "\n";
    }
    const auto names = certified_names(verdicts, facts);
    out << "\nno veering triangulation (" << names.size() << "):";
    for (size_t i = 0; i < names.size(); ++i) out << (i ? ", " : " ") << names[i];
    out << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Context {
    std::string data = FOLIAR_DEFAULT_DATA;
    double tol_solver = 1e-12;
    double tol_match = 1e-6;
    std::string format = "text";
    int jobs = 1;

    SolverOptions solver() const {
        SolverOptions o;
        o.tolerance = tol_solver;
        return o;
    }
};

// A file path, an isosig: signature, or a name under <data>/tri.
Triangulation resolve_input(const Context& ctx, const std::string& input) {
    if (input.rfind("isosig:", 0) == 0 || std::filesystem::exists(input)) return load_triangulation(input);
    TriangulationStore store(ctx.data);
    if (store.has(input)) return store.get(input);
    throw InvalidInput("no file, signature or bundled triangulation named '" + input + "'");
}

std::string format_complex(Complex z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.15f%+.15fi", z.real(), z.imag());
    return buf;
}

PartialFilling parse_fill_option(const std::string& text, const Triangulation& tri) {
    if (text.empty()) return {};
    auto f = parse_filling(text);
    if (static_cast<int>(f.size()) != tri.cusp_count())
        throw InvalidInput("filling " + text + " has " + std::to_string(f.size()) + " entries for " +
                           std::to_string(tri.cusp_count()) + " cusps");
    return f;
}

int cmd_tri_validate(const Context&, const std::vector<std::string>& inputs, std::ostream& out) {
    int code = 0;
    for (const auto& in : inputs) {
        Triangulation tri = load_triangulation(in);
        out << in << ": " << tri.size() << " tets, " << tri.edge_classes().size() << " edges, " << tri.cusp_count()
            << " cusps";
        if (tri.has_cusp_rows()) out << " (with cusp rows)";
        out << "\n";
        for (const auto& l : tri.cusp_links())
            out << "  cusp " << l.cusp << ": chi=" << l.euler_characteristic << " "
                << (l.orientable ? "orientable" : "non-orientable") << ", " << l.triangles << " triangles\n";
        if (tri.is_valid_manifold()) {
            out << "  valid" << (tri.is_oriented() ? ", oriented" : "") << "\n";
        } else {
            out << "  flagged: " << tri.flag_reason() << "\n";
            code = 1;
        }
    }
    return code;
}

int cmd_veering_search(const Context& ctx, const std::string& input, bool all, std::ostream& out) {
    Triangulation tri = resolve_input(ctx, input);
    if (all) {
        auto list = all_veering(tri);
        for (const auto& vs : list) out << vs.to_string() << "\n";
        if (list.empty()) out << "none\n";
        return list.empty() ? 1 : 0;
    }
    auto vs = find_veering(tri);
    if (!vs) {
        out << "none\n";
        return 1;
    }
    out << vs->to_string() << "\n";
    return 0;
}

int cmd_veering_check(const Context& ctx, const std::string& input, const std::string& structure, std::ostream& out) {
    Triangulation tri = resolve_input(ctx, input);
    auto rep = verify_veering(tri, VeeringStructure::from_string(structure));
    out << rep.to_string() << "\n";
    return rep.ok ? 0 : 1;
}

int cmd_veering_edge_orientable(const Context& ctx, const std::string& input, const std::string& structure,
                                std::ostream& out) {
    Triangulation tri = resolve_input(ctx, input);
    std::vector<VeeringStructure> list;
    if (!structure.empty()) {
        auto vs = VeeringStructure::from_string(structure);
        auto rep = verify_veering(tri, vs);
        if (!rep) throw InvalidInput("structure is not veering: " + rep.to_string());
        list.push_back(vs);
    } else {
        list = all_veering(tri);
    }
    if (list.empty()) {
        out << "no veering structure\n";
        return 1;
    }
    bool any = false;
    for (const auto& vs : list) {
        const bool eo = is_edge_orientable(tri, vs);
        any = any || eo;
        out << vs.to_string() << " " << (eo ? "edge-orientable" : "not edge-orientable") << "\n";
    }
    return any ? 0 : 1;
}

int cmd_covers_list(const Context& ctx, const std::string& input, const std::string& export_dir, std::ostream& out) {
    Triangulation tri = resolve_input(ctx, input);
    FactBase facts = load_catalog_dir(ctx.data);
    auto basis = z2_cohomology_basis(tri);
    auto entries = enumerate_double_covers(tri, ctx.solver(), ctx.tol_match);
    out << "H^1(M;Z/2) dimension " << basis.size() << ", " << ((1u << basis.size()) - 1) << " classes, "
        << entries.size() << " distinct covers\n";
    int k = 0;
    for (const auto& e : entries) {
        out << "cover " << k << " classes";
        for (auto m : e.masks) out << " " << m;
        out << " cocycle " << e.cover.cocycle.to_string() << "\n";
        if (e.fingerprint) {
            out << "  fingerprint " << e.fingerprint->to_string() << "\n";
            auto names = facts.resolve(*e.fingerprint, ctx.tol_match);
            out << "  names";
            if (names.empty()) out << " (unresolved)";
            for (const auto& n : names) out << " " << n;
            out << "\n";
        } else {
            out << "  non-geometric base: combinatorial data only (" << e.cover.cover.size() << " tets, "
                << e.cover.cover.cusp_count() << " cusps)\n";
        }
        if (!export_dir.empty()) {
            std::filesystem::create_directories(export_dir);
            const auto stem = std::filesystem::path(export_dir) / ("cover" + std::to_string(k));
            std::ofstream(stem.string() + ".tri") << serialize(e.cover.cover);
            std::ofstream(stem.string() + ".proj") << e.cover.projection_table();
        }
        ++k;
    }
    return 0;
}

int cmd_geom(const Context& ctx, const std::string& what, const std::string& input, const std::string& fill_text,
             std::ostream& out) {
    Triangulation tri = resolve_input(ctx, input);
    const auto fill = parse_fill_option(fill_text, tri);
    if (what == "fingerprint") {
        FactBase facts = load_catalog_dir(ctx.data);
        Fingerprint fp = fingerprint(tri, fill, ctx.solver());
        if (fp.h1) fp.cover_h1 = cover_homology(tri);
        out << to_csv_line(input, fp) << "\n";
        if (fp.cover_h1) out << "double covers: " << format_cover_h1(*fp.cover_h1) << "\n";
        if (!fp.geometric) return 1;
        auto names = facts.resolve(fp, ctx.tol_match);
        out << "matches:";
        for (const auto& n : names) out << " " << n;
        out << (names.empty() ? " none\n" : "\n");
        return 0;
    }
    const GluingSystem sys = assemble_system(tri);
    Shapes z;
    try {
        z = solve_shapes(sys, fill, ctx.solver());
    } catch (const NonGeometric& e) {
        out << "non-geometric: " << e.what() << "\n";
        return 1;
    }
    if (what == "solve") {
        for (size_t i = 0; i < z.size(); ++i) out << "z" << i << " = " << format_complex(z[i]) << "\n";
        out << "residual " << std::scientific << std::setprecision(3) << max_residual(sys, fill, z) << "\n";
        out << std::defaultfloat;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", volume(z));
    out << "volume " << buf << "\n";
    return 0;
}

int cmd_verify_idents(const Context& ctx, std::ostream& out) {
    FactBase facts = load_catalog_dir(ctx.data);
    TriangulationStore store(ctx.data);
    int code = 0;
    for (const auto& f : facts.identifications()) {
        auto rep = verify_identification(f, facts, store, ctx.solver(), ctx.tol_match);
        out << f.id() << " " << rep.status_text() << "\n";
        if (rep.status != IdentificationReport::Status::Pass) code = 1;
    }
    return code;
}

void print_verdict(const Verdict& v, const FactBase& facts, std::ostream& out) {
    const bool ok = !certified_names({v}, facts).empty();
    out << v.name << ": " << (ok ? "no veering triangulation (certified)" : "unknown") << "\n";
    out << "  H^1(M;Z/2) dimension " << v.cohomology_dimension << ", " << v.covers.size() << " distinct double cover"
        << (v.covers.size() == 1 ? "" : "s") << "\n";
    for (size_t i = 0; i < v.covers.size(); ++i) {
        const auto& c = v.covers[i];
        out << "  cover " << i << ": " << cover_label(c);
        if (c.fingerprint && c.fingerprint->geometric) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.12g", c.fingerprint->volume);
            out << "  volume " << buf;
        }
        out << "\n";
        if (c.certificate) {
            std::istringstream cert(c.certificate->to_text());
            std::string line;
            while (std::getline(cert, line)) out << "    " << line << "\n";
        } else {
            out << "    no certificate\n";
        }
    }
    auto yn = [](bool b) { return b ? "yes" : "unknown"; };
    out << "  no pseudo-Anosov flow complement: " << yn(ok) << "\n";
    out << "  no veering triangulation: " << yn(ok) << "\n";
    out << "  no edge-orientable veering triangulation: " << yn(ok || v.self_certificate) << "\n";
}

int cmd_obstruct_certify(const Context& ctx, const std::string& name, const std::string& cert_out, std::ostream& out) {
    FactBase facts = load_catalog_dir(ctx.data);
    Triangulation tri = resolve_input(ctx, name);
    Verdict v = obstruct_manifold(std::filesystem::path(name).stem().string(), tri, facts, ctx.solver(), ctx.tol_match);
    print_verdict(v, facts, out);
    if (!cert_out.empty()) {
        std::ofstream f(cert_out);
        if (!f) throw InvalidInput("cannot write '" + cert_out + "'");
        for (const auto& c : v.covers)
            if (c.certificate) f << c.certificate->to_text();
    }
    return certified_names({v}, facts).empty() ? 1 : 0;
}

int cmd_obstruct_verify(const Context& ctx, const std::string& path, std::ostream& out) {
    FactBase facts = load_catalog_dir(ctx.data);
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Certificate all = parse_certificate(buf.str());
    int code = 0;
    for (const auto& [name, rec] : all.records) {
        Certificate c = all;
        c.target = name;
        auto chk = verify_certificate(c, facts);
        out << "npf " << name << ": " << (chk ? "verified" : "rejected (" + chk.reason + ")") << "\n";
        if (!chk) code = 1;
    }
    return code;
}

int cmd_obstruct_report(const Context& ctx, const std::string& range, std::ostream& out) {
    FactBase facts = load_catalog_dir(ctx.data);
    std::string manifest = range;
    if (!std::filesystem::exists(manifest)) manifest = (std::filesystem::path(ctx.data) / (range + ".txt")).string();
    BatchOptions opts;
    opts.solver = ctx.solver();
    opts.match_tol = ctx.tol_match;
    opts.jobs = ctx.jobs;
    auto verdicts = obstruct_batch(load_manifest(manifest), facts, opts);
    out << format_report(verdicts, facts, ctx.format == "csv");
    return certified_names(verdicts, facts).empty() ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"foliar: veering triangulations and persistent foliarity obstructions", "foliar"};
    app.require_subcommand(1);
    Context ctx;
    app.add_option("--data", ctx.data, "data directory (fingerprints, facts, triangulations)");
    app.add_option("--tol-solver", ctx.tol_solver, "Newton residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-match", ctx.tol_match, "fingerprint matching tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", ctx.format, "output format")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--jobs", ctx.jobs, "worker threads for batch commands")->check(CLI::PositiveNumber);
    app.fallthrough();

    std::function<int()> action;

    auto* tri = app.add_subcommand("tri", "triangulation tools")->require_subcommand(1);
    std::vector<std::string> tri_inputs;
    auto* tri_validate = tri->add_subcommand("validate", "parse and check triangulations");
    tri_validate->add_option("inputs", tri_inputs, "TRI files or isosig:<sig>")->required();
    tri_validate->callback([&] { action = [&] { return cmd_tri_validate(ctx, tri_inputs, out); }; });

    auto* veer = app.add_subcommand("veering", "veering structures")->require_subcommand(1);
    std::string v_input, v_structure;
    bool v_all = false;
    auto* v_search = veer->add_subcommand("search", "find a veering structure");
    v_search->add_option("input", v_input)->required();
    v_search->add_flag("--all", v_all, "list every structure");
    v_search->callback([&] { action = [&] { return cmd_veering_search(ctx, v_input, v_all, out); }; });
    auto* v_check = veer->add_subcommand("check", "verify a structure '<bits> <colours> <R|L>'");
    v_check->add_option("input", v_input)->required();
    v_check->add_option("structure", v_structure)->required();
    v_check->callback([&] { action = [&] { return cmd_veering_check(ctx, v_input, v_structure, out); }; });
    auto* v_eo = veer->add_subcommand("edge-orientable", "edge-orientability of veering structures");
    v_eo->add_option("input", v_input)->required();
    v_eo->add_option("--structure", v_structure, "check only this structure");
    v_eo->callback([&] { action = [&] { return cmd_veering_edge_orientable(ctx, v_input, v_structure, out); }; });

    auto* covers = app.add_subcommand("covers", "double covers")->require_subcommand(1);
    std::string c_input, c_export;
    auto* c_list = covers->add_subcommand("list", "enumerate connected double covers");
    c_list->add_option("input", c_input)->required();
    c_list->add_option("--export", c_export, "write coverN.tri and coverN.proj here");
    c_list->callback([&] { action = [&] { return cmd_covers_list(ctx, c_input, c_export, out); }; });

    auto* geom = app.add_subcommand("geom", "hyperbolic structures")->require_subcommand(1);
    std::string g_input, g_fill, g_what;
    for (const char* what : {"solve", "volume", "fingerprint"}) {
        auto* sub = geom->add_subcommand(what, std::string(what) + " of the complete or filled structure");
        sub->add_option("input", g_input)->required();
        sub->add_option("--fill", g_fill, "per-cusp slopes, e.g. '(2;*)'");
        sub->callback([&, what] {
            g_what = what;
            action = [&] { return cmd_geom(ctx, g_what, g_input, g_fill, out); };
        });
    }

    auto* catalog = app.add_subcommand("catalog", "bundled data")->require_subcommand(1);
    auto* cat_ids = catalog->add_subcommand("verify-idents", "recompute every identification fact");
    cat_ids->callback([&] { action = [&] { return cmd_verify_idents(ctx, out); }; });

    auto* obs = app.add_subcommand("obstruct", "persistent foliarity obstructions")->require_subcommand(1);
    std::string o_name, o_out, o_cert, o_range;
    auto* o_certify = obs->add_subcommand("certify", "certify that a manifold has no veering triangulation");
    o_certify->add_option("name", o_name)->required();
    o_certify->add_option("--out", o_out, "write the certificates here");
    o_certify->callback([&] { action = [&] { return cmd_obstruct_certify(ctx, o_name, o_out, out); }; });
    auto* o_verify = obs->add_subcommand("verify", "check a certificate file");
    o_verify->add_option("certificate", o_cert)->required();
    o_verify->callback([&] { action = [&] { return cmd_obstruct_verify(ctx, o_cert, out); }; });
    auto* o_report = obs->add_subcommand("report", "obstruction table over a manifest");
    o_report->add_option("--range", o_range, "manifest file or bundled range name")->required();
    o_report->callback([&] { action = [&] { return cmd_obstruct_report(ctx, o_range, out); }; });

    std::vector<std::string> argv_store = {"foliar"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace foliar
