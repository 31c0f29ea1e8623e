#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "foliar/obstruction.hpp"

namespace foliar {

struct ManifestEntry {
    std::string name;
    std::string path;  // resolved against the manifest's directory
};

/// Lines `<name> <tri-path>`; '#' comments.
std::vector<ManifestEntry> load_manifest(const std::string& path);

struct BatchOptions {
    SolverOptions solver;
    double match_tol = 1e-6;
    int jobs = 1;
};

/// Verdicts in manifest order, computed on up to `jobs` threads.
std::vector<Verdict> obstruct_batch(const std::vector<ManifestEntry>& entries, const FactBase& facts,
                                    const BatchOptions& opts = {});

/// The table printed by `obstruct report`. Certificates are re-verified
/// before a manifold is listed as having no veering triangulation.
std::string format_report(const std::vector<Verdict>& verdicts, const FactBase& facts, bool csv);

/// Names listed as certified by format_report, in order.
std::vector<std::string> certified_names(const std::vector<Verdict>& verdicts, const FactBase& facts);

/// Command-line entry point. 0 = success/certified, 1 = not certified or
/// negative answer, 2 = usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foliar
