#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foliar/slope.hpp"
#include "foliar/triangulation.hpp"

namespace foliar {

using Complex = std::complex<double>;
using Shapes = std::vector<Complex>;

/// Exponent rows acting on (log z, log z', log z'') of every tetrahedron.
/// Edge rows have target 2 pi i; a complete cusp has meridian target 0; a
/// filled cusp p/q has p * meridian + q * longitude with target 2 pi i.
struct GluingSystem {
    int tets = 0;
    std::vector<std::vector<int>> edge_rows;
    std::vector<PeripheralRows> cusp_rows;  // empty when the input has none

    int cusp_count() const { return static_cast<int>(cusp_rows.size()); }
};

/// Edge rows from the edge classes; cusp rows copied from the input.
/// Throws MissingCuspRows when `need_cusp_rows` and the input has none.
GluingSystem assemble_system(const Triangulation& tri, bool need_cusp_rows = true);

struct SolverOptions {
    double tolerance = 1e-12;
    int retries = 20;
    int max_iterations = 100;
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Newton in log coordinates. `fill` has one entry per cusp (nullopt =
/// complete); an empty `fill` means all cusps complete. Throws NonGeometric
/// or SingularJacobian.
Shapes solve_shapes(const GluingSystem& sys, const PartialFilling& fill, const SolverOptions& opts = {});

/// Largest |log-form residual| of the active equations.
double max_residual(const GluingSystem& sys, const PartialFilling& fill, const Shapes& z);

/// Residual of the edge equations alone (usable without cusp rows).
double edge_residual(const GluingSystem& sys, const Shapes& z);

/// z, z' = 1/(1-z) or z'' = 1 - 1/z.
Complex shape_param(Complex z, int which);

double bloch_wigner(Complex z);
double volume(const Shapes& z);

/// Brings a modulus into the fundamental domain (Im > 0, |Re| <= 1/2,
/// |tau| >= 1) and folds mirror images together (Re >= 0).
Complex normalize_cusp_shape(Complex tau);

/// Normalized shape of the flat torus obtained by developing the link of
/// `cusp`. Throws IncompleteSolution when some holonomy is not a translation.
Complex cusp_shape(const Triangulation& tri, const Shapes& z, int cusp);

/// Invariant factors of H1 of the (unfilled) manifold: torsion ascending,
/// then one 0 per free summand.
std::vector<long> h1_invariants(const Triangulation& tri);

/// Elementary divisors (nonzero diagonal of the Smith form) of an integer
/// matrix, ascending.
std::vector<long> smith_diagonal(std::vector<std::vector<long>> m);

std::string format_h1(const std::vector<long>& h1);
std::vector<long> parse_h1(const std::string& text);

struct Fingerprint {
    int cusps = 0;
    bool geometric = false;
    double volume = 0;
    std::vector<Complex> shapes;          // unfilled cusps, sorted
    std::optional<std::vector<long>> h1;  // unfilled manifolds only
    /// H1 of every connected double cover, sorted; volume, cusp shapes and
    /// H1 alone do not separate e.g. t07933 from t07936.
    std::optional<std::vector<std::vector<long>>> cover_h1;

    /// volume and shapes within `tol`; h1 and cover_h1 compared when both
    /// sides have them.
    bool matches(const Fingerprint& o, double tol = 1e-6) const;
    std::string to_string() const;
};

/// Fingerprint from known shapes (used for covers, whose complete structure
/// is pulled back from the base). `fill` marks the filled cusps.
Fingerprint fingerprint_from_shapes(const Triangulation& tri, const Shapes& z, const PartialFilling& fill = {});

/// Solves, then fingerprints. A NonGeometric solve yields a partial
/// fingerprint (geometric == false) rather than an exception.
Fingerprint fingerprint(const Triangulation& tri, const PartialFilling& fill = {}, const SolverOptions& opts = {});

/// `name,cusps,volume,shapes,h1`
std::string to_csv_line(const std::string& name, const Fingerprint& fp);
std::string format_shapes(const std::vector<Complex>& shapes);
std::vector<Complex> parse_shapes(const std::string& text);
std::string format_cover_h1(const std::vector<std::vector<long>>& groups);
std::vector<std::vector<long>> parse_cover_h1(const std::string& text);

}  // namespace foliar
