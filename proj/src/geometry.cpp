#include "foliar/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include "foliar/error.hpp"

namespace foliar {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kTwoPiI(0, 2 * kPi);

struct Equation {
    std::vector<int> row;
    Complex target;
};

std::vector<Equation> active_equations(const GluingSystem& sys, const PartialFilling& fill) {
    std::vector<Equation> eqs;
    for (const auto& r : sys.edge_rows) eqs.push_back({r, kTwoPiI});
    if (!fill.empty() && static_cast<int>(fill.size()) != sys.cusp_count())
        throw InvalidInput("filling has " + std::to_string(fill.size()) + " entries for " +
                           std::to_string(sys.cusp_count()) + " cusps");
    for (int c = 0; c < sys.cusp_count(); ++c) {
        const auto& rows = sys.cusp_rows[c];
        if (fill.empty() || !fill[c]) {
            eqs.push_back({rows.meridian, Complex(0, 0)});
            continue;
        }
        const long p = fill[c]->p(), q = fill[c]->q();
        std::vector<int> r(rows.meridian.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<int>(p * rows.meridian[i] + q * rows.longitude[i]);
        eqs.push_back({std::move(r), kTwoPiI});
    }
    return eqs;
}

Complex log_param(Complex z, int which) {
    if (which == 0) return std::log(z);
    if (which == 1) return -std::log(1.0 - z);
    return std::log(1.0 - 1.0 / z);
}

// residual with log z taken from w (continuous branch) and the other two
// parameters on the principal branch
Eigen::VectorXcd residual(const std::vector<Equation>& eqs, const Eigen::VectorXcd& w) {
    const int n = static_cast<int>(w.size());
    Eigen::VectorXcd f(eqs.size());
    for (size_t r = 0; r < eqs.size(); ++r) {
        Complex s = -eqs[r].target;
        for (int j = 0; j < n; ++j) {
            const int a = eqs[r].row[3 * j], b = eqs[r].row[3 * j + 1], c = eqs[r].row[3 * j + 2];
            if (a == 0 && b == 0 && c == 0) continue;
            const Complex z = std::exp(w[j]);
            s += double(a) * w[j] + double(b) * log_param(z, 1) + double(c) * log_param(z, 2);
        }
        f[r] = s;
    }
    return f;
}

Eigen::MatrixXcd jacobian(const std::vector<Equation>& eqs, const Eigen::VectorXcd& w) {
    const int n = static_cast<int>(w.size());
    Eigen::MatrixXcd m(eqs.size(), n);
    for (int j = 0; j < n; ++j) {
        const Complex z = std::exp(w[j]);
        const Complex dz1 = z / (1.0 - z), dz2 = 1.0 / (z - 1.0);
        for (size_t r = 0; r < eqs.size(); ++r)
            m(r, j) = double(eqs[r].row[3 * j]) + double(eqs[r].row[3 * j + 1]) * dz1 + double(eqs[r].row[3 * j + 2]) * dz2;
    }
    return m;
}

enum class Outcome { Converged, Diverged, Singular };

Outcome newton(const std::vector<Equation>& eqs, Eigen::VectorXcd& w, const SolverOptions& opts) {
    const int n = static_cast<int>(w.size());
    Eigen::VectorXcd f = residual(eqs, w);
    double norm = f.cwiseAbs().maxCoeff();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (norm < opts.tolerance) return Outcome::Converged;
        Eigen::MatrixXcd j = jacobian(eqs, w);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(j);
        cod.setThreshold(1e-10);
        if (cod.rank() < n) return Outcome::Singular;
        Eigen::VectorXcd step = cod.solve(-f);
        if (!step.allFinite()) return Outcome::Diverged;
        double t = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
            Eigen::VectorXcd trial = w + t * step;
            Eigen::VectorXcd ft = residual(eqs, trial);
            if (!ft.allFinite()) continue;
            double nt = ft.cwiseAbs().maxCoeff();
            if (nt < norm) {
                w = trial;
                f = ft;
                norm = nt;
                improved = true;
                break;
            }
        }
        if (!improved) return norm < opts.tolerance ? Outcome::Converged : Outcome::Diverged;
    }
    return norm < opts.tolerance ? Outcome::Converged : Outcome::Diverged;
}

}  // namespace

GluingSystem assemble_system(const Triangulation& tri, bool need_cusp_rows) {
    if (!tri.is_oriented()) throw InvalidInput("gluing equations need an oriented triangulation (every gluing odd)");
    GluingSystem sys;
    sys.tets = tri.size();
    for (const auto& cls : tri.edge_classes()) {
        std::vector<int> row(3 * sys.tets, 0);
        for (const auto& s : cls.slots) row[3 * s.tet + s.param()] += 1;
        sys.edge_rows.push_back(std::move(row));
    }
    if (tri.has_cusp_rows())
        sys.cusp_rows = tri.cusp_rows();
    else if (need_cusp_rows)
        throw MissingCuspRows("triangulation carries no cusp rows");
    return sys;
}

namespace {

std::optional<Shapes> accept(const GluingSystem& sys, const PartialFilling& fill, const Eigen::VectorXcd& w,
                             const SolverOptions& opts) {
    Shapes z(w.size());
    for (int j = 0; j < w.size(); ++j) {
        z[j] = std::exp(w[j]);
        if (z[j].imag() <= 1e-9) return std::nullopt;
    }
    // branch drift guard: the principal-log residual must also vanish
    if (max_residual(sys, fill, z) >= opts.tolerance) return std::nullopt;
    return z;
}

// Follows the filling equations from the complete structure (target 0) to
// the filled one (target 2 pi i).
std::optional<Eigen::VectorXcd> continue_to_filling(const std::vector<Equation>& eqs, const std::vector<bool>& filled,
                                                    Eigen::VectorXcd w, const SolverOptions& opts) {
    auto at = [&](double s) {
        auto e = eqs;
        for (size_t r = 0; r < e.size(); ++r)
            if (filled[r]) e[r].target = s * kTwoPiI;
        return e;
    };
    double s = 0, step = 0.125;
    while (s < 1) {
        const double next = std::min(1.0, s + step);
        Eigen::VectorXcd trial = w;
        if (newton(at(next), trial, opts) == Outcome::Converged) {
            w = trial;
            s = next;
            step = std::min(0.25, step * 2);
        } else {
            step /= 2;
            if (step < 1.0 / 4096) return std::nullopt;
        }
    }
    return w;
}

}  // namespace

Shapes solve_shapes(const GluingSystem& sys, const PartialFilling& fill, const SolverOptions& opts) {
    if (sys.cusp_count() == 0) throw MissingCuspRows("cannot solve without cusp rows");
    const auto eqs = active_equations(sys, fill);
    const bool filling = std::any_of(fill.begin(), fill.end(), [](const auto& s) { return s.has_value(); });
    const auto complete = filling ? active_equations(sys, {}) : eqs;
    std::vector<bool> filled(eqs.size(), false);
    for (size_t c = 0; c < fill.size(); ++c) filled[sys.edge_rows.size() + c] = fill[c].has_value();

    const int n = sys.tets;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.4, 0.4);
    bool any_nonsingular = false;
    for (int attempt = 0; attempt <= opts.retries; ++attempt) {
        Eigen::VectorXcd w(n);
        for (int j = 0; j < n; ++j) {
            Complex z0(0.5, 0.8660254037844386);
            if (attempt > 0) z0 += Complex(jitter(rng), jitter(rng));
            w[j] = std::log(z0);
        }
        Eigen::VectorXcd direct = w;
        Outcome out = newton(eqs, direct, opts);
        if (out != Outcome::Singular) any_nonsingular = true;
        if (out == Outcome::Converged)
            if (auto z = accept(sys, fill, direct, opts)) return *z;
        if (!filling) continue;
        // generalized Dehn surgery path from the complete structure
        if (newton(complete, w, opts) != Outcome::Converged || !accept(sys, {}, w, opts)) continue;
        any_nonsingular = true;
        if (auto end = continue_to_filling(eqs, filled, w, opts))
            if (auto z = accept(sys, fill, *end, opts)) return *z;
    }
    if (!any_nonsingular) throw SingularJacobian("gluing Jacobian singular at every starting point");
    throw NonGeometric("no geometric solution found after " + std::to_string(opts.retries) + " retries");
}

double max_residual(const GluingSystem& sys, const PartialFilling& fill, const Shapes& z) {
    const auto eqs = active_equations(sys, fill);
    Eigen::VectorXcd w(z.size());
    for (size_t j = 0; j < z.size(); ++j) w[j] = std::log(z[j]);
    return residual(eqs, w).cwiseAbs().maxCoeff();
}

double edge_residual(const GluingSystem& sys, const Shapes& z) {
    std::vector<Equation> eqs;
    for (const auto& r : sys.edge_rows) eqs.push_back({r, kTwoPiI});
    Eigen::VectorXcd w(z.size());
    for (size_t j = 0; j < z.size(); ++j) w[j] = std::log(z[j]);
    return residual(eqs, w).cwiseAbs().maxCoeff();
}

Complex shape_param(Complex z, int which) {
    if (which == 0) return z;
    if (which == 1) return 1.0 / (1.0 - z);
    return 1.0 - 1.0 / z;
}

// ---------------------------------------------------------------------------
// Bloch-Wigner dilogarithm

namespace {

// B_{2n} / (2n+1)! for n = 1.., from B_{2n} = (-1)^{n+1} 2 (2n)! zeta(2n) / (2 pi)^{2n}
const std::vector<double>& bernoulli_coefficients() {
    static const std::vector<double> coeffs = [] {
        std::vector<double> c;
        for (int n = 1; n <= 30; ++n) {
            double zeta;
            if (n == 1)
                zeta = kPi * kPi / 6;
            else if (n == 2)
                zeta = std::pow(kPi, 4) / 90;
            else {
                zeta = 0;
                for (int k = 400; k >= 1; --k) zeta += std::pow(double(k), -2.0 * n);
            }
            double v = 2 * zeta / std::pow(2 * kPi, 2 * n) / (2 * n + 1);
            c.push_back(n % 2 == 1 ? v : -v);
        }
        return c;
    }();
    return coeffs;
}

// Li2(z) for |z| <= 1, Re z <= 1/2 via the series in u = -log(1 - z)
Complex li2_small(Complex z) {
    const Complex u = -std::log(1.0 - z);
    const Complex u2 = u * u;
    Complex sum = u - u2 / 4.0;
    Complex power = u;
    for (double c : bernoulli_coefficients()) {
        power *= u2;
        const Complex term = c * power;
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double bw_direct(Complex z) { return li2_small(z).imag() + std::arg(1.0 - z) * std::log(std::abs(z)); }

}  // namespace

double bloch_wigner(Complex z) {
    if (std::abs(z.imag()) < 1e-300) return 0.0;
    // D is invariant under the even anharmonic maps and changes sign under
    // the odd ones; pick the image in |w| <= 1, Re w <= 1/2.
    const Complex images[6] = {z, 1.0 - 1.0 / z, 1.0 / (1.0 - z), 1.0 / z, 1.0 - z, z / (z - 1.0)};
    const double signs[6] = {1, 1, 1, -1, -1, -1};
    for (int k = 0; k < 6; ++k) {
        const Complex w = images[k];
        if (std::abs(w) <= 1.0 + 1e-12 && w.real() <= 0.5 + 1e-12) return signs[k] * bw_direct(w);
    }
    return bw_direct(z);
}

double volume(const Shapes& z) {
    double v = 0;
    for (const auto& s : z) v += bloch_wigner(s);
    return v;
}

// ---------------------------------------------------------------------------
// Cusp shapes

Complex normalize_cusp_shape(Complex tau) {
    if (tau.imag() < 0) tau = -tau;
    if (tau.imag() <= 0) throw IncompleteSolution("degenerate cusp shape");
    for (int guard = 0; guard < 1000; ++guard) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 1.0 - 1e-12)
            tau = -1.0 / tau;
        else
            break;
    }
    return {std::abs(tau.real()), tau.imag()};
}

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Basis of the lattice generated by `gens`, whose covolume should be `area`.
std::array<Complex, 2> lattice_basis(const std::vector<Complex>& gens, double area) {
    if (gens.empty()) throw IncompleteSolution("cusp link has no holonomy");
    const Complex* b1 = &gens[0];
    for (const auto& g : gens)
        if (std::abs(g) < std::abs(*b1)) b1 = &g;
    const Complex* b2 = nullptr;
    for (const auto& g : gens) {
        double c = std::abs(cross(*b1, g));
        if (c < 1e-8 * std::abs(*b1) * std::abs(g)) continue;
        if (!b2 || c < std::abs(cross(*b1, *b2))) b2 = &g;
    }
    if (!b2) throw IncompleteSolution("cusp holonomy has rank one");
    const double det = cross(*b1, *b2);
    const double ratio = std::abs(det) / area;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - n) > 1e-6 * ratio) throw IncompleteSolution("cusp holonomy does not match link area");
    if (n == 1) return {*b1, *b2};
    // Integer coordinates in units of (b1/n, b2/n), then a 2D Hermite reduction.
    std::vector<std::array<long, 2>> vecs = {{n, 0}, {0, n}};
    for (const auto& g : gens) {
        const double x = cross(g, *b2) / det * n, y = cross(*b1, g) / det * n;
        const long xi = std::lround(x), yi = std::lround(y);
        if (std::abs(x - xi) > 1e-6 || std::abs(y - yi) > 1e-6) throw IncompleteSolution("cusp holonomy is not a lattice");
        vecs.push_back({xi, yi});
    }
    // gcd of first coordinates, eliminating along the way
    std::array<long, 2> pivot{0, 0};
    std::vector<std::array<long, 2>> rest;
    for (auto v : vecs) {
        while (v[0] != 0) {
            if (pivot[0] == 0) {
                std::swap(pivot, v);
                continue;
            }
            const long q = v[0] / pivot[0];
            v[0] -= q * pivot[0];
            v[1] -= q * pivot[1];
            if (v[0] != 0) std::swap(pivot, v);
        }
        rest.push_back(v);
    }
    long g2 = 0;
    for (const auto& v : rest) g2 = std::gcd(g2, std::abs(v[1]));
    auto to_c = [&](long x, long y) { return (double(x) * *b1 + double(y) * *b2) / double(n); };
    return {to_c(pivot[0], pivot[1]), to_c(0, g2)};
}

}  // namespace

Complex cusp_shape(const Triangulation& tri, const Shapes& z, int cusp) {
    if (static_cast<int>(z.size()) != tri.size()) throw InvalidInput("shape count does not match tetrahedra");
    if (!tri.is_oriented()) throw InvalidInput("cusp shapes need an oriented triangulation");
    // link triangle (t, v): corners the other three vertices in an order
    // (a, b, c) with (v, a, b, c) even; p_c = p_a + z_{va} (p_b - p_a)
    auto corners = [](int v) {
        std::array<int, 3> c{};
        int k = 0;
        for (int x = 0; x < 4; ++x)
            if (x != v) c[k++] = x;
        if (Perm4(v, c[0], c[1], c[2]).sign() < 0) std::swap(c[1], c[2]);
        return c;
    };
    auto corner_shape = [&](int t, int v, int a) { return shape_param(z[t], edge_pair_class(v, a)); };

    const int n = tri.size();
    std::vector<std::array<std::array<Complex, 4>, 4>> pos(n);  // [tet][link vertex][corner]
    std::vector<std::array<bool, 4>> placed(n, {false, false, false, false});
    std::vector<Complex> translations;
    double area = 0, scale = 0;

    auto complete_triangle = [&](int t, int v, int known_a, int known_b) {
        // rotate the even order so the two known corners come first
        auto c = corners(v);
        for (int r = 0; r < 3; ++r) {
            if ((c[0] == known_a && c[1] == known_b) || (c[0] == known_b && c[1] == known_a)) break;
            std::rotate(c.begin(), c.begin() + 1, c.end());
        }
        pos[t][v][c[2]] = pos[t][v][c[0]] + corner_shape(t, v, c[0]) * (pos[t][v][c[1]] - pos[t][v][c[0]]);
    };

    int start_t = -1, start_v = -1;
    for (int t = 0; t < n && start_t < 0; ++t)
        for (int v = 0; v < 4; ++v)
            if (tri.cusp_of(t, v) == cusp) {
                start_t = t;
                start_v = v;
                break;
            }
    if (start_t < 0) throw InvalidInput("no cusp " + std::to_string(cusp));

    std::queue<std::array<int, 2>> q;
    {
        auto c = corners(start_v);
        pos[start_t][start_v][c[0]] = 0;
        pos[start_t][start_v][c[1]] = 1;
        complete_triangle(start_t, start_v, c[0], c[1]);
        placed[start_t][start_v] = true;
        q.push({start_t, start_v});
    }
    while (!q.empty()) {
        auto [t, v] = q.front();
        q.pop();
        auto c = corners(v);
        area += 0.5 * cross(pos[t][v][c[1]] - pos[t][v][c[0]], pos[t][v][c[2]] - pos[t][v][c[0]]);
        scale = std::max(scale, std::abs(pos[t][v][c[1]] - pos[t][v][c[0]]));
        for (int side = 0; side < 3; ++side) {
            const int x = c[side], y = c[(side + 1) % 3], w = c[(side + 2) % 3];
            const Gluing& g = tri.gluing(t, w);
            const int t2 = g.tet, v2 = g.perm[v], x2 = g.perm[x], y2 = g.perm[y];
            if (!placed[t2][v2]) {
                pos[t2][v2][x2] = pos[t][v][x];
                pos[t2][v2][y2] = pos[t][v][y];
                complete_triangle(t2, v2, x2, y2);
                placed[t2][v2] = true;
                q.push({t2, v2});
                continue;
            }
            const Complex alpha = (pos[t][v][y] - pos[t][v][x]) / (pos[t2][v2][y2] - pos[t2][v2][x2]);
            if (std::abs(alpha - 1.0) > 1e-7) throw IncompleteSolution("cusp " + std::to_string(cusp) + " holonomy is not a translation");
            const Complex beta = pos[t][v][x] - pos[t2][v2][x2];
            if (std::abs(beta) > 1e-9 * std::max(scale, 1.0)) translations.push_back(beta);
        }
    }
    auto basis = lattice_basis(translations, std::abs(area));
    return normalize_cusp_shape(basis[1] / basis[0]);
}

// ---------------------------------------------------------------------------
// Homology

std::vector<long> smith_diagonal(std::vector<std::vector<long>> m) {
    const int rows = static_cast<int>(m.size());
    const int cols = rows ? static_cast<int>(m[0].size()) : 0;
    std::vector<long> diag;
    int r0 = 0;
    for (int c0 = 0; r0 < rows && c0 < cols; ++c0) {
        // move the smallest nonzero entry of the remaining block to (r0, c0)
        while (true) {
            int pr = -1, pc = -1;
            for (int i = r0; i < rows; ++i)
                for (int j = c0; j < cols; ++j)
                    if (m[i][j] != 0 && (pr < 0 || std::abs(m[i][j]) < std::abs(m[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
            if (pr < 0) {
                std::sort(diag.begin(), diag.end());
                return diag;
            }
            std::swap(m[r0], m[pr]);
            for (auto& row : m) std::swap(row[c0], row[pc]);
            bool clean = true;
            const long p = m[r0][c0];
            for (int i = r0 + 1; i < rows; ++i) {
                const long f = m[i][c0] / p;
                if (f)
                    for (int j = c0; j < cols; ++j) m[i][j] -= f * m[r0][j];
                if (m[i][c0] != 0) clean = false;
            }
            for (int j = c0 + 1; j < cols; ++j) {
                const long f = m[r0][j] / p;
                if (f)
                    for (int i = r0; i < rows; ++i) m[i][j] -= f * m[i][c0];
                if (m[r0][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility: fold any entry not divisible by the pivot into row r0
            bool divisible = true;
            for (int i = r0 + 1; i < rows && divisible; ++i)
                for (int j = c0 + 1; j < cols; ++j)
                    if (m[i][j] % p != 0) {
                        for (int k = c0; k < cols; ++k) m[r0][k] += m[i][k];
                        divisible = false;
                        break;
                    }
            if (!divisible) continue;
            diag.push_back(std::abs(p));
            ++r0;
            break;
        }
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

std::vector<long> h1_invariants(const Triangulation& tri) {
    if (!tri.is_connected()) throw DisconnectedInput("homology of a disconnected triangulation");
    const int nf = tri.face_class_count();
    std::vector<std::vector<long>> rel;
    // dual spanning tree by BFS from tet 0
    std::vector<bool> seen(tri.size(), false);
    seen[0] = true;
    std::queue<int> q;
    q.push(0);
    while (!q.empty()) {
        int t = q.front();
        q.pop();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            if (seen[g.tet]) continue;
            seen[g.tet] = true;
            q.push(g.tet);
            std::vector<long> row(nf, 0);
            row[tri.face_class(t, f)] = 1;
            rel.push_back(std::move(row));
        }
    }
    for (const auto& cls : tri.edge_classes()) {
        std::vector<long> row(nf, 0);
        for (const auto& s : cls.slots) row[tri.face_class(s.tet, s.exit_face())] += tri.is_face_rep(s.tet, s.exit_face()) ? 1 : -1;
        rel.push_back(std::move(row));
    }
    auto diag = smith_diagonal(rel);
    std::vector<long> out;
    int rank = 0;
    for (long d : diag) {
        ++rank;
        if (d > 1) out.push_back(d);
    }
    for (int k = rank; k < nf; ++k) out.push_back(0);
    return out;
}

std::string format_h1(const std::vector<long>& h1) {
    if (h1.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < h1.size(); ++i) {
        if (i) s += "+";
        s += h1[i] == 0 ? "Z" : "Z/" + std::to_string(h1[i]);
    }
    return s;
}

std::vector<long> parse_h1(const std::string& text) {
    std::vector<long> out;
    if (text == "0") return out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '+')) {
        if (part == "Z")
            out.push_back(0);
        else if (part.rfind("Z/", 0) == 0)
            out.push_back(std::stol(part.substr(2)));
        else
            throw InvalidInput("bad homology term '" + part + "'");
    }
    std::sort(out.begin(), out.end(), [](long a, long b) {
        if ((a == 0) != (b == 0)) return b == 0;
        return a < b;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Fingerprints

namespace {

// Compared on a 1e-9 grid so that rounding noise cannot reorder equal shapes.
bool shape_less(Complex a, Complex b) {
    auto key = [](Complex z) { return std::pair{std::llround(z.real() * 1e9), std::llround(z.imag() * 1e9)}; };
    return key(a) < key(b);
}

}  // namespace

bool Fingerprint::matches(const Fingerprint& o, double tol) const {
    if (cusps != o.cusps || geometric != o.geometric) return false;
    if (!geometric) return false;
    if (std::abs(volume - o.volume) > tol) return false;
    if (shapes.size() != o.shapes.size()) return false;
    std::vector<bool> used(o.shapes.size(), false);
    for (const auto& s : shapes) {
        bool found = false;
        for (size_t k = 0; k < o.shapes.size(); ++k)
            if (!used[k] && std::abs(s - o.shapes[k]) <= tol) {
                used[k] = found = true;
                break;
            }
        if (!found) return false;
    }
    if (h1 && o.h1 && *h1 != *o.h1) return false;
    if (cover_h1 && o.cover_h1 && *cover_h1 != *o.cover_h1) return false;
    return true;
}

std::string Fingerprint::to_string() const { return to_csv_line("", *this).substr(1); }

Fingerprint fingerprint_from_shapes(const Triangulation& tri, const Shapes& z, const PartialFilling& fill) {
    Fingerprint fp;
    fp.geometric = true;
    fp.volume = volume(z);
    for (int c = 0; c < tri.cusp_count(); ++c) {
        if (!fill.empty() && fill[c]) continue;
        ++fp.cusps;
        fp.shapes.push_back(cusp_shape(tri, z, c));
    }
    std::sort(fp.shapes.begin(), fp.shapes.end(), shape_less);
    bool unfilled = fill.empty() || std::none_of(fill.begin(), fill.end(), [](const auto& s) { return s.has_value(); });
    if (unfilled) fp.h1 = h1_invariants(tri);
    return fp;
}

Fingerprint fingerprint(const Triangulation& tri, const PartialFilling& fill, const SolverOptions& opts) {
    const GluingSystem sys = assemble_system(tri);
    try {
        return fingerprint_from_shapes(tri, solve_shapes(sys, fill, opts), fill);
    } catch (const NonGeometric&) {
        Fingerprint fp;
        for (int c = 0; c < tri.cusp_count(); ++c)
            if (fill.empty() || !fill[c]) ++fp.cusps;
        if (fill.empty() || std::none_of(fill.begin(), fill.end(), [](const auto& s) { return s.has_value(); }))
            fp.h1 = h1_invariants(tri);
        return fp;
    }
}

std::string format_shapes(const std::vector<Complex>& shapes) {
    std::string s;
    char buf[96];
    for (size_t i = 0; i < shapes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12f%+.12fi", shapes[i].real() == 0 ? 0.0 : shapes[i].real(), shapes[i].imag());
        if (i) s += ";";
        s += buf;
    }
    return s;
}

std::vector<Complex> parse_shapes(const std::string& text) {
    std::vector<Complex> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) {
        if (part.empty()) continue;
        if (part.back() != 'i') throw InvalidInput("bad shape '" + part + "'");
        // split at the sign that starts the imaginary part
        size_t k = part.find_last_of("+-", part.size() - 2);
        if (k == std::string::npos || k == 0 || part[k - 1] == 'e' || part[k - 1] == 'E')
            throw InvalidInput("bad shape '" + part + "'");
        try {
            out.emplace_back(std::stod(part.substr(0, k)), std::stod(part.substr(k, part.size() - k - 1)));
        } catch (const std::exception&) {
            throw InvalidInput("bad shape '" + part + "'");
        }
    }
    return out;
}

std::string to_csv_line(const std::string& name, const Fingerprint& fp) {
    std::string line = name + "," + std::to_string(fp.cusps) + ",";
    if (fp.geometric) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", fp.volume);
        line += buf;
    } else {
        line += "nonhyperbolic";
    }
    line += "," + format_shapes(fp.shapes) + ",";
    if (fp.h1) line += format_h1(*fp.h1);
    return line;
}

std::string format_cover_h1(const std::vector<std::vector<long>>& groups) {
    std::string s;
    for (size_t i = 0; i < groups.size(); ++i) s += (i ? ";" : "") + format_h1(groups[i]);
    return s;
}

std::vector<std::vector<long>> parse_cover_h1(const std::string& text) {
    std::vector<std::vector<long>> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) out.push_back(parse_h1(part));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace foliar
