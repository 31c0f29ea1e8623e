#!/usr/bin/env python3
"""Regenerates the bundled data directory from SnapPy.

Usage: python3 scripts/gen_data.py [--out data] [--foliar build/foliar]

Triangulations are written in TRI-v1 with SnapPy's meridian/longitude rows
(the census peripheral basis). Tetrahedra are relabeled by even vertex maps
so that cusps numbered by first occurrence agree with SnapPy's cusp order.
Fingerprints (volume, normalized cusp shapes, H1) and the H1 of every double
cover come from SnapPy itself.
"""

import argparse
import cmath
import itertools
import math
import os
import random
import re
import subprocess
import sys

import snappy

# ---------------------------------------------------------------------------
# names

CENSUS100 = [M.name() for M in snappy.OrientableCuspedCensus[:100]]

VEERING_CENSUS = ["m003", "m004", "m009", "m010", "m016", "m022", "m023", "m036", "m038", "m039",
                  "m040", "m052", "m083", "m115", "m119", "m120", "m125", "m135", "m136", "m140"]

NO_VEERING = ["m006", "m007", "m011", "m029", "m030", "m037", "m047", "m049", "m060", "m064",
              "m081", "m082", "m095", "m116", "m117", "m129", "m130", "m142", "m143"]

COVER_NAMES = ["s649", "s874", "t07681", "t07933", "t07939", "v3222", "v3387", "v3431", "t09618",
               "t09795", "t10615", "t10708", "t10831", "t11579", "t11693", "t12066", "t12048",
               "t12038", "t12310", "o9_33110", "L8n5"]

IDENT_RESULTS = ["m035", "m307", "m149", "s673", "m288", "s778", "t08875", "t07936"]

EXTRA = ["L5a1"]

# (base, partial, result)
IDENTS = [
    ("L8n5", "(*;1/2;2)", "m149"),
    ("t12048", "(2;*)", "s778"),
    ("t12048", "(3;*)", "t07936"),
    ("t12048", "(3/2;*)", "t08875"),
    ("v3222", "(1;*)", "m035"),
    ("v3222", "(2;*)", "m307"),
    ("t12066", "(2;2;*)", "m149"),
    ("t12066", "(3;3;*)", "s673"),
    ("t12066", "(2;3;*)", "m307"),
    ("t12066", "(3;2;*)", "m288"),
]

# ---------------------------------------------------------------------------
# permutations


def perm_sign(p):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


def pair_class(a, b):
    a, b = min(a, b), max(a, b)
    return {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}[(a, b)]


EVEN = [p for p in itertools.permutations(range(4)) if perm_sign(p) == 1]


def inverse(p):
    q = [0] * 4
    for i, x in enumerate(p):
        q[x] = i
    return tuple(q)


def compose(p, q):  # (p*q)[i] = p[q[i]]
    return tuple(p[q[i]] for i in range(4))


# ---------------------------------------------------------------------------
# SnapPy -> TRI


def snappy_data(M):
    """gluings[t][f] = (t', perm), cusp[t][v], rows (list of (meridian, longitude))."""
    text = M._to_string()
    lines = [l for l in text.splitlines()]
    # locate the tetrahedron count: first line after the cusp block that is a lone integer
    i = 0
    while not lines[i].strip().startswith(("oriented_manifold", "nonorientable_manifold")):
        i += 1
    i += 1
    while not re.fullmatch(r"\s*\d+\s+\d+\s*", lines[i]):
        i += 1
    nt, nk = map(int, lines[i].split())
    i += 1 + nt + nk
    while not lines[i].strip():
        i += 1
    n = int(lines[i])
    i += 1
    gl, cusps = [], []
    for t in range(n):
        while not lines[i].strip():
            i += 1
        nbr = list(map(int, lines[i].split()))
        perms = lines[i + 1].split()
        cs = list(map(int, lines[i + 2].split()))
        i += 3 + 4 + 1
        gl.append([(nbr[f], tuple(int(ch) for ch in perms[f])) for f in range(4)])
        cusps.append(cs)
    eqs = M.gluing_equations()
    rows_all = [[int(eqs[r, c]) for c in range(eqs.shape[1])] for r in range(eqs.shape[0])]
    k = M.num_cusps()
    blocks = [(rows_all[n + 2 * c], rows_all[n + 2 * c + 1]) for c in range(k)]
    order = row_blocks(M, blocks) if k > 1 else [0]
    rows = [blocks[b] for b in order]
    return gl, cusps, rows, rows_all[:n]


def holonomy(row, z):
    s = 0
    for j, w in enumerate(z):
        params = [w, 1 / (1 - w), 1 - 1 / w]
        for k in range(3):
            s += row[3 * j + k] * cmath.log(params[k])
    return s


def row_blocks(M, blocks):
    """order[c] = index of the gluing-equation block that belongs to cusp c.

    SnapPy does not always list the cusp blocks of gluing_equations() in
    dehn_fill order (link complements can come out reversed), so each cusp is
    filled in turn and the block whose holonomy stops vanishing is its own.
    """
    k = len(blocks)
    order = []
    for c in range(k):
        for slope in [(2, 1), (3, 1), (5, 1), (1, 2), (-2, 1), (-3, 1), (1, 3), (7, 1)]:
            F = M.copy()
            fill = [(0, 0)] * k
            fill[c] = slope
            F.dehn_fill(fill)
            if not is_geometric(F):
                continue
            z = [complex(w) for w in F.tetrahedra_shapes("rect")]
            hits = [b for b in range(k) if abs(slope[0] * holonomy(blocks[b][0], z)
                                               + slope[1] * holonomy(blocks[b][1], z)) > 1e-6]
            if len(hits) == 1:
                order.append(hits[0])
                break
        else:
            raise RuntimeError("cannot match cusp %d of %s to its gluing rows" % (c, M.name()))
    if sorted(order) != list(range(k)):
        raise RuntimeError("cusp rows of %s do not match up" % M.name())
    return order


def relabel(gl, cusps, rows, order, phi):
    """order[i] = old tet of new tet i; phi[old t] = even vertex map old -> new."""
    n = len(gl)
    new_index = {t: i for i, t in enumerate(order)}
    ngl, ncusp = [], []
    for i, t in enumerate(order):
        ph = phi[t]
        inv = inverse(ph)
        g_new = [None] * 4
        c_new = [None] * 4
        for f in range(4):
            t2, p = gl[t][f]
            g_new[ph[f]] = (new_index[t2], compose(phi[t2], compose(p, inv)))
            c_new[ph[f]] = cusps[t][f]
        ngl.append(g_new)
        ncusp.append(c_new)

    def move_row(row):
        out = [0] * (3 * n)
        for i, t in enumerate(order):
            ph = phi[t]
            for a, b in [(0, 1), (0, 2), (0, 3)]:
                out[3 * i + pair_class(ph[a], ph[b])] = row[3 * t + pair_class(a, b)]
        return out

    nrows = [(move_row(m), move_row(l)) for m, l in rows]
    return ngl, ncusp, nrows


def first_occurrence(cusps):
    seen = []
    for cs in cusps:
        for c in cs:
            if c not in seen:
                seen.append(c)
    return seen


def align_cusps(gl, cusps, rows, rng):
    k = len(rows)
    if first_occurrence(cusps) == list(range(k)):
        return gl, cusps, rows
    n = len(gl)
    for _ in range(20000):
        order = list(range(n))
        rng.shuffle(order)
        phi = {t: rng.choice(EVEN) for t in range(n)}
        ngl, ncusp, nrows = relabel(gl, cusps, rows, order, phi)
        if first_occurrence(ncusp) == list(range(k)):
            return ngl, ncusp, nrows
    raise RuntimeError("could not align cusp numbering")


def tri_text(gl, rows, header):
    out = ["% TRI v1"]
    out += ["# " + h for h in header]
    out.append("tets %d" % len(gl))
    for t, g in enumerate(gl):
        out.append("%d: " % t + " ".join("%d:%s" % (t2, "".join(map(str, p))) for t2, p in g))
    if rows:
        out.append("cusps %d" % len(rows))
        for c, (m, l) in enumerate(rows):
            out.append("meridian %d: " % c + " ".join(map(str, m)))
            out.append("longitude %d: " % c + " ".join(map(str, l)))
    return "\n".join(out) + "\n"


def is_geometric(M):
    return M.solution_type() == "all tetrahedra positively oriented"


def oriented_copy(M):
    """A geometric triangulation of M with all gluings odd."""
    N = M.copy()
    for attempt in range(200):
        gl, cusps, rows, _ = snappy_data(N)
        odd = all(perm_sign(p) == -1 for g in gl for _, p in g)
        if odd and is_geometric(N):
            return N
        N.randomize()
    raise RuntimeError("no oriented geometric triangulation for %s" % M.name())


def export(M, name, rng, header_extra=()):
    gl, cusps, rows, edges = snappy_data(M)
    gl, cusps, rows = align_cusps(gl, cusps, rows, rng)
    header = ["%s: exported from SnapPy %s" % (name, snappy.__version__),
              "cusp rows in the census peripheral basis (meridian, longitude)"] + list(header_extra)
    return tri_text(gl, rows, header)


# ---------------------------------------------------------------------------
# fingerprints


def normalize_shape(tau):
    if tau.imag < 0:
        tau = -tau
    for _ in range(1000):
        tau -= round(tau.real)
        if abs(tau) ** 2 < 1 - 1e-12:
            tau = -1 / tau
        else:
            break
    return complex(abs(tau.real), tau.imag)


def h1_text(M):
    s = str(M.homology()).replace(" ", "")
    return s


def fingerprint_line(name, M):
    vol = float(M.volume())
    shapes = [normalize_shape(complex(s)) for s in M.cusp_info("shape")]
    shapes.sort(key=lambda z: (z.real, z.imag))
    sh = ";".join("%.12f%+.12fi" % (z.real if z.real != 0 else 0.0, z.imag) for z in shapes)
    return "%s,%d,%.12g,%s,%s" % (name, M.num_cusps(), vol, sh, h1_text(M))


def cover_homology_line(name, M):
    return "%s,%s" % (name, ";".join(sorted(h1_text(C) for C in M.covers(2))))


# ---------------------------------------------------------------------------


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    ap.add_argument("--seed", type=int, default=20240611)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tri_dir = os.path.join(args.out, "tri")
    os.makedirs(tri_dir, exist_ok=True)

    names = list(dict.fromkeys(CENSUS100 + COVER_NAMES + IDENT_RESULTS + EXTRA))
    fps, covers = [], []
    for name in names:
        M = snappy.Manifold(name)
        fps.append(fingerprint_line(name, M))
        covers.append(cover_homology_line(name, M))
        N = oriented_copy(M)
        # fillings used by identification facts must be geometric on the
        # bundled triangulation
        fills = [p for b, p, _ in IDENTS if b == name]
        for attempt in range(500):
            ok = True
            for p in fills:
                F = N.copy()
                slopes = p.strip("()").split(";")
                for c, s in enumerate(slopes):
                    if s == "*":
                        continue
                    q = s.split("/")
                    F.dehn_fill((int(q[0]), int(q[1]) if len(q) > 1 else 1), c)
                if not is_geometric(F):
                    ok = False
            if ok:
                break
            N.randomize()
            N = oriented_copy(N)
        else:
            raise RuntimeError("no triangulation of %s with geometric fillings" % name)
        with open(os.path.join(tri_dir, name + ".tri"), "w") as f:
            f.write(export(N, name, rng))
        print(name, N.num_tetrahedra(), file=sys.stderr)

    with open(os.path.join(args.out, "fingerprints.csv"), "w") as f:
        f.write("name,cusps,volume,shapes,h1\n")
        for line in fps:
            f.write(line + "\n")

    with open(os.path.join(args.out, "cover_homology.csv"), "w") as f:
        f.write("# H1 of every connected double cover (one entry per nonzero class of\n")
        f.write("# H^1(M;Z/2)); separates census names that share volume, cusp shape and H1\n")
        f.write("name,cover_h1\n")
        for line in covers:
            f.write(line + "\n")

    with open(os.path.join(args.out, "census100.txt"), "w") as f:
        f.write("# first 100 orientable cusped census manifolds, census order\n")
        for name in CENSUS100:
            f.write("%s tri/%s.tri\n" % (name, name))


if __name__ == "__main__":
    main()
