"""Regenerate the fixture triangulations under fixtures/.

Gluing data and peripheral curves come from SnapPy (census manifold m004 and
the link-table exteriors L5a1, L6a4, whose peripheral curves are the
topological meridian and longitude of each component).
Cusps are reordered to match the vertex-class order used by the Rust crate
(first appearance when scanning tetrahedra, then vertices 0..3), and the
Whitehead fixture is relabelled so every shape is i.

Usage: python3 tools/gen_fixtures.py
Requires: snappy
"""
import json
import itertools
import os
import sys

import snappy

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")

SLOT = {frozenset((0, 1)): 0, frozenset((2, 3)): 0,
        frozenset((0, 2)): 1, frozenset((1, 3)): 1,
        frozenset((0, 3)): 2, frozenset((1, 2)): 2}


def parse_snappea(text):
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("%")]
    # header: name, solution type, orientability, CS, cusp counts, cusp lines, n
    i = 0
    name = lines[i]; i += 4
    ncusp = sum(map(int, lines[i].split())); i += 1 + ncusp
    n = int(lines[i]); i += 1
    tets = []
    for _ in range(n):
        nbr = list(map(int, lines[i].split()))
        perms = [[int(ch) for ch in tok] for tok in lines[i + 1].split()]
        cusps = list(map(int, lines[i + 2].split()))
        i += 3 + 4 + 1
        tets.append((nbr, perms, cusps))
    return name, tets


def compose(a, b):
    # (a o b)[v] = a[b[v]]
    return [a[b[v]] for v in range(4)]


def inverse(p):
    q = [0] * 4
    for v, w in enumerate(p):
        q[w] = v
    return q


def relabel(tets, sigma):
    """sigma[t] maps old vertex labels of tet t to new labels."""
    out = []
    for t, (nbr, perms, cusps) in enumerate(tets):
        nn = [None] * 4
        np_ = [None] * 4
        nc = [None] * 4
        for f in range(4):
            u = nbr[f]
            p = compose(sigma[u], compose(perms[f], inverse(sigma[t])))
            nn[sigma[t][f]] = u
            np_[sigma[t][f]] = p
            nc[sigma[t][f]] = cusps[f]
        out.append((nn, np_, nc))
    return out


def edge_rows(tets):
    n = len(tets)
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, (nbr, perms, _) in enumerate(tets):
        for f in range(4):
            rest = [v for v in range(4) if v != f]
            for a, b in itertools.combinations(rest, 2):
                p = perms[f]
                x, y = find((t, frozenset((a, b)))), find((nbr[f], frozenset((p[a], p[b]))))
                if x != y:
                    parent[x] = y
    classes = {}
    for t in range(n):
        for e in map(frozenset, itertools.combinations(range(4), 2)):
            classes.setdefault(find((t, e)), []).append((t, e))
    rows = []
    for members in classes.values():
        row = [0] * (3 * n)
        for t, e in members:
            row[3 * t + SLOT[e]] += 1
        rows.append(tuple(row))
    return sorted(rows)


def vertex_order(tets):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, (nbr, perms, _) in enumerate(tets):
        for f in range(4):
            for v in range(4):
                if v != f:
                    a, b = find((t, v)), find((nbr[f], perms[f][v]))
                    if a != b:
                        parent[a] = b
    order = []
    for t in range(len(tets)):
        for v in range(4):
            r = find((t, v))
            if r not in order:
                order.append(r)
    return [next(tets[t][2][v] for t in range(len(tets)) for v in range(4) if find((t, v)) == r)
            for r in order]


def rotate_rows(rows, rot):
    out = []
    for row in rows:
        row = list(row)
        new = []
        for t, k in enumerate(rot):
            a, b, c = row[3 * t:3 * t + 3]
            new += [(a, b, c), (b, c, a), (c, a, b)][k]
        out.append(new)
    return out


ROTATIONS = [[0, 1, 2, 3], [0, 3, 1, 2], [0, 2, 3, 1]]
# ROTATIONS[k] moves shape slot k onto edge 01 (k=1: z' edge 02 -> 01; k=2: z'' edge 03 -> 01)


def build(census_name, out_name, display, target_shape=None):
    M = snappy.Manifold(census_name)
    name, tets = parse_snappea(M._to_string())
    n = len(tets)
    G = M.gluing_equations()
    eq = [[int(G[i, j]) for j in range(3 * len(tets))] for i in range(len(G.list()) // (3 * len(tets)))]
    ncusp = M.num_cusps()
    edge_eq = eq[:n]
    periph = eq[n:]
    assert sorted(map(tuple, edge_eq)) == edge_rows(tets), "slot convention mismatch"
    rot = [0] * n
    if target_shape is not None:
        shapes = [complex(z) for z in M.tetrahedra_shapes('rect')]
        for t, z in enumerate(shapes):
            comp = [z, 1 / (1 - z), 1 - 1 / z]
            rot[t] = min(range(3), key=lambda k: abs(comp[k] - target_shape))
        sigma = [ROTATIONS[k] for k in rot]
        tets = relabel(tets, sigma)
        edge_eq = rotate_rows(edge_eq, rot)
        periph = rotate_rows(periph, rot)
        assert sorted(map(tuple, edge_eq)) == edge_rows(tets), "relabel mismatch"
    order = vertex_order(tets)
    assert sorted(order) == list(range(ncusp))
    cusps = []
    for c in order:
        cusps.append({"meridian": periph[2 * c], "longitude": periph[2 * c + 1]})
    doc = {
        "name": display,
        "tetrahedra": n,
        "gluings": [[{"to": nbr[f], "perm": perms[f]} for f in range(4)] for nbr, perms, _ in tets],
        "cusps": cusps,
    }
    path = os.path.join(OUT, out_name)
    with open(path, "w") as fh:
        fh.write(render(doc))
    print(path, n, ncusp, M.volume())


def render(doc):
    out = ["{", f'  "name": {json.dumps(doc["name"])},', f'  "tetrahedra": {doc["tetrahedra"]},', '  "gluings": [']
    g = doc["gluings"]
    for i, faces in enumerate(g):
        items = ", ".join('{"to": %d, "perm": [%s]}' % (f["to"], ", ".join(map(str, f["perm"]))) for f in faces)
        out.append("    [" + items + "]" + ("," if i + 1 < len(g) else ""))
    out.append("  ],")
    out.append('  "cusps": [')
    for i, c in enumerate(doc["cusps"]):
        out.append("    {")
        out.append('      "meridian": [' + ", ".join(map(str, c["meridian"])) + "],")
        out.append('      "longitude": [' + ", ".join(map(str, c["longitude"])) + "]")
        out.append("    }" + ("," if i + 1 < len(doc["cusps"]) else ""))
    out.append("  ]")
    out.append("}")
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    build("m004", "figure8.tri", "figure-eight knot complement")
    build("L5a1", "whitehead.tri", "Whitehead link complement", target_shape=1j)
    build("L6a4", "borromean.tri", "Borromean rings complement")
