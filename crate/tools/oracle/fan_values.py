"""Independent oracle for frozen fan, census and rank values (sympy, brute force)."""
import itertools
import json
import sys
from pathlib import Path

import sympy as sp

DATA = Path(__file__).resolve().parents[2] / "crates" / "core" / "data"


def load(name):
    return json.loads((DATA / f"{name}.fan.json").read_text())


def edges_of(fan):
    """Pairs of rays spanning a 2-dim face: common rays of two cones that form a facet."""
    rays = [sp.Matrix(r) for r in fan["rays"]]
    out = set()
    for cone in fan["max_cones"]:
        for a, b in itertools.combinations(cone, 2):
            n = rays[a].cross(rays[b])
            signs = [n.dot(rays[c]) for c in cone if c not in (a, b)]
            if all(s > 0 for s in signs) or all(s < 0 for s in signs):
                out.add((a, b))
    return out


def left_kernel(rows):
    m = sp.Matrix(rows).T
    vs = m.nullspace()
    res = []
    for v in vs:
        den = sp.ilcm(*[sp.fraction(x)[1] for x in v])
        w = [int(x * den) for x in v]
        g = 0
        for x in w:
            g = sp.igcd(g, x)
        w = [x // g for x in w]
        if next(x for x in w if x != 0) < 0:
            w = [-x for x in w]
        res.append(w)
    return res


def automorphisms(fan):
    m = len(fan["rays"])
    cones = {frozenset(c) for c in fan["max_cones"]}
    auts = []
    for p in itertools.permutations(range(m)):
        if all(frozenset(p[i] for i in c) in cones for c in cones):
            auts.append(p)
    return auts


def census(fan):
    edges = edges_of(fan)
    m = len(fan["rays"])
    adj = {frozenset(e) for e in edges}
    even = [s for k in range(0, m + 1, 2) for s in itertools.combinations(range(m), k)]
    good = [frozenset(s) for s in even if s and not any(frozenset(p) in adj for p in itertools.combinations(s, 2))]
    auts = automorphisms(fan)
    seen = set()
    orbits = []
    for s in good:
        if s in seen:
            continue
        orb = {frozenset(p[i] for i in s) for p in auts}
        seen |= orb
        orbits.append((sorted(s), len(orb)))
    return len(even), len(good), len(auts), orbits, len(edges)


def main():
    fulton = load("fulton")
    print("fulton walls", len(edges_of(fulton)))
    for i, c in enumerate(fulton["max_cones"]):
        print("fulton relation", i, left_kernel([fulton["rays"][j] for j in c]))
    eik = load("eikelberg")
    for i, c in enumerate(eik["max_cones"]):
        print("eikelberg relation", i, left_kernel([eik["rays"][j] for j in c]))
    sig = load("sigma_prime")
    print("sigma_prime walls", len(edges_of(sig)), "non-tree", len(edges_of(sig)) - len(sig["max_cones"]) + 1)
    for i, c in enumerate(sig["max_cones"]):
        print("sigma_prime relation", i, left_kernel([sig["rays"][j] for j in c]))
    total, good, naut, orbits, _ = census(fulton)
    print("census total", total, "good", good, "automorphisms", naut)
    for rep, size in orbits:
        print("  orbit rep", rep, "size", size)
    mat = sp.Matrix([
        [-2, 4, 0, -3, 0, 5, 0, 0, 0, 0, 0, 0],
        [-2, 0, 4, -3, 5, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, -1, 0, 1, 0, -1, 1],
        [0, 0, 0, 0, 0, 0, 0, -1, 1, -1, 0, 1],
        [2, -4, 0, 0, 0, 0, 0, -3, 5, 0, 0, 0],
        [2, 0, -4, 0, 0, 0, -3, 0, 5, 0, 0, 0],
        [0, 1, 0, -1, 0, 0, 0, 0, -1, 0, 1, 0],
        [0, 0, 1, -1, 0, 0, 0, 0, -1, 1, 0, 0],
        [0, 0, 0, 1, -1, 0, 0, 0, 0, 0, -1, 1],
        [0, 0, 0, 1, 0, -1, 0, 0, 0, -1, 0, 1],
        [2, 0, 0, 0, -5, 0, 0, -3, 0, 0, 0, 4],
        [2, 0, 0, 0, 0, -5, -3, 0, 0, 0, 0, 4],
    ])
    print("printed matrix rank", mat.rank())


if __name__ == "__main__":
    sys.exit(main())
