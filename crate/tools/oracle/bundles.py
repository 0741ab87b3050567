"""Builds the bundle fixtures and checks compatibility independently (sympy).

Subspaces are chosen over Q. Each certificate takes, for every functional u
on a maximal cone, the intersection of the ray filtrations at <u, v_rho>.
"""
import json
from pathlib import Path

import sympy as sp

DATA = Path(__file__).resolve().parents[2] / "crates" / "core" / "data"


def span(r, vectors):
    if not vectors:
        return sp.zeros(0, r)
    m = sp.Matrix(vectors)
    red, piv = m.rref()
    return red[: len(piv), :]


def rows(m):
    return [[int(x) if x.q == 1 else f"{x.p}/{x.q}" for x in m.row(i)] for i in range(m.rows)]


def dim(m):
    return m.rows


def intersect(r, a, b):
    if a.rows == 0 or b.rows == 0:
        return sp.zeros(0, r)
    ann = lambda s: s.nullspace() and sp.Matrix.hstack(*s.nullspace()).T
    na, nb = a.nullspace(), b.nullspace()
    eqs = [v.T for v in na + nb]
    if not eqs:
        return span(r, [list(sp.eye(r).row(i)) for i in range(r)])
    sol = sp.Matrix.vstack(*eqs).nullspace()
    return span(r, [list(v) for v in sol])


def value(filt, i, r):
    for t, s in filt:
        if i <= t:
            return s
    return sp.zeros(0, r)


def add(r, a, b):
    vecs = [list(a.row(i)) for i in range(a.rows)] + [list(b.row(i)) for i in range(b.rows)]
    return span(r, vecs)


def build(name, fan, r, filtrations, multisets):
    rays = fan["rays"]
    splittings = {}
    failures = []
    for k, cone in enumerate(fan["max_cones"]):
        pieces = []
        for u in multisets[k]:
            top = span(r, [list(sp.eye(r).row(i)) for i in range(r)])
            for rho in cone:
                top = intersect(r, top, value(filtrations[rho], sum(a * b for a, b in zip(u, rays[rho])), r))
            pieces.append((u, top))
        total = span(r, [list(p.row(i)) for _, p in pieces for i in range(p.rows)])
        if sum(dim(p) for _, p in pieces) != r or dim(total) != r:
            failures.append((k, "not a direct sum", [dim(p) for _, p in pieces]))
        for rho in cone:
            vals = {sum(a * b for a, b in zip(u, rays[rho])) for u, _ in pieces}
            points = set()
            for t, _ in filtrations[rho]:
                points |= {t, t + 1}
            for x in vals:
                points |= {x, x + 1}
            for i in sorted(points):
                rhs = sp.zeros(0, r)
                for u, p in pieces:
                    if sum(a * b for a, b in zip(u, rays[rho])) >= i:
                        rhs = add(r, rhs, p)
                if value(filtrations[rho], i, r) != rhs:
                    failures.append((k, rho, i))
                    break
        splittings[str(k)] = [{"u": list(u), "subspace": rows(p)} for u, p in pieces]
    doc = {
        "fan": name,
        "rank": r,
        "filtrations": {str(rho): [{"threshold": t, "subspace": rows(s)} for t, s in f] for rho, f in enumerate(filtrations)},
        "splittings": splittings,
    }
    return doc, failures


def main():
    fixtures = {}
    # Eikelberg: three distinct lines in Q^2.
    E2 = span(2, [[1, 0], [0, 1]])
    L, Lp, Lpp = span(2, [[1, 0]]), span(2, [[0, 1]]), span(2, [[1, 1]])
    fan = json.loads((DATA / "eikelberg.fan.json").read_text())
    filt = [
        [(-12, E2)],
        [(-12, E2), (18, L)],
        [(-12, E2), (0, Lp)],
        [(-12, E2), (0, Lpp)],
        [(0, E2), (18, L)],
        [(6, E2)],
    ]
    ms = [
        [(15, -15, 3), (3, 3, -9)],
        [(16, -14, -4), (2, 2, -2)],
        [(12, -18, 0), (6, 6, -6)],
        [(24, -18, 0), (-6, 6, -6)],
        [(12, -6, 0), (6, -6, -6)],
    ]
    fixtures["eikelberg"] = build("eikelberg", fan, 2, filt, ms)

    # Fulton rank 3: V = L + L'; all stated containments hold.
    E3 = span(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    L, Lp = span(3, [[1, 0, 0]]), span(3, [[0, 1, 0]])
    LLp = span(3, [[1, 0, 0], [0, 1, 0]])
    V = LLp
    Vp = span(3, [[0, 1, 0], [0, 0, 1]])
    Vpp = span(3, [[1, 1, 0], [0, 0, 1]])
    Vppp = span(3, [[0, 1, 0], [1, 0, 1]])
    fan = json.loads((DATA / "fulton.fan.json").read_text())
    filt = [
        [(-1, E3), (0, V), (1, L)],
        [(0, E3), (2, LLp)],
        [(0, E3), (2, Lp)],
        [(-2, E3), (0, Vp)],
        [(-2, E3), (0, Vpp)],
        [(0, E3), (2, Lp)],
        [(-2, E3), (0, Vppp), (2, Lp)],
        [(-2, E3), (0, Lp)],
    ]
    ms = [
        [(1, -1, 0), (0, -1, 1), (0, 0, 0)],
        [(0, -1, 1), (0, -1, -1), (1, 0, 1)],
        [(1, -1, 0), (0, -1, 1), (0, 0, 0)],
        [(1, 0, 1), (0, -2, 0), (0, 0, 0)],
        [(1, -1, 0), (-1, -1, 0), (1, 0, 1)],
        [(1, -1, 0), (0, -1, 1), (0, 0, 0)],
    ]
    fixtures["fulton_rank3"] = build("fulton", fan, 3, filt, ms)

    # Tangent bundle of P^2 in the basis v1 = (1,0), v2 = (0,1).
    fan = json.loads((DATA / "p2.fan.json").read_text())
    v = [[1, 0], [0, 1], [-1, -1]]
    filt = [[(0, E2), (1, span(2, [v[j]]))] for j in range(3)]
    dual = lambda j, i: tuple((1 if j == x else 0) - (1 if i == x else 0) for x in range(2))
    ms = [[dual(j, i) for j in range(3) if j != i] for i in range(3)]
    fixtures["p2_tangent"] = build("p2", fan, 2, filt, ms)

    for name, (doc, failures) in fixtures.items():
        (DATA / f"{name}.bundle.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(name, "compatible" if not failures else f"incompatible: {failures}")


if __name__ == "__main__":
    main()
