"""Brute-force search for subspaces of Q^3 meeting the rank-3 incidence relations."""
import itertools

import sympy as sp

vecs = [sp.Matrix(v) for v in itertools.product(range(-1, 2), repeat=3) if any(v)]
lines = []
for v in vecs:
    if not any(sp.Matrix.hstack(v, w).rank() == 1 for w in lines):
        lines.append(v)
planes = []
for a, b in itertools.combinations(lines, 2):
    m = sp.Matrix.hstack(a, b)
    if m.rank() == 2 and not any(sp.Matrix.hstack(m, p).rank() == 2 for p in planes):
        planes.append(m)


def dim(*spaces):
    """Dimension of the intersection of column spans."""
    null = None
    basis = sp.eye(3)
    for s in spaces:
        ann = s.T.nullspace()
        null = ann if null is None else null + ann
    return 3 - sp.Matrix.hstack(*null).T.rank() if null else 3


def contains(big, small):
    return sp.Matrix.hstack(big, small).rank() == big.rank()


L = sp.Matrix([1, 0, 0])
Lp = sp.Matrix([0, 1, 0])
LLp = sp.Matrix.hstack(L, Lp)
best = 0
count = 0
for V in planes:
    if not contains(V, L):
        continue
    for Vp in planes:
        if not contains(Vp, Lp):
            continue
        for Vpp in planes:
            if contains(Vpp, L) or contains(Vpp, Lp):
                continue
            a = dim(V, Vp, Vpp) == 1
            b = dim(V, Vp, LLp) == 1
            c = dim(V, Vpp, LLp) == 1
            if a and b and c and len({tuple(V.rref()[0]), tuple(Vp.rref()[0]), tuple(Vpp.rref()[0])}) == 3:
                count += 1
print("solutions with all relations:", count)
