"""Betti numbers of the bundled nilpotent algebras and invariant Betti numbers
of the finite actions, by exact ranks in sympy.
"""
import os
import sys

import sympy as sp

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "lib"))
import ext  # noqa: E402


def dmatrix(alg, k):
    src, dst = ext.monomials(alg.n, k), ext.monomials(alg.n, k + 1)
    row = {m: i for i, m in enumerate(dst)}
    D = sp.zeros(len(dst), len(src))
    for c, m in enumerate(src):
        for key, v in alg.d({m: 1}).items():
            D[row[key], c] = v
    return D


def betti(alg, proj=None):
    n = alg.n
    ranks, dims = [], []
    for k in range(n + 1):
        P = proj(k) if proj else sp.eye(len(ext.monomials(n, k)))
        dims.append(P.rank())
        ranks.append((dmatrix(alg, k) * P).rank() if k < n else 0)
    return [dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1)]


def action_matrix(g, n, k):
    basis = ext.monomials(n, k)
    row = {m: i for i, m in enumerate(basis)}
    P = sp.zeros(len(basis), len(basis))
    images = [ext.clean({(j,): g[i, j] for j in range(n)}) for i in range(n)]
    for c, m in enumerate(basis):
        for key, v in ext.to_basis({m: 1}, images).items():
            P[row[key], c] = v
    return P


def averaging(gens, n):
    # group generated by one element
    (g,) = gens
    elems, h = [sp.eye(n)], g
    while h != sp.eye(n):
        elems.append(h)
        h = sp.simplify(h * g)
    return len(elems), (lambda k: sp.simplify(sum((action_matrix(e, n, k) for e in elems),
                                                   sp.zeros(len(ext.monomials(n, k)))) / len(elems)))


def e2(a, b):
    return ext.clean({(a, b): 1})


a, b = sp.Rational(-1, 2), sp.sqrt(3) / 2

# Iwasawa at t = s = 1
iw = ext.Algebra(6, {4: ext.clean({(0, 1): 1, (2, 3): 2, (0, 2): 1, (1, 3): -1}), 5: ext.clean({(0, 3): 1, (1, 2): 1})})
assert betti(iw) == [1, 4, 8, 10, 8, 4, 1], betti(iw)
# H3 x R3 (second family at t = 1, s = 2)
h3 = ext.Algebra(6, {5: ext.clean({(0, 1): 1, (0, 3): 2, (1, 2): -2, (2, 3): 4})})
assert betti(h3) == [1, 5, 11, 14, 11, 5, 1], betti(h3)

# KT x T^4: de3 = -e12
kt4 = ext.Algebra(8, {2: ext.scale(-1, e2(0, 1))})
assert betti(kt4) == [1, 7, 22, 41, 50, 41, 22, 7, 1], betti(kt4)
g = sp.eye(8)
for p in (0, 4, 6):
    g[p, p], g[p, p + 1], g[p + 1, p], g[p + 1, p + 1] = a, -b, b, a
order, P = averaging([g], 8)
assert order == 3
inv = betti(kt4, P)
print("kt x t4 invariant", inv)
assert inv == [1, 1, 8, 15, 14, 15, 8, 1, 1]

# KT x KT: de3 = -e12, de7 = -e56
ktkt = ext.Algebra(8, {2: ext.scale(-1, e2(0, 1)), 6: ext.scale(-1, e2(4, 5))})
assert betti(ktkt) == [1, 6, 17, 30, 36, 30, 17, 6, 1], betti(ktkt)
g = sp.zeros(8)
g[0, 4], g[0, 5], g[1, 4], g[1, 5] = a, -b, b, a
g[4, 0], g[4, 1], g[5, 0], g[5, 1] = a, -b, b, a
g[2, 6] = g[3, 7] = g[6, 2] = g[7, 3] = 1
order, P = averaging([g], 8)
assert order == 6
inv = betti(ktkt, P)
print("kt x kt invariant", inv)
assert inv == [1, 1, 1, 5, 8, 5, 1, 1, 1]

# T^6 with sigma = -1
t6 = ext.Algebra(6, {})
order, P = averaging([-sp.eye(6)], 6)
assert order == 2 and betti(t6, P) == [1, 0, 15, 0, 15, 0, 1]

# blow-up bookkeeping: 64 points in n = 3 on top of the sigma-invariant polynomial
poly = [1, 0, 15, 0, 15, 0, 1]
for _ in range(64):
    poly[2] += 1
    poly[4] += 1
assert poly == [1, 0, 79, 0, 79, 0, 1]
print("ok")
