"""Cross-validation of the exact polytope geometry against a floating LP.

The library never uses linear programming; these tests compare its exact
verdicts (emptiness, boundedness, redundancy minima) with scipy's HiGHS
solver on random integer instances, skipping only numerically ambiguous
margins.
"""

import random
from fractions import Fraction

import numpy as np
import pytest

scipy_optimize = pytest.importorskip("scipy.optimize")

from delzant.polytopes import HPolytope, enumerate_vertices, is_bounded, redundancy

CLEAR = 1e-6


def random_polytope(rng, dim):
    n = rng.randint(dim + 1, 7)
    normals = []
    while len(normals) < n:
        a = tuple(rng.randint(-3, 3) for _ in range(dim))
        if any(a):
            normals.append(a)
    offsets = tuple(Fraction(rng.randint(-4, 4)) for _ in range(n))
    return HPolytope(dim, tuple(normals), offsets)


def lp(poly, objective):
    # constraints <a_i, x> + b_i >= 0  <=>  -A^T x <= b
    a_ub = -np.array([list(a) for a in poly.normals], dtype=float)
    b_ub = np.array([float(b) for b in poly.offsets])
    return scipy_optimize.linprog(
        objective, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * poly.dim, method="highs"
    )


class TestAgainstLP:
    def test_emptiness(self):
        rng = random.Random(31)
        compared = 0
        for _ in range(60):
            poly = random_polytope(rng, rng.choice([2, 3]))
            result = lp(poly, np.zeros(poly.dim))
            if result.status not in (0, 2):
                continue
            assert enumerate_vertices(poly).empty is (result.status == 2), poly
            compared += 1
        assert compared >= 40

    def test_boundedness(self):
        rng = random.Random(57)
        compared = 0
        for _ in range(110):
            poly = random_polytope(rng, rng.choice([2, 3]))
            if enumerate_vertices(poly).empty:
                continue
            lp_bounded = True
            ok = True
            for j in range(poly.dim):
                for sign in (1.0, -1.0):
                    objective = np.zeros(poly.dim)
                    objective[j] = sign
                    result = lp(poly, objective)
                    if result.status == 3:
                        lp_bounded = False
                    elif result.status != 0:
                        ok = False
            if not ok:
                continue
            assert is_bounded(poly) is lp_bounded, poly
            compared += 1
        assert compared >= 30

    def test_redundancy_minima(self):
        rng = random.Random(91)
        compared = 0
        attempts = 0
        while compared < 25 and attempts < 400:
            attempts += 1
            poly = random_polytope(rng, 2)
            vs = enumerate_vertices(poly)
            if vs.empty or not vs.bounded:
                continue
            flags = redundancy(poly)
            for i in range(poly.n):
                relaxed = poly.drop(i)
                result = lp(relaxed, np.array([float(x) for x in poly.normals[i]]))
                if result.status == 3:
                    lp_redundant = False
                elif result.status == 0:
                    minimum = result.fun + float(poly.offsets[i])
                    if abs(minimum) < CLEAR:
                        continue  # ambiguous margin: exact vs float may differ
                    lp_redundant = minimum > 0
                else:
                    continue
                assert (i in flags) == lp_redundant, (poly, i)
                if lp_redundant:
                    assert flags[i] is True  # a clearly positive minimum is strict
                compared += 1
        assert compared >= 25
