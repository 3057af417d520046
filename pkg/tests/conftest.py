"""Shared fixtures: rational arrangement helpers and a randomized corpus."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from freearr import arrangement as am
from freearr import moduli as mod
from freearr.linalg import IntOps, rank
from freearr.scalars import QQ


def rational_arrangement(*cols) -> am.Arrangement:
    return am.build([tuple(Fraction(x) for x in c) for c in cols], QQ)


def boolean3() -> am.Arrangement:
    return rational_arrangement((1, 0, 0), (0, 1, 0), (0, 0, 1))


def near_pencil(n: int) -> am.Arrangement:
    """n-1 lines through one point plus one transversal line."""
    cols = [(1, 0, 0), (0, 1, 0)]
    for k in range(1, n - 2):
        cols.append((1, -k, 0))
    cols.append((0, 0, 1))
    return rational_arrangement(*cols)


def whitney_char_poly(arr: am.Arrangement):
    """Independent characteristic polynomial oracle.

    Whitney's theorem: chi(x) = sum over subsets S of hyperplanes of
    (-1)^|S| x^(3 - rank(S)).  Exponential in n; used only at desk scale.
    Returns coefficients (c0, c1, c2, c3) ascending.
    """
    cols = [tuple(int(x) for x in _clear(c)) for c in arr.columns]
    coeffs = [0, 0, 0, 0]
    n = arr.n
    for size in range(n + 1):
        for sub in combinations(range(n), size):
            r = rank([[cols[i][k] for i in sub] for k in range(3)]
                     , len(sub), IntOps) if sub else 0
            coeffs[3 - r] += (-1) ** size
    return tuple(coeffs)


def _clear(col):
    from math import lcm

    den = lcm(*(x.denominator for x in col))
    return [x * den for x in col]


def random_corpus(count: int = 200, max_n: int = 8, seed: int = 20240817):
    """Deterministic random essential rational arrangements with n <= max_n."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        n = rng.randint(4, max_n)
        cols = []
        ok = True
        for _ in range(n):
            for _try in range(50):
                cand = tuple(rng.randint(-3, 3) for _ in range(3))
                if any(cand) and not any(
                        not any(_cross(cand, c)) for c in cols):
                    cols.append(cand)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        try:
            out.append(rational_arrangement(*cols))
        except am.ArrangementError:
            continue
    assert len(out) == count
    return out


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


@pytest.fixture(scope="session")
def small_corpus():
    return random_corpus(count=40, max_n=7, seed=917)


@pytest.fixture(scope="session")
def a13():
    """The 13-line family specialized at the generic rational value 3."""
    return mod.specialize(mod.family_13(), 3).arrangement


@pytest.fixture(scope="session")
def a15():
    return mod.specialize(mod.family_15(), 3).arrangement
