"""Shared builders: exhaustive oracles and planted attack instances."""

from fractions import Fraction
from itertools import combinations, product

import numpy as np

from listlab import Code, SetFamily, hamming_distance
from listlab.verifier import average_budget, ordinary_threshold


# ---------------------------------------------------------------------------
# Independent oracles (no shared code paths with the verifier's search)
# ---------------------------------------------------------------------------

def oracle_ordinary_decodable(code, p, L):
    """Ground truth by scanning every center in the full space q^n."""
    t = ordinary_threshold(p, code.n)
    for center in product(range(code.q), repeat=code.n):
        inside = sum(1 for w in code.words if hamming_distance(w, center) <= t)
        if inside > L:
            return False
    return True


def oracle_average_decodable(code, p, L):
    """Ground truth: some center with L+1 codewords of total distance <= budget?"""
    budget = average_budget(p, L, code.n)
    if len(code) <= L:
        return True
    for center in product(range(code.q), repeat=code.n):
        dists = sorted(hamming_distance(w, center) for w in code.words)
        if sum(dists[:L + 1]) <= budget:
            return False
    return True


def oracle_minmax_radius(words, q):
    """Exhaustive minimum over all q^n centers of the maximum distance."""
    n = len(words[0])
    return min(max(hamming_distance(w, c) for w in words)
               for c in product(range(q), repeat=n))


def oracle_min_total(words, q):
    """Exhaustive minimum over all q^n centers of the total distance."""
    n = len(words[0])
    return min(sum(hamming_distance(w, c) for w in words)
               for c in product(range(q), repeat=n))


def random_small_code(rng, q=None, n=None, size=None, q_max=3, n_max=6, size_max=8):
    q = q if q is not None else int(rng.integers(2, q_max + 1))
    n = n if n is not None else int(rng.integers(2, n_max + 1))
    cap = q ** n
    size = size if size is not None else int(rng.integers(2, min(size_max, cap) + 1))
    words = set()
    while len(words) < size:
        words.add(tuple(int(x) for x in rng.integers(0, q, n)))
    return Code(q=q, n=n, words=tuple(sorted(words)))


# ---------------------------------------------------------------------------
# Planted attack instances
# ---------------------------------------------------------------------------

def make_warmup1_plant(seed=7):
    """q=2, n=6, |C|=8 (k=3): three partners share the first-two-coordinate window.

    c1 mirrors the base word on {2,3}, c2 on {4,5}, and c3 everywhere outside
    the window, so the base word collects an agreement partner for every
    size-2 set and the collision class is forced.
    """
    rng = np.random.default_rng(seed)
    c0 = tuple(int(x) for x in rng.integers(0, 2, 6))
    v = (1 - c0[0], 1 - c0[1])
    c1 = v + (c0[2], c0[3], 1 - c0[4], 1 - c0[5])
    c2 = v + (1 - c0[2], 1 - c0[3], c0[4], c0[5])
    c3 = v + c0[2:]
    words = [c0, c1, c2, c3]
    while len(words) < 8:
        w = tuple(int(x) for x in rng.integers(0, 2, 6))
        if w not in words:
            words.append(w)
    return Code(q=2, n=6, words=tuple(words))


def make_warmup2_plant(seed):
    """q=5, n=30, claimed R=2/5 with eps=0 (rounds to eps'=1/10).

    Returns (code, family, expectations): two disjoint agreement sets cover the
    18 coordinates outside the 12-coordinate window; the two partners agree on
    the window and reproduce the exact total 4*eps*n + 2*(1-R-3*eps)*n = 30.
    """
    n, q, i0n = 30, 5, 12
    g1 = tuple(range(12, 21))
    g2 = tuple(range(21, 30))
    family = SetFamily(ground_size=n, member_size=9, union_floor=15, W=2,
                       sets=(g1, g2))
    rng = np.random.default_rng(seed)
    c0 = tuple(int(x) for x in rng.integers(0, q, n))
    v = tuple((c0[i] + 1) % q for i in range(i0n))
    c1, c2 = list(c0), list(c0)
    for i in range(i0n):
        c1[i] = v[i]
        c2[i] = v[i]
    for i in range(i0n, n):
        if i not in g1:
            c1[i] = (c0[i] + 1) % q
        if i not in g2:
            c2[i] = (c0[i] + 2) % q
    words = [c0, tuple(c1), tuple(c2)]
    while len(words) < 20:
        w = tuple(int(x) for x in rng.integers(0, q, n))
        if all(hamming_distance(w, u) >= 16 for u in words):
            words.append(w)
    code = Code(q=q, n=n, words=tuple(words))
    expect = {"R": Fraction(2, 5), "eps": Fraction(0), "budget": 30,
              "decomposition": (12, 18), "indices": (0, 1, 2),
              "distances": (12, 9, 9)}
    return code, family, expect


GENERAL_PLANT = {
    "n": 96, "q": 16, "L": 2, "R": Fraction(3, 8), "eps": Fraction(1, 32),
    "pn": 36, "d0": 16, "d1": 10, "a_f": 35, "a_union": 58, "W": 5,
}


def make_general_family():
    """Ten cyclic 35-windows in [0, 60), spaced 6: any five cover >= 59 points."""
    g = GENERAL_PLANT
    ground = g["n"] - g["pn"]
    sets = []
    for i in range(g["W"] * g["L"]):
        sets.append(tuple(sorted((6 * i + j) % ground for j in range(g["a_f"]))))
    return SetFamily(ground_size=ground, member_size=g["a_f"],
                     union_floor=g["a_union"], W=g["W"], sets=tuple(sets))


def make_general_plant(seed=1, fillers=3):
    """q=16, n=96: ten partners match the base word on one family set each.

    All partners share the same symbol on the 16-coordinate window and use a
    private symbol elsewhere, so every pairwise distance clears the distance
    floor and the collision class holds all W*L = 10 of them.
    """
    g = GENERAL_PLANT
    n, pn, d0, a_f = g["n"], g["pn"], g["d0"], g["a_f"]
    family = make_general_family()
    rng = np.random.default_rng(seed)
    c0 = tuple(int(x) for x in rng.integers(0, 2, n))
    words = [c0]
    for i, s in enumerate(family.sets):
        abs_set = set(a + pn for a in s)
        w = []
        for pos in range(n):
            if pos < d0:
                w.append(2)
            elif pos in abs_set:
                w.append(c0[pos])
            else:
                w.append(3 + i)
        words.append(tuple(w))
    for j in range(fillers):
        words.append(tuple([3 + len(family.sets) + j] * n))
    code = Code(q=g["q"], n=n, words=tuple(words))
    return code, family
