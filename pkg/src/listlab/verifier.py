"""Exact list-decodability decisions and worst-case radii.

This module is the ground-truth oracle the rest of the package is validated
against.  It is intentionally exponential: every decision is exact, every
returned violation re-verifies from Hamming distances alone.

Rounding conventions (fixed here once, used everywhere):

* ordinary mode: a center violates at relative radius ``p`` when ``L+1``
  codewords are each within ``floor(p*n)`` disagreements of it ("within
  distance p*n" read inclusively);
* average-radius mode: a center violates when the distances of ``L+1``
  distinct codewords sum to at most ``floor((L+1)*p*n)`` (negating "average
  strictly greater than p*n").

Pass ``p`` as a Fraction (or string like ``"2/3"``) to make the thresholds
exact; floats are converted to their exact binary value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, ResourceError
from .model import Code, Word, distance_matrix, hamming_distance

#: default cap on C(|C|, L+1) subset enumerations
DEFAULT_MAX_SUBSETS = 10_000_000

#: default cap on the number of words minmax_center accepts
DEFAULT_MINMAX_CAP = 8

MODES = ("ordinary", "average_radius")


def to_fraction(p) -> Fraction:
    """Exact rational view of ``p`` (Fraction, str, int, or float)."""
    if isinstance(p, Fraction):
        return p
    if isinstance(p, str):
        return Fraction(p)
    return Fraction(p)


def ordinary_threshold(p, n: int) -> int:
    """Integer disagreement budget per codeword: ``floor(p*n)``."""
    return math.floor(to_fraction(p) * n)


def average_budget(p, L: int, n: int) -> int:
    """Integer total-distance budget over ``L+1`` codewords: ``floor((L+1)*p*n)``."""
    return math.floor((L + 1) * to_fraction(p) * n)


@dataclass(frozen=True)
class RadiusQuery:
    p: Fraction
    L: int
    mode: str = "ordinary"

    def __post_init__(self):
        object.__setattr__(self, "p", to_fraction(self.p))
        if not 0 <= self.p <= 1:
            raise InputError(f"relative radius must be in [0, 1], got {self.p}")
        if self.L < 1:
            raise InputError(f"list size must be >= 1, got {self.L}")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class Violation:
    """A center plus ``L+1`` codewords violating a list-decodability claim.

    ``threshold`` is the violated integer budget: per-codeword radius
    ``floor(p*n)`` in ordinary mode, total-distance budget
    ``floor((L+1)*p*n)`` in average-radius mode.
    """

    mode: str
    center: Word
    codeword_indices: tuple
    distances: tuple
    threshold: int

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "center": list(self.center),
            "indices": list(self.codeword_indices),
            "distances": list(self.distances),
            "threshold": self.threshold,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Violation":
        return cls(mode=doc["mode"], center=tuple(doc["center"]),
                   codeword_indices=tuple(doc["indices"]),
                   distances=tuple(doc["distances"]), threshold=int(doc["threshold"]))


def check_violation(code: Code, v: Violation) -> List[str]:
    """Re-derive everything in ``v`` from scratch; returns failure reasons (empty = valid)."""
    reasons = []
    if v.mode not in MODES:
        reasons.append(f"unknown mode {v.mode!r}")
        return reasons
    if len(v.center) != code.n:
        reasons.append(f"center length {len(v.center)} != n={code.n}")
    if any(not 0 <= s < code.q for s in v.center):
        reasons.append("center symbol outside alphabet")
    idx = v.codeword_indices
    if len(set(idx)) != len(idx):
        reasons.append("repeated codeword index")
    if any(not 0 <= i < len(code) for i in idx):
        reasons.append("codeword index out of range")
    if reasons:
        return reasons
    words = [code[i] for i in idx]
    if len(set(words)) != len(words):
        reasons.append("codewords not pairwise distinct")
    recomputed = tuple(hamming_distance(w, v.center) for w in words)
    if recomputed != tuple(v.distances):
        reasons.append(f"stated distances {tuple(v.distances)} != recomputed {recomputed}")
    if v.mode == "ordinary":
        if any(d > v.threshold for d in recomputed):
            reasons.append(f"a distance exceeds the radius {v.threshold}")
    else:
        if sum(recomputed) > v.threshold:
            reasons.append(f"total {sum(recomputed)} exceeds the budget {v.threshold}")
    return reasons


def verify_violation(code: Code, v: Violation) -> bool:
    return not check_violation(code, v)


# ---------------------------------------------------------------------------
# Exact center kernels
# ---------------------------------------------------------------------------

def _column_groups(words: Sequence[Word], n: int):
    """Coordinates bundled by their symbol-partition pattern.

    Only the partition of the words by symbol matters for center costs
    (restricting the center to symbols present in the column is lossless: an
    absent symbol disagrees with every word there, so some present symbol
    weakly dominates it).  Coordinates sharing a partition are interchangeable,
    which turns the center search over ``n`` coordinates into a search over a
    handful of count vectors.

    Returns a list of groups ``(coords, charges)`` where ``charges[b]`` is the
    frozen 0/1 cost vector of choosing block ``b``'s symbol, blocks ordered by
    first appearance in the column.
    """
    m = len(words)
    groups = {}
    for i in range(n):
        col = tuple(w[i] for w in words)
        first = {}
        key = []
        for s in col:
            if s not in first:
                first[s] = len(first)
            key.append(first[s])
        key = tuple(key)
        if key not in groups:
            blocks = max(key) + 1
            charges = tuple(tuple(1 if key[j] != b else 0 for j in range(m))
                            for b in range(blocks))
            groups[key] = ([], charges)
        groups[key][0].append(i)
    return [(coords, charges) for coords, charges in groups.values()]


def _minmax_decision(words: Sequence[Word], t: int) -> Optional[Tuple[Word, Tuple[int, ...]]]:
    """A center with all distances <= ``t``, or None; exact decision.

    Branches over how many coordinates of each partition group take each
    block's symbol, pruning on per-word budgets plus total and pairwise charge
    lower bounds.  Deterministic: groups in first-coordinate order, blocks
    cheapest-first, counts enumerated from the largest down.
    """
    m = len(words)
    n = len(words[0])
    if t < 0:
        return None
    groups = _column_groups(words, n)
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]

    # per group: blocks cheapest-first, plus suffix-of-blocks charge minima so
    # partially allocated groups still bound correctly
    ordered = []
    for coords, charges in groups:
        order = sorted(range(len(charges)), key=lambda b: (sum(charges[b]), b))
        ch = [charges[b] for b in order]
        k = len(ch)
        min_tot = [0] * (k + 1)
        min_pair = [[0] * (k + 1) for _ in pairs]
        min_tot[k] = n * m + 1
        for pi in range(len(pairs)):
            min_pair[pi][k] = n * m + 1
        for b in range(k - 1, -1, -1):
            min_tot[b] = min(min_tot[b + 1], sum(ch[b]))
            for pi, (a, c) in enumerate(pairs):
                min_pair[pi][b] = min(min_pair[pi][b + 1], ch[b][a] + ch[b][c])
        ordered.append((coords, ch, order, min_tot, min_pair))

    ng = len(ordered)
    suf_total = [0] * (ng + 1)
    suf_pair = [[0] * (ng + 1) for _ in pairs]
    for g in range(ng - 1, -1, -1):
        coords, ch, _, min_tot, min_pair = ordered[g]
        size = len(coords)
        suf_total[g] = suf_total[g + 1] + size * min_tot[0]
        for pi in range(len(pairs)):
            suf_pair[pi][g] = suf_pair[pi][g + 1] + size * min_pair[pi][0]

    dist = [0] * m
    counts: List[Optional[list]] = [None] * ng

    def bound_ok(g: int, b: int, remaining: int) -> bool:
        """Can the budget still be met with `remaining` coords of group g
        spread over blocks >= b, and later groups at their cheapest?"""
        if max(dist) > t:
            return False
        if g == ng:
            return True
        _, _, _, min_tot, min_pair = ordered[g]
        if sum(dist) + remaining * min_tot[b] + suf_total[g + 1] > m * t:
            return False
        for pi, (a, c) in enumerate(pairs):
            if (dist[a] + dist[c] + remaining * min_pair[pi][b]
                    + suf_pair[pi][g + 1] > 2 * t):
                return False
        return True

    def rec(g: int) -> bool:
        if g == ng:
            return max(dist) <= t
        coords, ch, _, _, _ = ordered[g]
        k = len(ch)
        alloc = [0] * k

        def split(b: int, remaining: int) -> bool:
            if not bound_ok(g, b, remaining):
                return False
            if b == k - 1:
                alloc[b] = remaining
                for j in range(m):
                    dist[j] += remaining * ch[b][j]
                ok = bound_ok(g + 1, 0, 0) and rec(g + 1)
                if ok:
                    counts[g] = alloc[:]
                    return True
                for j in range(m):
                    dist[j] -= remaining * ch[b][j]
                return False
            for x in range(remaining, -1, -1):
                alloc[b] = x
                for j in range(m):
                    dist[j] += x * ch[b][j]
                if split(b + 1, remaining - x):
                    return True
                for j in range(m):
                    dist[j] -= x * ch[b][j]
            alloc[b] = 0
            return False

        return split(0, len(coords))

    if not rec(0):
        return None
    center = [0] * n
    for (coords, ch, order, _, _), alloc in zip(ordered, counts):
        pos = 0
        for b, x in enumerate(alloc):
            block = order[b]
            for i in coords[pos:pos + x]:
                col = tuple(w[i] for w in words)
                first = {}
                for s in col:
                    if s not in first:
                        first[s] = len(first)
                center[i] = next(s for s in col if first[s] == block)
            pos += x
    got = tuple(center)
    dists = tuple(hamming_distance(w, got) for w in words)
    if max(dists) > t:
        raise AssertionError("reconstructed center exceeds the budget")
    return got, dists


def minmax_center(words: Sequence[Word], cap: int = DEFAULT_MINMAX_CAP) -> Tuple[Word, int]:
    """An exact center minimizing the maximum Hamming distance to ``words``.

    Binary search over the radius on top of the exact decision kernel, which
    itself is a branch-and-bound over per-symbol-partition count vectors.
    """
    m = len(words)
    if m < 2:
        raise InputError("minmax_center needs at least 2 words")
    if m > cap:
        raise ResourceError(f"minmax_center capped at {cap} words, got {m}")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise InputError("words must have equal length")
    lo, hi = -1, max(hamming_distance(words[0], w) for w in words)
    best = _minmax_decision(words, hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        got = _minmax_decision(words, mid)
        if got is None:
            lo = mid
        else:
            hi, best = mid, got
    return best[0], hi


def avg_center(words: Sequence[Word]) -> Tuple[Word, int]:
    """Center minimizing the total (hence average) distance, with the exact minimum.

    The objective is coordinate-separable, so the coordinate-wise plurality
    symbol is optimal; ties break toward the smallest symbol.
    """
    if not words:
        raise InputError("avg_center needs at least 1 word")
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise InputError("words must have equal length")
    center = []
    total = 0
    m = len(words)
    for i in range(n):
        col = [w[i] for w in words]
        counts = {}
        for s in col:
            counts[s] = counts.get(s, 0) + 1
        best = min(counts, key=lambda s: (-counts[s], s))
        center.append(best)
        total += m - counts[best]
    return tuple(center), total


# ---------------------------------------------------------------------------
# Decodability decisions
# ---------------------------------------------------------------------------

def _subset_count_guard(m: int, size: int, max_subsets: int):
    total = math.comb(m, size)
    if total > max_subsets:
        raise ResourceError(
            f"C({m}, {size}) = {total} subsets exceeds the cap {max_subsets}; "
            f"raise max_subsets or use a sampled search (CLI: verify --sample)")


def _first_violation_ordinary(code: Code, t: int, L: int) -> Optional[Violation]:
    m = len(code)
    D = distance_matrix(code)
    adj = D <= 2 * t  # triangle inequality: a violating tuple is a clique here
    size = L + 1
    idx_all = np.arange(m)

    def rec(chosen: list, cand: np.ndarray) -> Optional[Violation]:
        if len(chosen) == size:
            words = [code[i] for i in chosen]
            got = _minmax_decision(words, t)
            if got is None:
                return None
            center, dists = got
            return Violation(mode="ordinary", center=center,
                             codeword_indices=tuple(chosen), distances=dists,
                             threshold=t)
        need = size - len(chosen)
        for pos in range(len(cand) - need + 1):
            i = int(cand[pos])
            nxt = cand[pos + 1:]
            nxt = nxt[adj[i][nxt]]
            chosen.append(i)
            got = rec(chosen, nxt)
            if got is not None:
                return got
            chosen.pop()
        return None

    return rec([], idx_all)


def _first_violation_average(code: Code, budget: int, L: int) -> Optional[Violation]:
    m = len(code)
    D = distance_matrix(code)
    # for any center, pairwise distance <= total distance; partial pair sums
    # are monotone, so both prunes below are lossless
    adj = D <= budget
    size = L + 1

    def rec(chosen: list, pairsum: int, cand: np.ndarray) -> Optional[Violation]:
        if len(chosen) == size:
            words = [code[i] for i in chosen]
            center, total = avg_center(words)
            if total > budget:
                return None
            dists = tuple(hamming_distance(w, center) for w in words)
            return Violation(mode="average_radius", center=center,
                             codeword_indices=tuple(chosen), distances=dists,
                             threshold=budget)
        need = size - len(chosen)
        for pos in range(len(cand) - need + 1):
            i = int(cand[pos])
            ps = pairsum + int(D[i, chosen].sum()) if chosen else 0
            if ps > L * budget:
                continue
            nxt = cand[pos + 1:]
            nxt = nxt[adj[i][nxt]]
            chosen.append(i)
            got = rec(chosen, ps, nxt)
            if got is not None:
                return got
            chosen.pop()
        return None

    return rec([], 0, np.arange(m))


def is_list_decodable(code: Code, query: RadiusQuery,
                      max_subsets: int = DEFAULT_MAX_SUBSETS) -> Optional[Violation]:
    """None when ``code`` is (p, L)-list-decodable in the queried mode, else a Violation.

    Enumerates (L+1)-subsets in lexicographic index order and reports the first
    violating subset; subsets skipped by the pairwise-distance prune cannot
    violate, so the report is independent of the pruning.
    """
    m = len(code)
    if m <= query.L:
        return None
    _subset_count_guard(m, query.L + 1, max_subsets)
    if query.mode == "ordinary":
        t = ordinary_threshold(query.p, code.n)
        return _first_violation_ordinary(code, t, query.L)
    budget = average_budget(query.p, query.L, code.n)
    return _first_violation_average(code, budget, query.L)


def _decodable_at(code: Code, t: int, L: int, max_subsets: int) -> Optional[Violation]:
    if len(code) <= L:
        return None
    _subset_count_guard(len(code), L + 1, max_subsets)
    return _first_violation_ordinary(code, t, L)


def exact_radius(code: Code, L: int,
                 max_subsets: int = DEFAULT_MAX_SUBSETS) -> Tuple[int, Optional[Violation]]:
    """Largest integer ``t*`` such that the code is (t*/n, L)-list-decodable.

    Decodability is monotone in the radius, so a binary search over the
    threshold suffices.  Returns ``(t*, witness)`` where the witness is the
    violation at ``t* + 1`` (None when ``t* = n``, the vacuous case).
    """
    if L < 1:
        raise InputError(f"list size must be >= 1, got {L}")
    n = code.n
    if len(code) <= L:
        return n, None
    lo, hi = 0, n  # lo decodable (distinct words), hi violating (radius n)
    hi_witness = _decodable_at(code, n, L, max_subsets)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        got = _decodable_at(code, mid, L, max_subsets)
        if got is None:
            lo = mid
        else:
            hi, hi_witness = mid, got
    return lo, hi_witness


def sampled_violation_search(code: Code, query: RadiusQuery, samples: int,
                             seed: int) -> Optional[Violation]:
    """Check ``samples`` random (L+1)-subsets; sound for violations, never certifies.

    A None result only means the sampled subsets were clean, not that the code
    is decodable; use :func:`is_list_decodable` for the exact decision.
    """
    m = len(code)
    if m <= query.L:
        return None
    rng = np.random.default_rng(seed)
    t = ordinary_threshold(query.p, code.n)
    budget = average_budget(query.p, query.L, code.n)
    for _ in range(samples):
        idx = sorted(rng.choice(m, size=query.L + 1, replace=False).tolist())
        words = [code[i] for i in idx]
        if query.mode == "ordinary":
            got = _minmax_decision(words, t)
            if got is not None:
                center, dists = got
                return Violation(mode="ordinary", center=center,
                                 codeword_indices=tuple(idx), distances=dists,
                                 threshold=t)
        else:
            center, total = avg_center(words)
            if total <= budget:
                dists = tuple(hamming_distance(w, center) for w in words)
                return Violation(mode="average_radius", center=center,
                                 codeword_indices=tuple(idx), distances=dists,
                                 threshold=budget)
    return None


def neighborhood_count(code: Code, center: Word, radius: int) -> int:
    """Number of codewords within ``radius`` of ``center``."""
    if radius < 0 or radius > code.n:
        raise InputError(f"radius must be in [0, {code.n}], got {radius}")
    arr = code.as_array()
    c = np.asarray(center, dtype=np.int32)
    if c.shape != (code.n,):
        raise InputError("center length must equal the block length")
    d = (arr != c[None, :]).sum(axis=1)
    return int((d <= radius).sum())
