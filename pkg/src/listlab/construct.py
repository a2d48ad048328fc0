"""Constructions: random codes with expurgation, distance subcodes, set families.

Every construction is a deterministic function of its inputs and seed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (ConstructionFailure, InputError, InternalCheckError,
                     ResourceError)
from .model import Code, CoordSet, Word, distance_matrix, min_distance
from .verifier import (DEFAULT_MAX_SUBSETS, RadiusQuery, is_list_decodable,
                       to_fraction)

log = logging.getLogger(__name__)

DEFAULT_CODE_CAP = 4096
DEFAULT_UNION_CAP = 10_000_000
DEFAULT_FAMILY_TARGET_FLOOR = 16
DEFAULT_FAMILY_MAX = 512


def _floor_root(x: int, b: int) -> int:
    """Exact floor(x ** (1/b)) for nonnegative integers."""
    if b == 1 or x in (0, 1):
        return x
    r = int(round(x ** (1.0 / b)))
    while r > 0 and r ** b > x:
        r -= 1
    while (r + 1) ** b <= x:
        r += 1
    return r


@dataclass(frozen=True)
class RandomCodeSpec:
    """Sampling spec for a uniform random code of target size ``floor(q^(R*n))``."""

    q: int
    n: int
    R: Fraction
    eps: Fraction = Fraction(0)
    L: int = 2
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "R", to_fraction(self.R))
        object.__setattr__(self, "eps", to_fraction(self.eps))
        if self.q < 2 or self.n < 1:
            raise InputError(f"invalid spec: q={self.q}, n={self.n}")
        if not 0 < self.R <= 1:
            raise InputError(f"rate must be in (0, 1], got {self.R}")

    @property
    def target_size(self) -> int:
        rn = self.R * self.n
        if float(rn) * math.log2(self.q) > 62:
            raise ResourceError(f"q^(R*n) with R*n={rn} overflows any sensible cap")
        if rn.denominator > 64:
            raise InputError(
                f"rate {self.R} has denominator {rn.denominator} after scaling by n; "
                f"pass an exact Fraction (e.g. Fraction(1, 3)) instead of a float")
        return _floor_root(self.q ** rn.numerator, rn.denominator)


def random_code(spec: RandomCodeSpec, cap: int = DEFAULT_CODE_CAP) -> Code:
    """``floor(q^(R*n))`` distinct uniform words; duplicates are resampled.

    Words keep their draw order, so the output is a pure function of the seed.
    """
    N = spec.target_size
    if N < 1:
        raise InputError(f"target size {N} < 1")
    if N > cap:
        raise ResourceError(f"target size {N} exceeds cap {cap}")
    rng = np.random.default_rng(spec.seed)
    seen = set()
    words = []
    while len(words) < N:
        batch = rng.integers(0, spec.q, size=(N - len(words) + 8, spec.n))
        for row in batch:
            w = tuple(int(s) for s in row)
            if w not in seen:
                seen.add(w)
                words.append(w)
                if len(words) == N:
                    break
    return Code(q=spec.q, n=spec.n, words=tuple(words))


def expurgate_violations(code: Code, p, L: int,
                         max_subsets: int = DEFAULT_MAX_SUBSETS) -> Code:
    """Remove codewords implicated in violations until the code is (p, L)-list-decodable.

    Each round finds the first violation (lexicographic subset order) and drops
    the member farthest from the violation center, breaking ties toward the
    largest index.  The fixed removal rule makes the output deterministic.
    """
    p = to_fraction(p)
    query = RadiusQuery(p=p, L=L, mode="ordinary")
    words = list(code.words)
    removed = 0
    while True:
        current = Code(q=code.q, n=code.n, words=tuple(words))
        v = is_list_decodable(current, query, max_subsets=max_subsets)
        if v is None:
            break
        worst = max(v.distances)
        pick = max(i for i, d in zip(v.codeword_indices, v.distances) if d == worst)
        log.debug("expurgate: removing index %d (distance %d to center)", pick, worst)
        words.pop(pick)
        removed += 1
    if removed:
        log.info("expurgated %d of %d codewords", removed, len(code))
    return Code(q=code.q, n=code.n, words=tuple(words))


def greedy_distance_indices(code: Code, alpha) -> List[int]:
    """Indices kept by the greedy minimum-distance filter at threshold ``ceil(alpha*n)``."""
    alpha = to_fraction(alpha)
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must be in (0, 1], got {alpha}")
    thr = math.ceil(alpha * code.n)
    arr = code.as_array()
    kept: List[int] = []
    for i in range(len(code)):
        if all(int((arr[i] != arr[j]).sum()) >= thr for j in kept):
            kept.append(i)
    return kept


def greedy_distance_subcode(code: Code, alpha) -> Code:
    """Greedy subcode with minimum distance at least ``ceil(alpha*n)``.

    Scans codewords in index order and keeps a word iff it is far from every
    word kept so far.
    """
    kept = greedy_distance_indices(code, alpha)
    return Code(q=code.q, n=code.n, words=tuple(code.words[i] for i in kept))


@dataclass(frozen=True)
class NeighborhoodReport:
    radius: int
    max_count: int
    bound: int
    bound_holds: bool
    counts: tuple


def neighborhood_bound_check(code: Code, p, L: int, verify: bool = True,
                             max_subsets: int = DEFAULT_MAX_SUBSETS) -> NeighborhoodReport:
    """Count, per codeword, the neighbors within relative distance ``p + p^L/(2L)``.

    On a (p, L)-list-decodable code no codeword can have more than
    ``L + ceil(L^2/p) - 1`` such neighbors.  The counting radius is
    ``ceil((p + p^L/(2L)) * n)``.
    """
    p = to_fraction(p)
    if not 0 < p < 1:
        raise InputError(f"p must be in (0, 1), got {p}")
    if verify:
        v = is_list_decodable(code, RadiusQuery(p=p, L=L, mode="ordinary"),
                              max_subsets=max_subsets)
        if v is not None:
            raise InputError("precondition failed: code is not (p, L)-list-decodable")
    alpha = p + p ** L / (2 * L)
    radius = math.ceil(alpha * code.n)
    bound = L + math.ceil(Fraction(L * L) / p) - 1
    if len(code) < 2:
        return NeighborhoodReport(radius=radius, max_count=0, bound=bound,
                                  bound_holds=True, counts=(0,) * len(code))
    D = distance_matrix(code)
    np.fill_diagonal(D, code.n + 1)
    counts = tuple(int((row <= radius).sum()) for row in D)
    max_count = max(counts)
    return NeighborhoodReport(radius=radius, max_count=max_count, bound=bound,
                              bound_holds=max_count <= bound, counts=counts)


def avg_radius_expurgate(code: Code, p, verified: bool = False) -> Code:
    """Greedy subcode with all pairwise distances strictly above ``floor(3p/2 * n)``.

    On a (p, 2)-average-radius-list-decodable code each codeword has at most
    one other codeword that close, so the greedy pass keeps at least half the
    code; passing ``verified=True`` turns that size guarantee into a hard check.
    """
    p = to_fraction(p)
    thr = math.floor(Fraction(3, 2) * p * code.n)
    arr = code.as_array()
    kept: List[int] = []
    for i in range(len(code)):
        if all(int((arr[i] != arr[j]).sum()) > thr for j in kept):
            kept.append(i)
    out = Code(q=code.q, n=code.n, words=tuple(code.words[i] for i in kept))
    if verified and 2 * len(out) < len(code):
        raise InternalCheckError(
            f"kept {len(out)} of {len(code)} despite a verified average-radius "
            f"precondition; this contradicts the pairing bound")
    return out


# ---------------------------------------------------------------------------
# Set families with large W-wise unions
# ---------------------------------------------------------------------------

@dataclass
class SetFamily:
    """Size-``member_size`` subsets of ``[0, ground_size)`` with a W-wise union floor.

    ``verified`` is only set by an exhaustive union check over all W-tuples.
    """

    ground_size: int
    member_size: int
    union_floor: int
    W: int
    sets: tuple  # tuple[CoordSet, ...]
    verified: bool = False

    def __post_init__(self):
        self.sets = tuple(tuple(int(i) for i in s) for s in self.sets)
        for s in self.sets:
            if len(set(s)) != len(s) or list(s) != sorted(s):
                raise InputError(f"family member {s} is not a sorted duplicate-free tuple")
            if len(s) != self.member_size:
                raise InputError(f"family member of size {len(s)}, expected {self.member_size}")
            if s and (s[0] < 0 or s[-1] >= self.ground_size):
                raise InputError(f"family member {s} leaves the ground set")

    def masks(self) -> List[int]:
        out = []
        for s in self.sets:
            m = 0
            for i in s:
                m |= 1 << i
            out.append(m)
        return out


def verify_set_family(family: SetFamily, cap: int = DEFAULT_UNION_CAP,
                      sample: int = 0, seed: int = 0) -> Optional[Tuple[int, ...]]:
    """Exhaustively check all W-wise unions; None when every union is large enough.

    Returns the first (lexicographic) violating W-tuple of set indices
    otherwise, and records the outcome in ``family.verified``.  When the
    enumeration would exceed ``cap``, pass ``sample > 0`` to spot-check random
    W-tuples instead; a sampled pass never sets the verified flag.
    """
    M = len(family.sets)
    W = family.W
    if M < W:
        family.verified = True  # no W-tuple exists to violate the floor
        return None
    total = math.comb(M, W)
    masks = family.masks()
    if total > cap:
        if sample <= 0:
            raise ResourceError(
                f"C({M}, {W}) = {total} unions exceed cap {cap}; pass sample=N "
                f"for a randomized spot check (which cannot set the verified flag)")
        rng = np.random.default_rng(seed)
        for _ in range(sample):
            tup = tuple(sorted(rng.choice(M, size=W, replace=False).tolist()))
            u = 0
            for i in tup:
                u |= masks[i]
            if u.bit_count() < family.union_floor:
                family.verified = False
                return tup
        family.verified = False
        return None
    for tup in combinations(range(M), W):
        u = 0
        for i in tup:
            u |= masks[i]
        if u.bit_count() < family.union_floor:
            family.verified = False
            return tup
    family.verified = True
    return None


def choose_union_arity(alpha: Fraction, beta: Fraction) -> int:
    """Smallest W with ``(1-alpha)^W < (1-beta)/2``."""
    if not 0 < alpha < beta < 1:
        raise InputError(f"need 0 < alpha < beta < 1, got alpha={alpha}, beta={beta}")
    W = 1
    while (1 - alpha) ** W >= (1 - beta) / 2:
        W += 1
    return W


def build_set_family(m: int, a_f: int, a_union: int, seed: int,
                     target: Optional[int] = None,
                     union_cap: int = DEFAULT_UNION_CAP) -> SetFamily:
    """Random family of size-``a_f`` subsets of ``[0, m)`` with verified W-wise unions.

    Sampling includes each ground element independently with probability
    ``alpha - m^(-1/3)`` (floored at ``alpha/2``); oversized draws are
    discarded and undersized ones are padded with random unused elements.
    The family is then verified exhaustively, greedily dropping sets from
    failing unions until the check passes.  The retained count defaults to
    ``max(floor(2^((1-beta) m / 6W)), 16)``: the theory-motivated count is
    astronomically conservative at desk scale, so a practical floor applies.
    """
    if not 0 < a_f < a_union < m:
        raise InputError(f"need 0 < a_f < a_union < m, got {a_f}, {a_union}, {m}")
    alpha = Fraction(a_f, m)
    beta = Fraction(a_union, m)
    W = choose_union_arity(alpha, beta)
    if target is None:
        theory = math.floor(2.0 ** (float(1 - beta) * m / (6 * W)))
        target = max(theory, DEFAULT_FAMILY_TARGET_FLOOR)
    target = min(target, DEFAULT_FAMILY_MAX)
    while target >= W and math.comb(target, W) > union_cap:
        target -= 1
    alpha0 = max(float(alpha) - m ** (-1.0 / 3.0), float(alpha) / 2.0)

    rng = np.random.default_rng(seed)
    sets: List[CoordSet] = []
    seen = set()
    draws = 0
    max_draws = 200 * target
    while len(sets) < target and draws < max_draws:
        draws += 1
        mask = rng.random(m) < alpha0
        size = int(mask.sum())
        if size > a_f:
            continue
        members = np.flatnonzero(mask)
        if size < a_f:
            unused = np.flatnonzero(~mask)
            pad = rng.choice(unused, size=a_f - size, replace=False)
            members = np.concatenate([members, pad])
        s = tuple(sorted(int(i) for i in members))
        if s in seen:
            continue
        seen.add(s)
        sets.append(s)

    family = SetFamily(ground_size=m, member_size=a_f, union_floor=a_union,
                       W=W, sets=tuple(sets))
    while True:
        bad = verify_set_family(family, cap=union_cap)
        if bad is None:
            break
        drop = bad[-1]
        log.debug("build_set_family: dropping set %d from violating union %s", drop, bad)
        remaining = tuple(s for i, s in enumerate(family.sets) if i != drop)
        family = SetFamily(ground_size=m, member_size=a_f, union_floor=a_union,
                           W=W, sets=remaining)
    if len(family.sets) < 2:
        raise ConstructionFailure(
            f"only {len(family.sets)} sets survived verification; try a larger m")
    return family


def pairwise_family_warmup2(n: int, i0_size: int, alpha_n: int, beta_n: int,
                            seed: int = 0, enum_cap: int = 200_000,
                            sample_count: int = 20_000) -> SetFamily:
    """Greedy family of size-``alpha_n`` subsets of ``[i0_size, n)`` with pairwise unions >= ``beta_n``.

    Candidates are enumerated in lexicographic order when that is feasible,
    otherwise sampled under the seed; a candidate is kept iff its union with
    every previously kept set is large enough.  Members use absolute
    coordinates, so the ground size recorded is ``n``.
    """
    ground = list(range(i0_size, n))
    g = len(ground)
    if alpha_n < 1 or alpha_n > g:
        raise InputError(f"member size {alpha_n} does not fit ground of {g} coordinates")
    if beta_n < alpha_n:
        raise InputError(f"union floor {beta_n} below member size {alpha_n}")

    if math.comb(g, alpha_n) <= enum_cap:
        candidates = combinations(ground, alpha_n)
    else:
        rng = np.random.default_rng(seed)

        def sampled():
            emitted = set()
            for _ in range(sample_count):
                s = tuple(sorted(rng.choice(ground, size=alpha_n, replace=False).tolist()))
                if s not in emitted:
                    emitted.add(s)
                    yield s

        candidates = sampled()

    kept: List[CoordSet] = []
    kept_masks: List[int] = []
    for cand in candidates:
        cm = 0
        for i in cand:
            cm |= 1 << i
        if all((cm | km).bit_count() >= beta_n for km in kept_masks):
            kept.append(tuple(cand))
            kept_masks.append(cm)
    return SetFamily(ground_size=n, member_size=alpha_n, union_floor=beta_n,
                     W=2, sets=tuple(kept), verified=True)


# ---------------------------------------------------------------------------
# Family file format: header "m a_F a_union W M", then one sorted row per set.
# ---------------------------------------------------------------------------

def save_family(family: SetFamily, path) -> None:
    lines = [f"{family.ground_size} {family.member_size} {family.union_floor} "
             f"{family.W} {len(family.sets)}"]
    for s in family.sets:
        lines.append(" ".join(str(i) for i in s))
    Path(path).write_text("\n".join(lines) + "\n")


def load_family(path) -> SetFamily:
    from .errors import ParseError
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError(f"{path}: empty family file")
    head = lines[0].split()
    if len(head) != 5:
        raise ParseError(f"{path}:1: header must be 'm a_F a_union W M'")
    m, a_f, a_union, w, count = (int(x) for x in head)
    if len(lines) - 1 != count:
        raise ParseError(f"{path}: header declares {count} sets, found {len(lines) - 1}")
    sets = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            s = tuple(int(x) for x in ln.split())
        except ValueError:
            raise ParseError(f"{path}:{lineno}: non-integer index")
        sets.append(s)
    return SetFamily(ground_size=m, member_size=a_f, union_floor=a_union,
                     W=w, sets=tuple(sets))
