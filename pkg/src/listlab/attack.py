"""Certificate-producing attacks on claimed list-decodability.

Given a code and a claimed operating point (L, R, eps), these engines hunt for
an explicit bad list-decoding configuration: a center plus L+1 distinct
codewords that are all too close to it.  Every certificate is re-verifiable
from the code file and the center alone, independently of how it was found.

A failed hunt is a first-class outcome, not an error: over an adequate
alphabet the collision stages are supposed to fail, and the report records
which stage did and with what counters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bounds import generalized_singleton_radius
from .construct import (SetFamily, build_set_family, choose_union_arity,
                        greedy_distance_indices, pairwise_family_warmup2)
from .errors import (InputError, InternalCheckError, ParameterizationError,
                     ResourceError)
from .model import Code, CoordSet, Word, hamming_distance, min_distance, restrict
from .verifier import to_fraction

PROVENANCES = ("warmup1", "warmup2", "general", "singleton_witness")

STAGE_POPULAR = "popular_codeword"
STAGE_PIGEONHOLE = "pigeonhole_I0"
STAGE_DISTINCT = "distinctness"


@dataclass(frozen=True)
class Certificate:
    """An explicit list-decoding violation with its provenance.

    ``threshold`` is the violated integer budget: the per-codeword radius in
    ordinary mode, the total-distance budget over all L+1 codewords in
    average-radius mode.
    """

    mode: str
    provenance: str
    center: Word
    codeword_indices: tuple
    distances: tuple
    threshold: int

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "provenance": self.provenance,
            "center": list(self.center),
            "indices": list(self.codeword_indices),
            "distances": list(self.distances),
            "threshold": self.threshold,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Certificate":
        return cls(mode=doc["mode"], provenance=doc.get("provenance", "general"),
                   center=tuple(doc["center"]),
                   codeword_indices=tuple(doc["indices"]),
                   distances=tuple(doc["distances"]), threshold=int(doc["threshold"]))


@dataclass(frozen=True)
class DistanceWitness:
    """A codeword pair whose agreement is so large it breaks the distance assumption."""

    index_a: int
    index_b: int
    union_size: int
    distance: int


@dataclass
class AttackReport:
    outcome: str  # "certificate" | "stage_failed"
    provenance: str
    failed_stage: Optional[str] = None
    certificate: Optional[Certificate] = None
    distance_witness: Optional[DistanceWitness] = None
    counters: Dict = field(default_factory=dict)
    effective: Dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        doc = {
            "outcome": self.outcome,
            "provenance": self.provenance,
            "failed_stage": self.failed_stage,
            "counters": self.counters,
            "effective": self.effective,
        }
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json_dict()
        if self.distance_witness is not None:
            w = self.distance_witness
            doc["distance_witness"] = {
                "index_a": w.index_a, "index_b": w.index_b,
                "union_size": w.union_size, "distance": w.distance,
            }
        return doc


def check_certificate(code: Code, cert: Certificate) -> List[str]:
    """All the reasons ``cert`` fails to verify against ``code`` (empty = valid).

    Shares no state with the searches: distances are recomputed from scratch.
    """
    reasons = []
    if cert.mode not in ("ordinary", "average_radius"):
        reasons.append(f"unknown mode {cert.mode!r}")
        return reasons
    if len(cert.center) != code.n:
        reasons.append(f"center length {len(cert.center)} != n={code.n}")
    if any(not 0 <= s < code.q for s in cert.center):
        reasons.append("center symbol outside alphabet")
    idx = cert.codeword_indices
    if len(idx) < 2:
        reasons.append("fewer than 2 codewords listed")
    if len(set(idx)) != len(idx):
        reasons.append("repeated codeword index")
    if any(not 0 <= i < len(code) for i in idx):
        reasons.append("codeword index out of range")
    if reasons:
        return reasons
    words = [code[i] for i in idx]
    if len(set(words)) != len(words):
        reasons.append("codewords not pairwise distinct")
    recomputed = tuple(hamming_distance(w, cert.center) for w in words)
    if recomputed != tuple(cert.distances):
        reasons.append(f"stated distances {tuple(cert.distances)} != recomputed {recomputed}")
    if cert.mode == "ordinary":
        if any(d > cert.threshold for d in recomputed):
            reasons.append(f"a distance exceeds the radius {cert.threshold}")
    else:
        if sum(recomputed) > cert.threshold:
            reasons.append(f"total {sum(recomputed)} exceeds the budget {cert.threshold}")
    return reasons


def verify_certificate(code: Code, cert: Certificate) -> bool:
    return not check_certificate(code, cert)


# ---------------------------------------------------------------------------
# Parameter derivation for the general attack
# ---------------------------------------------------------------------------

@dataclass
class AttackParams:
    """Integer parameter pack for the general attack, with its exact identities.

    ``d0 + L*d1 == pn`` holds exactly; the intervals tile ``[0, pn)``; the
    family lives on the remaining ``n - pn`` coordinates.
    """

    n: int
    L: int
    R_eff: Fraction
    eps_eff: Fraction
    k: int
    p: Fraction
    pn: int
    a_f: int
    a_union: int
    d0: int
    d1: int
    intervals: tuple  # I_0 .. I_L as CoordSets
    i_star: CoordSet
    alpha: Fraction
    beta: Fraction
    W: int
    chain_ok: bool
    chain: Dict
    family: Optional[SetFamily] = None

    @property
    def ground_size(self) -> int:
        return self.n - self.pn

    def echo(self) -> dict:
        return {
            "n": self.n, "L": self.L,
            "R_eff": str(self.R_eff), "eps_eff": str(self.eps_eff),
            "k": self.k, "p": str(self.p), "pn": self.pn,
            "a_f": self.a_f, "a_union": self.a_union,
            "d0": self.d0, "d1": self.d1, "W": self.W,
            "alpha": float(self.alpha), "beta": float(self.beta),
            "chain_ok": self.chain_ok,
        }


def _round_rate_eps(R: Fraction, eps: Fraction, n: int, step: Fraction):
    """Round the rate down and the slack up to the proof grid of multiples of ``step``."""
    r_eff = math.floor(R / step) * step
    e_eff = math.ceil((eps + step) / step) * step
    return r_eff, e_eff


def _exact_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise InternalCheckError(f"{what} = {x} is not an integer")
    return int(x)


def derive_params(n: int, L: int, R, eps) -> AttackParams:
    """Integer parameters for the general attack at block length ``n``.

    Rounds R down and eps up to multiples of ``(L+1)/n``, then sets the
    agreement size ``a_F = k - 1``, the union floor
    ``a_union = floor((1 - p - p^L/(4L)) n)``, and the interval widths
    ``d1 = (1 - R - 5 eps) n / (L+1)`` and ``d0 = 4 L eps n / (L+1)``, checking
    the identities ``d0 + L d1 = pn``, ``n - d0 - d1 - a_F <= pn`` and
    ``d0 <= 4 eps n`` in exact integer arithmetic.
    """
    if L < 2:
        raise InputError(f"the general attack needs list size >= 2, got {L}")
    if n < L + 2:
        raise InputError(f"block length {n} too small for L={L}")
    R = to_fraction(R)
    eps = to_fraction(eps)
    if not (0 < R < 1 and 0 < eps < 1):
        raise InputError(f"need R, eps in (0, 1), got R={R}, eps={eps}")
    step = Fraction(L + 1, n)
    r_eff, e_eff = _round_rate_eps(R, eps, n, step)
    k = _exact_int(r_eff * n, "k")
    if k < 2:
        raise ParameterizationError(
            f"rate {R} rounds down to k={k} on the (L+1)/n grid; need k >= 2")
    a_f = k - 1
    p = Fraction(L, L + 1) * (1 - r_eff - e_eff)
    if p <= 0:
        raise ParameterizationError(f"radius collapses: 1 - R' - eps' = {1 - r_eff - e_eff}")
    pn = _exact_int(p * n, "pn")
    d1 = (1 - r_eff - 5 * e_eff) * n / (L + 1)
    if d1 <= 0:
        raise ParameterizationError(
            f"d1 = (1 - R' - 5 eps') n / (L+1) = {d1} <= 0: eps too large for n={n}")
    d1 = _exact_int(d1, "d1")
    d0 = _exact_int(4 * L * e_eff * n / (L + 1), "d0")
    a_union = math.floor((1 - p - p ** L / (4 * L)) * n)

    if d0 + L * d1 != pn:
        raise InternalCheckError(f"d0 + L*d1 = {d0 + L * d1} != pn = {pn}")
    if n - d0 - d1 - a_f > pn:
        raise ParameterizationError(
            f"distance accounting fails: n - d0 - d1 - a_F = {n - d0 - d1 - a_f} > pn = {pn}")
    if d0 > 4 * e_eff * n:
        raise InternalCheckError(f"d0 = {d0} exceeds 4 eps' n = {4 * e_eff * n}")

    ground = n - pn
    if not 0 < a_f < a_union < ground:
        raise ParameterizationError(
            f"family sizes infeasible: need 0 < a_F={a_f} < a_union={a_union} "
            f"< ground={ground}")
    alpha = Fraction(a_f, ground)
    beta = Fraction(a_union, ground)
    W = choose_union_arity(alpha, beta)

    beta_ceiling = 1 - Fraction(1, 4 * L) * ((1 - r_eff) / 4) ** L
    alpha_floor = Fraction((L + 1) * r_eff, 1 + (L + 1) * r_eff)
    chain_ok = beta <= beta_ceiling and alpha >= alpha_floor
    chain = {
        "beta": float(beta), "beta_ceiling": float(beta_ceiling),
        "alpha": float(alpha), "alpha_floor": float(alpha_floor),
    }

    intervals = [tuple(range(0, d0))]
    for j in range(1, L + 1):
        lo = d0 + (j - 1) * d1
        intervals.append(tuple(range(lo, lo + d1)))
    i_star = tuple(range(0, pn))

    return AttackParams(n=n, L=L, R_eff=r_eff, eps_eff=e_eff, k=k, p=p, pn=pn,
                        a_f=a_f, a_union=a_union, d0=d0, d1=d1,
                        intervals=tuple(intervals), i_star=i_star,
                        alpha=alpha, beta=beta, W=W, chain_ok=chain_ok, chain=chain)


# ---------------------------------------------------------------------------
# Attack stages
# ---------------------------------------------------------------------------

def find_popular_codeword(code: Code, family_sets: Sequence[CoordSet]):
    """The codeword with the most family sets on which some other codeword shadows it.

    For each set A, codewords are grouped by their restriction to A; a set
    counts for codeword c when c's group has another member.  Returns
    ``(index, [(A, partner_index), ...])`` where each partner is the smallest
    other index in c's group; ties on the count break toward the smaller index.
    """
    counts = [0] * len(code)
    groups_per_set = []
    for a in family_sets:
        groups: Dict[tuple, list] = {}
        for i, w in enumerate(code.words):
            groups.setdefault(restrict(w, a), []).append(i)
        groups_per_set.append(groups)
        for members in groups.values():
            if len(members) >= 2:
                for i in members:
                    counts[i] += 1
    best = max(range(len(code)), key=lambda i: (counts[i], -i))
    fc = []
    for a, groups in zip(family_sets, groups_per_set):
        members = groups[restrict(code[best], a)]
        if len(members) >= 2:
            partner = min(i for i in members if i != best)
            fc.append((a, partner))
    return best, fc


@dataclass
class CollisionClass:
    value: tuple        # shared restriction to I_0
    entries: list       # [(A, partner_index), ...] in family order
    class_sizes: list   # all class sizes, descending
    max_class_size: int


def pigeonhole_I0(partners: Sequence[Tuple[CoordSet, int]], code: Code,
                  i0: CoordSet, need: int) -> Optional[CollisionClass]:
    """Group partner codewords by their restriction to I_0.

    Returns a class with at least ``need`` entries (the largest one; ties break
    toward the lexicographically smallest restriction), or None when every
    class is too small — the expected outcome when ``q^{|I_0|}`` dwarfs the
    number of partners.
    """
    classes: Dict[tuple, list] = {}
    for a, idx in partners:
        classes.setdefault(restrict(code[idx], i0), []).append((a, idx))
    if not classes:
        return None
    sizes = sorted((len(v) for v in classes.values()), reverse=True)
    value = min(classes, key=lambda v: (-len(classes[v]), v))
    entries = classes[value]
    cc = CollisionClass(value=value, entries=entries, class_sizes=sizes,
                        max_class_size=sizes[0])
    return cc if len(entries) >= need else None


def _class_stats(partners, code, i0):
    classes: Dict[tuple, int] = {}
    for _, idx in partners:
        key = restrict(code[idx], i0)
        classes[key] = classes.get(key, 0) + 1
    sizes = sorted(classes.values(), reverse=True)
    return sizes


def select_distinct(entries: Sequence[Tuple[CoordSet, int]], code: Code,
                    c0_index: int, W: int, L: int, a_union: int):
    """Pick L pairwise-distinct partners from a collision class, or expose a distance breach.

    If some partner repeats W or more times, its agreement sets union to at
    least ``a_union`` coordinates shared with the popular codeword, so that
    pair already violates the minimum-distance assumption; a DistanceWitness
    for it is returned instead of a selection.
    """
    if len(entries) < W * L:
        raise InputError(f"collision class has {len(entries)} entries, need {W * L}")
    by_partner: Dict[int, list] = {}
    for a, idx in entries:
        by_partner.setdefault(idx, []).append(a)
    for idx, sets in by_partner.items():
        if len(sets) >= W:
            union = set()
            for a in sets[:W]:
                union.update(a)
            if len(union) < a_union:
                raise InternalCheckError(
                    f"{W} family sets union to {len(union)} < floor {a_union}; "
                    f"the family was not verified")
            d = hamming_distance(code[c0_index], code[idx])
            if d > code.n - len(union):
                raise InternalCheckError("partner disagrees inside its own agreement sets")
            return None, DistanceWitness(index_a=c0_index, index_b=idx,
                                         union_size=len(union), distance=d)
    chosen = []
    seen = set()
    for a, idx in entries:
        if idx not in seen:
            seen.add(idx)
            chosen.append((a, idx))
            if len(chosen) == L:
                return chosen, None
    raise InternalCheckError(
        f"class of {len(entries)} entries with no {W}-fold repeat yielded only "
        f"{len(chosen)} distinct partners")


def build_center_general(code: Code, c0_index: int,
                         chosen: Sequence[Tuple[CoordSet, int]],
                         params: AttackParams) -> Certificate:
    """Assemble the center: partner class value on I_0, partner j on I_j, c_0 elsewhere.

    The j-th partner then agrees with the center on I_0, I_j, and its own
    agreement set A_j, while c_0 can only disagree inside the interval region;
    both distance bounds are checked and are guaranteed by the parameter
    identities, so a breach raises.
    """
    i0 = params.intervals[0]
    partner_ids = [idx for _, idx in chosen]
    v0 = restrict(code[partner_ids[0]], i0)
    for idx in partner_ids[1:]:
        if restrict(code[idx], i0) != v0:
            raise InternalCheckError("selected partners disagree on I_0")
    y = list(code[c0_index])
    for pos, sym in zip(i0, v0):
        y[pos] = sym
    for j, (_, idx) in enumerate(chosen, start=1):
        for pos in params.intervals[j]:
            y[pos] = code[idx][pos]
    y = tuple(y)
    d0_dist = hamming_distance(y, code[c0_index])
    if d0_dist > params.pn:
        raise InternalCheckError(f"d(y, c0) = {d0_dist} > pn = {params.pn}")
    bound_j = code.n - params.d0 - params.d1 - params.a_f
    dists = [d0_dist]
    for _, idx in chosen:
        dj = hamming_distance(y, code[idx])
        if dj > bound_j:
            raise InternalCheckError(f"d(y, c_j) = {dj} > n - d0 - d1 - a_F = {bound_j}")
        dists.append(dj)
    return Certificate(mode="ordinary", provenance="general", center=y,
                       codeword_indices=tuple([c0_index] + partner_ids),
                       distances=tuple(dists), threshold=params.pn)


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

def _remap_certificate(cert: Certificate, index_map: Sequence[int]) -> Certificate:
    return Certificate(mode=cert.mode, provenance=cert.provenance, center=cert.center,
                       codeword_indices=tuple(index_map[i] for i in cert.codeword_indices),
                       distances=cert.distances, threshold=cert.threshold)


def _finish(code: Code, report: AttackReport) -> AttackReport:
    if report.certificate is not None:
        reasons = check_certificate(code, report.certificate)
        if reasons:
            raise InternalCheckError(f"emitted certificate fails verification: {reasons}")
    return report


def run_general_attack(code: Code, L: int, R, eps, seed: int = 0,
                       family: Optional[SetFamily] = None,
                       family_target: Optional[int] = None) -> AttackReport:
    """Full pipeline: distance subcode, parameter derivation, family, pigeonhole, center.

    A certificate proves the code is not (p, L)-list-decodable at the derived
    radius (valid for the original code even when a subcode was attacked); a
    stage failure reports counters consistent with the alphabet being large
    enough to absorb the pigeonhole.
    """
    R = to_fraction(R)
    eps = to_fraction(eps)
    p_claim = generalized_singleton_radius(L, R, eps)
    alpha_dist = p_claim + p_claim ** L / (2 * L)

    index_map = list(range(len(code)))
    attacked = code
    dmin = min_distance(code)
    expurgated = False
    if dmin is not None and dmin < math.ceil(alpha_dist * code.n):
        kept = greedy_distance_indices(code, alpha_dist)
        index_map = kept
        attacked = Code(q=code.q, n=code.n, words=tuple(code.words[i] for i in kept))
        expurgated = True

    params = derive_params(code.n, L, R, eps)
    size_cap = code.q ** params.k
    if len(attacked) > size_cap:
        index_map = index_map[:size_cap]
        attacked = Code(q=code.q, n=code.n, words=attacked.words[:size_cap])

    if family is None:
        family = build_set_family(params.ground_size, params.a_f, params.a_union,
                                  seed=seed, target=family_target)
    else:
        if (family.ground_size != params.ground_size
                or family.member_size != params.a_f
                or family.union_floor != params.a_union):
            raise InputError("supplied family does not match the derived parameters")
    if family.W != params.W:
        raise InputError(f"family W={family.W} does not match derived W={params.W}")
    params.family = family
    abs_sets = tuple(tuple(i + params.pn for i in s) for s in family.sets)

    counters = {
        "family_size": len(abs_sets),
        "expurgated_first": expurgated,
        "attacked_size": len(attacked),
        "need": params.W * L,
    }
    effective = params.echo()
    effective["seed"] = seed

    best, fc = find_popular_codeword(attacked, abs_sets)
    counters["popular_index"] = index_map[best]
    counters["fc_size"] = len(fc)
    if len(fc) == 0:
        return AttackReport(outcome="stage_failed", provenance="general",
                            failed_stage=STAGE_POPULAR, counters=counters,
                            effective=effective)

    i0 = params.intervals[0]
    cc = pigeonhole_I0(fc, attacked, i0, need=params.W * L)
    counters["class_sizes"] = _class_stats(fc, attacked, i0)
    counters["max_class_size"] = counters["class_sizes"][0]
    if cc is None:
        # counting consistency: failure is only possible when the alphabet
        # can spread |F_c| partners over fewer-than-need classes
        bound_ok = params.W * L * code.q ** params.d0 >= len(fc)
        counters["pigeonhole_bound_ok"] = bound_ok
        if not bound_ok:
            raise InternalCheckError(
                "pigeonhole failed although the class count guarantees a collision")
        return AttackReport(outcome="stage_failed", provenance="general",
                            failed_stage=STAGE_PIGEONHOLE, counters=counters,
                            effective=effective)

    chosen, witness = select_distinct(cc.entries, attacked, best, params.W, L,
                                      params.a_union)
    if witness is not None:
        witness = DistanceWitness(index_a=index_map[witness.index_a],
                                  index_b=index_map[witness.index_b],
                                  union_size=witness.union_size,
                                  distance=witness.distance)
        return AttackReport(outcome="stage_failed", provenance="general",
                            failed_stage=STAGE_DISTINCT, distance_witness=witness,
                            counters=counters, effective=effective)

    cert = build_center_general(attacked, best, chosen, params)
    cert = _remap_certificate(cert, index_map)
    report = AttackReport(outcome="certificate", provenance="general",
                          certificate=cert, counters=counters, effective=effective)
    return _finish(code, report)


def _distinct_pair(entries, code):
    """First pair of entries (lexicographic) with distinct partner codewords."""
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if entries[i][1] != entries[j][1]:
                return entries[i], entries[j]
    return None


def _int_log_floor(q: int, size: int) -> int:
    k = 0
    while q ** (k + 1) <= size:
        k += 1
    return k


def run_warmup1(code: Code, cap: int = 100_000, seed: int = 0) -> AttackReport:
    """Average-radius attack for L=2 against codes at the exact distance trade-off.

    Pins the collision window to the first two coordinates and uses agreement
    sets of size k-1 drawn from the rest, where k is the integer dimension;
    works best on codes of size exactly q^k with near-extremal distance.
    """
    L = 2
    q, n = code.q, code.n
    if n < 3:
        raise InputError(f"need n >= 3, got {n}")
    k = _int_log_floor(q, len(code))
    if k < 1:
        raise InputError(f"code of size {len(code)} over q={q} has dimension < 1")
    i0 = (0, 1)
    ground = list(range(2, n))
    total_sets = math.comb(len(ground), k - 1)
    if total_sets <= cap:
        fam_sets = [tuple(s) for s in combinations(ground, k - 1)]
        sampled = False
    else:
        rng = np.random.default_rng(seed)
        seen = set()
        fam_sets = []
        while len(fam_sets) < cap:
            s = tuple(sorted(rng.choice(ground, size=k - 1, replace=False).tolist()))
            if s not in seen:
                seen.add(s)
                fam_sets.append(s)
        sampled = True

    budget = 2 * (n - k)  # floor(3 * (2/3)(1 - k/n) * n)
    counters = {"family_size": len(fam_sets), "family_sampled": sampled,
                "k": k, "need": 2}
    effective = {"L": L, "k": k, "budget": budget, "i0_size": 2, "seed": seed}

    best, fc = find_popular_codeword(code, fam_sets)
    counters["popular_index"] = best
    counters["fc_size"] = len(fc)
    if len(fc) == 0:
        return AttackReport(outcome="stage_failed", provenance="warmup1",
                            failed_stage=STAGE_POPULAR, counters=counters,
                            effective=effective)
    cc = pigeonhole_I0(fc, code, i0, need=2)
    counters["class_sizes"] = _class_stats(fc, code, i0)
    counters["max_class_size"] = counters["class_sizes"][0]
    if cc is None:
        # failure means every I_0 class is a singleton, so |F_c| <= q^2
        counters["pigeonhole_bound_ok"] = q ** 2 >= len(fc)
        return AttackReport(outcome="stage_failed", provenance="warmup1",
                            failed_stage=STAGE_PIGEONHOLE, counters=counters,
                            effective=effective)
    pair = _distinct_pair(cc.entries, code)
    if pair is None:
        (a1, idx) = cc.entries[0]
        (a2, _) = cc.entries[1]
        union = sorted(set(a1) | set(a2))
        witness = DistanceWitness(index_a=best, index_b=idx, union_size=len(union),
                                  distance=hamming_distance(code[best], code[idx]))
        return AttackReport(outcome="stage_failed", provenance="warmup1",
                            failed_stage=STAGE_DISTINCT, distance_witness=witness,
                            counters=counters, effective=effective)
    (a1, f1), (a2, f2) = pair
    y = list(code[best])
    for pos in i0:
        y[pos] = code[f1][pos]
    y = tuple(y)
    dists = tuple(hamming_distance(y, code[i]) for i in (best, f1, f2))
    if sum(dists) > budget:
        raise InternalCheckError(f"total {sum(dists)} exceeds 2(n-k) = {budget}")
    cert = Certificate(mode="average_radius", provenance="warmup1", center=y,
                       codeword_indices=(best, f1, f2), distances=dists,
                       threshold=budget)
    return _finish(code, AttackReport(outcome="certificate", provenance="warmup1",
                                      certificate=cert, counters=counters,
                                      effective=effective))


def run_warmup2(code: Code, eps, R=None, seed: int = 0,
                family: Optional[SetFamily] = None,
                enum_cap: int = 200_000) -> AttackReport:
    """Average-radius attack for L=2 with a slack eps, under a distance assumption.

    The collision window I_0 widens to 4*eps*n coordinates and the agreement
    sets shrink to (R-eps)*n, paid for by a pairwise-union floor of (R+eps)*n
    that keeps the two recovered partners distinct.  R and eps are rounded to
    the 3/n grid (rate down, slack up) so every size is an integer.
    """
    L = 2
    q, n = code.q, code.n
    eps_in = to_fraction(eps)
    if eps_in < 0:
        raise InputError(f"eps must be >= 0, got {eps}")
    if R is None:
        R_in = Fraction(_int_log_floor(q, len(code)), n)
    else:
        R_in = to_fraction(R)
    if not 0 < R_in < 1:
        raise InputError(f"need R in (0, 1), got {R_in}")
    step = Fraction(3, n)
    r_eff, e_eff = _round_rate_eps(R_in, eps_in, n, step)
    if r_eff <= 0:
        raise ParameterizationError(f"rate {R_in} rounds to 0 on the 3/n grid")

    i0_n = _exact_int(4 * e_eff * n, "4*eps*n")
    alpha_n = _exact_int((r_eff - e_eff) * n, "(R-eps)*n")
    beta_n = _exact_int((r_eff + e_eff) * n, "(R+eps)*n")
    ground = n - i0_n
    if alpha_n < 1:
        raise ParameterizationError(f"agreement size (R-eps)n = {alpha_n} < 1 after rounding")
    if i0_n >= n or alpha_n > ground:
        raise ParameterizationError(
            f"I_0 of {i0_n} coordinates leaves no room for size-{alpha_n} sets in n={n}")
    if beta_n > min(2 * alpha_n, ground):
        raise ParameterizationError(
            f"union floor {beta_n} unreachable: two size-{alpha_n} sets in "
            f"{ground} coordinates union to at most {min(2 * alpha_n, ground)}")

    # the distinctness stage needs agreement on beta_n coordinates to breach
    # the distance floor, so the gate uses the rounded parameters it runs with
    dmin = min_distance(code)
    dist_floor = (1 - r_eff - e_eff) * n
    if dmin is not None and dmin <= dist_floor:
        raise InputError(
            f"minimum distance {dmin} must exceed (1-R'-eps')n = {float(dist_floor):g} "
            f"(R'={r_eff}, eps'={e_eff} after rounding)")

    index_map = list(range(len(code)))
    attacked = code
    size_cap_exp = _exact_int(r_eff * n, "R'*n")
    if float(size_cap_exp) * math.log2(q) < 62:
        size_cap = q ** size_cap_exp
        if len(attacked) > size_cap:
            index_map = index_map[:size_cap]
            attacked = Code(q=q, n=n, words=attacked.words[:size_cap])

    if family is None:
        family = pairwise_family_warmup2(n, i0_n, alpha_n, beta_n, seed=seed,
                                         enum_cap=enum_cap)
    else:
        if (family.ground_size != n or family.member_size != alpha_n
                or family.union_floor != beta_n or family.W != 2):
            raise InputError("supplied family does not match the rounded parameters")
        if any(s and s[0] < i0_n for s in family.sets):
            raise InputError("supplied family overlaps I_0")

    p_eff = Fraction(L, L + 1) * (1 - r_eff - e_eff)
    budget = _exact_int((L + 1) * p_eff * n, "(L+1)*p*n")  # = 2(1 - R' - eps')n
    decomposition = (i0_n, _exact_int(2 * (1 - r_eff - 3 * e_eff) * n, "2(1-R-3eps)n"))
    counters = {"family_size": len(family.sets), "need": 2,
                "attacked_size": len(attacked)}
    effective = {"L": L, "R_eff": str(r_eff), "eps_eff": str(e_eff),
                 "i0_size": i0_n, "alpha_n": alpha_n, "beta_n": beta_n,
                 "budget": budget, "decomposition": list(decomposition),
                 "seed": seed}

    best, fc = find_popular_codeword(attacked, family.sets)
    counters["popular_index"] = index_map[best]
    counters["fc_size"] = len(fc)
    if len(fc) == 0:
        return AttackReport(outcome="stage_failed", provenance="warmup2",
                            failed_stage=STAGE_POPULAR, counters=counters,
                            effective=effective)
    i0 = tuple(range(i0_n))
    cc = pigeonhole_I0(fc, attacked, i0, need=2)
    counters["class_sizes"] = _class_stats(fc, attacked, i0)
    counters["max_class_size"] = counters["class_sizes"][0]
    if cc is None:
        # failure means every I_0 class is a singleton, so |F_c| <= q^{|I_0|}
        counters["pigeonhole_bound_ok"] = (q ** i0_n >= len(fc)
                                           if i0_n * math.log2(q) < 62 else True)
        return AttackReport(outcome="stage_failed", provenance="warmup2",
                            failed_stage=STAGE_PIGEONHOLE, counters=counters,
                            effective=effective)
    pair = _distinct_pair(cc.entries, attacked)
    if pair is None:
        (a1, idx) = cc.entries[0]
        (a2, _) = cc.entries[1]
        union = sorted(set(a1) | set(a2))
        witness = DistanceWitness(index_a=index_map[best], index_b=index_map[idx],
                                  union_size=len(union),
                                  distance=hamming_distance(attacked[best], attacked[idx]))
        return AttackReport(outcome="stage_failed", provenance="warmup2",
                            failed_stage=STAGE_DISTINCT, distance_witness=witness,
                            counters=counters, effective=effective)
    (a1, f1), (a2, f2) = pair
    y = list(attacked[best])
    for pos in i0:
        y[pos] = attacked[f1][pos]
    y = tuple(y)
    dists = tuple(hamming_distance(y, attacked[i]) for i in (best, f1, f2))
    if sum(dists) > budget:
        raise InternalCheckError(f"total {sum(dists)} exceeds the budget {budget}")
    cert = Certificate(mode="average_radius", provenance="warmup2", center=y,
                       codeword_indices=tuple(index_map[i] for i in (best, f1, f2)),
                       distances=dists, threshold=budget)
    return _finish(code, AttackReport(outcome="certificate", provenance="warmup2",
                                      certificate=cert, counters=counters,
                                      effective=effective))


def singleton_witness(code: Code, L: int) -> Certificate:
    """A bad-list-decoding center from the longest shared prefix.

    Finds the largest t such that some L+1 codewords agree on the first t
    coordinates (groups by prefix, binary search on t), splits the remaining
    coordinates into L+1 near-equal blocks, and lets the center follow
    codeword j on block j.  Every distance is then at most
    ``n - t - floor((n-t)/(L+1))``.
    """
    if L < 1:
        raise InputError(f"list size must be >= 1, got {L}")
    if len(code) < L + 1:
        raise InputError(f"need at least L+1 = {L + 1} codewords, got {len(code)}")
    n = code.n

    def group_at(t: int):
        groups: Dict[tuple, list] = {}
        for i, w in enumerate(code.words):
            groups.setdefault(w[:t], []).append(i)
        winners = [g for g in groups.values() if len(g) >= L + 1]
        if not winners:
            return None
        return min(winners, key=lambda g: g[0])

    lo, hi = 0, n  # prefix 0 always groups everyone; full length never (distinct words)
    best_group = group_at(0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        g = group_at(mid)
        if g is None:
            hi = mid
        else:
            lo, best_group = mid, g
    t = lo
    chosen = best_group[:L + 1]

    rem = n - t
    base = rem // (L + 1)
    extra = rem % (L + 1)
    y = list(code[chosen[0]][:t])
    pos = t
    for j, idx in enumerate(chosen):
        width = base + (1 if j < extra else 0)
        y.extend(code[idx][pos:pos + width])
        pos += width
    y = tuple(y)
    threshold = rem - base
    dists = tuple(hamming_distance(y, code[i]) for i in chosen)
    if any(d > threshold for d in dists):
        raise InternalCheckError(f"distances {dists} exceed the block bound {threshold}")
    return Certificate(mode="ordinary", provenance="singleton_witness", center=y,
                       codeword_indices=tuple(chosen), distances=dists,
                       threshold=threshold)
