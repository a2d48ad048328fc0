from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import (GENERAL_PLANT, make_general_family, make_general_plant,
                      make_warmup1_plant, make_warmup2_plant)
from listlab import (Certificate, Code, InputError, ParameterizationError,
                     RadiusQuery, build_center_general, derive_params,
                     find_popular_codeword, hamming_distance, is_list_decodable,
                     pigeonhole_I0, restrict, run_general_attack, run_warmup1,
                     run_warmup2, select_distinct, singleton_witness,
                     verify_certificate)
from listlab.attack import check_certificate


# ---------------------------------------------------------------------------
# derive_params
# ---------------------------------------------------------------------------

def test_derive_params_plant_point():
    params = derive_params(96, 2, Fraction(3, 8), Fraction(1, 32))
    assert (params.k, params.pn, params.d0, params.d1) == (36, 36, 16, 10)
    assert params.a_f == 35 and params.a_union == 58 and params.W == 5
    assert params.d0 + params.L * params.d1 == params.pn
    assert params.n - params.d0 - params.d1 - params.a_f <= params.pn
    assert params.d0 <= 4 * params.eps_eff * params.n
    assert params.intervals[0] == tuple(range(16))
    assert params.intervals[1] == tuple(range(16, 26))
    assert params.i_star == tuple(range(36))
    assert params.chain_ok


def test_derive_params_identity_grid():
    grid = [(96, 2, Fraction(3, 8), Fraction(1, 32)),
            (96, 2, Fraction(1, 2), Fraction(1, 32)),
            (192, 2, Fraction(1, 4), Fraction(1, 64)),
            (192, 3, Fraction(1, 4), Fraction(1, 48)),
            (144, 3, Fraction(1, 4), Fraction(1, 36))]
    for n, L, R, eps in grid:
        params = derive_params(n, L, R, eps)
        assert params.d0 + L * params.d1 == params.pn
        assert (params.p * n).denominator == 1
        assert params.n - params.d0 - params.d1 - params.a_f <= params.pn
        assert params.d0 <= 4 * params.eps_eff * params.n


def test_derive_params_small_n_is_infeasible():
    # on the (L+1)/n grid the rounded slack is at least 2(L+1)/n, so at n=33
    # the interval width (1 - R - 5 eps) n / (L+1) cannot stay positive
    with pytest.raises(ParameterizationError):
        derive_params(33, 2, Fraction(6, 11), Fraction(1, 33))


def test_derive_params_large_eps_guard():
    with pytest.raises(ParameterizationError):
        derive_params(96, 2, Fraction(3, 8), Fraction(1, 4))


def test_derive_params_input_validation():
    with pytest.raises(InputError):
        derive_params(96, 1, Fraction(1, 2), Fraction(1, 32))
    with pytest.raises(InputError):
        derive_params(96, 2, Fraction(3, 2), Fraction(1, 32))


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def _brute_popularity(code, fam_sets):
    counts = []
    partners = []
    for i, w in enumerate(code.words):
        fc = []
        for a in fam_sets:
            group = [j for j, u in enumerate(code.words)
                     if restrict(u, a) == restrict(w, a)]
            if len(group) >= 2:
                fc.append((a, min(j for j in group if j != i)))
        counts.append(len(fc))
        partners.append(fc)
    best = max(range(len(code)), key=lambda i: (counts[i], -i))
    return best, partners[best]


def test_find_popular_codeword_matches_bruteforce():
    rng = np.random.default_rng(2)
    words = set()
    while len(words) < 16:
        words.add(tuple(int(x) for x in rng.integers(0, 2, 8)))
    code = Code(q=2, n=8, words=tuple(sorted(words)))
    fam_sets = [tuple(s) for s in combinations(range(7), 5)]
    assert len(fam_sets) == 21
    best, fc = find_popular_codeword(code, fam_sets)
    brute_best, brute_fc = _brute_popularity(code, fam_sets)
    assert best == brute_best
    assert fc == brute_fc


def test_find_popular_no_agreements():
    code = Code(q=4, n=4, words=((0, 0, 0, 0), (1, 1, 1, 1), (2, 2, 2, 2)))
    best, fc = find_popular_codeword(code, [(0, 1)])
    assert fc == []


def test_pigeonhole_all_identical_restrictions():
    code = Code(q=2, n=4, words=((0, 0, 0, 0), (0, 0, 1, 1), (0, 0, 1, 0)))
    partners = [((2,), 1), ((3,), 2)]
    cc = pigeonhole_I0(partners, code, (0, 1), need=2)
    assert cc is not None and len(cc.entries) == 2
    assert cc.value == (0, 0)


def test_pigeonhole_failure_max_class_one():
    code = Code(q=2, n=4, words=((0, 0, 0, 0), (0, 1, 1, 1), (1, 0, 1, 1)))
    partners = [((2,), 1), ((3,), 2)]
    assert pigeonhole_I0(partners, code, (0, 1), need=2) is None


def test_pigeonhole_class_sizes_sum_to_partner_count():
    rng = np.random.default_rng(3)
    words = set()
    while len(words) < 12:
        words.add(tuple(int(x) for x in rng.integers(0, 2, 6)))
    code = Code(q=2, n=6, words=tuple(sorted(words)))
    partners = [((2 + (i % 4),), int(rng.integers(0, 12))) for i in range(9)]
    from listlab.attack import _class_stats
    sizes = _class_stats(partners, code, (0, 1))
    assert sum(sizes) == len(partners)


def test_select_distinct_all_distinct():
    code, family = make_general_plant()
    g = GENERAL_PLANT
    abs_sets = [tuple(i + g["pn"] for i in s) for s in family.sets]
    entries = [(abs_sets[i], i + 1) for i in range(10)]
    chosen, witness = select_distinct(entries, code, 0, g["W"], g["L"], g["a_union"])
    assert witness is None
    assert chosen == entries[:2]


def test_select_distinct_w_repeat_yields_distance_witness():
    # a single word genuinely agreeing with the base word on five family sets
    # is a distance breach: their union covers 59 of 60 ground coordinates
    code, family = make_general_plant()
    g = GENERAL_PLANT
    abs_sets = [tuple(i + g["pn"] for i in s) for s in family.sets]
    covered = set().union(*(abs_sets[i] for i in range(5)))
    base = code[0]
    pstar = tuple(2 if pos < g["d0"]
                  else (base[pos] if pos in covered else 15)
                  for pos in range(code.n))
    words = code.words + (pstar,)
    bigger = Code(q=code.q, n=code.n, words=words)
    pstar_idx = len(words) - 1
    entries = [(abs_sets[i], pstar_idx) for i in range(5)] + \
              [(abs_sets[5 + i], 6 + i) for i in range(5)]
    chosen, witness = select_distinct(entries, bigger, 0, g["W"], g["L"],
                                      g["a_union"])
    assert chosen is None
    assert witness.index_b == pstar_idx
    assert witness.union_size >= g["a_union"]
    assert witness.distance <= bigger.n - witness.union_size


def test_select_distinct_class_too_small():
    code, family = make_general_plant()
    with pytest.raises(InputError):
        select_distinct([(family.sets[0], 1)], code, 0, 5, 2, 58)


def test_select_distinct_counting_on_synthetic_classes():
    # multiplicities all below W always leave at least L distinct partners
    code, family = make_general_plant()
    g = GENERAL_PLANT
    abs_sets = [tuple(i + g["pn"] for i in s) for s in family.sets]
    entries = []
    partner_cycle = [1, 2, 3]
    for i in range(10):
        entries.append((abs_sets[i], partner_cycle[i % 3]))
    chosen, witness = select_distinct(entries, code, 0, g["W"], g["L"], g["a_union"])
    assert witness is None
    assert len({idx for _, idx in chosen}) == g["L"]


# ---------------------------------------------------------------------------
# drivers on planted instances
# ---------------------------------------------------------------------------

def test_general_attack_on_plant():
    code, family = make_general_plant()
    g = GENERAL_PLANT
    report = run_general_attack(code, L=g["L"], R=g["R"], eps=g["eps"],
                                seed=0, family=family)
    assert report.outcome == "certificate"
    cert = report.certificate
    assert cert.provenance == "general" and cert.mode == "ordinary"
    assert cert.codeword_indices == (0, 1, 2)
    assert cert.distances == (36, 35, 35)
    assert cert.threshold == 36
    assert verify_certificate(code, cert)
    assert report.counters["fc_size"] == 10
    assert report.counters["max_class_size"] == 10
    assert report.effective["chain_ok"]


def test_general_attack_certificate_confirmed_by_verifier():
    code, family = make_general_plant()
    g = GENERAL_PLANT
    report = run_general_attack(code, L=g["L"], R=g["R"], eps=g["eps"],
                                seed=0, family=family)
    p = Fraction(report.certificate.threshold, code.n)
    v = is_list_decodable(code, RadiusQuery(p, g["L"]))
    assert v is not None


def test_general_attack_two_words_fails_at_popular_stage():
    rng = np.random.default_rng(4)
    words = [tuple(int(x) for x in rng.integers(0, 16, 96)) for _ in range(2)]
    code = Code(q=16, n=96, words=tuple(words))
    report = run_general_attack(code, L=2, R=Fraction(3, 8), eps=Fraction(1, 32),
                                seed=0, family=make_general_family())
    assert report.outcome == "stage_failed"
    assert report.failed_stage == "popular_codeword"
    assert report.counters["fc_size"] == 0


def test_general_attack_default_family_runs_deterministically():
    code, _ = make_general_plant()
    a = run_general_attack(code, L=2, R=Fraction(3, 8), eps=Fraction(1, 32), seed=5)
    b = run_general_attack(code, L=2, R=Fraction(3, 8), eps=Fraction(1, 32), seed=5)
    assert a.to_json_dict() == b.to_json_dict()
    assert a.outcome in ("certificate", "stage_failed")
    if a.certificate is not None:
        assert verify_certificate(code, a.certificate)


def test_general_attack_report_counters_consistent():
    code, family = make_general_plant()
    g = GENERAL_PLANT
    report = run_general_attack(code, L=g["L"], R=g["R"], eps=g["eps"],
                                seed=0, family=family)
    assert report.counters["fc_size"] <= report.counters["family_size"]
    assert report.counters["max_class_size"] <= report.counters["fc_size"]


def test_build_center_general_directly():
    code, family = make_general_plant()
    g = GENERAL_PLANT
    params = derive_params(code.n, g["L"], g["R"], g["eps"])
    params.family = family
    abs_sets = [tuple(i + params.pn for i in s) for s in family.sets]
    best, fc = find_popular_codeword(code, abs_sets)
    assert best == 0 and len(fc) == 10
    cc = pigeonhole_I0(fc, code, params.intervals[0], need=params.W * g["L"])
    chosen, witness = select_distinct(cc.entries, code, best, params.W, g["L"],
                                      params.a_union)
    cert = build_center_general(code, best, chosen, params)
    assert cert.distances[0] <= params.pn
    bound = code.n - params.d0 - params.d1 - params.a_f
    assert all(d <= bound for d in cert.distances[1:])
    assert verify_certificate(code, cert)


def test_warmup1_on_plant():
    code = make_warmup1_plant()
    report = run_warmup1(code, seed=0)
    assert report.outcome == "certificate"
    cert = report.certificate
    assert cert.mode == "average_radius"
    assert cert.codeword_indices == (0, 1, 3)
    assert sum(cert.distances) <= cert.threshold == 6  # 2(n - k) with n=6, k=3
    assert verify_certificate(code, cert)


def test_warmup1_certificate_confirmed_by_exhaustive_average_oracle():
    from conftest import oracle_average_decodable
    code = make_warmup1_plant()
    report = run_warmup1(code, seed=0)
    # budget 2(n-k) corresponds to p = (2/3)(1 - k/n) = 1/3
    assert not oracle_average_decodable(code, Fraction(1, 3), 2)


def test_warmup1_even_weight_regression():
    words = tuple(w for w in
                  ((a, b, c, (a + b + c) % 2)
                   for a in (0, 1) for b in (0, 1) for c in (0, 1)))
    code = Code(q=2, n=4, words=words)
    report = run_warmup1(code, seed=0)
    # only one size-2 subset of the last two coordinates exists, so the
    # collision stage cannot gather two sets; q^2 >= |F_c| stays consistent
    assert report.outcome == "stage_failed"
    assert report.failed_stage == "pigeonhole_I0"
    assert report.counters["pigeonhole_bound_ok"]


def test_warmup1_two_word_code():
    code = Code(q=2, n=4, words=((0, 0, 0, 0), (1, 1, 1, 1)))
    report = run_warmup1(code, seed=0)
    assert report.outcome == "stage_failed"


def test_warmup2_on_plant():
    code, family, expect = make_warmup2_plant(seed=0)
    report = run_warmup2(code, eps=expect["eps"], R=expect["R"], seed=0,
                         family=family)
    assert report.outcome == "certificate"
    cert = report.certificate
    assert cert.mode == "average_radius"
    assert cert.codeword_indices == expect["indices"]
    assert cert.distances == expect["distances"]
    assert sum(cert.distances) == sum(expect["decomposition"])
    assert cert.threshold == expect["budget"]
    assert verify_certificate(code, cert)
    assert tuple(report.effective["decomposition"]) == expect["decomposition"]


def test_warmup2_internal_family_path():
    code, _, expect = make_warmup2_plant(seed=0)
    report = run_warmup2(code, eps=expect["eps"], R=expect["R"], seed=0)
    assert report.outcome in ("certificate", "stage_failed")
    if report.certificate is not None:
        assert verify_certificate(code, report.certificate)


def test_warmup2_distance_precondition_error():
    code, family, expect = make_warmup2_plant(seed=0)
    words = list(code.words)
    w = list(words[0])
    w[-1] = (w[-1] + 1) % code.q
    words.append(tuple(w))  # distance 1 to the base word
    bad = Code(q=code.q, n=code.n, words=tuple(words))
    with pytest.raises(InputError):
        run_warmup2(bad, eps=expect["eps"], R=expect["R"], seed=0, family=family)


def test_warmup2_rounding_unsatisfiable():
    code, _, expect = make_warmup2_plant(seed=0)
    with pytest.raises(ParameterizationError):
        run_warmup2(code, eps=Fraction(1, 2), R=expect["R"], seed=0)


def test_warmup2_default_rate_too_small():
    # six words over q=5 give dimension 1, and 1/30 rounds to rate 0 on the grid
    rng = np.random.default_rng(0)
    words = set()
    while len(words) < 6:
        words.add(tuple(int(x) for x in rng.integers(0, 5, 30)))
    code = Code(q=5, n=30, words=tuple(sorted(words)))
    with pytest.raises(ParameterizationError):
        run_warmup2(code, eps=0, seed=0)


# ---------------------------------------------------------------------------
# singleton witness
# ---------------------------------------------------------------------------

def test_singleton_shared_prefix():
    rng = np.random.default_rng(9)
    words = [(0, 1) + tuple(int(x) for x in rng.integers(0, 2, 6))
             for _ in range(3)]
    while len({w for w in words}) < 3:
        words[-1] = (0, 1) + tuple(int(x) for x in rng.integers(0, 2, 6))
    others = [(1, 0) + tuple(int(x) for x in rng.integers(0, 2, 6)) for _ in range(2)]
    all_words = tuple(dict.fromkeys(words + others))
    code = Code(q=2, n=8, words=all_words)
    cert = singleton_witness(code, 2)
    assert cert.threshold <= 4  # t >= 2 so n - t - floor((n-t)/3) <= 4
    assert all(d <= cert.threshold for d in cert.distances)
    assert verify_certificate(code, cert)


def test_singleton_full_space_small():
    full = Code(q=2, n=3, words=tuple(
        (a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)))
    cert = singleton_witness(full, 1)
    assert cert.threshold <= 1
    assert verify_certificate(full, cert)


def test_singleton_bound_over_full_spaces():
    for n in range(2, 8):
        full = Code(q=2, n=n, words=tuple(
            tuple((i >> j) & 1 for j in range(n)) for i in range(2 ** n)))
        for L in (1, 2):
            if len(full) < L + 1:
                continue
            cert = singleton_witness(full, L)
            rem_threshold = cert.threshold
            # recover t from the threshold identity and cross-check the cap
            assert verify_certificate(full, cert)
            assert all(d <= rem_threshold for d in cert.distances)


def test_singleton_requires_enough_words():
    code = Code(q=2, n=3, words=((0, 0, 0), (1, 1, 1)))
    with pytest.raises(InputError):
        singleton_witness(code, 2)


# ---------------------------------------------------------------------------
# certificate verification and mutations
# ---------------------------------------------------------------------------

_PLANT_CERT_CACHE = []


def _all_plant_certificates():
    if _PLANT_CERT_CACHE:
        return _PLANT_CERT_CACHE
    certs = _PLANT_CERT_CACHE
    w1 = make_warmup1_plant()
    certs.append((w1, run_warmup1(w1, seed=0).certificate))
    w2code, w2fam, w2exp = make_warmup2_plant(seed=0)
    certs.append((w2code, run_warmup2(w2code, eps=w2exp["eps"], R=w2exp["R"],
                                      seed=0, family=w2fam).certificate))
    gcode, gfam = make_general_plant()
    g = GENERAL_PLANT
    certs.append((gcode, run_general_attack(gcode, L=g["L"], R=g["R"],
                                            eps=g["eps"], seed=0,
                                            family=gfam).certificate))
    full = Code(q=2, n=5, words=tuple(
        tuple((i >> j) & 1 for j in range(5)) for i in range(32)))
    certs.append((full, singleton_witness(full, 2)))
    return certs


def test_all_emitted_certificates_verify():
    for code, cert in _all_plant_certificates():
        assert cert is not None
        assert verify_certificate(code, cert)


@pytest.mark.parametrize("mutation", ["center", "dup_index", "threshold"])
def test_certificate_mutations_rejected(mutation):
    for code, cert in _all_plant_certificates():
        if mutation == "center":
            center = list(cert.center)
            center[0] = (center[0] + 1) % code.q
            bad = Certificate(mode=cert.mode, provenance=cert.provenance,
                              center=tuple(center),
                              codeword_indices=cert.codeword_indices,
                              distances=cert.distances, threshold=cert.threshold)
        elif mutation == "dup_index":
            idx = list(cert.codeword_indices)
            idx[1] = idx[0]
            bad = Certificate(mode=cert.mode, provenance=cert.provenance,
                              center=cert.center, codeword_indices=tuple(idx),
                              distances=cert.distances, threshold=cert.threshold)
        else:
            lowered = (max(cert.distances) - 1 if cert.mode == "ordinary"
                       else sum(cert.distances) - 1)
            bad = Certificate(mode=cert.mode, provenance=cert.provenance,
                              center=cert.center,
                              codeword_indices=cert.codeword_indices,
                              distances=cert.distances, threshold=lowered)
        assert not verify_certificate(code, bad)
        assert check_certificate(code, bad)


def test_certificate_json_roundtrip():
    code, cert = _all_plant_certificates()[0]
    doc = cert.to_json_dict()
    back = Certificate.from_json_dict(doc)
    assert back == cert
    assert verify_certificate(code, back)


def test_attack_reports_are_deterministic():
    code, family, expect = make_warmup2_plant(seed=3)
    a = run_warmup2(code, eps=expect["eps"], R=expect["R"], seed=1, family=family)
    b = run_warmup2(code, eps=expect["eps"], R=expect["R"], seed=1, family=family)
    assert a.to_json_dict() == b.to_json_dict()
