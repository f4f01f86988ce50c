import itertools

import numpy as np
import pytest

from conftest import H13, H15, H75, golomb_primitive
from prcldpc.code import build, puncture, shorten
from prcldpc.codec import generator_matrix
from prcldpc.errors import TooLarge
from prcldpc.gf2poly import BinaryPolynomial
from prcldpc.ruler import profile
from prcldpc.spectrum import (
    FamilyRecord,
    distance_profile,
    estimate_spectrum,
    exact_spectrum,
    families_csv,
    family_census,
    lemma_bounds,
    spectrum,
    spectrum_csv,
)

K13_A_OF_D = dict(zip(range(19, 51), [3, 1, 8, 4, 2, 10, 6, 3, 2, 1, 4, 2, 7, 4, 1, 6, 2, 7, 2, 12, 6, 2, 1, 3, 1, 4, 2, 1, 3, 1, 2, 6]))
K13_ANCHORS = {19: (2, 3), 20: (2, 1), 21: (3, 8), 22: (3, 4), 24: (4, 10)}


def brute_force_counts(code):
    """Weight distribution from all 2^k encodings."""
    G = generator_matrix(code).astype(np.int64)
    info = np.array(list(itertools.product((0, 1), repeat=code.k)), dtype=np.int64)
    words = info @ G % 2
    return np.bincount(words.sum(axis=1), minlength=code.n + 1)


@pytest.mark.parametrize("n,expected", K13_ANCHORS.items())
def test_k13_anchors(n, expected):
    s = exact_spectrum(build(H13, n))
    assert (s.d, s.a_d) == expected


def test_k13_a_of_d_series():
    for n, a in K13_A_OF_D.items():
        assert exact_spectrum(build(H13, n)).a_d == a, n


@pytest.mark.parametrize(
    "code",
    [build(H13, 19), build(H13, 26), shorten(build(H13, 26), 2), shorten(build(H13, 26), 2, "tail"),
     build(BinaryPolynomial.from_exponents([0, 2, 3]), 7)],
    ids=str,
)
def test_exact_matches_brute_force(code):
    want = brute_force_counts(code)
    got = exact_spectrum(code, w_cap=code.n)
    assert got.counts == {w: int(c) for w, c in enumerate(want) if c}
    assert sum(got.counts.values()) == 2 ** code.k


def test_exact_matches_brute_force_all_small_polynomials():
    for h in golomb_primitive(11):
        code = build(h, 2 * h.degree)
        want = brute_force_counts(code)
        got = exact_spectrum(code, w_cap=code.n)
        assert got.counts == {w: int(c) for w, c in enumerate(want) if c}, h


def test_exact_cap():
    with pytest.raises(TooLarge):
        exact_spectrum(build(H75, 150))


def test_distance_monotone_in_n():
    ds = [exact_spectrum(build(H13, n)).d for n in range(14, 80)]
    assert ds == sorted(ds)


def test_profile_k15():
    prof = distance_profile(H15, 7)
    assert prof.n_of_d == {1: 16, 2: 21, 3: 23, 4: 28, 5: 30, 6: 31, 7: 34}
    assert prof.r_of_d[2] == 6


def test_profile_k13():
    prof = distance_profile(H13, 14)
    assert prof.n_of_d == {1: 14, 2: 19, 3: 21, 4: 24, 5: 29, 6: 31, 7: 34, 8: 36, 9: 38, 10: 42, 11: 44, 12: 47, 13: 49, 14: 50}


def test_profile_single_row():
    assert distance_profile(H13, 1).n_of_d == {1: 14}


def test_n_of_one_is_k_plus_one():
    for h in golomb_primitive(13):
        assert distance_profile(h, 2).n_of_d[1] == h.degree + 1
        assert distance_profile(h, 2).n_of_d[2] == h.degree + profile(h).s_max


def test_estimate_k13_against_exact():
    mismatches = []
    for n in range(19, 51):
        est = estimate_spectrum(build(H13, n))
        ex = exact_spectrum(build(H13, n))
        assert est.d == ex.d
        if est.a_d != ex.a_d:
            mismatches.append(n)
    assert len(mismatches) <= 4


def test_estimate_without_probe_is_a_subset():
    for n in (21, 38, 39, 50):
        est = estimate_spectrum(build(H13, n), probe_iterations=0)
        ex = exact_spectrum(build(H13, n))
        assert est.d >= ex.d
        assert all(est.A(w) <= ex.A(w) for w in est.counts)


def test_estimate_k15_profile():
    prof = distance_profile(H15, 7, method="estimate", n_max=40)
    exact = distance_profile(H15, 7)
    for d in range(1, 7):
        assert prof.n_of_d[d] == exact.n_of_d[d]
    assert prof.n_of_d[7] in (33, 34)


def test_estimate_k75():
    est = estimate_spectrum(build(H75, 150))
    assert est.d == 11 and est.method == "estimate"
    assert 0 < est.coverage < 1e-15


def test_spectrum_auto_dispatch():
    assert spectrum(build(H13, 19)).method == "exact"
    with pytest.raises(ValueError):
        spectrum(build(H13, 19), method="guess")


def test_family_count_piecewise():
    f = FamilyRecord(0, 5, 3, 2, 2)
    assert [f.count(n) for n in range(5, 12)] == [1, 2, 3, 3, 2, 1, 0]
    assert f.lifetime == (5, 10)


def test_families_k13_n19():
    fams = [f for f in family_census(build(H13, 19), w_cap=2) if f.w == 2 and f.count(19)]
    # one pair 11 apart, two pairs 8 apart (brute-force window count)
    got = sorted((f.L, f.count(19)) for f in fams)
    assert got == [(9, 2), (12, 1)]
    assert {f.L - 1 for f in fams} == {11, 8}


@pytest.mark.parametrize("n", [19, 24, 30, 40, 50])
def test_families_sum_to_spectrum(n):
    code = build(H13, n)
    d = exact_spectrum(code).d
    ex = exact_spectrum(code, w_cap=d + 2)
    fams = family_census(code, w_cap=d + 2)
    for w in range(d, d + 3):
        assert sum(f.count(n) for f in fams if f.w == w) == ex.A(w)


def test_family_census_landmarks_k75():
    fams = family_census(build(H75, 150), w_cap=11)
    est = estimate_spectrum(build(H75, 150))
    assert {f.w for f in fams} == {11}
    assert sum(f.count(150) for f in fams) == est.A(11)


def test_families_reject_shortened():
    with pytest.raises(ValueError):
        family_census(shorten(build(H13, 26), 1))


def test_bounds_k13():
    b = lemma_bounds(build(H13, 18))
    assert b.d_is_one and b.d_upper == 1 and b.n_for_d2 == 19
    b19 = lemma_bounds(build(H13, 19))
    assert not b19.d_is_one


def test_bounds_good_practice_upper():
    b = lemma_bounds(build(H13, 24))
    assert b.d_upper == 5 and "(vi)" in b.d_upper_sources
    assert exact_spectrum(build(H13, 24)).d <= 5
    assert lemma_bounds(build(H13, 26)).d_upper is None


def test_bound_iii_count_logic():
    # separations [10,1,1,2]: first external exceeds the internal sum by 8
    h = BinaryPolynomial.from_exponents([0, 10, 11, 12, 14])
    b = lemma_bounds(build(h, 28, check_rcc=False))
    assert b.weight_wh_lower["(iii) first"] == 8
    assert b.d_upper == 5


def test_csv_writers():
    assert spectrum_csv([(19, 2, 3, "exact")]) == "n,d,A(d),method\n19,2,3,exact\n"
    assert families_csv([FamilyRecord(None, 5, 1, 2, 2)]) == "core_start,L,Z_l,Z_r,w\n,5,1,2,2\n"


def test_puncture_21_to_19():
    assert exact_spectrum(puncture(build(H13, 21), 2)).a_d == 3
