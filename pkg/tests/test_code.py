import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import H13, H75, golomb_primitive
from prcldpc.code import (
    avg_column_weight,
    build,
    format_descriptor,
    generator_basis,
    gf2_rank,
    has_four_cycle,
    parse_descriptor,
    puncture,
    read_descriptor,
    shorten,
    syndrome,
)
from prcldpc.errors import LengthOutOfRange, ParseError, RateOverflow, RccViolation, ShortenTooDeep
from prcldpc.gf2poly import BinaryPolynomial
from prcldpc.ruler import profile
from prcldpc.spectrum import exact_spectrum

P = BinaryPolynomial.from_exponents
H7 = P([0, 2, 3])


def codebook(code):
    """Every codeword by brute force over the null space of H."""
    H = code.matrix()
    words = set()
    for bits in itertools.product((0, 1), repeat=code.n):
        v = np.array(bits, dtype=np.uint8)
        if not (H.astype(int) @ v % 2).any():
            words.add(bits)
    return words


def test_build_examples():
    c = build(H7, 7)
    assert (c.n, c.k, c.r) == (7, 3, 4)
    c5 = build(H7, 5)
    assert (c5.n, c5.k, c5.r) == (5, 3, 2)
    single = build(H13, 14)
    assert single.matrix().tolist() == [[int(i in H13.exponents()) for i in range(14)]]


def test_build_errors():
    with pytest.raises(RccViolation):
        build(P([0, 1, 3, 4, 5]), 10)
    with pytest.raises(LengthOutOfRange):
        build(H7, 8)
    with pytest.raises(LengthOutOfRange):
        build(H7, 3)


def test_matrix_is_banded():
    c = build(H13, 26)
    H = c.matrix()
    assert H.shape == (13, 26)
    assert (H.sum(axis=1) == 5).all()
    assert set(H.sum(axis=0).tolist()) <= set(range(6))
    for i in range(13):
        assert np.flatnonzero(H[i]).tolist() == [i + t for t in H13.exponents()]


def test_rank_is_full():
    for n in (14, 19, 26, 40):
        c = build(H13, n)
        assert gf2_rank(c.matrix()) == c.r


def test_puncture_examples():
    c = puncture(build(H7, 7), 2)
    assert (c.n, c.k) == (5, 3)
    assert puncture(c, 0) == c
    c19 = puncture(build(H13, 21), 2)
    assert exact_spectrum(c19).d == 2
    with pytest.raises(RateOverflow):
        puncture(build(H7, 5), 2)


def test_puncture_equals_truncation():
    parent = build(H7, 7)
    child = puncture(parent, 2)
    assert codebook(child) == {w[:5] for w in codebook(parent)}


def test_shorten_head_by_one():
    parent = build(H7, 7)
    short = shorten(parent, 1)
    assert (short.n, short.k) == (6, 2)
    assert codebook(short) == {w[1:] for w in codebook(parent) if w[0] == 0}


def test_shorten_tail_and_split():
    parent = build(H7, 7)
    tail = shorten(parent, 1, "tail")
    assert codebook(tail) == {w[:-1] for w in codebook(parent) if w[-1] == 0}
    parent = build(P([0, 1, 3]), 7)
    split = shorten(parent, 2, "split:1,1")
    assert codebook(split) == {w[1:-1] for w in codebook(parent) if w[0] == w[-1] == 0}


def test_k75_shortened_dimensions():
    c = shorten(puncture(build(H75, 150), 11), 11)
    assert (c.n, c.k) == (128, 64)
    assert c.rate == Fraction(1, 2)


def test_shorten_errors():
    with pytest.raises(ShortenTooDeep):
        shorten(build(H7, 7), 3)
    with pytest.raises(ValueError):
        shorten(build(H13, 26), 3, "split:1,1")
    with pytest.raises(ValueError):
        shorten(build(H13, 26), 3, "middle")


@pytest.mark.parametrize("n,w_h,expected", [(26, 5, Fraction(5, 2)), (150, 7, Fraction(7, 2))])
def test_avg_column_weight(n, w_h, expected):
    h = H13 if w_h == 5 else H75
    assert avg_column_weight(build(h, n)) == expected


def test_avg_column_weight_rate_third():
    c = build(P([0, 1, 4]), 12)
    assert avg_column_weight(c) == 2


def test_syndrome_examples():
    c = build(H7, 7)
    assert not syndrome(c, np.zeros(7, dtype=np.uint8)).any()
    assert not syndrome(c, [1, 1, 1, 0, 1, 0, 0]).any()
    assert syndrome(c, [1, 0, 0, 0, 0, 0, 0]).any()


def test_four_cycle_weight_three_exhaustive():
    for k in range(3, 11):
        for mid in range(1, k):
            e = (0, mid, k)
            H = build(P(e), min(2 * k + 1, (1 << k) - 1), check_rcc=False).matrix()
            golomb = len({mid, k - mid, k}) == 3
            assert has_four_cycle(H) == (not golomb), e


def test_distance_one_iff_r_below_s_max():
    for h in golomb_primitive(11):
        s_max = profile(h).s_max
        k = h.degree
        for n in range(k + 1, k + s_max + 3):
            c = build(h, n)
            assert (exact_spectrum(c, w_cap=2).d == 1) == (c.r < s_max), (h, n)


def test_generator_basis_spans_code():
    for code in (build(H13, 26), shorten(build(H13, 26), 3), shorten(build(H13, 26), 3, "tail"),
                 shorten(build(H13, 26), 3, "split:1,2")):
        basis = generator_basis(code)
        assert len(basis.rows) == code.k
        assert len(set(basis.pivots)) == code.k
        H = code.matrix().astype(int)
        for row in basis.rows:
            v = np.array([(row >> j) & 1 for j in range(code.n)])
            assert not (H @ v % 2).any()


def test_descriptor_roundtrip(tmp_path):
    text = "h=0,2,21,29,60,72,75\nn=150; puncture=11\nz=11\n"
    c = parse_descriptor(text)
    assert (c.n, c.k) == (128, 64)
    again = parse_descriptor(format_descriptor(c))
    assert again == c
    path = tmp_path / "c.txt"
    path.write_text("h=0x2823\n")
    c13 = read_descriptor(path)
    assert (c13.n, c13.k) == (26, 13)


def test_descriptor_split_roundtrip():
    c = parse_descriptor("h=0,1,5,11,13\nz=3\nshorten=split:1,2\n")
    assert (c.head, c.tail) == (1, 2)
    assert parse_descriptor(format_descriptor(c)) == c


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("h=0,1,1\n", 1, 7),
        ("n=19\nh = 0,1,x\n", 2, 9),
        ("h=0,1,5,11,13\nfoo=3\n", 2, 1),
        ("h=0,1,5,11,13\nn=abc\n", 2, None),
        ("n=19\n", None, None),
    ],
)
def test_descriptor_errors(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_descriptor(text)
    assert err.value.line == line
    assert err.value.column == column
