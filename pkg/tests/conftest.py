import itertools
from functools import lru_cache

import pytest

from prcldpc.gf2poly import BinaryPolynomial, is_primitive
from prcldpc.ruler import design_quality, is_golomb, profile

H13 = BinaryPolynomial.from_exponents([0, 1, 5, 11, 13])
H15 = BinaryPolynomial.from_exponents([0, 2, 8, 12, 15])
H75 = BinaryPolynomial.from_exponents([0, 2, 21, 29, 60, 72, 75])


@lru_cache(maxsize=None)
def golomb_primitive(k_max: int, w_h: int = 5, quality: bool = False) -> tuple[BinaryPolynomial, ...]:
    """All primitive polynomials of weight w_h, degree <= k_max, with Golomb support."""
    out = []
    for k in range(w_h - 1, k_max + 1):
        for mid in itertools.combinations(range(1, k), w_h - 2):
            e = (0, *mid, k)
            if not is_golomb(e):
                continue
            h = BinaryPolynomial.from_exponents(e)
            if quality and not design_quality(profile(h)).good_practice:
                continue
            if is_primitive(h):
                out.append(h)
    return tuple(out)


@pytest.fixture(scope="session")
def h13():
    return H13


@pytest.fixture(scope="session")
def h15():
    return H15


@pytest.fixture(scope="session")
def h75():
    return H75


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
