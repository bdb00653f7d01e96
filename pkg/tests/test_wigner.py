"""Exact coupling-coefficient layer: signed square-root rationals, 3j/6j."""
from __future__ import annotations

import concurrent.futures
import math
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourbessel.errors import NoValidBridge
from fourbessel.wigner import (
    SignedSqrtRational,
    TriangleSelection,
    gamma_half,
    select_bridge_order,
    triangle_window,
    wigner_3j_zero,
    wigner_6j,
)


# --------------------------------------------------------------------------
# independent reference: general single-sum 3j formula at zero projections
# --------------------------------------------------------------------------


def _reference_3j_zero(j1: int, j2: int, j3: int) -> tuple[int, Fraction]:
    """(sign, radicand) from the alternating single-sum formula.

    Deliberately a different algorithm from the library's closed product
    form: for odd total angular momentum the alternating sum cancels to
    zero term by term instead of being short-circuited.
    """
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0, Fraction(0)
    delta = Fraction(
        factorial(j1 + j2 - j3) * factorial(j1 - j2 + j3) * factorial(-j1 + j2 + j3),
        factorial(j1 + j2 + j3 + 1),
    )
    total = Fraction(0)
    for t in range(max(0, j2 - j3, j1 - j3), min(j1 + j2 - j3, j1, j2) + 1):
        denominator = (
            factorial(t)
            * factorial(j3 - j2 + t)
            * factorial(j3 - j1 + t)
            * factorial(j1 + j2 - j3 - t)
            * factorial(j1 - t)
            * factorial(j2 - t)
        )
        total += Fraction(-1 if t % 2 else 1, denominator)
    total *= (-1 if (j1 - j2) % 2 else 1) * factorial(j1) * factorial(j2) * factorial(j3)
    if total == 0:
        return 0, Fraction(0)
    sign = 1 if total > 0 else -1
    return sign, total * total * delta


@pytest.mark.parametrize(
    "j1, j2, j3, expected_sign, expected_radicand",
    [
        (0, 0, 0, 1, Fraction(1)),
        (1, 1, 0, -1, Fraction(1, 3)),
        (1, 1, 2, 1, Fraction(2, 15)),
        (2, 2, 2, -1, Fraction(2, 35)),
        (2, 2, 4, 1, Fraction(2, 35)),
        (3, 2, 1, -1, Fraction(3, 35)),
    ],
)
def test_3j_known_values(j1, j2, j3, expected_sign, expected_radicand):
    symbol = wigner_3j_zero(j1, j2, j3)
    assert symbol.sign == expected_sign
    assert symbol.radicand == expected_radicand


@pytest.mark.parametrize("j1, j2, j3", [(1, 1, 1), (2, 1, 2), (0, 1, 0), (3, 3, 1)])
def test_3j_odd_total_is_zero(j1, j2, j3):
    assert wigner_3j_zero(j1, j2, j3).is_zero


@pytest.mark.parametrize("j1, j2, j3", [(0, 0, 1), (1, 1, 3), (5, 1, 2)])
def test_3j_triangle_violation_is_zero(j1, j2, j3):
    assert wigner_3j_zero(j1, j2, j3).is_zero


def test_3j_matches_reference_formula_exactly():
    for j1 in range(9):
        for j2 in range(9):
            for j3 in range(abs(j1 - j2), j1 + j2 + 1):
                sign, radicand = _reference_3j_zero(j1, j2, j3)
                symbol = wigner_3j_zero(j1, j2, j3)
                assert symbol.sign == sign, (j1, j2, j3)
                assert symbol.radicand == radicand, (j1, j2, j3)


def test_3j_orthogonality_exact_rational():
    # sum over the coupled momentum of (2j3+1) (3j)^2 telescopes to exactly 1
    for j1 in range(7):
        for j2 in range(7):
            total = Fraction(0)
            for j3 in range(abs(j1 - j2), j1 + j2 + 1):
                total += (2 * j3 + 1) * wigner_3j_zero(j1, j2, j3).radicand
            assert total == 1, (j1, j2)


@given(
    j1=st.integers(min_value=0, max_value=12),
    j2=st.integers(min_value=0, max_value=12),
    j3=st.integers(min_value=0, max_value=24),
)
def test_3j_fully_symmetric_under_column_permutations(j1, j2, j3):
    # even total momentum makes odd permutations sign-free as well
    reference = wigner_3j_zero(j1, j2, j3)
    for perm in ((j1, j3, j2), (j2, j1, j3), (j2, j3, j1), (j3, j1, j2), (j3, j2, j1)):
        assert wigner_3j_zero(*perm) == reference


# --------------------------------------------------------------------------
# 6j
# --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "args, expected_sign, expected_radicand",
    [
        ((0, 0, 0, 0, 0, 0), 1, Fraction(1)),
        ((1, 1, 0, 1, 1, 0), 1, Fraction(1, 9)),
        ((1, 1, 0, 1, 1, 2), 1, Fraction(1, 9)),
        ((1, 1, 2, 1, 1, 2), 1, Fraction(1, 900)),
        ((2, 1, 1, 1, 1, 2), -1, Fraction(1, 20)),
        ((2, 2, 2, 2, 2, 2), -1, Fraction(9, 4900)),
    ],
)
def test_6j_known_values(args, expected_sign, expected_radicand):
    symbol = wigner_6j(*args)
    assert symbol.sign == expected_sign
    assert symbol.radicand == expected_radicand


def test_6j_triad_violation_is_zero():
    assert wigner_6j(0, 0, 1, 0, 0, 0).is_zero
    assert wigner_6j(1, 2, 0, 1, 2, 4).is_zero


def _valid_6j_tuples(j_max):
    for j1 in range(j_max + 1):
        for j2 in range(j_max + 1):
            for j3 in range(abs(j1 - j2), min(j1 + j2, j_max) + 1):
                for j4 in range(j_max + 1):
                    for j5 in range(abs(j4 - j3), min(j4 + j3, j_max) + 1):
                        for j6 in range(abs(j1 - j5), min(j1 + j5, j_max) + 1):
                            yield (j1, j2, j3, j4, j5, j6)


def test_6j_tetrahedral_symmetries_exact():
    checked = 0
    for j1, j2, j3, j4, j5, j6 in _valid_6j_tuples(4):
        reference = wigner_6j(j1, j2, j3, j4, j5, j6)
        # any permutation of the three columns
        assert wigner_6j(j2, j1, j3, j5, j4, j6) == reference
        assert wigner_6j(j3, j2, j1, j6, j5, j4) == reference
        assert wigner_6j(j1, j3, j2, j4, j6, j5) == reference
        # exchange of upper and lower entries in any two columns
        assert wigner_6j(j4, j5, j3, j1, j2, j6) == reference
        assert wigner_6j(j4, j2, j6, j1, j5, j3) == reference
        assert wigner_6j(j1, j5, j6, j4, j2, j3) == reference
        checked += 1
    assert checked > 1000


def test_6j_orthogonality_rational():
    # sum over x of (2x+1)(2j6+1) {j1 j2 x; j3 j4 j6}^2 = 1 when triads allow
    j1, j2, j3, j4 = 2, 3, 3, 2
    for j6 in range(abs(j2 - j3), j2 + j3 + 1):
        if j6 < abs(j1 - j4) or j6 > j1 + j4:
            continue
        total = Fraction(0)
        for x in range(max(abs(j1 - j2), abs(j3 - j4)), min(j1 + j2, j3 + j4) + 1):
            total += (2 * x + 1) * (2 * j6 + 1) * wigner_6j(j1, j2, x, j3, j4, j6).radicand
        assert total == 1, j6


# --------------------------------------------------------------------------
# signed square-root rationals
# --------------------------------------------------------------------------


def test_ssr_construction_invariants():
    with pytest.raises(ValueError):
        SignedSqrtRational(2, Fraction(1))
    with pytest.raises(ValueError):
        SignedSqrtRational(1, Fraction(-1, 3))
    with pytest.raises(ValueError):
        SignedSqrtRational(0, Fraction(1, 3))
    with pytest.raises(ValueError):
        SignedSqrtRational(1, Fraction(0))


def test_ssr_algebra():
    a = SignedSqrtRational(1, Fraction(2, 15))
    b = SignedSqrtRational(-1, Fraction(1, 3))
    assert (a * b).sign == -1
    assert (a * b).radicand == Fraction(2, 45)
    assert (a / b).sign == -1
    assert (a / b).radicand == Fraction(2, 5)
    assert a.scaled_by(Fraction(-3, 2)) == SignedSqrtRational(-1, Fraction(2, 15) * Fraction(9, 4))
    assert SignedSqrtRational.from_rational(Fraction(-3, 4)) == SignedSqrtRational(-1, Fraction(9, 16))
    assert SignedSqrtRational.zero() * a == SignedSqrtRational.zero()
    with pytest.raises(ZeroDivisionError):
        a / SignedSqrtRational.zero()


def test_ssr_str_and_float():
    assert str(SignedSqrtRational(1, Fraction(2, 15))) == "+sqrt(2/15)"
    assert str(SignedSqrtRational(-1, Fraction(1, 3))) == "-sqrt(1/3)"
    assert str(SignedSqrtRational.zero()) == "0"
    assert str(SignedSqrtRational(1, Fraction(4))) == "+sqrt(4)"
    value = SignedSqrtRational(-1, Fraction(2, 15)).to_float()
    assert value == pytest.approx(-math.sqrt(2 / 15), rel=1e-15)


def test_ssr_to_float_survives_huge_radicands():
    huge = SignedSqrtRational(1, Fraction(10) ** 600)
    assert huge.to_float() == pytest.approx(1e300, rel=1e-12)
    tiny = SignedSqrtRational(-1, Fraction(1, 10 ** 600))
    assert tiny.to_float() == pytest.approx(-1e-300, rel=1e-12)
    beyond = SignedSqrtRational(-1, Fraction(10) ** 700)
    assert beyond.to_float() == -math.inf


@given(
    p=st.integers(min_value=1, max_value=10 ** 6),
    q=st.integers(min_value=1, max_value=10 ** 6),
    sign=st.sampled_from((-1, 1)),
)
def test_ssr_to_float_matches_math_sqrt(p, q, sign):
    value = SignedSqrtRational(sign, Fraction(p, q)).to_float()
    assert value == pytest.approx(sign * math.sqrt(p / q), rel=1e-12)


# --------------------------------------------------------------------------
# gamma at half-integer offsets
# --------------------------------------------------------------------------


def test_gamma_half_base_and_recurrence():
    assert gamma_half(0) == 1
    for n in range(40):
        assert gamma_half(n + 1) == gamma_half(n) * Fraction(2 * n + 1, 2)


def test_gamma_half_matches_float_gamma():
    for n in range(1, 20):
        expected = math.gamma(n + 0.5) / math.sqrt(math.pi)
        assert float(gamma_half(n)) == pytest.approx(expected, rel=1e-13)


# --------------------------------------------------------------------------
# triangle windows and bridge-order selection
# --------------------------------------------------------------------------


def test_triangle_window_contents():
    window = triangle_window(2, 3)
    assert (window.lo, window.hi) == (1, 5)
    assert window.contains(1) and window.contains(3) and window.contains(5)
    assert not window.contains(2) and not window.contains(0) and not window.contains(7)


def test_triangle_selection_validation():
    with pytest.raises(ValueError):
        TriangleSelection(3, 1, "even")
    with pytest.raises(ValueError):
        TriangleSelection(0, 2, "both")


@pytest.mark.parametrize(
    "orders, expected",
    [
        ((0, 0, 0, 0), 0),
        ((1, 1, 1, 1), 0),
        ((2, 0, 0, 2), 2),
        ((1, 0, 1, 2), 1),
        ((2, 1, 1, 2), 1),
        ((1, 0, 1, 0), 1),
        ((3, 1, 2, 2), 2),
        ((0, 3, 1, 2), 3),
    ],
)
def test_select_bridge_order(orders, expected):
    assert select_bridge_order(*orders) == expected


def test_select_bridge_order_parity_mismatch():
    with pytest.raises(NoValidBridge, match="no parity-valid bridge order"):
        select_bridge_order(0, 0, 0, 1)


def test_select_bridge_order_disjoint_windows():
    with pytest.raises(NoValidBridge, match="no parity-valid bridge order"):
        select_bridge_order(5, 0, 0, 1)


@given(
    l1=st.integers(min_value=0, max_value=10),
    l2=st.integers(min_value=0, max_value=10),
    l3=st.integers(min_value=0, max_value=10),
    l4=st.integers(min_value=0, max_value=10),
)
def test_select_bridge_order_minimality(l1, l2, l3, l4):
    first = triangle_window(l1, l2)
    second = triangle_window(l3, l4)
    try:
        bridge = select_bridge_order(l1, l2, l3, l4)
    except NoValidBridge:
        assert first.parity != second.parity or min(first.hi, second.hi) < max(first.lo, second.lo)
        return
    assert first.contains(bridge) and second.contains(bridge)
    for smaller in range(bridge):
        assert not (first.contains(smaller) and second.contains(smaller))


# --------------------------------------------------------------------------
# cache safety under concurrency
# --------------------------------------------------------------------------


def test_symbol_caches_are_thread_safe():
    jobs = [(j1, j2, j3, j4, j5, j6)
            for j1, j2, j3, j4, j5, j6 in _valid_6j_tuples(3)]
    serial = [wigner_6j.__wrapped__(*args) for args in jobs[:50]]
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda args: wigner_6j(*args), jobs * 3))
    assert results[: len(jobs)] == results[len(jobs): 2 * len(jobs)]
    assert serial == results[:50]
