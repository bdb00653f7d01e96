"""Closed-form evaluation of the four-spherical-Bessel radial integral.

Target quantity, for non-negative integer orders and positive momenta:

    I = integral_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_l3(k1 r) j_l4(k2 r) dr

The two legs sharing momentum k1 (and likewise k2) make the integral
expressible as a finite sum: a bridge order L splits the product into two
weighted triple-Bessel integrals, and the leftover radial integral over the
momentum band [|k1-k2|, k1+k2] reduces to associated Legendre functions of
half-integer order evaluated at (k1^2+k2^2)/|k1^2-k2^2|.

All coupling coefficients are combined exactly (SignedSqrtRational / Fraction)
and converted to floating point once per term; terms are then combined with
compensated summation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .core import (
    DEGENERATE_THRESHOLD,
    EvaluationReport,
    IntegralSpec,
    TermEntry,
    require_momentum,
    require_order,
)
from .errors import DegenerateMomenta, DomainError, PrefactorZero
from .legendre import legendre_linearization_coeffs, legendre_p, legendre_poly_part
from .wigner import (
    SignedSqrtRational,
    gamma_half,
    select_bridge_order,
    wigner_3j_zero,
    wigner_6j,
)

__all__ = [
    "legendre_band_integral",
    "legendre_ratio_integral",
    "triple_bessel_weighted",
    "quad_bessel_analytic",
    "quad_bessel_paired",
    "evaluate",
]


@lru_cache(maxsize=None)
def _half_order_coefficients(l: int, lp: int, L: int) -> tuple[tuple[int, Fraction], ...]:
    """Exact mu-indexed weights shared by the band and ratio integrals.

    Each weight combines the P_l*P_lp linearization coefficient with the Gamma
    ratio attached to the order -mu-1/2 Legendre factor; every sqrt(pi)
    cancels, leaving a plain positive rational.
    """
    degree = max(L - 1, 0)
    scale = gamma_half(L)
    return tuple(
        (mu, lin * gamma_half(L + mu) / (scale * gamma_half(degree + mu + 1)))
        for mu, lin in legendre_linearization_coeffs(l, lp)
    )


def legendre_band_integral(l: int, lp: int, L: int, k1: float, k2: float) -> float:
    """Radial band integral J(l, lp, L; k1, k2) of the bridge decomposition.

    Equals (2/pi) * integral over K in [|k1-k2|, k1+k2] of
    K^2 * T(l1,l2,L->l...)-weighted triple-Bessel products; after the change
    of variable to Delta it collapses to a finite mu-sum of associated
    Legendre functions of order -mu-1/2 at x = (k1^2+k2^2)/|k1^2-k2^2|.

    The L = 0 branch never forms x and is therefore valid at k1 = k2; for
    L >= 1 nearly equal momenta make individual factors diverge and the
    function raises DegenerateMomenta.
    """
    l = require_order(l, "l")
    lp = require_order(lp, "lp")
    L = require_order(L, "L")
    k1 = require_momentum(k1, "k1")
    k2 = require_momentum(k2, "k2")
    k_lo, k_hi = min(k1, k2), max(k1, k2)
    if L >= 1 and (k_hi - k_lo) / k_hi < DEGENERATE_THRESHOLD:
        raise DegenerateMomenta(
            f"momenta k1={k1!r}, k2={k2!r} are too close for the L={L} band "
            "integral; use the numerical oracle instead"
        )
    degree = max(L - 1, 0)
    if L == 0:
        prefactor = math.sqrt(k1 * k2)
        x = None
    else:
        band = abs(k1 * k1 - k2 * k2)
        prefactor = math.sqrt(k1 * k2) / band**L
        x = (k1 * k1 + k2 * k2) / band
    ratio = k_lo / k_hi
    parts = []
    for mu, coeff in _half_order_coefficients(l, lp, L):
        poly = 1.0 if L == 0 else legendre_poly_part(degree, Fraction(-2 * mu - 1, 2), x)
        parts.append(float(coeff) * poly * ratio ** (mu + 0.5))
    return prefactor * math.fsum(parts)


def legendre_ratio_integral(l: int, lp: int, L: int, y: float) -> float:
    """Closed form of integral_{-1}^{1} P_l(u) P_lp(u) / (y - u)^(L+1/2) du for y > 1."""
    l = require_order(l, "l")
    lp = require_order(lp, "lp")
    L = require_order(L, "L")
    y = float(y)
    if not y > 1.0:
        raise DomainError(f"y must be > 1, got {y!r}")
    spread = math.sqrt(y * y - 1.0)
    # 1/(y + spread) equals y - spread without cancellation
    decay = 1.0 / (y + spread)
    degree = max(L - 1, 0)
    x = y / spread
    parts = []
    for mu, coeff in _half_order_coefficients(l, lp, L):
        poly = 1.0 if L == 0 else legendre_poly_part(degree, Fraction(-2 * mu - 1, 2), x)
        parts.append(float(coeff) * poly * decay ** (mu + 0.5))
    return math.sqrt(2.0) * spread ** (-L) * math.fsum(parts)


def triple_bessel_weighted(
    l1: int, l2: int, L: int, k1: float, k2: float, K: float
) -> float:
    """Closed form of integral_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_L(K r) dr.

    The closed form divides by the coupling 3j symbol (l1, l2, L; 0,0,0);
    PrefactorZero is raised when that symbol vanishes. Outside the momentum
    triangle (|Delta| > 1) the integral is exactly zero and a bit-exact 0.0
    is returned.
    """
    l1 = require_order(l1, "l1")
    l2 = require_order(l2, "l2")
    L = require_order(L, "L")
    k1 = require_momentum(k1, "k1")
    k2 = require_momentum(k2, "k2")
    K = require_momentum(K, "K")
    coupling = wigner_3j_zero(l1, l2, L)
    if coupling.is_zero:
        raise PrefactorZero(
            f"coupling 3j symbol ({l1},{l2},{L}) vanishes; pick L inside the "
            "triangle window with l1+l2+L even"
        )
    delta = (k1 * k1 + k2 * k2 - K * K) / (2.0 * k1 * k2)
    if abs(delta) > 1.0:
        return 0.0
    # l1+l2-L is even whenever the coupling symbol is nonzero
    sign = -1.0 if ((l1 + l2 - L) // 2) % 2 else 1.0
    prefactor = (
        math.pi / (4.0 * k1 * k2 * K) * sign * math.sqrt(2 * L + 1) * (k1 / K) ** L
    )
    parts = []
    for split in range(L + 1):
        binom = SignedSqrtRational(1, Fraction(math.comb(2 * L, 2 * split)))
        momentum_pow = (k2 / k1) ** split
        lo = max(abs(l1 - (L - split)), abs(l2 - split))
        hi = min(l1 + L - split, l2 + split)
        for l in range(lo, hi + 1, 2):
            exact = (
                binom
                * wigner_3j_zero(l1, L - split, l)
                * wigner_3j_zero(l2, split, l)
                * wigner_6j(l1, l2, L, split, L - split, l)
            ).scaled_by(2 * l + 1) / coupling
            parts.append(exact.to_float() * momentum_pow * legendre_p(l, delta))
    return prefactor * math.fsum(parts)


def quad_bessel_analytic(spec: IntegralSpec) -> EvaluationReport:
    """General bridge-order evaluation of the four-Bessel integral.

    Selects the smallest parity-valid bridge order L, expands the integral
    into the double split sum over (LL, LLp) with inner coupling sums over
    (l, lp), and weights each term by the band integral J(l, lp, L). The
    report carries every term; its value is their compensated sum.
    """
    L = select_bridge_order(spec.lambda1, spec.lambda2, spec.lambda3, spec.lambda4)
    if L >= 1 and spec.is_degenerate():
        raise DegenerateMomenta(
            f"momenta k1={spec.k1!r}, k2={spec.k2!r} are too close for the "
            f"L={L} analytic path; use the numerical oracle instead"
        )
    l1, l2, l3, l4 = spec.orders
    k1, k2 = spec.k1, spec.k2
    w12 = wigner_3j_zero(l1, l2, L)
    w34 = wigner_3j_zero(l3, l4, L)
    # (sum of orders) - 2L is even; the i-power reduces to this real sign
    half_phase = (l1 + l2 + l3 + l4 - 2 * L) // 2
    weight = (2 * L + 1) * (-1 if half_phase % 2 else 1)
    exact_global = SignedSqrtRational.from_rational(weight) / (w12 * w34)
    float_global = math.pi * k1 ** (2 * (L - 1)) / (8.0 * k2 * k2)
    momentum_ratio = k2 / k1
    band_cache: dict[tuple[int, int], float] = {}
    entries: list[TermEntry] = []
    for split in range(L + 1):
        window = range(
            max(abs(l1 - (L - split)), abs(l2 - split)),
            min(l1 + L - split, l2 + split) + 1,
            2,
        )
        for split_p in range(L + 1):
            binom = SignedSqrtRational(
                1, Fraction(math.comb(2 * L, 2 * split) * math.comb(2 * L, 2 * split_p))
            )
            window_p = range(
                max(abs(l3 - (L - split_p)), abs(l4 - split_p)),
                min(l3 + L - split_p, l4 + split_p) + 1,
                2,
            )
            for l in window:
                left = (
                    wigner_3j_zero(l1, L - split, l)
                    * wigner_3j_zero(l2, split, l)
                    * wigner_6j(l1, l2, L, split, L - split, l)
                ).scaled_by(2 * l + 1)
                for lp in window_p:
                    right = (
                        wigner_3j_zero(l3, L - split_p, lp)
                        * wigner_3j_zero(l4, split_p, lp)
                        * wigner_6j(l3, l4, L, split_p, L - split_p, lp)
                    ).scaled_by(2 * lp + 1)
                    key = (l, lp) if l <= lp else (lp, l)
                    if key not in band_cache:
                        band_cache[key] = legendre_band_integral(key[0], key[1], L, k1, k2)
                    exact = exact_global * binom * left * right
                    value = (
                        exact.to_float()
                        * float_global
                        * momentum_ratio ** (split + split_p)
                        * band_cache[key]
                    )
                    entries.append(
                        TermEntry(
                            {"LL": split, "LLp": split_p, "l": l, "lp": lp}, value
                        )
                    )
    total = math.fsum(entry.value for entry in entries)
    return EvaluationReport(value=total, bridge_L=L, terms=tuple(entries), method="analytic")


def quad_bessel_paired(l1: int, l2: int, k1: float, k2: float) -> EvaluationReport:
    """Compact closed form for order-paired integrals.

    Covers lambda = (l1, l1, l2, l2), i.e. integrand
    r^2 j_l1(k1 r) j_l1(k2 r) j_l2(k1 r) j_l2(k2 r); the bridge order
    collapses to L = 0 and the value is a single mu-sum in powers of
    min(k1,k2)/max(k1,k2). Valid at k1 = k2.
    """
    l1 = require_order(l1, "l1")
    l2 = require_order(l2, "l2")
    k1 = require_momentum(k1, "k1")
    k2 = require_momentum(k2, "k2")
    k_lo, k_hi = min(k1, k2), max(k1, k2)
    quarter_pi = 0.25 * math.pi
    entries = []
    for mu in range(abs(l1 - l2), l1 + l2 + 1, 2):
        squared = wigner_3j_zero(l1, l2, mu).radicand
        value = quarter_pi * float(squared) * k_lo ** (mu - 1) / k_hi ** (mu + 2)
        entries.append(TermEntry({"mu": mu}, value))
    total = math.fsum(entry.value for entry in entries)
    return EvaluationReport(value=total, bridge_L=0, terms=tuple(entries), method="paired")


def evaluate(spec: IntegralSpec) -> EvaluationReport:
    """Analytic dispatch: the paired closed form when the orders allow it
    (lambda2 == lambda1 and lambda4 == lambda3), else the general bridge path.
    """
    if spec.is_order_paired():
        return quad_bessel_paired(spec.lambda1, spec.lambda3, spec.k1, spec.k2)
    return quad_bessel_analytic(spec)
