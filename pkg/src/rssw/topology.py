"""Intersection-form bookkeeping and the K-theoretic degree feasibility gate.

A spin intersection form here is ``a E8 + b H`` with ``a`` signed: ``a > 0``
gives positive signature ``8a``. The representation counts are
``k = 19 sigma / 16`` quaternionic and ``m = b2+`` real, and an equivariant map
between representation spheres of the shape produced by finite-dimensional
approximation needs ``tr(a_f(j)) = 2^(m - 2k)`` to be an even integer or ``k = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from . import repring
from .scalars import Rational, rational

__all__ = [
    "HypothesisViolation",
    "ManifoldData",
    "Invariants",
    "invariants_of",
    "RepCounts",
    "rep_counts",
    "VerdictKind",
    "Verdict",
    "kdegree_feasibility",
    "compactness_margin",
    "is_vacuous",
    "furuta_margin",
    "slope_window",
    "virtual_dim",
]


class HypothesisViolation(ValueError):
    """Input outside the indefinite spin setting the bounds are stated for."""


@dataclass(frozen=True)
class ManifoldData:
    e8_count: int
    h_count: int

    def __post_init__(self):
        if self.h_count < 0:
            raise ValueError("h_count must be non-negative")

    @property
    def b2(self) -> int:
        return 8 * abs(self.e8_count) + 2 * self.h_count

    @property
    def sigma(self) -> int:
        return 8 * self.e8_count

    @property
    def b2plus(self) -> int:
        return 8 * max(self.e8_count, 0) + self.h_count

    @property
    def b2minus(self) -> int:
        return 8 * max(-self.e8_count, 0) + self.h_count

    @property
    def indefinite(self) -> bool:
        return self.h_count >= 1 or self.e8_count == 0

    @property
    def spin_signature(self) -> bool:
        return self.sigma % 16 == 0

    def require_indefinite(self):
        if not self.indefinite:
            raise HypothesisViolation(
                f"intersection form {self.e8_count}E8 is definite; the bounds need an indefinite form"
            )

    def require_spin_signature(self):
        if not self.spin_signature:
            raise HypothesisViolation(f"sigma = {self.sigma} is not a spin signature (needs sigma = 0 mod 16)")


@dataclass(frozen=True)
class Invariants:
    b2: int
    sigma: int
    b2plus: int
    b2minus: int


def invariants_of(M: ManifoldData) -> Invariants:
    return Invariants(M.b2, M.sigma, M.b2plus, M.b2minus)


@dataclass(frozen=True)
class RepCounts:
    """``C = H^(r+k) + R^s`` and ``R = H^r + R^(s+m)``."""

    k: int
    m: int
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.m < 0 or self.r < 0 or self.s < 0:
            raise ValueError("m, r, s must be non-negative")
        if self.t < 0:
            raise ValueError(f"r + k = {self.t} is negative; pick r >= {-self.k}")

    @property
    def t(self) -> int:
        return self.r + self.k

    @property
    def q(self) -> int:
        return self.s + self.m


def rep_counts(M: ManifoldData, r: int = 0, s: int = 0) -> RepCounts:
    if not M.spin_signature:
        raise HypothesisViolation(f"sigma = {M.sigma}: not a spin signature")
    return RepCounts(19 * M.sigma // 16, M.b2plus, r, s)


class VerdictKind(str, Enum):
    NOT_EXCLUDED_K0 = "NotExcluded(k=0)"
    NOT_EXCLUDED_SLOPE = "NotExcluded(m>=2k+1)"
    EXCLUDED_TRACE_FRACTION = "Excluded(trace_fraction)"
    EXCLUDED_PARITY = "Excluded(parity)"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    required_trace: Rational

    @property
    def excluded(self) -> bool:
        return self.kind in (VerdictKind.EXCLUDED_TRACE_FRACTION, VerdictKind.EXCLUDED_PARITY)

    def __str__(self) -> str:
        return self.kind.value


@lru_cache(maxsize=4096)
def _checked_lambda(num_h: int, num_d: int) -> repring.RepRingElement:
    lam = repring.lambda_total(num_h, num_d)
    # (2-h)^a (1-d)^b = 2^(a+b-1) (1-d) once b >= 1
    if num_d >= 1:
        expected = (2 ** (num_h + num_d - 1)) * repring.LAMBDA_D
        if lam != expected:
            raise ArithmeticError(f"lambda class {lam} failed to collapse to {expected}")
    return lam


def kdegree_feasibility(c: RepCounts) -> Verdict:
    """Decide whether an equivariant map with these counts survives the degree test.

    ``lambda_W = a_f lambda_V`` evaluated at ``j`` fixes ``tr(a_f(j)) = alpha_0 - alpha_1``.
    When ``k >= 1`` the trace at ``i`` vanishes, so ``alpha_0 + alpha_1 = 0``
    and the trace at ``j`` has to be an even integer.
    """
    # elements are immutable, so the expansions are memoized
    lam_v = _checked_lambda(2 * c.r + 2 * c.k, c.s)
    lam_w = _checked_lambda(2 * c.r, c.s + c.m)
    trace = rational(repring.char_at_j(lam_w)) / repring.char_at_j(lam_v)
    if c.k == 0:
        return Verdict(VerdictKind.NOT_EXCLUDED_K0, trace)
    if trace.denominator != 1:
        return Verdict(VerdictKind.EXCLUDED_TRACE_FRACTION, trace)
    if trace.numerator % 2:
        return Verdict(VerdictKind.EXCLUDED_PARITY, trace)
    return Verdict(VerdictKind.NOT_EXCLUDED_SLOPE, trace)


def compactness_margin(M: ManifoldData) -> Rational:
    """``b2 - 15 sigma / 4 - 2``; negative with ``sigma > 0`` rules out a compact moduli space."""
    M.require_indefinite()
    return rational(M.b2) - rational(15 * M.sigma) / 4 - 2


def is_vacuous(M: ManifoldData) -> bool:
    """The margin bound says nothing when ``sigma <= 0``."""
    return M.sigma <= 0


def furuta_margin(M: ManifoldData) -> Rational:
    return rational(M.b2) - rational(5 * M.sigma) / 4 - 2


def slope_window(M: ManifoldData) -> tuple:
    """``(15 sigma/4 + 2 <= b2, b2 <= 17 sigma/2 - 2)``, both closed."""
    b2, s = rational(M.b2), rational(M.sigma)
    return (15 * s / 4 + 2 <= b2, b2 <= 17 * s / 2 - 2)


def virtual_dim(M: ManifoldData) -> Rational:
    return rational(19 * M.sigma) / 4 - 1 - M.b2plus
