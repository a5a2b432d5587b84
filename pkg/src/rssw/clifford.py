"""Fiberwise Clifford algebra on the model fiber ``V = W+ = W- = H``.

Tangent vectors, 1/2-spinors and elements of ``V (x) W`` are exact
quaternion data. Clifford multiplication sends ``W+ -> W-`` by ``v*psi`` and
``W- -> W+`` by ``-conj(v)*phi``, which gives the relation
``rho(e_a) rho(e_b) + rho(e_b) rho(e_a) = -2 delta_ab``.

A 3/2-spinor is a tensor ``sum_a e_a (x) psi_a`` with vanishing Clifford
contraction ``sum_a rho(e_a) psi_a``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

import gmpy2

from .conventions import FRAME, SELF_DUAL_BASIS
from .scalars import (
    GaussComplex,
    I,
    Matrix2,
    Quaternion,
    ZERO,
    random_quaternion,
    random_rational,
    rational,
)

__all__ = [
    "Chirality",
    "TangentVector",
    "Spinor",
    "CliffordTensor",
    "ThreeHalfSpinor",
    "SelfDualForm",
    "clifford_mult",
    "rho_contract",
    "iota",
    "project_32",
    "inner_product",
    "mu",
    "polarized_mu",
    "clifford_two_form",
    "hodge_star",
    "rho2_two_form",
    "rho2_selfdual",
    "rho2_inverse",
    "quad_term",
    "fiber_quadratic",
    "linearized_quadratic",
    "tensor_from_complex_coords",
    "tensor_complex_coords",
]

_QUARTER = gmpy2.mpq(1, 4)
_I_SCALAR = GaussComplex(0, 1)


class Chirality(str, Enum):
    PLUS = "plus"
    MINUS = "minus"

    def flip(self) -> "Chirality":
        return Chirality.MINUS if self is Chirality.PLUS else Chirality.PLUS


@dataclass(frozen=True)
class TangentVector:
    """A vector of V; ``imaginary_scaled`` marks ``i*a`` for a real 1-form ``a``."""

    q: Quaternion
    imaginary_scaled: bool = False

    @classmethod
    def basis(cls, alpha: int, imaginary_scaled: bool = False) -> "TangentVector":
        return cls(FRAME[alpha], imaginary_scaled)

    def coords(self) -> tuple:
        """Coordinates in the oriented frame ``FRAME``."""
        return tuple(e.dot(self.q) for e in FRAME)


@dataclass(frozen=True)
class Spinor:
    q: Quaternion
    chirality: Chirality = Chirality.PLUS

    def times_complex(self, c) -> "Spinor":
        """Complex scalar action (right multiplication)."""
        return Spinor(self.q * Quaternion.from_complex(c), self.chirality)

    def __add__(self, other):
        _same_chirality(self, other)
        return Spinor(self.q + other.q, self.chirality)

    def __sub__(self, other):
        _same_chirality(self, other)
        return Spinor(self.q - other.q, self.chirality)

    def scale(self, r) -> "Spinor":
        return Spinor(self.q.scale(r), self.chirality)


def _same_chirality(x, y):
    if x.chirality != y.chirality:
        raise ValueError(f"chirality mismatch: {x.chirality.value} vs {y.chirality.value}")


@dataclass(frozen=True)
class CliffordTensor:
    """``sum_a e_a (x) components[a]`` in ``V (x) W^chirality``."""

    components: tuple
    chirality: Chirality = Chirality.PLUS

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a Clifford tensor has exactly 4 components")

    @classmethod
    def zero(cls, chirality: Chirality = Chirality.PLUS) -> "CliffordTensor":
        return cls((ZERO,) * 4, chirality)

    @classmethod
    def simple(cls, alpha: int, s: Spinor) -> "CliffordTensor":
        """The pure tensor ``e_alpha (x) s``."""
        comps = [ZERO] * 4
        comps[alpha] = s.q
        return cls(tuple(comps), s.chirality)

    def spinor(self, alpha: int) -> Spinor:
        return Spinor(self.components[alpha], self.chirality)

    def __add__(self, other):
        _same_chirality(self, other)
        return CliffordTensor(tuple(x + y for x, y in zip(self.components, other.components)), self.chirality)

    def __sub__(self, other):
        _same_chirality(self, other)
        return CliffordTensor(tuple(x - y for x, y in zip(self.components, other.components)), self.chirality)

    def scale(self, r) -> "CliffordTensor":
        r = rational(r)
        return CliffordTensor(tuple(x.scale(r) for x in self.components), self.chirality)

    def times_complex(self, c) -> "CliffordTensor":
        cq = Quaternion.from_complex(c)
        return CliffordTensor(tuple(x * cq for x in self.components), self.chirality)

    def is_zero(self) -> bool:
        return not any(self.components)

    def as_tensor(self) -> "CliffordTensor":
        return CliffordTensor(self.components, self.chirality)


@dataclass(frozen=True, eq=False)
class ThreeHalfSpinor(CliffordTensor):
    """A Clifford tensor in ``ker rho``; construction verifies the kernel condition."""

    def __post_init__(self):
        super().__post_init__()
        if any(rho_contract(self).q.coords()):
            raise ValueError("tensor is not in the kernel of Clifford contraction")

    def __eq__(self, other):
        if not isinstance(other, CliffordTensor):
            return NotImplemented
        return self.components == other.components and self.chirality == other.chirality

    __hash__ = CliffordTensor.__hash__

    @classmethod
    def _trusted(cls, components, chirality) -> "ThreeHalfSpinor":
        obj = object.__new__(cls)
        object.__setattr__(obj, "components", tuple(components))
        object.__setattr__(obj, "chirality", chirality)
        return obj


@dataclass(frozen=True)
class SelfDualForm:
    """Coefficients on the self-dual basis ``w1, w2, w3``."""

    coefficients: tuple
    imaginary_scaled: bool = False

    def __post_init__(self):
        if len(self.coefficients) != 3:
            raise ValueError("a self-dual form has 3 coefficients")
        object.__setattr__(self, "coefficients", tuple(rational(c) for c in self.coefficients))

    @classmethod
    def basis(cls, k: int, imaginary_scaled: bool = False) -> "SelfDualForm":
        coeffs = [0, 0, 0]
        coeffs[k] = 1
        return cls(tuple(coeffs), imaginary_scaled)

    def two_form(self) -> dict:
        out: dict = {}
        for c, basis in zip(self.coefficients, SELF_DUAL_BASIS):
            for key, sign in basis.items():
                out[key] = out.get(key, 0) + c * sign
        return {k: rational(v) for k, v in out.items() if v}


# --- Clifford multiplication and the splitting V (x) W = iota(W) + ker rho ---


def _cmul_q(v: Quaternion, s: Quaternion, chirality: Chirality) -> Quaternion:
    if chirality is Chirality.PLUS:
        return v * s
    return -(v.conj() * s)


def clifford_mult(v: TangentVector, s: Spinor) -> Spinor:
    """``rho(v) s``; ``i*a`` acts as ``rho(a)`` followed by the complex scalar ``i``."""
    out = _cmul_q(v.q, s.q, s.chirality)
    if v.imaginary_scaled:
        out = out * I
    return Spinor(out, s.chirality.flip())


def rho_contract(T: CliffordTensor) -> Spinor:
    """``sum_a rho(e_a) T_a``."""
    acc = ZERO
    for e, t in zip(FRAME, T.components):
        acc = acc + _cmul_q(e, t, T.chirality)
    return Spinor(acc, T.chirality.flip())


def iota(s: Spinor) -> CliffordTensor:
    """``iota(s) = -1/4 sum_a e_a (x) rho(e_a) s``, a right inverse of ``rho_contract``."""
    comps = tuple(_cmul_q(e, s.q, s.chirality).scale(-_QUARTER) for e in FRAME)
    return CliffordTensor(comps, s.chirality.flip())


def project_32(T: CliffordTensor) -> ThreeHalfSpinor:
    """Orthogonal projection ``T - iota(rho(T))`` onto ``ker rho``."""
    correction = iota(rho_contract(T))
    comps = tuple(x - y for x, y in zip(T.components, correction.components))
    return ThreeHalfSpinor._trusted(comps, T.chirality)


def _hermitian_q(p: Quaternion, q: Quaternion) -> GaussComplex:
    pz, pw = p.column()
    qz, qw = q.column()
    return pz.conj() * qz + pw.conj() * qw


def inner_product(T: CliffordTensor, S: CliffordTensor) -> GaussComplex:
    """Hermitian inner product, conjugate-linear in the first slot."""
    _same_chirality(T, S)
    acc = GaussComplex()
    for x, y in zip(T.components, S.components):
        acc = acc + _hermitian_q(x, y)
    return acc


def tensor_complex_coords(T: CliffordTensor) -> tuple:
    """The 8 complex coordinates ``(z_0, w_0, ..., z_3, w_3)`` of ``T``."""
    out = []
    for q in T.components:
        out.extend(q.column())
    return tuple(out)


def tensor_from_complex_coords(coords, chirality: Chirality = Chirality.PLUS) -> CliffordTensor:
    comps = tuple(Quaternion.from_zw(coords[2 * a], coords[2 * a + 1]) for a in range(4))
    return CliffordTensor(comps, chirality)


# --- quadratic moment map ---


def _outer_sum(psi: CliffordTensor, phi: CliffordTensor) -> Matrix2:
    acc = Matrix2()
    for x, y in zip(psi.components, phi.components):
        acc = acc + Matrix2.outer(x.column(), y.column())
    return acc


def mu(psi: CliffordTensor) -> Matrix2:
    """``psi psi^* - 1/2 tr(psi psi^*)`` with ``psi`` viewed as a 2x4 complex matrix."""
    return _outer_sum(psi, psi).traceless_part()


def polarized_mu(psi: CliffordTensor, phi: CliffordTensor) -> Matrix2:
    """``(psi phi^* + phi psi^*)_0``, the derivative of ``mu`` at ``psi`` along ``phi``."""
    return (_outer_sum(psi, phi) + _outer_sum(phi, psi)).traceless_part()


# --- two-forms and self-dual forms ---


def clifford_two_form(coeffs: dict) -> Quaternion:
    """Quaternion ``u`` with ``sum c * conj(e_a)(e_b psi) = u psi`` on W+."""
    acc = ZERO
    for (a, b), c in coeffs.items():
        if a == b:
            raise ValueError("e_a ^ e_a is zero; use a != b")
        acc = acc + (FRAME[a].conj() * FRAME[b]).scale(c)
    return acc


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def hodge_star(coeffs: dict) -> dict:
    """Hodge star of a 2-form for the orientation ``e1^e2^e3^e4`` of ``FRAME``."""
    out: dict = {}
    for (a, b), c in coeffs.items():
        if a > b:
            a, b, c = b, a, -c
        rest = tuple(x for x in range(4) if x not in (a, b))
        sign = _perm_sign((a, b) + rest)
        out[rest] = out.get(rest, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def rho2_two_form(coeffs: dict, imaginary_scaled: bool = False) -> Matrix2:
    m = clifford_two_form(coeffs).matrix()
    if imaginary_scaled:
        m = _I_SCALAR * m
    return m


def rho2_selfdual(omega: SelfDualForm) -> Matrix2:
    """Clifford action of a self-dual form on W+ as a 2x2 matrix.

    Real forms give traceless skew-Hermitian matrices; ``imaginary_scaled``
    forms give traceless Hermitian ones.
    """
    return rho2_two_form(omega.two_form(), omega.imaginary_scaled)


def _selfdual_images(imaginary_scaled: bool) -> tuple:
    return tuple(rho2_selfdual(SelfDualForm.basis(k, imaginary_scaled)) for k in range(3))


def rho2_inverse(E: Matrix2, imaginary_scaled: bool | None = None) -> SelfDualForm:
    """Solve ``rho2_selfdual(omega) = E`` for a traceless (skew-)Hermitian ``E``.

    Hermitian input gives an imaginary-valued form. The zero matrix is both,
    so ``imaginary_scaled`` picks the reading; it defaults to Hermitian.
    """
    if not E.is_traceless():
        raise ValueError("rho2_inverse needs a traceless endomorphism")
    herm, skew = E.is_hermitian(), E.is_skew_hermitian()
    if not (herm or skew):
        raise ValueError("rho2_inverse needs a Hermitian or skew-Hermitian endomorphism")
    if imaginary_scaled is None:
        scaled = herm
    elif (imaginary_scaled and not herm) or (not imaginary_scaled and not skew):
        raise ValueError("endomorphism does not match the requested scaling")
    else:
        scaled = imaginary_scaled
    coeffs = []
    for B in _selfdual_images(scaled):
        # the three images are orthogonal for the trace pairing
        num = (E * B.adjoint()).trace()
        coeffs.append(num.re / B.frobenius2())
    omega = SelfDualForm(tuple(coeffs), scaled)
    if rho2_selfdual(omega) != E:
        raise ArithmeticError("rho2_inverse: result does not reproduce the input (convention bug)")
    return omega


# --- the fiberwise monopole map and its linearization ---


def _componentwise(a: TangentVector, T: CliffordTensor) -> CliffordTensor:
    comps = tuple(clifford_mult(a, T.spinor(k)).q for k in range(4))
    return CliffordTensor(comps, T.chirality.flip())


def quad_term(a: TangentVector, psi: CliffordTensor) -> ThreeHalfSpinor:
    """``pi(a . psi)`` for an imaginary 1-form ``a``: the spinor part of the quadratic map."""
    if not a.imaginary_scaled:
        raise ValueError("quad_term expects an imaginary-valued 1-form (imaginary_scaled=True)")
    return project_32(_componentwise(a, psi))


def fiber_quadratic(psi: CliffordTensor, a: TangentVector) -> tuple:
    """``(pi(a . psi), mu(psi))``."""
    return quad_term(a, psi), mu(psi)


def linearized_quadratic(psi, a, phi, b) -> tuple:
    """Zeroth-order part of the differential at ``(psi, a)`` along ``(phi, b)``.

    Returns ``(pi(b . psi + a . phi), (psi phi^* + phi psi^*)_0)``.
    """
    if not (a.imaginary_scaled and b.imaginary_scaled):
        raise ValueError("1-form arguments must be imaginary_scaled")
    first = project_32(_componentwise(b, psi) + _componentwise(a, phi))
    return first, polarized_mu(psi, phi)


# --- random exact data ---


def random_spinor(rng: random.Random, chirality: Chirality = Chirality.PLUS, bound: int = 100) -> Spinor:
    return Spinor(random_quaternion(rng, bound), chirality)


def random_tensor(rng: random.Random, chirality: Chirality = Chirality.PLUS, bound: int = 100) -> CliffordTensor:
    return CliffordTensor(tuple(random_quaternion(rng, bound) for _ in range(4)), chirality)


def random_three_half(rng: random.Random, chirality: Chirality = Chirality.PLUS, bound: int = 100) -> ThreeHalfSpinor:
    return project_32(random_tensor(rng, chirality, bound))


def random_tangent(rng: random.Random, imaginary_scaled: bool = False, bound: int = 100) -> TangentVector:
    return TangentVector(random_quaternion(rng, bound), imaginary_scaled)


def random_selfdual(rng: random.Random, imaginary_scaled: bool = False, bound: int = 100) -> SelfDualForm:
    return SelfDualForm(tuple(random_rational(rng, bound) for _ in range(3)), imaginary_scaled)
