"""Exact Spin(4) x Pin(2) group elements and their actions on the fiber modules.

Group elements are built from rational points on the unit circle, so every
equivariance identity is checked as literal equality of rationals.

Actions of ``g = (p_minus, p_plus, p0)``:

* tangent vectors: ``v -> p_minus v p_plus^-1``, with an extra sign
  ``sign(p0)`` on imaginary-valued forms (the ``j`` branch is antilinear);
* positive / negative spinors: ``s -> p_plus s p0^-1`` / ``p_minus s p0^-1``;
* tensors: frame vectors are transported by the tangent action and
  re-expanded in ``FRAME``, spinor slots by the spinor action;
* endomorphisms of W+: conjugation by ``p_plus``, times ``sign(p0)`` on
  imaginary-valued (Hermitian) targets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import gmpy2

from .clifford import (
    Chirality,
    CliffordTensor,
    SelfDualForm,
    Spinor,
    TangentVector,
    _componentwise,
    mu,
    project_32,
    random_tangent,
    random_tensor,
    random_three_half,
    rho_contract,
)
from .conventions import FRAME, SELF_DUAL_BASIS
from .scalars import J, ONE, GaussComplex, Matrix2, Quaternion, rational

__all__ = [
    "Branch",
    "Pin2Element",
    "Spin4Element",
    "GroupTriple",
    "unit_circle_point",
    "random_unit_quaternion",
    "act_tangent",
    "act_spinor",
    "act_tensor",
    "act_endo",
    "act_selfdual",
    "diagonal_embed",
    "check_equivariance",
    "EQUIVARIANCE_KINDS",
    "verify_equivariance",
]


class Branch(str, Enum):
    CIRCLE = "circle"
    J_CIRCLE = "j_circle"


@dataclass(frozen=True)
class Pin2Element:
    """``z`` (circle branch) or ``z*j`` (j branch) with ``|z| = 1`` exactly."""

    branch: Branch
    z: GaussComplex

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch(self.branch))
        if self.z.abs2() != 1:
            raise ValueError(f"Pin(2) element needs |z|^2 = 1, got {self.z.abs2()}")

    @property
    def quaternion(self) -> Quaternion:
        q = Quaternion.from_complex(self.z)
        return q * J if self.branch is Branch.J_CIRCLE else q

    @property
    def sign(self) -> int:
        """Value of the determinant character: +1 on the circle, -1 on ``j*S^1``."""
        return 1 if self.branch is Branch.CIRCLE else -1

    @classmethod
    def identity(cls) -> "Pin2Element":
        return cls(Branch.CIRCLE, GaussComplex(1))

    @classmethod
    def j(cls) -> "Pin2Element":
        return cls(Branch.J_CIRCLE, GaussComplex(1))

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "Pin2Element":
        if q.c == 0 and q.d == 0:
            return cls(Branch.CIRCLE, q.z)
        if q.a == 0 and q.b == 0:
            # q = z j  =>  z = -q j
            return cls(Branch.J_CIRCLE, (-(q * J)).z)
        raise ValueError(f"{q} is not in Pin(2)")

    def __mul__(self, other: "Pin2Element") -> "Pin2Element":
        return Pin2Element.from_quaternion(self.quaternion * other.quaternion)

    def inverse(self) -> "Pin2Element":
        return Pin2Element.from_quaternion(self.quaternion.inverse())


def unit_circle_point(t, branch: Branch = Branch.CIRCLE) -> Pin2Element:
    """Rational point ``((1 - t^2) + 2t i) / (1 + t^2)`` of the unit circle."""
    t = rational(t)
    den = 1 + t * t
    return Pin2Element(branch, GaussComplex((1 - t * t) / den, 2 * t / den))


def random_unit_quaternion(rng: random.Random, bound: int = 12) -> Quaternion:
    """Exact unit quaternion ``((1 - |u|^2) + 2u) / (1 + |u|^2)`` for a rational imaginary ``u``."""
    u = [gmpy2.mpq(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(3)]
    s = sum(x * x for x in u)
    den = 1 + s
    return Quaternion((1 - s) / den, 2 * u[0] / den, 2 * u[1] / den, 2 * u[2] / den)


@dataclass(frozen=True)
class Spin4Element:
    p_minus: Quaternion
    p_plus: Quaternion

    def __post_init__(self):
        if self.p_minus.norm2() != 1 or self.p_plus.norm2() != 1:
            raise ValueError("Spin(4) factors must be unit quaternions")

    @classmethod
    def identity(cls) -> "Spin4Element":
        return cls(ONE, ONE)


@dataclass(frozen=True)
class GroupTriple:
    spin4: Spin4Element = field(default_factory=Spin4Element.identity)
    p0: Pin2Element = field(default_factory=Pin2Element.identity)

    @classmethod
    def identity(cls) -> "GroupTriple":
        return cls()

    @classmethod
    def of(cls, p_minus: Quaternion, p_plus: Quaternion, p0: Pin2Element) -> "GroupTriple":
        return cls(Spin4Element(p_minus, p_plus), p0)

    @property
    def p_minus(self) -> Quaternion:
        return self.spin4.p_minus

    @property
    def p_plus(self) -> Quaternion:
        return self.spin4.p_plus

    def __mul__(self, other: "GroupTriple") -> "GroupTriple":
        return GroupTriple.of(self.p_minus * other.p_minus, self.p_plus * other.p_plus, self.p0 * other.p0)

    def inverse(self) -> "GroupTriple":
        return GroupTriple.of(self.p_minus.inverse(), self.p_plus.inverse(), self.p0.inverse())

    def is_diagonal(self) -> bool:
        q = self.p0.quaternion
        return self.p_minus == q and self.p_plus == q

    @cached_property
    def _inverses(self) -> tuple:
        return self.p_plus.inverse(), self.p0.quaternion.inverse()

    @cached_property
    def tangent_matrix(self) -> tuple:
        """Exact 4x4 matrix ``A`` of ``v -> p_minus v p_plus^-1`` in ``FRAME``; ``A[b][a]``."""
        pp_inv = self._inverses[0]
        images = [self.p_minus * e * pp_inv for e in FRAME]
        return tuple(tuple(eb.dot(images[a]) for a in range(4)) for eb in FRAME)


def diagonal_embed(p0: Pin2Element) -> GroupTriple:
    q = p0.quaternion
    return GroupTriple.of(q, q, p0)


def act_tangent(g: GroupTriple, v: TangentVector) -> TangentVector:
    out = g.p_minus * v.q * g._inverses[0]
    if v.imaginary_scaled and g.p0.sign < 0:
        out = -out
    return TangentVector(out, v.imaginary_scaled)


def _act_spinor_q(g: GroupTriple, q: Quaternion, chirality: Chirality) -> Quaternion:
    left = g.p_plus if chirality is Chirality.PLUS else g.p_minus
    return left * q * g._inverses[1]


def act_spinor(g: GroupTriple, s: Spinor) -> Spinor:
    return Spinor(_act_spinor_q(g, s.q, s.chirality), s.chirality)


def act_tensor(g: GroupTriple, T: CliffordTensor) -> CliffordTensor:
    """``sum_a (g e_a) (x) (g T_a)`` re-expanded in the frame."""
    A = g.tangent_matrix
    moved = [_act_spinor_q(g, t, T.chirality) for t in T.components]
    comps = []
    for b in range(4):
        acc = Quaternion()
        row = A[b]
        for a in range(4):
            if row[a]:
                acc = acc + moved[a].scale(row[a])
        comps.append(acc)
    return CliffordTensor(tuple(comps), T.chirality)


def act_endo(g: GroupTriple, E: Matrix2, imaginary_scaled: bool = True) -> Matrix2:
    """Action on endomorphisms of W+ (the target of ``mu``)."""
    P = g.p_plus.matrix()
    out = P * E * P.adjoint()
    if imaginary_scaled and g.p0.sign < 0:
        out = -out
    return out


def act_selfdual(g: GroupTriple, omega: SelfDualForm) -> SelfDualForm:
    """Induced action on self-dual forms: transport each ``e_a ^ e_b`` by the tangent action."""
    A = g.tangent_matrix
    full: dict = {}
    for (a, b), c in omega.two_form().items():
        # (A e_a) ^ (A e_b) = sum_{x,y} A[x][a] A[y][b] e_x ^ e_y
        for x in range(4):
            for y in range(4):
                if x == y:
                    continue
                coeff = c * A[x][a] * A[y][b]
                key, s = ((x, y), 1) if x < y else ((y, x), -1)
                full[key] = full.get(key, 0) + s * coeff
    # orthogonal projection onto the self-dual basis (each basis form has norm^2 = 2)
    coeffs = []
    for basis in SELF_DUAL_BASIS:
        coeffs.append(rational(sum(full.get(k, 0) * s for k, s in basis.items())) / 2)
    sign = -1 if (omega.imaginary_scaled and g.p0.sign < 0) else 1
    return SelfDualForm(tuple(c * sign for c in coeffs), omega.imaginary_scaled)


# --- equivariance harness ---

EQUIVARIANCE_KINDS = ("kernel", "cliffmult", "projection", "mu")


def check_equivariance(kind: str, g: GroupTriple, data) -> bool:
    """Exact check of one equivariance identity.

    ``kernel``: ``data`` is a 3/2-spinor, checks ``rho(g.psi) = 0``.
    ``cliffmult``: ``data = (a, psi)``, checks ``g.(a.psi) = (g.a).(g.psi)``.
    ``projection``: ``data`` is a tensor, checks ``pi(g.phi) = g.pi(phi)``;
    ``g`` must be a diagonally embedded Pin(2) element.
    ``mu``: ``data`` is a positive 3/2-spinor, checks ``mu(g.psi) = g.mu(psi)``.
    """
    if kind == "kernel":
        if not isinstance(data, CliffordTensor):
            raise TypeError("kernel check expects a CliffordTensor")
        if rho_contract(data).q:
            raise ValueError("kernel check expects a 3/2-spinor")
        return not rho_contract(act_tensor(g, data)).q
    if kind == "cliffmult":
        try:
            a, psi = data
        except (TypeError, ValueError):
            raise TypeError("cliffmult check expects a pair (TangentVector, CliffordTensor)") from None
        if not isinstance(a, TangentVector) or not isinstance(psi, CliffordTensor):
            raise TypeError("cliffmult check expects a pair (TangentVector, CliffordTensor)")
        lhs = act_tensor(g, _componentwise(a, psi))
        rhs = _componentwise(act_tangent(g, a), act_tensor(g, psi))
        return lhs == rhs
    if kind == "projection":
        if not isinstance(data, CliffordTensor):
            raise TypeError("projection check expects a CliffordTensor")
        if not g.is_diagonal():
            raise ValueError("projection equivariance is only asserted for diagonal Pin(2) elements")
        lhs = project_32(act_tensor(g, data))
        rhs = act_tensor(g, project_32(data))
        return lhs.components == rhs.components
    if kind == "mu":
        if not isinstance(data, CliffordTensor) or data.chirality is not Chirality.PLUS:
            raise TypeError("mu check expects a positive CliffordTensor")
        return mu(act_tensor(g, data)) == act_endo(g, mu(data))
    raise ValueError(f"unknown equivariance kind {kind!r}; expected one of {EQUIVARIANCE_KINDS}")


def random_pin2(rng: random.Random, branch: Branch, bound: int = 30) -> Pin2Element:
    t = gmpy2.mpq(rng.randint(-bound, bound), rng.randint(1, bound))
    return unit_circle_point(t, branch)


def _sample_data(kind: str, rng: random.Random):
    if kind == "kernel":
        return random_three_half(rng, Chirality.PLUS)
    if kind == "cliffmult":
        return random_tangent(rng, imaginary_scaled=rng.random() < 0.5), random_three_half(rng, Chirality.PLUS)
    if kind == "projection":
        return random_tensor(rng, Chirality.MINUS)
    return random_three_half(rng, Chirality.PLUS)


def verify_equivariance(n_elements: int = 25, n_inputs: int = 50, seed: int = 0) -> dict:
    """Run every check over ``n_elements`` Pin(2) points per branch and ``n_inputs`` inputs.

    Returns ``{kind: (checks, passed)}``.
    """
    rng = random.Random(seed)
    elements = []
    for branch in (Branch.CIRCLE, Branch.J_CIRCLE):
        elements.append(unit_circle_point(0, branch))
        elements.extend(random_pin2(rng, branch) for _ in range(n_elements - 1))
    triples = [diagonal_embed(p) for p in elements]
    results = {}
    for kind in EQUIVARIANCE_KINDS:
        inputs = [_sample_data(kind, rng) for _ in range(n_inputs)]
        passed = sum(check_equivariance(kind, g, x) for g in triples for x in inputs)
        results[kind] = (len(triples) * len(inputs), passed)
    return results

