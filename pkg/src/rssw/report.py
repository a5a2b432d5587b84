"""Manifold expressions and the combined analysis report."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field, fields

import gmpy2

from . import __version__
from .index import ManifoldInvariants, index_dirac, index_rs
from .scalars import Rational
from .topology import (
    ManifoldData,
    compactness_margin,
    furuta_margin,
    is_vacuous,
    kdegree_feasibility,
    rep_counts,
    slope_window,
    virtual_dim,
)

__all__ = ["ManifoldParseError", "ManifoldExpr", "parse_manifold", "Report", "analyze", "CONCLUSION"]

# atom -> (E8 count, H count); longer spellings first so K3bar wins over K3
ATOMS = {
    "K3BAR": (2, 3),
    "S2XS2": (0, 1),
    "-E8": (-1, 0),
    "E8": (1, 0),
    "K3": (-2, 3),
    "H": (0, 1),
}
_CANONICAL = {"K3BAR": "K3bar", "S2XS2": "S2xS2", "-E8": "-E8", "E8": "E8", "K3": "K3", "H": "H"}

CONCLUSION = "compactness excluded => moduli space non-compact (hence non-empty)"


class ManifoldParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class ManifoldExpr:
    terms: tuple  # ((count, atom), ...)

    def expand(self) -> tuple:
        """Positive E8 blocks, negative E8 blocks, H blocks, before any cancellation."""
        pos = neg = hyp = 0
        for count, atom in self.terms:
            a, b = ATOMS[atom.upper()]
            pos += count * max(a, 0)
            neg += count * max(-a, 0)
            hyp += count * b
        return pos, neg, hyp

    def to_manifold(self) -> ManifoldData:
        # E8 + (-E8) is even, indefinite, unimodular of rank 16: it is 8H
        pos, neg, hyp = self.expand()
        return ManifoldData(pos - neg, hyp + 8 * min(pos, neg))

    def __str__(self) -> str:
        return " # ".join(f"{c}{a}" if c != 1 else a for c, a in self.terms)


def _byte_offset(text: str, i: int) -> int:
    return len(text[:i].encode("utf-8"))


_WS = re.compile(r"\s*")
_UINT = re.compile(r"\d+")


def parse_manifold(text: str) -> ManifoldExpr:
    """``expr := term ('#' term)*``, ``term := [uint] atom``; atoms are case-insensitive."""
    upper = text.upper()
    pos = _WS.match(text, 0).end()
    if pos == len(text):
        raise ManifoldParseError("empty input", _byte_offset(text, pos))
    terms = []
    while True:
        count = 1
        m = _UINT.match(text, pos)
        if m:
            count = int(m.group())
            if count == 0:
                raise ManifoldParseError("malformed count (must be at least 1)", _byte_offset(text, pos))
            pos = _WS.match(text, m.end()).end()
        for atom in ATOMS:
            if upper.startswith(atom, pos):
                terms.append((count, _CANONICAL[atom]))
                pos += len(atom)
                break
        else:
            msg = "unknown atom" if pos < len(text) else "missing atom"
            raise ManifoldParseError(msg, _byte_offset(text, pos))
        pos = _WS.match(text, pos).end()
        if pos == len(text):
            return ManifoldExpr(tuple(terms))
        if text[pos] != "#":
            raise ManifoldParseError("expected '#'", _byte_offset(text, pos))
        pos = _WS.match(text, pos + 1).end()
        if pos == len(text):
            raise ManifoldParseError("missing term after '#'", _byte_offset(text, pos))


def _q(x) -> str:
    return str(gmpy2.mpq(x))


@dataclass(frozen=True)
class Report:
    expr: str
    e8_count: int
    h_count: int
    b2: int
    sigma: int
    b2plus: int
    index_rs: str
    index_dirac: str
    virtual_dim: str
    k: int
    m: int
    feasibility: str
    required_trace: str
    compactness_margin: str
    vacuous: bool
    furuta_margin: str
    slope_window: tuple
    conclusion: str | None
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["slope_window"] = list(self.slope_window)
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown report fields {sorted(unknown)}")
        d["slope_window"] = tuple(d["slope_window"])
        return cls(**d)

    def exact(self, name: str) -> Rational:
        """Exact value of one of the rational fields."""
        return gmpy2.mpq(getattr(self, name))

    def to_text(self) -> str:
        rows = [
            ("expression", self.expr),
            ("form", f"{self.e8_count}E8 + {self.h_count}H"),
            ("b2 / sigma / b2+", f"{self.b2} / {self.sigma} / {self.b2plus}"),
            ("RS index", self.index_rs),
            ("Dirac index", self.index_dirac),
            ("virtual dimension", self.virtual_dim),
            ("k / m", f"{self.k} / {self.m}"),
            ("K-degree verdict", f"{self.feasibility} (tr a_f(j) = {self.required_trace})"),
            ("compactness margin", self.compactness_margin + (" (vacuous, sigma <= 0)" if self.vacuous else "")),
            ("Furuta margin", self.furuta_margin),
            ("slope window", "lower {} / upper {}".format(*("ok" if w else "fails" for w in self.slope_window))),
        ]
        if self.conclusion:
            rows.append(("conclusion", self.conclusion))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def analyze(expr) -> Report:
    """Full report for a manifold expression (text or parsed)."""
    parsed = parse_manifold(expr) if isinstance(expr, str) else expr
    M = parsed.to_manifold()
    M.require_indefinite()
    M.require_spin_signature()
    counts = rep_counts(M, r=max(0, -19 * M.sigma // 16))
    verdict = kdegree_feasibility(counts)
    # simply connected: chi = 2 + b2
    inv = ManifoldInvariants(M.sigma, 2 + M.b2, 0)
    margin = compactness_margin(M)
    vacuous = is_vacuous(M)
    conclusion = CONCLUSION if (M.sigma > 0 and margin < 0) else None
    return Report(
        expr=str(parsed),
        e8_count=M.e8_count,
        h_count=M.h_count,
        b2=M.b2,
        sigma=M.sigma,
        b2plus=M.b2plus,
        index_rs=_q(index_rs(inv, integral=True)),
        index_dirac=_q(index_dirac(inv)),
        virtual_dim=_q(virtual_dim(M)),
        k=counts.k,
        m=counts.m,
        feasibility=str(verdict),
        required_trace=_q(verdict.required_trace),
        compactness_margin=_q(margin),
        vacuous=vacuous,
        furuta_margin=_q(furuta_margin(M)),
        slope_window=tuple(bool(x) for x in slope_window(M)),
        conclusion=conclusion,
        provenance={"tool": "rssw", "version": __version__, "input": expr if isinstance(expr, str) else str(expr)},
    )
