"""The representation ring of Pin(2), presented as Z[d, h] / (d^2 - 1, dh - h).

Elements are kept in the normal form ``c0 + c1*d + sum_l c_l * h^l``.
Coefficients are Python ints, so the powers of two produced by the
lambda-class identities never overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType

__all__ = [
    "RepRingElement",
    "ONE",
    "D",
    "H",
    "rr_add",
    "rr_mul",
    "rr_pow",
    "lambda_total",
    "char_at_j",
    "char_at_i",
    "char_on_circle",
    "eval_poly",
    "normalize",
    "RepRingParseError",
    "parse_repring",
]


def _clean(ch) -> MappingProxyType:
    return MappingProxyType({int(l): int(c) for l, c in sorted(dict(ch).items()) if c})


@dataclass(frozen=True)
class RepRingElement:
    c0: int = 0
    c1: int = 0
    ch: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        for l in dict(self.ch):
            if not isinstance(l, int) or l < 1:
                raise ValueError(f"h-exponent must be a positive int, got {l!r}")
        object.__setattr__(self, "c0", int(self.c0))
        object.__setattr__(self, "c1", int(self.c1))
        object.__setattr__(self, "ch", _clean(self.ch))

    def __hash__(self):
        return hash((self.c0, self.c1, tuple(self.ch.items())))

    def __eq__(self, other):
        if isinstance(other, int):
            other = RepRingElement(other)
        if not isinstance(other, RepRingElement):
            return NotImplemented
        return (self.c0, self.c1, dict(self.ch)) == (other.c0, other.c1, dict(other.ch))

    @classmethod
    def const(cls, n: int) -> "RepRingElement":
        return cls(n)

    @classmethod
    def h_power(cls, l: int, coeff: int = 1) -> "RepRingElement":
        if l == 0:
            return cls(coeff)
        return cls(0, 0, {l: coeff})

    def __add__(self, other):
        return rr_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return RepRingElement(-self.c0, -self.c1, {l: -c for l, c in self.ch.items()})

    def __sub__(self, other):
        return rr_add(self, -_coerce(other))

    def __rsub__(self, other):
        return rr_add(_coerce(other), -self)

    def __mul__(self, other):
        return rr_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return rr_pow(self, n)

    def __str__(self) -> str:
        terms = []
        if self.c0:
            terms.append((self.c0, ""))
        if self.c1:
            terms.append((self.c1, "d"))
        for l, c in self.ch.items():
            terms.append((c, "h" if l == 1 else f"h^{l}"))
        if not terms:
            return "0"
        out = []
        for i, (c, mono) in enumerate(terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            out.append((("-" if sign == "-" else "") if i == 0 else f" {sign} ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"RepRingElement({self})"


def _coerce(x) -> RepRingElement:
    if isinstance(x, RepRingElement):
        return x
    if isinstance(x, int):
        return RepRingElement(x)
    raise TypeError(f"cannot use {type(x).__name__} in R(Pin(2))")


ONE = RepRingElement(1)
D = RepRingElement(0, 1)
H = RepRingElement.h_power(1)


def rr_add(x: RepRingElement, y: RepRingElement) -> RepRingElement:
    ch = dict(x.ch)
    for l, c in y.ch.items():
        ch[l] = ch.get(l, 0) + c
    return RepRingElement(x.c0 + y.c0, x.c1 + y.c1, ch)


def rr_mul(x: RepRingElement, y: RepRingElement) -> RepRingElement:
    # d^2 = 1, d h^l = h^l
    c0 = x.c0 * y.c0 + x.c1 * y.c1
    c1 = x.c0 * y.c1 + x.c1 * y.c0
    ch: dict = {}
    xs = x.c0 + x.c1
    ys = y.c0 + y.c1
    for l, c in y.ch.items():
        ch[l] = ch.get(l, 0) + xs * c
    for l, c in x.ch.items():
        ch[l] = ch.get(l, 0) + ys * c
    for a, ca in x.ch.items():
        for b, cb in y.ch.items():
            ch[a + b] = ch.get(a + b, 0) + ca * cb
    return RepRingElement(c0, c1, ch)


def rr_pow(x: RepRingElement, n: int) -> RepRingElement:
    if n < 0:
        raise ValueError("negative powers are not defined in R(Pin(2))")
    out, base = ONE, x
    while n:
        if n & 1:
            out = rr_mul(out, base)
        base = rr_mul(base, base)
        n >>= 1
    return out


LAMBDA_D = ONE - D
LAMBDA_H = 2 - H


def lambda_total(num_h: int, num_d: int) -> RepRingElement:
    """``(2 - h)^num_h * (1 - d)^num_d``: the lambda class of ``num_h`` copies of h plus ``num_d`` of d."""
    if num_h < 0 or num_d < 0:
        raise ValueError("multiplicities must be non-negative")
    return rr_mul(rr_pow(LAMBDA_H, num_h), rr_pow(LAMBDA_D, num_d))


def char_at_j(x: RepRingElement) -> int:
    """Character at ``j``; every power of h has trace 0 there."""
    return x.c0 - x.c1


def char_at_i(x: RepRingElement) -> int:
    return x.c0 + x.c1


def char_on_circle(x: RepRingElement) -> tuple:
    """Character on the circle as integer coefficients of ``c = 2cos(theta)``, lowest degree first.

    The trailing coefficient is nonzero unless the character vanishes, which
    gives ``()``.
    """
    top = max(x.ch, default=0)
    coeffs = [0] * (top + 1)
    coeffs[0] = x.c0 + x.c1
    for l, c in x.ch.items():
        coeffs[l] += c
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def eval_poly(coeffs: tuple, c):
    acc = 0
    for a in reversed(coeffs):
        acc = acc * c + a
    return acc


def normalize(x: RepRingElement) -> RepRingElement:
    return RepRingElement(x.c0, x.c1, dict(x.ch))


# --- expression parser: ints, d, h, + - * ^ and parentheses ---


class RepRingParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


_TOKEN = re.compile(r"\s*(?:(\d+)|([dhDH])|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            off = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise RepRingParseError(f"unexpected character {text[off]!r}", off)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("gen", m.group(2).lower(), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, off = self.take()
        if kind != "op" or val != op:
            raise RepRingParseError(f"expected {op!r}", off)

    def expr(self) -> RepRingElement:
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> RepRingElement:
        acc = self.unary()
        while True:
            kind, val = self.peek()[:2]
            if kind == "op" and val == "*":
                self.take()
            elif not (kind == "gen" or (kind == "op" and val == "(")):
                return acc
            # juxtaposition such as 2d or 3(1-d) multiplies
            acc = acc * self.unary()

    def unary(self) -> RepRingElement:
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            val = self.unary()
            return -val if op == "-" else val
        return self.power()

    def power(self) -> RepRingElement:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, off = self.take()
            if kind != "int":
                raise RepRingParseError("exponent must be a non-negative integer", off)
            return rr_pow(base, val)
        return base

    def atom(self) -> RepRingElement:
        kind, val, off = self.take()
        if kind == "int":
            return RepRingElement(val)
        if kind == "gen":
            return D if val == "d" else H
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise RepRingParseError("unexpected end of input", off)
        raise RepRingParseError(f"unexpected {val!r}", off)


def parse_repring(text: str) -> RepRingElement:
    if not text.strip():
        raise RepRingParseError("empty expression", 0)
    p = _Parser(text)
    out = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise RepRingParseError(f"unexpected {val!r}", off)
    return out
