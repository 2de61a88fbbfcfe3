"""Univariate polynomials over an exact field and their linear factors."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .fields import Field


class Polynomial:
    """Coefficients lowest degree first; trailing zeros are stripped."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1] == field.zero:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.field, self.coeffs))

    @classmethod
    def constant(cls, field: Field, c) -> "Polynomial":
        return cls(field, [c])

    @classmethod
    def x(cls, field: Field) -> "Polynomial":
        return cls(field, [field.zero, field.one])

    @classmethod
    def linear(cls, field: Field, root) -> "Polynomial":
        """The monic factor ``x - root``."""
        return cls(field, [field(-field(root)), field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.field.one,)

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __call__(self, value):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f(acc * value + c)
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        z = self.field.zero
        return Polynomial(self.field, [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.field, [c * a for a in self.coeffs])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.coeffs or not other.coeffs:
            return Polynomial(self.field, [])
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == self.field.zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(self.field, out)

    def __pow__(self, k: int) -> "Polynomial":
        result = Polynomial.constant(self.field, self.field.one)
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        inv = f.inv(other.lead)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(f, []), self
        quot = [f.zero] * (dq + 1)
        for k in range(dq, -1, -1):
            c = f(rem[k + other.degree] * inv)
            quot[k] = c
            if c != f.zero:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = f(rem[k + j] - c * b)
        return Polynomial(f, quot), Polynomial(f, rem[: other.degree])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def derivative(self) -> "Polynomial":
        return Polynomial(self.field, [i * c for i, c in enumerate(self.coeffs)][1:])

    def render(self, var: str = "x") -> str:
        f = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == f.zero:
                continue
            neg = f.characteristic == 0 and c < 0
            mag = f.render(-c if neg else c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and mag == "1":
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = mag
            terms.append(("-" if neg else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.render()} over {self.field})"


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _rational_roots(p: Polynomial) -> list:
    """Distinct rational roots of a square-free polynomial over QQ."""
    den = math.lcm(*(Fraction(c).denominator for c in p.coeffs))
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints.pop(0)
    if len(ints) <= 1:
        return roots
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    q = Polynomial(p.field, ints)
    seen = set()
    for a in _divisors(ints[0]):
        for b in _divisors(ints[-1]):
            for cand in (Fraction(a, b), Fraction(-a, b)):
                if cand not in seen:
                    seen.add(cand)
                    if q(cand) == 0:
                        roots.append(cand)
    return roots


def _powmod_x(exponent: int, mod: Polynomial) -> Polynomial:
    f = mod.field
    result = Polynomial.constant(f, f.one)
    base = Polynomial.x(f) % mod
    while exponent:
        if exponent & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exponent >>= 1
    return result


def _powmod(base: Polynomial, exponent: int, mod: Polynomial) -> Polynomial:
    f = mod.field
    result = Polynomial.constant(f, f.one)
    base = base % mod
    while exponent:
        if exponent & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exponent >>= 1
    return result


_EXHAUSTIVE_LIMIT = 1 << 12


def _prime_field_roots(p: Polynomial) -> list:
    f = p.field
    q = f.characteristic
    if q <= _EXHAUSTIVE_LIMIT:
        return [a for a in f.elements() if p(a) == 0]
    # product of the distinct linear factors, then Rabin's equal-degree split
    x = Polynomial.x(f)
    g = poly_gcd(p, _powmod_x(q, p) - x)
    roots = []
    stack = [g]
    shift = 0
    while stack:
        h = stack.pop()
        if h.degree <= 0:
            continue
        if h.degree == 1:
            roots.append(f(-h.monic().coeffs[0]))
            continue
        while True:
            probe = _powmod(x + Polynomial.constant(f, shift), (q - 1) // 2, h) - Polynomial.constant(f, f.one)
            shift += 1
            d = poly_gcd(h, probe)
            if 0 < d.degree < h.degree:
                stack.extend([d, h // d])
                break
    return roots


def linear_roots(p: Polynomial):
    """Split off every linear factor of ``p`` over its field.

    Returns ``(roots, nonsplit)``: ``roots`` is a list of ``(root,
    multiplicity)`` sorted by the field order, ``nonsplit`` the monic
    cofactor without roots in the field (the constant 1 when ``p`` splits).
    """
    if p.is_zero():
        raise DomainError("the zero polynomial has no root decomposition")
    f = p.field
    rest = p.monic()
    if rest.degree == 0:
        return [], rest
    if f.characteristic == 0:
        squarefree = rest // poly_gcd(rest, rest.derivative())
        candidates = _rational_roots(squarefree)
    else:
        candidates = _prime_field_roots(rest)
    found = []
    for r in sorted(set(candidates), key=f.sort_key):
        lin = Polynomial.linear(f, r)
        mult = 0
        while True:
            q, rem = divmod(rest, lin)
            if not rem.is_zero():
                break
            rest = q
            mult += 1
        if mult:
            found.append((r, mult))
    return found, rest.monic()
