"""Exact base fields: the rationals and prime fields.

Elements are plain Python objects: :class:`fractions.Fraction` for the
rationals and ``int`` residues in ``[0, p)`` for a prime field.  A field
object knows how to coerce, parse, render and order its elements; matrices
and polynomials carry their field explicitly.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction

from .errors import DomainError, ParseError

_RATIONAL = re.compile(r"^\s*[+-]?\d+(?:/\d+)?\s*$")


class Field:
    """Common interface of the supported fields."""

    characteristic: int
    zero: object
    one: object

    def __call__(self, value):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def render(self, value) -> str:
        raise NotImplementedError

    def sort_key(self, value):
        raise NotImplementedError

    def inv(self, value):
        raise NotImplementedError

    def is_zero(self, value) -> bool:
        return value == self.zero

    def elements(self):
        """Iterate over all elements (prime fields only)."""
        raise DomainError(f"{self} is infinite")


class Rationals(Field):
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, float):
            raise DomainError("floats are not accepted as exact rationals")
        return Fraction(value)

    def parse(self, text):
        if not _RATIONAL.match(text):
            raise ParseError(f"not a rational number: {text!r}")
        try:
            return Fraction(text.strip())
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {text!r}") from exc

    def render(self, value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def sort_key(self, value):
        return Fraction(value)

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(value)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    @property
    def name(self):
        return "q"


class PrimeField(Field):
    """Integers modulo a prime ``p``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainError(f"{value} has no image mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, float):
            raise DomainError("floats are not accepted as field elements")
        return int(value) % self.p

    def parse(self, text):
        if not _RATIONAL.match(text):
            raise ParseError(f"not a field element: {text!r}")
        try:
            return self(Fraction(text.strip()))
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in {text!r}") from exc

    def render(self, value):
        return str(value % self.p)

    def sort_key(self, value):
        return value % self.p

    def inv(self, value):
        if value % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(value, -1, self.p)

    def elements(self):
        return iter(range(self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def name(self):
        return f"fp:{self.p}"


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit inputs, trial division below 1000."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


QQ = Rationals()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse ``q`` or ``fp:<p>``."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return QQ
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise ParseError(f"bad prime in field spec {text!r}") from exc
        try:
            return GF(p)
        except DomainError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")
