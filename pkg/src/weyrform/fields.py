"""Exact scalar fields: the rationals and prime fields GF(p).

Matrix entries are stored as *raw canonical values* and the field travels
with the matrix that owns them:

* over Q an entry is a ``gmpy2.mpq`` (always in lowest terms, positive
  denominator);
* over GF(p) an entry is a Python ``int`` in ``range(p)``.

Raw values keep the inner loops of elimination cheap: sums of products are
accumulated with plain ``+``/``*`` and canonicalized once with
:meth:`Field.reduce`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import gmpy2
from gmpy2 import mpq

RATIONAL = "rational"
PRIME = "prime"

_MAX_MODULUS = 2**63


@dataclass(frozen=True)
class Field:
    """Descriptor of the scalar field (``kind`` plus ``modulus`` for GF(p))."""

    kind: str = RATIONAL
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.modulus is not None:
                raise ValueError("the rational field takes no modulus")
        elif self.kind == PRIME:
            p = self.modulus
            if not isinstance(p, int) or isinstance(p, bool):
                raise ValueError(f"modulus must be an int, got {p!r}")
            if p < 2 or p >= _MAX_MODULUS or not gmpy2.is_prime(p):
                raise ValueError(f"modulus must be a prime below 2**63, got {p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> Field:
        return cls(RATIONAL)

    @classmethod
    def prime(cls, p: int) -> Field:
        return cls(PRIME, int(p))

    @classmethod
    def parse(cls, text: str) -> Field:
        """Parse ``"rational"`` or ``"prime:<p>"``."""
        text = text.strip().lower()
        if text in (RATIONAL, "q"):
            return cls.rational()
        if text.startswith(PRIME + ":"):
            try:
                p = int(text.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad field descriptor {text!r}") from None
            return cls.prime(p)
        raise ValueError(f"bad field descriptor {text!r}")

    def __str__(self):
        if self.kind == RATIONAL:
            return RATIONAL
        return f"{PRIME}:{self.modulus}"

    @property
    def is_rational(self) -> bool:
        return self.kind == RATIONAL

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONAL else self.modulus

    # -- elements ---------------------------------------------------------

    @property
    def zero(self):
        return mpq(0) if self.kind == RATIONAL else 0

    @property
    def one(self):
        return mpq(1) if self.kind == RATIONAL else 1

    def reduce(self, x):
        """Canonicalize a value produced by ring operations on raw entries."""
        if self.kind == RATIONAL:
            return mpq(x)
        return int(x) % self.modulus

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONAL:
            return 1 / mpq(x)
        return pow(int(x), -1, self.modulus)

    def element(self, x: Any):
        """Convert ints, fractions, mpq values or strings to a raw entry."""
        if isinstance(x, str):
            return self.parse_entry(x)
        if self.kind == RATIONAL:
            if isinstance(x, float):
                raise TypeError("floating-point entries are not exact; pass a Fraction or string")
            try:
                return mpq(x)
            except TypeError:
                # foreign exact rationals (e.g. sympy) go through their text form
                return self.parse_entry(str(x))
        p = self.modulus
        if isinstance(x, (Fraction, type(mpq(0)))):
            num, den = int(x.numerator), int(x.denominator)
            if den % p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        if isinstance(x, float):
            raise TypeError("floating-point entries are not exact")
        if not isinstance(x, int) and hasattr(x, "denominator"):
            return self.parse_entry(str(x))
        return int(x) % p

    def parse_entry(self, text: str):
        text = text.strip()
        try:
            value = Fraction(text)
        except ValueError:
            raise ValueError(f"cannot parse matrix entry {text!r}") from None
        if "." in text or "e" in text.lower():
            raise ValueError(f"entries must be integers or a/b fractions, got {text!r}")
        return self.element(value)

    def format(self, x) -> str:
        if self.kind == RATIONAL:
            return str(mpq(x))
        return str(int(x))


QQ = Field.rational()


def as_field(field: Field | str | None) -> Field:
    if field is None:
        return QQ
    if isinstance(field, Field):
        return field
    return Field.parse(field)
