from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from weyrform import Field, Matrix

GOLDEN = Path(__file__).parent / "golden"

QQ = Field.rational()
F5 = Field.prime(5)


@pytest.fixture(params=[QQ, F5], ids=["Q", "F5"])
def field(request):
    return request.param


def to_sympy(m: Matrix) -> sympy.Matrix:
    """Independent route: rational matrices through sympy."""
    assert m.field.is_rational
    return sympy.Matrix(m.nrows, m.ncols,
                        lambda i, j: sympy.Rational(int(m[i, j].numerator), int(m[i, j].denominator)))


def as_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "denominator") \
        else Fraction(int(x))


def naive_product(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    """Textbook triple loop over Fractions, reduced mod p for prime fields."""
    out = []
    for i in range(a.nrows):
        row = []
        for j in range(b.ncols):
            s = sum((as_fraction(a[i, k]) * as_fraction(b[k, j]) for k in range(a.ncols)),
                    Fraction(0))
            if not a.field.is_rational:
                s = Fraction(int(s) % a.field.modulus)
            row.append(s)
        out.append(row)
    return out


# acceptance summary ----------------------------------------------------------

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
