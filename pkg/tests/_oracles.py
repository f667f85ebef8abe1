"""Independent reference implementations the tests compare against.

These are deliberately the slow, obviously-correct versions: cofactor
expansion instead of fraction-free elimination, scalar closed forms instead
of determinant assembly.  They were written and frozen before the library
code they check.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def det_cofactor(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Laplace expansion along the first row.  Exponential, fine for n <= 6."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("not square")
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    sign = 1
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        total += sign * Fraction(rows[0][j]) * det_cofactor(minor)
        sign = -sign
    return total


def one_soliton_constants(alpha: Fraction, beta: Fraction, p: Fraction,
                          gamma: Fraction):
    """Scalar constants of a single mode, written out longhand."""
    dc = 1 - alpha - beta
    a = (-p + beta) / (p + 1 - alpha)
    b = (p + 1 - beta) / (-p + alpha)
    c = gamma / (2 * p + dc)
    d = (-dc - p) / p
    return a, b, c, d


def one_soliton_xy(alpha: Fraction, beta: Fraction, p: Fraction,
                   gamma: Fraction, t: int, n: int) -> tuple[Fraction, Fraction]:
    """Exact (x, y) of one soliton from the scalar tau functions.

    f(t, n) = 1 + C A^t B^n and g(t, n) = 1 + C D A^t B^n; the field is read
    off as x = f g(n+1) / (g f(n+1)) and y = g f(t+1) / (f g(t+1)).
    """
    a, b, c, d = one_soliton_constants(alpha, beta, p, gamma)

    def f(tt: int, nn: int) -> Fraction:
        return 1 + c * a ** tt * b ** nn

    def g(tt: int, nn: int) -> Fraction:
        return 1 + c * d * a ** tt * b ** nn

    x = f(t, n) * g(t, n + 1) / (g(t, n) * f(t, n + 1))
    y = g(t, n) * f(t + 1, n) / (f(t, n) * g(t + 1, n))
    return x, y


def tropical_alt(x: float, y: float, cap_a: float, cap_b: float) -> float:
    """The piecewise-linear update written as two plateau terms."""
    return y + min(0.0, cap_b + x + y) - min(0.0, cap_a + x + y)
