"""Truncated power series (jets at 0) and the modulus majorant.

Coefficients are stored verbatim, so the same routines run on complex floats
and on exact ``Fraction``/``int`` inputs. Every operation that could raise the
degree takes an explicit ``out_degree`` and truncates there.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence


@dataclass(frozen=True)
class TruncatedSeries:
    """Jet ``a_0 + a_1 z + ... + a_D z**D``; ``coeffs[k]`` multiplies ``z**k``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, z):
        return evaluate(self, z)

    def is_normalized(self) -> bool:
        return self.degree >= 1 and self.coeffs[0] == 0 and self.coeffs[1] == 1

    def is_majorant(self) -> bool:
        return all(_is_nonneg_real(a) for a in self.coeffs)

    def truncate(self, degree: int) -> TruncatedSeries:
        c = self.coeffs[: degree + 1]
        return TruncatedSeries(c + (0,) * (degree + 1 - len(c)))


def _is_nonneg_real(a) -> bool:
    if isinstance(a, complex):
        return a.imag == 0 and a.real >= 0
    return a >= 0


def make_series(coeffs: Sequence[Number]) -> TruncatedSeries:
    if len(coeffs) == 0:
        raise ValueError("a series needs at least one coefficient")
    return TruncatedSeries(tuple(coeffs))


def identity(degree: int = 1) -> TruncatedSeries:
    return TruncatedSeries((0, 1) + (0,) * (degree - 1))


def hat(f: TruncatedSeries) -> TruncatedSeries:
    """Replace every coefficient by its modulus."""
    return TruncatedSeries(tuple(abs(a) for a in f.coeffs))


def _mul_trunc(p: list, q: Sequence, n: int) -> list:
    """Product of two coefficient lists, truncated to degree ``n``."""
    out = [0] * (n + 1)
    for i, a in enumerate(p[: n + 1]):
        if a == 0:
            continue
        for j in range(min(len(q), n + 1 - i)):
            out[i + j] += a * q[j]
    return out


def compose(f: TruncatedSeries, g: TruncatedSeries, out_degree: int) -> TruncatedSeries:
    """Degree-``out_degree`` jet of ``f(g(z))``.

    Horner on series: ``acc = a_D``; ``acc = acc*g + a_k`` for ``k = D-1..0``,
    every product truncated. Since ``g(0) = 0`` the result is exact up to
    ``out_degree``.
    """
    if out_degree < 1:
        raise ValueError("out_degree must be >= 1")
    if g.coeffs[0] != 0:
        raise ValueError("inner series must vanish at 0 (g(0) = 0)")
    top = min(f.degree, out_degree)
    gc = g.coeffs[: out_degree + 1]
    acc = [f.coeffs[top]]
    for k in range(top - 1, -1, -1):
        acc = _mul_trunc(acc, gc, out_degree)
        acc[0] += f.coeffs[k]
    acc = acc + [0] * (out_degree + 1 - len(acc))
    return TruncatedSeries(tuple(acc))


def evaluate(f: TruncatedSeries, z):
    """Horner evaluation, highest coefficient first."""
    acc = f.coeffs[-1]
    for a in reversed(f.coeffs[:-1]):
        acc = acc * z + a
    return acc


def eval_majorant(f: TruncatedSeries, r):
    """``hat(f)`` evaluated at the radius ``r >= 0``."""
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r}")
    return evaluate(hat(f), r)


def derivative(f: TruncatedSeries) -> TruncatedSeries:
    if f.degree == 0:
        return TruncatedSeries((0,))
    return TruncatedSeries(tuple(k * a for k, a in enumerate(f.coeffs) if k > 0))
