"""Factor families, the constants C_n, and the certificates built from them.

A family ``f_1, f_2, ...`` of normalized factors ``z + sum_r c_{n,r} z**r``
converges under composition when ``sum_n C_n`` is finite, with
``C_n = max_r |c_{n,r}|**(1/(r-1))``. :func:`certify` turns a family into a
:class:`ConvergenceCertificate` holding upper bounds on that sum and on its
tails ``alpha_m = sum_{n>=m} C_n``; every runtime error bound in the package is
derived from these numbers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from infcomp.errors import CertificationError, OutsideCertifiedDisk
from infcomp.series import TruncatedSeries, identity, make_series

KINDS = ("explicit", "geometric", "power_law")

# power-law partial sums longer than this fall back to the tail bound
_DIRECT_SUM_LIMIT = 100_000


def _abs_lower(s: complex) -> float:
    """``|s|`` rounded towards zero, so that ``1/(|s|-1)`` is never underestimated."""
    a = abs(s)
    if Fraction(a) ** 2 > Fraction(s.real) ** 2 + Fraction(s.imag) ** 2:
        a = math.nextafter(a, 0.0)
    return a


def _geometric_coeff(s: complex, n: int):
    if s.imag == 0:
        return s.real ** -n
    if n <= 100:
        return s ** -n
    return cmath.rect(abs(s) ** -n, -n * cmath.phase(s))


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True)
class FactorFamily:
    """The sequence of factors ``f_1, f_2, ...``.

    ``geometric``: ``f_n = z + z**r0 / s**n`` with ``|s| > 1``.
    ``power_law``: ``f_n = z + z**r0 / n**p``.
    ``explicit``: the given jets, then the identity beyond the list.
    """

    kind: str
    s: complex = 0j
    exponent: int = 2
    p: float = 0.0
    factors: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind != "explicit" and (int(self.exponent) != self.exponent or self.exponent < 2):
            raise ValueError("exponent r0 must be an integer >= 2")
        if self.kind == "geometric" and not abs(self.s) > 1:
            raise ValueError(f"geometric family needs |s| > 1, got |s| = {abs(self.s)}")
        if self.kind == "power_law" and not self.p > 0:
            raise ValueError("power_law family needs p > 0")
        if self.kind == "explicit":
            for i, f in enumerate(self.factors):
                if not f.is_normalized():
                    raise ValueError(f"factor {i + 1} is not of the form z + O(z^2)")

    @classmethod
    def geometric(cls, s, r0: int = 2) -> FactorFamily:
        return cls("geometric", s=complex(s), exponent=int(r0))

    @classmethod
    def power_law(cls, p: float, r0: int = 2) -> FactorFamily:
        return cls("power_law", p=float(p), exponent=int(r0))

    @classmethod
    def explicit(cls, factors: Sequence) -> FactorFamily:
        jets = tuple(f if isinstance(f, TruncatedSeries) else make_series(f) for f in factors)
        return cls("explicit", factors=jets)

    @property
    def length(self) -> Optional[int]:
        """Number of non-trivial factors for explicit families, else ``None``."""
        return len(self.factors) if self.kind == "explicit" else None

    def coefficient(self, n: int):
        """The single nonlinear coefficient of a closed-form factor."""
        if self.kind == "geometric":
            return _geometric_coeff(self.s, n)
        return float(n) ** -self.p

    def factor(self, n: int) -> TruncatedSeries:
        if n < 1:
            raise ValueError("factors are indexed from 1")
        if self.kind == "explicit":
            return self.factors[n - 1] if n <= len(self.factors) else identity()
        c = [0, 1] + [0] * (self.exponent - 1)
        c[self.exponent] = self.coefficient(n)
        return make_series(c)

    def apply(self, n: int, w):
        """``f_n(w)``; closed-form kinds skip building the jet."""
        if self.kind == "explicit":
            if n > len(self.factors):
                return w
            return self.factors[n - 1](w)
        return w + self.coefficient(n) * w ** self.exponent

    def majorant(self, n: int, rho: float) -> float:
        """``hat(f_n)(rho)``."""
        if self.kind == "explicit":
            if n > len(self.factors):
                return rho
            return float(sum(abs(a) * rho ** k for k, a in enumerate(self.factors[n - 1].coeffs)))
        return rho + abs(self.coefficient(n)) * rho ** self.exponent

    def derivative_majorant(self, n: int, rho: float) -> float:
        """``hat(f_n)'(rho)``, an upper bound for ``|f_n'|`` on ``|w| <= rho``."""
        if self.kind == "explicit":
            if n > len(self.factors):
                return 1.0
            cs = self.factors[n - 1].coeffs
            return float(sum(k * abs(a) * rho ** (k - 1) for k, a in enumerate(cs) if k > 0))
        r0 = self.exponent
        return 1.0 + r0 * abs(self.coefficient(n)) * rho ** (r0 - 1)

    def to_dict(self) -> dict:
        if self.kind == "geometric":
            return {"kind": "geometric", "s": [self.s.real, self.s.imag], "r0": self.exponent}
        if self.kind == "power_law":
            return {"kind": "power_law", "p": self.p, "r0": self.exponent}
        return {
            "kind": "explicit",
            "factors": [[[complex(a).real, complex(a).imag] for a in f.coeffs] for f in self.factors],
        }

    @classmethod
    def from_dict(cls, d: dict) -> FactorFamily:
        kind = d.get("kind")
        if kind == "geometric":
            return cls.geometric(_as_complex(d["s"]), int(d.get("r0", 2)))
        if kind == "power_law":
            return cls.power_law(float(d["p"]), int(d.get("r0", 2)))
        if kind == "explicit":
            return cls.explicit([[_as_complex(a) for a in f] for f in d["factors"]])
        raise ValueError(f"unknown family kind {kind!r}")


def cn_of(f: TruncatedSeries) -> float:
    """``max_{r>=2} |c_r|**(1/(r-1))`` over the jet's coefficients."""
    if not f.is_normalized():
        raise ValueError("C_n is defined for factors of the form z + O(z^2)")
    best = 0.0
    for r in range(2, f.degree + 1):
        a = abs(f.coeffs[r])
        if a:
            best = max(best, float(a) ** (1.0 / (r - 1)))
    return best


@dataclass(frozen=True)
class ConvergenceCertificate:
    family: FactorFamily
    alpha: float
    tail_formula: str
    # explicit families only
    cn_list: tuple = ()
    suffix: tuple = ()
    # closed-form families only
    ratio: float = 0.0
    base: float = 0.0
    q: float = 0.0

    @property
    def safe_radius(self) -> float:
        return math.inf if self.alpha == 0 else 1.0 / (4.0 * self.alpha)

    def cn(self, n: int) -> float:
        fam = self.family
        if fam.kind == "explicit":
            return self.cn_list[n - 1] if n <= len(self.cn_list) else 0.0
        if fam.kind == "geometric":
            if fam.exponent == 2:
                return self.base ** -n
            return self.ratio ** n
        return float(n) ** -self.q

    def alpha_from(self, m: int) -> float:
        """Upper bound on ``sum_{n>=m} C_n``."""
        if m < 1:
            raise ValueError("tails start at m >= 1")
        fam = self.family
        if fam.kind == "explicit":
            return self.suffix[m - 1] if m <= len(self.suffix) else 0.0
        if fam.kind == "geometric":
            if fam.exponent == 2:
                a = self.base
                return a ** (1 - m) / (a - 1.0)
            t = self.ratio
            return t ** m / (1.0 - t)
        q = self.q
        return m ** -q + m ** (1.0 - q) / (q - 1.0)

    def partial_sum(self, d: int, m: Optional[int] = None) -> float:
        """Upper bound on ``sum_{n=d}^{m} C_n``; ``m=None`` means to infinity."""
        if m is None:
            return self.alpha_from(d)
        if m < d:
            return 0.0
        fam = self.family
        if fam.kind == "explicit":
            return math.fsum(self.cn_list[d - 1 : m])
        if fam.kind == "geometric":
            t = self.ratio
            return t ** d * (1.0 - t ** (m - d + 1)) / (1.0 - t)
        if m - d < _DIRECT_SUM_LIMIT:
            return math.fsum(float(n) ** -self.q for n in range(d, m + 1))
        return self.alpha_from(d)


def certify(family: FactorFamily) -> ConvergenceCertificate:
    if family.kind == "explicit":
        cns = tuple(cn_of(f) for f in family.factors)
        suffix = tuple(math.fsum(cns[i:]) for i in range(len(cns)))
        alpha = suffix[0] if suffix else 0.0
        return ConvergenceCertificate(
            family, alpha, "finite sum; zero tail beyond the last factor", cn_list=cns, suffix=suffix
        )
    if family.kind == "geometric":
        a = _abs_lower(family.s)
        r0 = family.exponent
        if r0 == 2:
            t = 1.0 / a
            if t * a != 1.0:
                t = math.nextafter(t, math.inf)
            alpha = 1.0 / (a - 1.0)
            formula = "alpha_m = |s|^(1-m) / (|s| - 1)"
        else:
            t = math.nextafter(a ** (-1.0 / (r0 - 1)), math.inf)
            alpha = t / (1.0 - t)
            formula = f"alpha_m = t^m / (1 - t), t = |s|^(-1/{r0 - 1})"
        return ConvergenceCertificate(family, alpha, formula, ratio=t, base=a)
    q = family.p / (family.exponent - 1)
    if q <= 1:
        raise CertificationError(
            f"convergence hypothesis violated: sum n^(-{q:g}) diverges (need p/(r0-1) > 1)"
        )
    return ConvergenceCertificate(
        family, 1.0 + 1.0 / (q - 1.0), f"alpha_m <= m^-q + m^(1-q)/(q-1), q = {q:g}", q=q
    )


def majorant_bound(cert: ConvergenceCertificate, d: int, m: Optional[int], r: float) -> float:
    """Bound ``r / (1 - r * sum_{n=d}^{m} C_n)`` on ``|f_d o ... o f_m (z)|`` for ``|z| = r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    if m is not None and m < d:
        raise ValueError("need d <= m")
    s = cert.partial_sum(d, m)
    if r * s >= 1.0:
        raise OutsideCertifiedDisk(f"outside certified disk: r = {r} >= 1/{s}")
    return r / (1.0 - r * s)


def cauchy_diff_bound(cert: ConvergenceCertificate, start: int, M: int, N: int) -> float:
    """Bound on ``|F_N(z) - F_M(z)|`` for ``|z| <= 1/(4 alpha_start)``, ``F_K = f_start o ... o f_K``."""
    if start < 1:
        raise ValueError("start must be >= 1")
    if not N > M >= start:
        raise ValueError(f"need N > M >= start, got start={start}, M={M}, N={N}")
    s = cert.partial_sum(M + 1, N)
    if s == 0:
        return 0.0
    return s / cert.alpha_from(start) ** 2


def truncation_error(cert: ConvergenceCertificate, start: int, M: int) -> float:
    """The ``N -> infinity`` limit of :func:`cauchy_diff_bound`."""
    if start < 1 or M < start:
        raise ValueError(f"need M >= start >= 1, got start={start}, M={M}")
    tail = cert.alpha_from(M + 1)
    if tail == 0:
        return 0.0
    return tail / cert.alpha_from(start) ** 2


def plan_split(cert: ConvergenceCertificate, r1: float) -> int:
    """Smallest ``m1 >= 1`` with ``alpha_{m1} <= 1/(4 r1)``."""
    if not (r1 > 0 and math.isfinite(r1)):
        raise ValueError(f"working radius must be positive and finite, got {r1}")
    target = 1.0 / (4.0 * r1)
    for m in range(1, 65):
        if cert.alpha_from(m) <= target:
            return m
    lo, hi = 64, 128
    while cert.alpha_from(hi) > target:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if cert.alpha_from(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi
