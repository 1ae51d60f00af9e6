"""Pointwise and jet-level evaluation of ``f_1 o f_2 o ... o f_N`` and its limit.

The certified evaluator splits the composition at an index ``m1`` chosen so
that the tail ``f_{m1} o f_{m1+1} o ...`` is evaluated inside the disk where
its truncation error has a closed-form bound. The head ``f_1 o ... o f_{m1-1}``
is a finite composition of entire functions, applied exactly; the tail error is
pushed through it with a Lipschitz constant built from derivative majorants.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from infcomp.convergence import (
    ConvergenceCertificate,
    FactorFamily,
    certify,
    majorant_bound,
    plan_split,
    truncation_error,
)
from infcomp.errors import BudgetExceeded, EvaluationOverflow
from infcomp.series import TruncatedSeries, compose, identity

N_MAX = 10**6
UNIT_ROUNDOFF = 2.0**-53


@dataclass(frozen=True)
class EvalPlan:
    r1: float
    m1: int
    N: int
    head_lipschitz: float
    epsilon: float
    # head handled by derivative-majorant products, no head jet is built
    head_degree: int = 0


@dataclass(frozen=True)
class EvalResult:
    value: complex
    error_bound: float
    plan: Optional[EvalPlan]
    continuation_depth: int = 0
    # part of error_bound that accounts for binary64 rounding
    rounding_bound: float = 0.0


def compose_pointwise(family: FactorFamily, d: int, N: int, z) -> complex:
    """``f_d(f_{d+1}(... f_N(z) ...))``, innermost factor first."""
    if d > N:
        raise ValueError(f"need d <= N, got d={d}, N={N}")
    if d < 1:
        raise ValueError("factors are indexed from 1")
    if family.kind == "explicit":
        N = min(N, len(family.factors))
    w = z
    for n in range(N, d - 1, -1):
        w = family.apply(n, w)
    if not cmath.isfinite(w):
        raise EvaluationOverflow(f"composition overflowed at z = {z!r}")
    return w


def _rounding_factor(family: FactorFamily, n: int) -> float:
    deg = family.factors[n - 1].degree if family.kind == "explicit" else family.exponent
    return (8 * deg + 8) * UNIT_ROUNDOFF


def compose_pointwise_bounded(family: FactorFamily, d: int, N: int, z) -> tuple:
    """:func:`compose_pointwise` plus a bound on the accumulated rounding error.

    Evaluating ``f_n`` at ``w`` in floating point errs by at most
    ``gamma_n * hat(f_n)(|w|)``; errors already present are carried through
    ``f_n`` with the derivative majorant on the disk of radius ``|w| + e``.
    """
    if d > N:
        raise ValueError(f"need d <= N, got d={d}, N={N}")
    if family.kind == "explicit":
        N = min(N, len(family.factors))
    w, e = complex(z), 0.0
    for n in range(N, d - 1, -1):
        a = abs(w)
        e = family.derivative_majorant(n, a + e) * e + _rounding_factor(family, n) * family.majorant(n, a)
        w = family.apply(n, w)
    if not (cmath.isfinite(w) and math.isfinite(e)):
        raise EvaluationOverflow(f"composition overflowed at z = {z!r}")
    return w, e


def head_lipschitz_at(family: FactorFamily, m1: int, radius: float) -> float:
    """Bound on ``|(f_1 o ... o f_{m1-1})'|`` over the disk ``|w| <= radius``.

    Chain rule on majorants: the image of the disk under ``f_n o ... o f_{m1-1}``
    stays within ``rho_n``, where ``rho_{m1-1} = radius`` and
    ``rho_{n-1} = hat(f_n)(rho_n)``.
    """
    L = 1.0
    rho = radius
    for n in range(m1 - 1, 0, -1):
        L *= family.derivative_majorant(n, rho)
        rho = family.majorant(n, rho)
    if not math.isfinite(L):
        raise EvaluationOverflow("cannot certify head: derivative bound overflowed")
    return L


def head_lipschitz(
    family: FactorFamily, m1: int, r1: float, cert: Optional[ConvergenceCertificate] = None
) -> float:
    if m1 < 1:
        raise ValueError("m1 must be >= 1")
    if m1 == 1:
        return 1.0
    cert = cert or certify(family)
    radius = 2.0 * majorant_bound(cert, m1, None, r1)
    return head_lipschitz_at(family, m1, radius)


def _select_N(cert: ConvergenceCertificate, m1: int, L: float, epsilon: float, n_max: int) -> int:
    """Smallest ``N >= m1`` with ``L * truncation_error(cert, m1, N) <= epsilon``."""
    ok = lambda n: L * truncation_error(cert, m1, n) <= epsilon
    if ok(m1):
        return m1
    lo, hi = m1, m1 + 1
    while not ok(hi):
        if hi >= n_max:
            raise BudgetExceeded(
                f"budget exceeded: accuracy {epsilon:g} needs more than {n_max} factors"
            )
        lo, hi = hi, min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def eval_certified(
    family: FactorFamily, z, epsilon: float, n_max: int = N_MAX
) -> EvalResult:
    """Value of the infinite composition at ``z`` with a certified error bound.

    ``error_bound`` bounds the tail truncation pushed through the head and is
    what ``epsilon`` controls. Binary64 rounding in the composition is bounded
    separately in ``rounding_bound``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    z = complex(z)
    cert = certify(family)
    if cert.alpha == 0:
        return EvalResult(z, 0.0, None)
    if z == 0:
        return EvalResult(0j, 0.0, None)
    r1 = max(abs(z), cert.safe_radius)
    m1 = plan_split(cert, r1)
    L = head_lipschitz(family, m1, r1, cert)
    N = _select_N(cert, m1, L, epsilon, n_max)
    value, rnd = compose_pointwise_bounded(family, 1, N, z)
    err = L * truncation_error(cert, m1, N)
    return EvalResult(value, err, EvalPlan(r1, m1, N, L, epsilon), rounding_bound=rnd)


@dataclass(frozen=True)
class SeriesResult:
    jet: TruncatedSeries
    N_used: int
    last_change: float
    epsilon: float


def limit_series_info(
    family: FactorFamily, D: int, epsilon: float, n_max: int = N_MAX
) -> SeriesResult:
    """Compose the factor jets at degree ``D`` until the coefficients settle.

    Settled means two consecutive factors each moved every coefficient by less
    than ``epsilon``; explicit families are composed in full.
    """
    if D < 1:
        raise ValueError("degree must be >= 1")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    certify(family)
    jet = identity(D)
    if family.kind == "explicit":
        for n in range(1, len(family.factors) + 1):
            jet = compose(jet, family.factor(n), D)
        return SeriesResult(jet, len(family.factors), 0.0, epsilon)
    quiet = 0
    for n in range(1, n_max + 1):
        nxt = compose(jet, family.factor(n), D)
        change = max(abs(a - b) for a, b in zip(nxt.coeffs, jet.coeffs))
        jet = nxt
        quiet = quiet + 1 if change < epsilon else 0
        if quiet >= 2:
            return SeriesResult(jet, n, change, epsilon)
    raise BudgetExceeded(f"coefficients did not stabilize within {n_max} factors")


def limit_series(family: FactorFamily, D: int, epsilon: float, n_max: int = N_MAX) -> TruncatedSeries:
    return limit_series_info(family, D, epsilon, n_max).jet
