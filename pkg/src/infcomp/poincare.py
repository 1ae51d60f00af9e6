"""Poincare functions ``F(sz) = s F(z) + s F(z)**2`` as infinite compositions.

``F_s = lim f_1 o ... o f_N`` with ``f_n(z) = z + z**2 / s**n``. Inside the base
disk the composition is evaluated directly; further out the point is pulled
back by ``s**k`` and pushed forward ``k`` times with ``u -> s(u + u**2)``.

For ``s = 2, -2, 4`` the limit has closed forms (``oracle_h``), used as
independent oracles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from infcomp.composer import N_MAX, UNIT_ROUNDOFF, EvalResult, compose_pointwise, eval_certified
from infcomp.convergence import FactorFamily, certify
from infcomp.errors import BudgetExceeded, EvaluationOverflow

SIGMA = {1: 2, 2: -2, 3: 4}
_ORACLE_FOR_S = {2: 1, -2: 2, 4: 3}
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class PoincareSpec:
    s: complex
    base_radius: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        if not abs(self.s) > 1:
            raise ValueError(f"Poincare functions need |s| > 1, got |s| = {abs(self.s)}")
        safe = certify(self.family).safe_radius
        if self.base_radius is None:
            object.__setattr__(self, "base_radius", safe)
        elif not 0 < self.base_radius <= safe:
            raise ValueError(f"base radius must lie in (0, {safe}]")

    @property
    def family(self) -> FactorFamily:
        return FactorFamily.geometric(self.s, 2)

    def step(self, u: complex) -> complex:
        return self.s * (u + u * u)


def _continuation_depth(spec: PoincareSpec, z: complex) -> int:
    a = abs(spec.s)
    k = max(0, math.ceil(math.log(abs(z) / spec.base_radius) / math.log(a)))
    while abs(z) / a ** k > spec.base_radius:
        k += 1
    return k


def _push_forward(spec: PoincareSpec, u: complex, err: float, rnd: float, k: int):
    """Apply ``u -> s(u + u**2)`` ``k`` times, carrying truncation and rounding bounds.

    A total perturbation ``d`` of ``u`` becomes ``s d (1 + 2u + d)``; each part
    of ``d`` is scaled by the same factor, and the step itself adds rounding.
    """
    a = abs(spec.s)
    gamma = 16 * UNIT_ROUNDOFF
    for _ in range(k):
        au = abs(u)
        lip = a * (1.0 + 2.0 * au + err + rnd)
        err, rnd = lip * err, lip * rnd + gamma * a * (au + au * au)
        u = spec.step(u)
        if not (cmath.isfinite(u) and math.isfinite(err) and math.isfinite(rnd)):
            raise EvaluationOverflow("overflow during functional-equation continuation")
    return u, err, rnd


def poincare_eval(spec: PoincareSpec, z, epsilon: float, n_max: int = N_MAX) -> EvalResult:
    """``F_s(z)``; ``error_bound <= epsilon`` bounds the truncation part of the error."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    z = complex(z)
    if abs(z) <= spec.base_radius:
        return eval_certified(spec.family, z, epsilon, n_max)
    k = _continuation_depth(spec, z)
    base = z
    for _ in range(k):
        base /= spec.s
    # rounding in z / s**k moves the argument; |F'| <= 4 on the base disk (Cauchy estimate)
    arg_err = 4.0 * 2 * k * UNIT_ROUNDOFF * abs(base)
    eps_base = epsilon
    for _ in range(200):
        res = eval_certified(spec.family, base, eps_base, n_max)
        u, err, rnd = _push_forward(spec, res.value, res.error_bound, res.rounding_bound + arg_err, k)
        if err <= epsilon:
            return EvalResult(u, err, res.plan, continuation_depth=k, rounding_bound=rnd)
        eps_base *= min(0.5, 0.5 * epsilon / err)
    raise BudgetExceeded(f"error budget {epsilon:g} not reachable after {k} continuation steps")


def functional_residual(spec: PoincareSpec, z, epsilon: float) -> float:
    z = complex(z)
    outer = poincare_eval(spec, spec.s * z, epsilon).value
    inner = poincare_eval(spec, z, epsilon).value
    return abs(outer - spec.s * inner - spec.s * inner * inner)


def _expm1(w: complex) -> complex:
    # exp(x + iy) - 1 without cancellation near 0
    x, y = w.real, w.imag
    half = math.sin(0.5 * y)
    return complex(math.expm1(x) * math.cos(y) - 2.0 * half * half, math.exp(x) * math.sin(y))


def oracle_h(index: int, z) -> complex:
    """Closed forms of ``F_2``, ``F_{-2}`` and ``F_4``.

    ``h_3 = sinh(sqrt z)**2 = (cosh(2 sqrt z) - 1)/2`` is even in ``sqrt z``,
    so the principal branch is as good as any.
    """
    z = complex(z)
    if index == 1:
        return 0.5 * _expm1(2.0 * z)
    if index == 2:
        # sin(a + pi/6) - sin(pi/6) = 2 cos(a/2 + pi/6) sin(a/2)
        a = 2.0 * z / _SQRT3
        return 2.0 * cmath.cos(0.5 * a + math.pi / 6) * cmath.sin(0.5 * a)
    if index == 3:
        return cmath.sinh(cmath.sqrt(z)) ** 2
    raise ValueError(f"oracle index must be 1, 2 or 3, got {index}")


def lemma31_residual(index: int, z) -> float:
    z = complex(z)
    sigma = SIGMA.get(index)
    if sigma is None:
        raise ValueError(f"oracle index must be 1, 2 or 3, got {index}")
    h = oracle_h(index, z)
    return abs(oracle_h(index, sigma * z) - sigma * (h + h * h))


def oracle_index_for(s: complex) -> Optional[int]:
    s = complex(s)
    if s.imag != 0:
        return None
    return _ORACLE_FOR_S.get(s.real)


def uniqueness_probe(spec: PoincareSpec, N: int, z, inner: str = "auto") -> complex:
    """``(f_1 o ... o f_N)(s**N f(z / s**N))`` for an inner function ``f``.

    ``inner="oracle"`` uses the closed form matching ``s`` (exact identity for
    every ``N``); ``inner="identity"`` uses ``f(w) = w``, which converges to
    ``F_s(z)`` geometrically in ``N``. ``"auto"`` picks the oracle when one
    exists for ``s`` and the identity otherwise.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    z = complex(z)
    if inner == "auto":
        inner = "oracle" if oracle_index_for(spec.s) else "identity"
    if inner == "oracle":
        idx = oracle_index_for(spec.s)
        if idx is None:
            raise ValueError(f"no closed-form oracle for s = {spec.s}")
        w = z
        for _ in range(N):
            w /= spec.s
        q = oracle_h(idx, w)
        for _ in range(N):
            q *= spec.s
    elif inner == "identity":
        q = z
    else:
        raise ValueError(f"inner must be 'oracle' or 'identity', got {inner!r}")
    return compose_pointwise(spec.family, 1, N, q)
