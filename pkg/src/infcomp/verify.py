"""Identity and bound checks shared by the ``verify`` command and the test suite.

Each check returns a :class:`CheckResult` with the worst residual it saw and
the tolerance it was held to. All sampling is seeded.
"""

from __future__ import annotations

import cmath
import math
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from infcomp.composer import compose_pointwise, eval_certified, limit_series
from infcomp.convergence import FactorFamily, cauchy_diff_bound, certify, majorant_bound
from infcomp.poincare import (
    PoincareSpec,
    functional_residual,
    lemma31_residual,
    oracle_h,
    poincare_eval,
    uniqueness_probe,
)
from infcomp.series import compose, make_series

SEED = 20260
# measured-vs-bound comparisons allow a few ulps of the bound for rounding
ULP_SLACK = 8 * sys.float_info.epsilon


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    detail: str = ""


def disk_points(rng: random.Random, n: int, radius: float) -> list:
    """``n`` points uniform in the closed disk; every fifth one on the boundary."""
    pts = []
    for i in range(n):
        r = radius if i % 5 == 4 else radius * math.sqrt(rng.random())
        pts.append(cmath.rect(r, rng.uniform(-math.pi, math.pi)))
    return pts


def random_explicit_family(
    rng: random.Random, max_factors: int = 10, max_degree: int = 4, total: float = 0.9
) -> FactorFamily:
    """Random normalized polynomials whose constants C_n sum to at most ``total``."""
    k = rng.randint(1, max_factors)
    weights = [rng.random() + 0.05 for _ in range(k)]
    budget = rng.uniform(0.05, total)
    factors = []
    for w in weights:
        C = budget * w / sum(weights)
        deg = rng.randint(2, max_degree)
        lead = rng.randint(2, deg)
        coeffs = [0j, 1 + 0j]
        for r in range(2, deg + 1):
            mag = C ** (r - 1) * (1.0 if r == lead else rng.random())
            coeffs.append(cmath.rect(mag, rng.uniform(-math.pi, math.pi)))
        factors.append(coeffs)
    return FactorFamily.explicit(factors)


def _padd(p, q):
    n = max(len(p), len(q))
    p = list(p) + [0] * (n - len(p))
    q = list(q) + [0] * (n - len(q))
    return [a + b for a, b in zip(p, q)]


def _pmul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def expand_composition(f_coeffs, g_coeffs, degree: int) -> list:
    """Brute force: ``sum_k a_k g**k`` with untruncated products, cut at the end."""
    total, power = [0], [1]
    for a in f_coeffs:
        total = _padd(total, [a * c for c in power])
        power = _pmul(power, g_coeffs)
    total = total[: degree + 1]
    return total + [0] * (degree + 1 - len(total))


def _closed_form_agreement(name, s, index, n_points=100, eps=1e-9, tol=1e-8, seed=SEED, time_limit=None):
    rng = random.Random(seed)
    fam = FactorFamily.geometric(s)
    t0 = time.perf_counter()
    worst = 0.0
    for z in disk_points(rng, n_points, 1.0):
        worst = max(worst, abs(eval_certified(fam, z, eps).value - oracle_h(index, z)))
    elapsed = time.perf_counter() - t0
    ok = worst <= tol and (time_limit is None or elapsed <= time_limit)
    limit = "" if time_limit is None else f", runtime within {time_limit:g}s: {elapsed <= time_limit}"
    return CheckResult(name, ok, worst, tol, f"{n_points} points{limit}")


def check_closed_form_exp(seed=SEED):
    return _closed_form_agreement("closed_form_exp_s=2", 2, 1, seed=seed, time_limit=2.0)


def check_closed_form_sin(seed=SEED):
    return _closed_form_agreement("closed_form_sin_s=-2", -2, 2, seed=seed)


def check_closed_form_sinh(seed=SEED):
    return _closed_form_agreement("closed_form_cosh_s=4", 4, 3, seed=seed)


def check_limit_series(D=12, eps=1e-13, tol=1e-10):
    jet = limit_series(FactorFamily.geometric(2), D, eps)
    ref = [0.0, 1.0]
    for k in range(1, D):
        ref.append(ref[-1] * 2.0 / (k + 1))
    worst = max(abs(jet[k] - ref[k]) for k in range(1, D + 1))
    return CheckResult("limit_series_s=2_D=12", worst <= tol, worst, tol)


def check_cauchy_bound(n_families=20, n_points=50, seed=SEED):
    rng = random.Random(seed)
    violations, worst_ratio = 0, 0.0
    for _ in range(n_families):
        fam = random_explicit_family(rng)
        cert = certify(fam)
        pts = disk_points(rng, n_points, cert.safe_radius)
        for z in pts:
            vals = [None] + [compose_pointwise(fam, 1, N, z) for N in range(1, 11)]
            for M in range(1, 10):
                for N in range(M + 1, 11):
                    bound = cauchy_diff_bound(cert, 1, M, N)
                    diff = abs(vals[N] - vals[M])
                    if diff > bound * (1 + ULP_SLACK):
                        violations += 1
                    if bound > 0:
                        worst_ratio = max(worst_ratio, diff / bound)
    return CheckResult(
        "cauchy_diff_bound_soundness", violations == 0, worst_ratio, 1.0, f"{violations} violations"
    )


def check_majorant_bound(n_families=20, n_points=50, seed=SEED):
    rng = random.Random(seed)
    violations, worst_ratio = 0, 0.0
    for _ in range(n_families):
        fam = random_explicit_family(rng)
        cert = certify(fam)
        K = len(fam.factors)
        for d in range(1, K + 1):
            for m in range(d, K + 1):
                S = cert.partial_sum(d, m)
                radius = 0.999 / S
                for z in disk_points(rng, n_points, radius):
                    r = abs(z)
                    bound = majorant_bound(cert, d, m, r)
                    w = compose_pointwise(fam, d, m, z)
                    slack = ULP_SLACK * bound
                    if abs(w) > bound + slack or abs(w - z) > bound - r + slack:
                        violations += 1
                    if bound > 0:
                        worst_ratio = max(worst_ratio, abs(w) / bound)
    return CheckResult(
        "majorant_bound_soundness", violations == 0, worst_ratio, 1.0, f"{violations} violations"
    )


def check_functional_equation(n_points=50, eps=1e-10, tol=1e-7, seed=SEED):
    worst = 0.0
    for s in (2, -2, 4, 1.5 + 1.5j):
        rng = random.Random(seed)
        spec = PoincareSpec(s)
        for z in disk_points(rng, n_points, 2.0):
            worst = max(worst, functional_residual(spec, z, eps))
    return CheckResult("functional_equation_residual", worst <= tol, worst, tol)


def check_continuation(tol=1e-4):
    res = poincare_eval(PoincareSpec(2), 3, 1e-6)
    exact = math.expm1(6.0) / 2
    rel = abs(res.value - exact) / exact
    ok = rel <= tol and res.continuation_depth >= 3
    return CheckResult("continuation_s=2_z=3", ok, rel, tol, f"k = {res.continuation_depth}")


def check_closed_form_identities(n_points=100, tol=1e-12, seed=SEED):
    rng = random.Random(seed)
    pts = disk_points(rng, n_points, 1.0)
    worst = max(lemma31_residual(i, z) for i in (1, 2, 3) for z in pts)
    return CheckResult("closed_form_functional_identities", worst <= tol, worst, tol)


def check_composition_jets(n_cases=50, degree=6, tol=1e-12, seed=SEED):
    rng = random.Random(seed)
    worst = 0.0
    exact_ok = True
    for _ in range(n_cases):
        fi = [0, 1] + [rng.randint(-5, 5) for _ in range(rng.randint(0, degree - 1))]
        gi = [0, 1] + [rng.randint(-5, 5) for _ in range(rng.randint(0, degree - 1))]
        f = make_series([Fraction(a) for a in fi])
        g = make_series([Fraction(a) for a in gi])
        if list(compose(f, g, degree).coeffs) != expand_composition(f.coeffs, g.coeffs, degree):
            exact_ok = False
        fc = [0j, 1 + 0j] + [cmath.rect(rng.random(), rng.uniform(-math.pi, math.pi)) for _ in range(degree - 1)]
        gc = [0j, 1 + 0j] + [cmath.rect(rng.random(), rng.uniform(-math.pi, math.pi)) for _ in range(degree - 1)]
        got = compose(make_series(fc), make_series(gc), degree).coeffs
        to_q = lambda c: (Fraction(c.real), Fraction(c.imag))
        # exact oracle on the (exactly representable) float inputs, split into re/im parts
        ref = _expand_complex_exact([to_q(c) for c in fc], [to_q(c) for c in gc], degree)
        for a, (re, im) in zip(got, ref):
            worst = max(worst, abs(a - complex(float(re), float(im))))
    ok = exact_ok and worst <= tol
    return CheckResult("composition_jet_oracle", ok, worst, tol, "exact rational match" if exact_ok else "rational mismatch")


class _GaussQ:
    """Exact complex rational, just enough arithmetic for the brute-force oracle."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=Fraction(0)):
        self.re, self.im = Fraction(re), Fraction(im)

    def __add__(self, o):
        o = o if isinstance(o, _GaussQ) else _GaussQ(o)
        return _GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __mul__(self, o):
        o = o if isinstance(o, _GaussQ) else _GaussQ(o)
        return _GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__


def _expand_complex_exact(f_pairs, g_pairs, degree):
    f = [_GaussQ(*p) for p in f_pairs]
    g = [_GaussQ(*p) for p in g_pairs]
    out = expand_composition(f, g, degree)
    return [(c.re, c.im) if isinstance(c, _GaussQ) else (Fraction(c), Fraction(0)) for c in out]


def check_uniqueness_probe(z=0.5, tol=1e-6):
    spec = PoincareSpec(2)
    ref = oracle_h(1, z)
    errs = [abs(uniqueness_probe(spec, N, z, inner="identity") - ref) for N in (5, 10, 20)]
    exact = max(abs(uniqueness_probe(spec, N, z, inner="oracle") - ref) for N in (5, 10, 20, 40))
    ok = errs[0] > errs[1] > errs[2] and errs[2] <= tol and exact <= 1e-12
    detail = "errors N=5,10,20: " + ", ".join(f"{e:.3e}" for e in errs) + f"; oracle inner {exact:.1e}"
    return CheckResult("uniqueness_probe_convergence", ok, errs[2], tol, detail)


CHECKS = (
    check_closed_form_exp,
    check_closed_form_sin,
    check_closed_form_sinh,
    check_limit_series,
    check_cauchy_bound,
    check_majorant_bound,
    check_functional_equation,
    check_continuation,
    check_closed_form_identities,
    check_composition_jets,
    check_uniqueness_probe,
)


def run_all() -> list:
    return [check() for check in CHECKS]
