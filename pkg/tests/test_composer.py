import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infcomp import (
    BudgetExceeded,
    CertificationError,
    FactorFamily,
    compose_pointwise,
    eval_certified,
    head_lipschitz,
    limit_series,
)
from infcomp.composer import compose_pointwise_bounded, head_lipschitz_at, limit_series_info
from infcomp.verify import disk_points

GEO2 = FactorFamily.geometric(2)

# closed forms of the three classical limits, written out independently
CLOSED = {
    2: lambda z: (cmath.exp(2 * z) - 1) / 2,
    -2: lambda z: cmath.sin(2 * z / math.sqrt(3) + math.pi / 6) - 0.5,
    4: lambda z: (cmath.cosh(2 * cmath.sqrt(z)) - 1) / 2,
}


def test_compose_pointwise_examples():
    assert compose_pointwise(GEO2, 1, 1, 1) == 1.5
    assert compose_pointwise(GEO2, 1, 2, 1) == 1.25 + 1.25**2 / 2 == 2.03125
    assert compose_pointwise(GEO2, 1, 50, 0) == 0
    with pytest.raises(ValueError):
        compose_pointwise(GEO2, 3, 2, 1)


def test_compose_pointwise_order():
    fam = FactorFamily.explicit([[0, 1, 1], [0, 1, 0, 2]])
    z = Fraction(3, 10)
    inner = z + 2 * z**3
    assert compose_pointwise(fam, 1, 2, z) == inner + inner**2
    assert compose_pointwise(fam, 2, 2, z) == inner
    assert compose_pointwise(fam, 1, 9, z) == compose_pointwise(fam, 1, 2, z)


def test_eval_certified_zero_point():
    res = eval_certified(GEO2, 0, 1e-3)
    assert res.value == 0 and res.error_bound == 0


def test_eval_certified_degenerate_family():
    res = eval_certified(FactorFamily.explicit([[0, 1], [0, 1, 0]]), 2 + 1j, 1e-9)
    assert res.value == 2 + 1j and res.error_bound == 0


@pytest.mark.parametrize(
    "s, z, expected",
    [(2, 1, (math.e**2 - 1) / 2), (4, 1, math.sinh(1) ** 2)],
)
def test_eval_certified_examples(s, z, expected):
    res = eval_certified(FactorFamily.geometric(s), z, 1e-9)
    assert abs(res.value - expected) <= res.error_bound
    assert res.error_bound <= 1e-9
    assert res.plan.N >= res.plan.m1
    assert res.plan.r1 == max(abs(z), 1 / (4 * (1 / (abs(s) - 1))))


def test_eval_certified_budget_and_divergence():
    with pytest.raises(BudgetExceeded):
        eval_certified(FactorFamily.power_law(3, 3), 0.5, 1e-12, n_max=1000)
    with pytest.raises(CertificationError):
        eval_certified(FactorFamily.power_law(1, 2), 0.5, 1e-3)


def test_eval_certified_power_law_matches_long_composition():
    fam = FactorFamily.power_law(6, 3)
    res = eval_certified(fam, 0.4, 1e-4)
    assert res.plan.N < 50_000
    ref = compose_pointwise(fam, 1, 400_000, 0.4)
    assert abs(res.value - ref) <= res.error_bound


def test_eval_certified_explicit_is_exact_composition():
    fam = FactorFamily.explicit([[0, 1, 0.3], [0, 1, -0.2j, 0.1], [0, 1, 0, 0, 0.05]])
    for z in (0.1, 2.0 + 1j, -7.0):
        res = eval_certified(fam, z, 1e-12)
        assert res.value == compose_pointwise(fam, 1, 3, z)
        assert res.error_bound == 0


@pytest.mark.parametrize("s", [2, -2, 4])
def test_certified_error_is_sound(s):
    rng = random.Random(7 + s)
    fam = FactorFamily.geometric(s)
    for z in disk_points(rng, 200, 2.0):
        res = eval_certified(fam, z, 1e-9)
        assert abs(res.value - CLOSED[s](z)) <= res.error_bound + res.rounding_bound
        assert abs(res.value - CLOSED[s](z)) <= res.error_bound


@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_monotone_refinement(z):
    bounds = [eval_certified(GEO2, z, eps).error_bound for eps in (1e-2, 1e-4, 1e-6, 1e-9, 1e-12)]
    assert all(a >= b for a, b in zip(bounds, bounds[1:]))
    assert all(b <= eps for b, eps in zip(bounds, (1e-2, 1e-4, 1e-6, 1e-9, 1e-12)))


def test_eval_certified_n_is_minimal():
    res = eval_certified(GEO2, 1.0, 1e-9)
    from infcomp.convergence import certify, truncation_error

    cert = certify(GEO2)
    p = res.plan
    assert p.head_lipschitz * truncation_error(cert, p.m1, p.N) <= 1e-9
    assert p.N == p.m1 or p.head_lipschitz * truncation_error(cert, p.m1, p.N - 1) > 1e-9


def test_head_lipschitz_examples():
    assert head_lipschitz(GEO2, 1, 0.25) == 1.0
    fam = FactorFamily.explicit([[0, 1, 0.5], [0, 1, 0.25]])
    assert head_lipschitz_at(fam, 2, 0.5) == 1.5
    R = 0.25
    R_image = R + 0.25 * R**2
    assert head_lipschitz_at(fam, 3, R) == pytest.approx((1 + 2 * 0.5 * R_image) * (1 + 2 * 0.25 * R))


@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_head_lipschitz_bounds_finite_difference(z):
    # |H(w1) - H(w2)| <= L |w1 - w2| for the head of the s=2 family on its disk
    from infcomp.convergence import certify, majorant_bound

    cert = certify(GEO2)
    r1 = max(abs(z), cert.safe_radius)
    m1 = 3
    L = head_lipschitz(GEO2, m1, r1)
    R = majorant_bound(cert, m1, None, r1)
    w1 = cmath.rect(R, cmath.phase(z) if z else 0.0)
    w2 = w1 * (1 - 1e-6)
    H = lambda w: compose_pointwise(GEO2, 1, m1 - 1, w)
    assert abs(H(w1) - H(w2)) <= L * abs(w1 - w2) * (1 + 1e-9)


def test_rounding_bound_covers_observed_error():
    fam = FactorFamily.geometric(2)
    z = 0.9 + 0.3j
    val, rnd = compose_pointwise_bounded(fam, 1, 60, z)
    assert val == compose_pointwise(fam, 1, 60, z)
    assert 0 < rnd < 1e-12


def test_limit_series_examples():
    jet = limit_series(GEO2, 4, 1e-13)
    assert [complex(c) for c in jet.coeffs] == pytest.approx([0, 1, 1, 2 / 3, 1 / 3], abs=1e-12)
    jet4 = limit_series(FactorFamily.geometric(4), 3, 1e-13)
    assert [complex(c) for c in jet4.coeffs] == pytest.approx([0, 1, 1 / 3, 2 / 45], abs=1e-12)
    assert limit_series(FactorFamily.geometric(1.5 + 1.5j), 1, 1e-9).coeffs == (0, 1)


def test_limit_series_normalized_and_explicit():
    jet = limit_series(FactorFamily.geometric(-2), 6, 1e-12)
    assert jet.is_normalized()
    fam = FactorFamily.explicit([[0, 1, 1], [0, 1], [0, 1, 1]])
    info = limit_series_info(fam, 3, 1e-9)
    assert info.N_used == 3
    # (z + z^2) o (z + z^2) = z + 2z^2 + 2z^3 + z^4
    assert info.jet.coeffs[:4] == (0, 1, 2, 2)


def test_limit_series_high_exponent_beyond_degree():
    jet = limit_series(FactorFamily.geometric(3, 5), 3, 1e-12)
    assert jet.coeffs == (0, 1, 0, 0)


def test_limit_series_budget():
    with pytest.raises(BudgetExceeded):
        limit_series(FactorFamily.power_law(3, 2), 4, 1e-15, n_max=50)


@pytest.mark.parametrize("s", [2, -2, 1.5 + 1.5j])
def test_limit_series_matches_contour_coefficients(s):
    # trapezoidal Cauchy formula on a small circle, values from eval_certified
    fam = FactorFamily.geometric(s)
    jet = limit_series(fam, 8, 1e-14)
    rho, M = 0.2, 64
    vals = [eval_certified(fam, cmath.rect(rho, 2 * math.pi * j / M), 1e-14).value for j in range(M)]
    for k in range(1, 7):
        ak = sum(v * cmath.exp(-2j * math.pi * j * k / M) for j, v in enumerate(vals)) / M / rho**k
        assert abs(ak - jet[k]) <= 1e-6
