import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infcomp import (
    CertificationError,
    FactorFamily,
    OutsideCertifiedDisk,
    cauchy_diff_bound,
    certify,
    cn_of,
    compose_pointwise,
    majorant_bound,
    make_series,
    plan_split,
    truncation_error,
)
from infcomp.verify import disk_points, random_explicit_family


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_cn_geometric_factor(n):
    assert cn_of(make_series([0, 1, 2.0**-n])) == 2.0**-n


@pytest.mark.parametrize("n", [1, 2, 7])
def test_cn_cubic_power_law_factor(n):
    assert cn_of(make_series([0, 1, 0, n**-3])) == pytest.approx(n**-1.5, rel=1e-15)


def test_cn_identity_and_errors():
    assert cn_of(make_series([0, 1])) == 0
    with pytest.raises(ValueError):
        cn_of(make_series([0, 2, 1]))


@given(
    st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.integers(2, 7),
)
def test_cn_scale_law(c, r):
    coeffs = [0, 1] + [0] * (r - 1)
    coeffs[r] = c
    assert cn_of(make_series(coeffs)) == pytest.approx(abs(c) ** (1 / (r - 1)), rel=1e-14)


def test_cn_takes_max_over_degrees():
    f = make_series([0, 1, 0.1, 0.25])
    assert cn_of(f) == pytest.approx(0.5)


def test_certify_geometric_s2():
    cert = certify(FactorFamily.geometric(2))
    assert cert.alpha == 1.0
    assert cert.safe_radius == 0.25
    assert [cert.cn(n) for n in range(1, 4)] == [0.5, 0.25, 0.125]
    assert cert.alpha_from(3) == 0.25


def test_certify_explicit_single():
    cert = certify(FactorFamily.explicit([[0, 1, 1]]))
    assert cert.alpha == 1.0 and cert.safe_radius == 0.25
    assert cert.alpha_from(2) == 0


def test_certify_power_law_divergent():
    with pytest.raises(CertificationError, match="convergence hypothesis violated"):
        certify(FactorFamily.power_law(1, 2))
    with pytest.raises(CertificationError):
        certify(FactorFamily.power_law(2, 3))


def test_family_constructor_validation():
    with pytest.raises(ValueError):
        FactorFamily.geometric(1.0)
    with pytest.raises(ValueError):
        FactorFamily.geometric(0.3 + 0.3j)
    with pytest.raises(ValueError):
        FactorFamily.explicit([[1, 1, 1]])
    with pytest.raises(ValueError):
        FactorFamily.power_law(-1)


@pytest.mark.parametrize(
    "family",
    [
        FactorFamily.geometric(2),
        FactorFamily.geometric(-3, 3),
        FactorFamily.geometric(1.5 + 1.5j),
        FactorFamily.geometric(1.1, 4),
        FactorFamily.power_law(3, 3),
        FactorFamily.power_law(2.5, 2),
    ],
)
def test_certificate_consistent_with_factors(family):
    cert = certify(family)
    for n in (1, 2, 3, 10, 40):
        assert cert.cn(n) == pytest.approx(cn_of(family.factor(n)), rel=1e-12)
    prev = cert.alpha
    assert cert.alpha_from(1) == pytest.approx(cert.alpha, rel=1e-15)
    for m in range(1, 60):
        a = cert.alpha_from(m)
        assert a <= prev * (1 + 1e-15)
        prev = a
        # tail soundness against finite partial sums
        assert a >= math.fsum(cert.cn(n) for n in range(m, m + 400)) * (1 - 1e-12)


@given(st.floats(1.01, 50), st.floats(-math.pi, math.pi), st.integers(2, 5))
def test_geometric_alpha_never_underestimates(mod, arg, r0):
    s = cmath.rect(mod, arg)
    cert = certify(FactorFamily.geometric(s, r0))
    if r0 == 2:
        exact = 1 / (Fraction(abs(s)) - 1)
        assert cert.alpha >= float(exact) * (1 - 1e-15)
    assert cert.alpha >= math.fsum(cert.cn(n) for n in range(1, 2000)) * (1 - 1e-13)


def test_majorant_bound_examples():
    cert = certify(FactorFamily.geometric(2))
    assert majorant_bound(cert, 1, 1, 1.0) == 2.0
    assert majorant_bound(cert, 1, 5, 0.0) == 0.0
    assert majorant_bound(cert, 1, None, 0.25) == pytest.approx(1 / 3)
    with pytest.raises(OutsideCertifiedDisk):
        majorant_bound(cert, 1, None, 1.0)
    with pytest.raises(OutsideCertifiedDisk):
        majorant_bound(cert, 1, 1, 2.0)


def test_cauchy_diff_bound_examples():
    cert = certify(FactorFamily.geometric(2))
    exact = sum(Fraction(1, 2**n) for n in range(11, 21))
    assert exact == Fraction(1, 2**10) - Fraction(1, 2**20)
    assert cauchy_diff_bound(cert, 1, 10, 20) == pytest.approx(float(exact), rel=1e-14)
    with pytest.raises(ValueError):
        cauchy_diff_bound(cert, 1, 10, 10)
    with pytest.raises(ValueError):
        cauchy_diff_bound(cert, 1, 0, 5)


def test_cauchy_diff_bound_uses_tail_alpha():
    cert = certify(FactorFamily.geometric(2))
    # start = 3: alpha_3 = 1/4
    assert cauchy_diff_bound(cert, 3, 4, 6) == pytest.approx((2**-5 + 2**-6) * 16)


def test_truncation_error_examples():
    cert = certify(FactorFamily.geometric(2))
    assert truncation_error(cert, 1, 20) == 2.0**-20
    fin = certify(FactorFamily.explicit([[0, 1, 0.3], [0, 1, 0, 0.1]]))
    assert truncation_error(fin, 1, 2) == 0
    assert truncation_error(fin, 1, 5) == 0
    pl = certify(FactorFamily.power_law(3, 3))
    q = 1.5
    alpha = q / (q - 1)
    assert truncation_error(pl, 1, 100) <= (101**-1.5 + 2 * 101**-0.5) / alpha**2 * (1 + 1e-14)
    with pytest.raises(ValueError):
        truncation_error(cert, 3, 2)


def test_plan_split_examples():
    cert = certify(FactorFamily.geometric(2))
    assert plan_split(cert, 0.25) == 1
    assert plan_split(cert, 1.0) == 3
    fam = FactorFamily.explicit([[0, 1, 2.0], [0, 1, 3.0], [0, 1, 0, 1.0]])
    for r1 in (0.01, 1.0, 100.0, 1e6):
        assert plan_split(certify(fam), r1) <= 4


def test_plan_split_is_minimal_and_large_radius():
    cert = certify(FactorFamily.power_law(3, 3))
    for r1 in (0.1, 1.0, 10.0, 300.0):
        m1 = plan_split(cert, r1)
        assert cert.alpha_from(m1) <= 1 / (4 * r1)
        assert m1 == 1 or cert.alpha_from(m1 - 1) > 1 / (4 * r1)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_plan_split_monotone(r_a, r_b):
    cert = certify(FactorFamily.geometric(1.7 - 0.4j))
    lo, hi = sorted((r_a, r_b))
    assert plan_split(cert, lo) <= plan_split(cert, hi)


def test_family_json_roundtrip():
    for fam in (
        FactorFamily.geometric(1.5 + 1.5j),
        FactorFamily.power_law(3.0, 3),
        FactorFamily.explicit([[0, 1, 0.5 - 0.25j], [0, 1, 0, 0.125]]),
    ):
        assert FactorFamily.from_dict(fam.to_dict()) == fam


@given(st.integers(0, 2**32 - 1))
def test_cauchy_bound_sound_random(seed):
    rng = random.Random(seed)
    fam = random_explicit_family(rng)
    cert = certify(fam)
    for z in disk_points(rng, 10, cert.safe_radius):
        vals = [compose_pointwise(fam, 1, N, z) for N in range(1, 13)]
        for M in range(1, 12):
            for N in range(M + 1, 13):
                assert abs(vals[N - 1] - vals[M - 1]) <= cauchy_diff_bound(cert, 1, M, N) * (1 + 1e-14)


@given(st.integers(0, 2**32 - 1))
def test_majorant_and_displacement_sound_random(seed):
    rng = random.Random(seed)
    fam = random_explicit_family(rng)
    cert = certify(fam)
    K = len(fam.factors)
    d = rng.randint(1, K)
    m = rng.randint(d, K)
    for z in disk_points(rng, 10, 0.999 / cert.partial_sum(d, m)):
        r = abs(z)
        b = majorant_bound(cert, d, m, r)
        w = compose_pointwise(fam, d, m, z)
        assert abs(w) <= b * (1 + 1e-14)
        assert abs(w - z) <= b - r + 1e-14 * b
