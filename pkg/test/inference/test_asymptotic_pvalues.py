import math

import numpy as np
import pytest
from scipy.stats import norm

from src.errors import InvalidInputError
from src.models.inference import StatisticKind
from src.services.inference import (
    asym_critical_value,
    asym_pvalue,
    asym_pvalue_mr,
    asym_pvalue_sr,
    asym_pvalue_zdiff,
    asym_pvalue_zw,
    normal_cdf,
)


@pytest.mark.parametrize("s", [0.0, 0.5, 3.0, 5.991464547, 20.0])
def test_sr_is_exponential_tail(s):
    assert asym_pvalue_sr(s) == pytest.approx(math.exp(-s / 2), rel=1e-12)


def test_sr_rejects_negative():
    with pytest.raises(InvalidInputError):
        asym_pvalue_sr(-0.1)


@pytest.mark.parametrize("m", [0.0, 0.3, 1.0, 2.12, 4.0])
def test_mr_matches_normal_formula(m):
    phi = norm.cdf(m)
    assert asym_pvalue_mr(m) == pytest.approx(1 - phi * (2 * phi - 1), rel=1e-10)


def test_mr_negative_values_have_p_one():
    assert asym_pvalue_mr(-0.7) == 1.0
    assert asym_pvalue_mr(0.0) == pytest.approx(1.0)


def test_mr_far_tail_stays_positive():
    p = asym_pvalue_mr(30.0)
    assert 0.0 < p < 1e-150


def test_z_w_is_one_sided_and_z_diff_two_sided():
    assert asym_pvalue_zw(1.6448536269514722) == pytest.approx(0.05, rel=1e-9)
    assert asym_pvalue_zw(-3.0) == pytest.approx(norm.cdf(3.0))
    assert asym_pvalue_zdiff(1.959963984540054) == pytest.approx(0.05, rel=1e-9)
    assert asym_pvalue_zdiff(-1.959963984540054) == pytest.approx(0.05, rel=1e-9)
    assert asym_pvalue_zdiff(0.0) == 1.0


def test_unweighted_kinds_share_the_tail():
    assert asym_pvalue(StatisticKind.S, 4.0) == asym_pvalue(StatisticKind.SR, 4.0)
    assert asym_pvalue(StatisticKind.M, 1.5) == asym_pvalue(StatisticKind.MR, 1.5)


def test_critical_values_at_five_percent():
    assert asym_critical_value(StatisticKind.SR, 0.05) == pytest.approx(5.991464547, rel=1e-9)
    assert asym_critical_value(StatisticKind.Z_W, 0.05) == pytest.approx(1.644853627, rel=1e-9)
    assert asym_critical_value(StatisticKind.Z_DIFF, 0.05) == pytest.approx(1.644853627, rel=1e-9)


@pytest.mark.parametrize("alpha", [0.1, 0.05, 0.01, 0.001])
def test_mr_critical_value_inverts_the_tail(alpha):
    c = asym_critical_value(StatisticKind.MR, alpha)
    assert asym_pvalue_mr(c) == pytest.approx(alpha, rel=1e-7)
    assert c > asym_critical_value(StatisticKind.Z_W, alpha)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
def test_critical_value_rejects_bad_alpha(alpha):
    with pytest.raises(InvalidInputError):
        asym_critical_value(StatisticKind.SR, alpha)


@pytest.mark.parametrize(
    "s,expected,tol",
    [(4.3331, 0.1146, 2e-4), (17.6591, 1.46e-4, 2e-5)],
)
def test_sr_reference_values(s, expected, tol):
    assert asym_pvalue_sr(s) == pytest.approx(expected, abs=tol)


@pytest.mark.parametrize(
    "m,expected,tol",
    [(3.3433, 0.0012, 2e-4), (1.7645, 0.1135, 5e-4)],
)
def test_mr_reference_values(m, expected, tol):
    assert asym_pvalue_mr(m) == pytest.approx(expected, abs=tol)


def _phi_reference(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@pytest.mark.parametrize("x", [0.0, 1.0, 1.7645, 3.3433])
def test_normal_cdf_tabulated_points(x):
    assert abs(normal_cdf(x) - _phi_reference(x)) <= 1e-12


def test_normal_cdf_known_values():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-15)
    assert normal_cdf(-1.0) == pytest.approx(0.15865525393145707, abs=1e-15)


def test_normal_cdf_accuracy_on_grid():
    for x in np.linspace(-8.0, 8.0, 321):
        assert abs(normal_cdf(x) - _phi_reference(x)) <= 1e-12, x
