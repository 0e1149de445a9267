import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beta_ntd.divergence import beta_div, gamma_exponent, objective
from beta_ntd.errors import NumericalDomainError

BETAS = [-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0]


@pytest.mark.parametrize("beta", BETAS)
def test_zero_at_equality(beta):
    for x in [0.3, 1.0, 7.5]:
        assert beta_div(x, x, beta) == pytest.approx(0.0, abs=1e-14)


def test_euclidean_branch_value():
    # (9 + 1 - 6) / 2
    assert beta_div(3.0, 1.0, 2.0) == pytest.approx(2.0)


def test_kl_branch_value():
    assert beta_div(2.0, 1.0, 1.0) == pytest.approx(2.0 * math.log(2.0) - 1.0)


@pytest.mark.parametrize("beta", BETAS)
def test_nonnegative_random_pairs(beta):
    rng = np.random.default_rng(0)
    for _ in range(200):
        x, y = rng.uniform(0.01, 10.0, 2)
        d = beta_div(x, y, beta)
        assert d >= 0.0
        if abs(x - y) > 1e-6:
            assert d > 0.0


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 1.5, 2.0])
def test_homogeneity(beta):
    rng = np.random.default_rng(1)
    lam = 2.5
    for _ in range(100):
        x, y = rng.uniform(0.1, 5.0, 2)
        lhs = beta_div(lam * x, lam * y, beta)
        rhs = lam ** beta * beta_div(x, y, beta)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_is_scale_invariance():
    rng = np.random.default_rng(2)
    for _ in range(100):
        x, y = rng.uniform(0.1, 5.0, 2)
        lam = rng.uniform(0.01, 100.0)
        assert beta_div(lam * x, lam * y, 0.0) == pytest.approx(
            beta_div(x, y, 0.0), rel=1e-12, abs=1e-12
        )


def test_domain_errors():
    with pytest.raises(NumericalDomainError):
        beta_div(1.0, 0.0, 1.0)
    with pytest.raises(NumericalDomainError):
        beta_div(0.0, 1.0, 0.0)
    with pytest.raises(NumericalDomainError):
        beta_div(-1.0, 1.0, 2.0)


def test_kl_zero_x_convention():
    # 0 * log(0) = 0, so d_1(0|y) = y
    assert beta_div(0.0, 0.7, 1.0) == pytest.approx(0.7)


def test_gamma_branches():
    assert gamma_exponent(0.0) == pytest.approx(0.5)
    assert gamma_exponent(1.0) == 1.0
    assert gamma_exponent(2.0) == 1.0
    assert gamma_exponent(3.0) == pytest.approx(0.5)
    assert gamma_exponent(-1.0) == pytest.approx(1.0 / 3.0)
    assert gamma_exponent(0.5) == pytest.approx(1.0 / 1.5)
    assert gamma_exponent(1.5) == 1.0
    assert gamma_exponent(2.5) == pytest.approx(1.0 / 1.5)


class TestObjective:
    def test_zero_on_identical(self):
        rng = np.random.default_rng(3)
        t = rng.uniform(0.1, 1.0, (3, 4, 5))
        for beta in BETAS:
            assert objective(t, t, beta) == pytest.approx(0.0, abs=1e-12)

    def test_single_entry_reduces_to_scalar(self):
        x = np.full((1, 1, 1), 2.0)
        y = np.full((1, 1, 1), 1.0)
        assert objective(x, y, 1.0) == pytest.approx(2.0 * math.log(2.0) - 1.0)

    def test_matches_scalar_sum(self):
        rng = np.random.default_rng(4)
        x = rng.uniform(0.1, 2.0, (2, 3, 2))
        y = rng.uniform(0.1, 2.0, (2, 3, 2))
        for beta in BETAS:
            expected = sum(
                beta_div(a, b, beta) for a, b in zip(x.reshape(-1), y.reshape(-1))
            )
            assert objective(x, y, beta) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("beta0", [0.0, 1.0])
    def test_continuity_in_beta(self, beta0):
        rng = np.random.default_rng(5)
        x = rng.uniform(0.1, 2.0, (3, 3, 3))
        y = rng.uniform(0.1, 2.0, (3, 3, 3))
        d0 = objective(x, y, beta0)
        for delta in (1e-6, -1e-6):
            d = objective(x, y, beta0 + delta)
            assert abs(d - d0) <= 1e-4 * (1.0 + d0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            objective(np.ones((2, 2, 2)), np.ones((2, 2, 3)), 1.0)

    def test_domain_error_carries_index(self):
        x = np.ones((2, 2, 2))
        y = np.ones((2, 2, 2))
        y[1, 0, 1] = 0.0
        with pytest.raises(NumericalDomainError, match=r"\(1, 0, 1\)"):
            objective(x, y, 1.0)

    def test_is_rejects_zero_data(self):
        x = np.ones((2, 2, 2))
        x[0, 1, 0] = 0.0
        with pytest.raises(NumericalDomainError, match=r"\(0, 1, 0\)"):
            objective(x, np.ones((2, 2, 2)), 0.0)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(0.01, 100.0),
    y=st.floats(0.01, 100.0),
    beta=st.sampled_from(BETAS),
)
def test_nonnegativity_property(x, y, beta):
    # slack scales with the magnitude of the power terms cancelling
    scale = max(1.0, x, y) ** max(beta, 1.0)
    assert beta_div(x, y, beta) >= -1e-13 * scale
