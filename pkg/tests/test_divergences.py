"""Renyi and relative-entropy divergences against classical closed forms.

Commuting pairs reduce both Renyi families to the same scalar expression,
which the tests compute independently with plain numpy on the eigenvalues.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softcover.divergences import (
    petz_renyi,
    relative_entropy,
    relative_entropy_variance,
    sandwiched_renyi,
)
from softcover.errors import ValidationError

import helpers


def _classical_renyi(p, q, alpha):
    return math.log(float((p**alpha) @ (q ** (1.0 - alpha)))) / (alpha - 1.0)


def test_petz_anchor_uniform_vs_tilted():
    # Tr[rho^2 sigma^-1] = 1/3 + 1 = 4/3
    d = petz_renyi(np.diag([0.5, 0.5]), np.diag([0.75, 0.25]), 2.0)
    assert d.value == pytest.approx(math.log(4.0 / 3.0), abs=1e-14)
    assert d.kind == "petz" and d.alpha == 2.0 and not d.support_violated
    assert float(d) == d.value


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=2, max_value=5),
    st.floats(min_value=0.05, max_value=3.0).filter(lambda a: abs(a - 1.0) > 0.05),
    st.integers(min_value=0, max_value=2**31 - 1),
)
def test_commuting_pairs_match_the_scalar_formula(d, alpha, seed):
    rng = np.random.default_rng(seed)
    p = rng.random(d) + 0.05
    p /= p.sum()
    q = rng.random(d) + 0.05
    q /= q.sum()
    want = _classical_renyi(p, q, alpha)
    assert petz_renyi(np.diag(p), np.diag(q), alpha).value == pytest.approx(want, abs=1e-10)
    assert sandwiched_renyi(np.diag(p), np.diag(q), alpha).value == pytest.approx(want, abs=1e-10)


def test_divergence_of_a_state_with_itself_vanishes():
    rng = np.random.default_rng(7)
    rho = helpers.random_density(rng, 3)
    for alpha in (0.5, 1.5, 2.0):
        assert petz_renyi(rho, rho, alpha).value == pytest.approx(0.0, abs=1e-10)
        assert sandwiched_renyi(rho, rho, alpha).value == pytest.approx(0.0, abs=1e-10)
    assert relative_entropy(rho, rho).value == pytest.approx(0.0, abs=1e-10)
    assert relative_entropy_variance(rho, rho).value == pytest.approx(0.0, abs=1e-10)


def test_sandwiched_never_exceeds_petz():
    rng = np.random.default_rng(11)
    for _ in range(5):
        rho = helpers.random_density(rng, 3)
        sigma = helpers.random_density(rng, 3)
        for alpha in (0.3, 0.6, 0.9, 1.2, 1.7, 2.0):
            s = sandwiched_renyi(rho, sigma, alpha).value
            p = petz_renyi(rho, sigma, alpha).value
            assert s <= p + 1e-10


def test_alpha_monotonicity():
    rng = np.random.default_rng(13)
    rho = helpers.random_density(rng, 4)
    sigma = helpers.random_density(rng, 4)
    alphas = [0.25, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0]
    for fn in (petz_renyi, sandwiched_renyi):
        vals = [fn(rho, sigma, a).value for a in alphas]
        assert all(b >= a - 1e-10 for a, b in zip(vals, vals[1:]))


def test_alpha_near_one_brackets_relative_entropy():
    rng = np.random.default_rng(17)
    rho = helpers.random_density(rng, 3)
    sigma = helpers.random_density(rng, 3)
    d1 = relative_entropy(rho, sigma).value
    lo = sandwiched_renyi(rho, sigma, 1.0 - 1e-5).value
    hi = sandwiched_renyi(rho, sigma, 1.0 + 1e-5).value
    assert lo - 1e-7 <= d1 <= hi + 1e-7
    assert hi - lo < 1e-3


def test_support_violation_is_flagged_not_raised():
    full = np.diag([0.5, 0.5])
    pure = np.diag([1.0, 0.0])
    for alpha in (1.5, 2.0):
        for fn in (petz_renyi, sandwiched_renyi):
            out = fn(full, pure, alpha)
            assert math.isinf(out.value) and out.support_violated
    assert math.isinf(relative_entropy(full, pure).value)
    assert math.isinf(relative_entropy_variance(full, pure).value)


def test_disjoint_supports_give_infinity_below_one():
    pure0 = np.diag([1.0, 0.0])
    pure1 = np.diag([0.0, 1.0])
    for fn in (petz_renyi, sandwiched_renyi):
        out = fn(pure0, pure1, 0.5)
        assert math.isinf(out.value) and out.support_violated


def test_containment_below_one_is_finite():
    # supp(rho) strictly inside supp(sigma) is fine for alpha < 1
    rho = np.diag([1.0, 0.0])
    sigma = np.diag([0.75, 0.25])
    val = petz_renyi(rho, sigma, 0.5).value
    # classical: (1/(0.5-1)) ln 0.75^0.5 = -ln 0.75
    assert val == pytest.approx(-math.log(0.75), abs=1e-12)
    assert sandwiched_renyi(rho, sigma, 0.5).value <= val + 1e-12


def test_relative_entropy_anchor_and_variance_anchor():
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([0.75, 0.25])
    p = np.array([0.5, 0.5])
    q = np.array([0.75, 0.25])
    want_d = float(p @ (np.log(p) - np.log(q)))
    want_v = float(p @ (np.log(p) - np.log(q)) ** 2) - want_d**2
    assert relative_entropy(rho, sigma).value == pytest.approx(want_d, abs=1e-14)
    got_v = relative_entropy_variance(rho, sigma).value
    assert got_v == pytest.approx(want_v, abs=1e-14)
    assert got_v == pytest.approx(0.3017372402031455, abs=1e-13)


def test_relative_entropy_variance_commuting_oracle():
    rng = np.random.default_rng(19)
    p = rng.random(4) + 0.05
    p /= p.sum()
    q = rng.random(4) + 0.05
    q /= q.sum()
    llr = np.log(p) - np.log(q)
    want = float(p @ llr**2) - float(p @ llr) ** 2
    got = relative_entropy_variance(np.diag(p), np.diag(q)).value
    assert got == pytest.approx(want, abs=1e-11)


def test_alpha_one_and_bad_alpha_are_rejected():
    rho = np.diag([0.5, 0.5])
    for bad in (1.0, 0.0, -0.5, math.inf, math.nan):
        with pytest.raises(ValidationError):
            petz_renyi(rho, rho, bad)
        with pytest.raises(ValidationError):
            sandwiched_renyi(rho, rho, bad)


def test_second_argument_may_be_unnormalized():
    # scaling sigma by c shifts the value by -ln c at alpha = 2
    rho = np.diag([0.5, 0.5])
    sigma = np.diag([0.75, 0.25])
    base = petz_renyi(rho, sigma, 2.0).value
    scaled = petz_renyi(rho, 2.0 * sigma, 2.0).value
    assert scaled == pytest.approx(base - math.log(2.0), abs=1e-12)
    with pytest.raises(ValidationError):
        petz_renyi(rho, np.zeros((2, 2)), 2.0)


def test_dimension_mismatch_raises():
    with pytest.raises(ValidationError, match="mismatch"):
        petz_renyi(np.diag([0.5, 0.5]), np.diag([1.0, 0.0, 0.0]) / 1.0, 2.0)
    with pytest.raises(ValidationError, match="mismatch"):
        sandwiched_renyi(np.diag([0.5, 0.5]), np.eye(3) / 3.0, 2.0)
