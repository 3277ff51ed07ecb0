"""CqSource construction, marginals, mutual information, and variances."""
import math
from fractions import Fraction

import numpy as np
import pytest

from softcover.errors import ValidationError
from softcover.sources import (
    CqSource,
    joint_state,
    marginal,
    mutual_information,
    product_source,
    rationalize_prior,
    variances,
)

import helpers


def _entropy(mat) -> float:
    w = np.linalg.eigvalsh(np.asarray(mat, np.complex128))
    w = w[w > 1e-14]
    return float(-(w * np.log(w)).sum())


def test_validation():
    rho = np.diag([0.5, 0.5])
    with pytest.raises(ValidationError, match="negative"):
        CqSource([1.2, -0.2], [rho, rho])
    with pytest.raises(ValidationError, match="sums to"):
        CqSource([0.5, 0.4], [rho, rho])
    with pytest.raises(ValidationError, match="probabilities but"):
        CqSource([0.5, 0.5], [rho])
    with pytest.raises(ValidationError, match="mixed dimensions"):
        CqSource([0.5, 0.5], [rho, np.eye(3) / 3.0])
    with pytest.raises(ValidationError, match="do not sum"):
        CqSource([0.5, 0.5], [rho, rho], prior_fractions=("1/2", "1/3"))
    with pytest.raises(ValidationError, match="disagree"):
        CqSource([0.5, 0.5], [rho, rho], prior_fractions=("1/3", "2/3"))


def test_tiny_negative_prior_entries_are_clamped():
    rho = np.diag([0.5, 0.5])
    cq = CqSource([1.0 + 1e-13, -1e-13], [rho, rho])
    assert cq.prior.min() == 0.0
    assert not cq.support[1]


def test_rationalize_prior():
    assert rationalize_prior([0.5, 0.25, 0.25]) == (
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1, 4),
    )
    assert rationalize_prior([1 / 3, 2 / 3]) == (Fraction(1, 3), Fraction(2, 3))
    # irrationals can still rationalize: continued-fraction convergents of
    # 1/sqrt(2) pair up to an exact unit sum, so closeness is not the gate
    a = 1.0 / math.sqrt(2.0)
    assert rationalize_prior([a, 1.0 - a]) is not None
    # the gate is the exact sum: close approximants that miss 1 fail
    assert rationalize_prior([0.4, 0.35]) is None
    # and a weight needing a denominator beyond the cap fails the closeness check
    tiny = 2.43e-9
    assert rationalize_prior([tiny, 1.0 - tiny]) is None


def test_auto_rationalization_on_construction():
    bo = helpers.binary_orthogonal()
    assert bo.prior_fractions == (Fraction(1, 2), Fraction(1, 2))
    tt = helpers.tilted_triple()
    assert tt.prior_fractions == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))


def test_marginal_anchor_and_cache():
    pm = helpers.pure_mixed()
    m = marginal(pm)
    assert np.allclose(m.matrix, np.diag([0.75, 0.25]), atol=1e-14)
    assert marginal(pm) is m


def test_mutual_information_anchor():
    pm = helpers.pure_mixed()
    # holevo form: S(rho_B) - sum_x p_x S(rho_x)
    want = _entropy(np.diag([0.75, 0.25])) - 0.5 * _entropy(np.diag([0.5, 0.5]))
    got = mutual_information(pm)
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(0.2157615543388357, abs=1e-13)


def test_mutual_information_extremes():
    assert mutual_information(helpers.binary_orthogonal()) == pytest.approx(math.log(2.0), abs=1e-12)
    rho = np.diag([0.6, 0.4])
    allsame = CqSource([0.5, 0.5], [rho, rho])
    assert mutual_information(allsame) == pytest.approx(0.0, abs=1e-12)


def test_variances_anchor_and_split():
    pm = helpers.pure_mixed()
    v, v_breve = variances(pm)
    assert v == pytest.approx(0.15604118102720724, abs=1e-13)
    assert v_breve == pytest.approx(0.15086862010157276, abs=1e-13)
    # V = V-breve + Var_x D(rho_x || rho_B)
    from softcover.divergences import relative_entropy

    rho_b = marginal(pm)
    ds = [relative_entropy(op, rho_b).value for op in pm.states]
    spread = 0.5 * (ds[0] - mutual_information(pm)) ** 2 + 0.5 * (ds[1] - mutual_information(pm)) ** 2
    assert v == pytest.approx(v_breve + spread, abs=1e-12)


def test_variances_classical_brute_force():
    # commuting model: V is the classical variance of the joint log ratio
    pm = helpers.pure_mixed()
    p = pm.prior
    lam = np.stack([np.diag(op.matrix).real for op in pm.states])
    mu = np.diag(marginal(pm).matrix).real
    i_val = mutual_information(pm)
    second = 0.0
    for x in range(2):
        for b in range(2):
            joint = p[x] * lam[x, b]
            if joint > 0.0:
                second += joint * math.log(lam[x, b] / mu[b]) ** 2
    v, _ = variances(pm)
    assert v == pytest.approx(second - i_val**2, abs=1e-12)


def test_variances_vanish_for_orthogonal_pure_letters():
    v, v_breve = variances(helpers.binary_orthogonal())
    assert v == pytest.approx(0.0, abs=1e-12)
    assert v_breve == pytest.approx(0.0, abs=1e-12)


def test_joint_state_blocks():
    tt = helpers.tilted_triple()
    js = joint_state(tt)
    assert js.dim == 6
    assert np.trace(js.matrix).real == pytest.approx(1.0, abs=1e-12)
    blk = js.matrix[2:4, 2:4]
    assert np.allclose(blk, 0.25 * tt.states[1].matrix, atol=1e-14)
    assert np.abs(js.matrix[0:2, 2:4]).max() == 0.0


def test_product_source_structure():
    pm = helpers.pure_mixed()
    sq = product_source(pm, 2)
    assert sq.size == 4 and sq.dim == 4
    assert np.allclose(sq.prior, np.kron(pm.prior, pm.prior))
    # letter (0, 1) sits at lexicographic index 1
    want = np.kron(pm.states[0].matrix, pm.states[1].matrix)
    assert np.allclose(sq.states[1].matrix, want, atol=1e-13)
    assert np.allclose(
        marginal(sq).matrix, np.kron(marginal(pm).matrix, marginal(pm).matrix), atol=1e-12
    )
    assert sq.prior_fractions[0] == Fraction(1, 4)


def test_product_source_doubles_information():
    pm = helpers.pure_mixed()
    sq = product_source(pm, 2)
    assert mutual_information(sq) == pytest.approx(2.0 * mutual_information(pm), abs=1e-11)
    v1, vb1 = variances(pm)
    v2, vb2 = variances(sq)
    assert v2 == pytest.approx(2.0 * v1, abs=1e-10)
    assert vb2 == pytest.approx(2.0 * vb1, abs=1e-10)


def test_product_source_guard():
    tt = helpers.tilted_triple()
    with pytest.raises(ValidationError, match="too large"):
        product_source(tt, 9)
    with pytest.raises(ValidationError):
        product_source(tt, 0)
