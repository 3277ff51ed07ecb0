"""Classical-quantum sources: a prior on a finite alphabet paired with one
density operator per letter.

The prior may carry exact rational values alongside its float image; exact
arithmetic (type sizes, composition checks) uses the rationals, numerics use
the floats.  Letters with zero probability are tolerated and skipped by the
information quantities.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .divergences import relative_entropy, relative_entropy_variance
from .errors import ValidationError
from .hermitian import DensityOperator

PROB_TOL = 1e-10


def rationalize_prior(prior, max_denominator: int = 10**6):
    """Exact Fractions for a float prior, or None if no close rational sums to 1."""
    fracs = [Fraction(float(p)).limit_denominator(max_denominator) for p in prior]
    if any(abs(float(f) - float(p)) > 1e-9 for f, p in zip(fracs, prior)):
        return None
    if sum(fracs) != 1:
        return None
    return tuple(fracs)


class CqSource:
    """An ensemble {p_x, rho_x} with validated prior and states."""

    __slots__ = ("prior", "prior_fractions", "states", "dim", "size", "_marginal", "_info_cache")

    def __init__(self, prior, states, prior_fractions=None):
        p = np.asarray(prior, dtype=np.float64)
        if p.ndim != 1 or len(p) == 0:
            raise ValidationError("prior must be a non-empty vector")
        if float(p.min()) < -1e-12:
            raise ValidationError(f"prior has negative entry {float(p.min()):.3e}")
        p = np.clip(p, 0.0, None)
        if abs(float(p.sum()) - 1.0) > PROB_TOL:
            raise ValidationError(f"prior sums to {float(p.sum())!r}, not 1")
        if len(states) != len(p):
            raise ValidationError(f"{len(p)} probabilities but {len(states)} states")
        ops = [s if isinstance(s, DensityOperator) else DensityOperator(s) for s in states]
        dims = {op.dim for op in ops}
        if len(dims) != 1:
            raise ValidationError(f"states have mixed dimensions {sorted(dims)}")
        if prior_fractions is not None:
            fracs = tuple(Fraction(f) for f in prior_fractions)
            if len(fracs) != len(p):
                raise ValidationError("prior_fractions length mismatch")
            if sum(fracs) != 1:
                raise ValidationError("prior_fractions do not sum to 1 exactly")
            if any(abs(float(f) - float(q)) > 1e-9 for f, q in zip(fracs, p)):
                raise ValidationError("prior_fractions disagree with the float prior")
        else:
            fracs = rationalize_prior(p)
        self.prior = p
        self.prior_fractions = fracs
        self.states = tuple(ops)
        self.dim = ops[0].dim
        self.size = len(p)
        self._marginal = None
        self._info_cache = {}

    def state_matrices(self) -> np.ndarray:
        return np.stack([op.matrix for op in self.states])

    @property
    def support(self) -> np.ndarray:
        return self.prior > 0.0

    def __repr__(self) -> str:
        return f"CqSource(|X|={self.size}, d_B={self.dim})"


def marginal(cq: CqSource) -> DensityOperator:
    """The output marginal sum_x p_x rho_x."""
    if cq._marginal is None:
        acc = np.zeros((cq.dim, cq.dim), np.complex128)
        for px, op in zip(cq.prior, cq.states):
            if px > 0.0:
                acc += px * op.matrix
        cq._marginal = DensityOperator(acc)
    return cq._marginal


def mutual_information(cq: CqSource) -> float:
    """I(X:B) = sum_x p_x D(rho_x || rho_B) in nats."""
    rho_b = marginal(cq)
    total = 0.0
    for px, op in zip(cq.prior, cq.states):
        if px > 0.0:
            total += px * relative_entropy(op, rho_b).value
    return float(total)


def variances(cq: CqSource):
    """(V, V_breve): the joint-state information variance and its
    prior-averaged per-letter counterpart.

    The two differ exactly by the prior variance of x -> D(rho_x || rho_B);
    the classical coordinate drops out of the log-ratio because p_x
    multiplies both arguments.
    """
    rho_b = marginal(cq)
    mean = 0.0
    second = 0.0
    v_breve = 0.0
    for px, op in zip(cq.prior, cq.states):
        if px <= 0.0:
            continue
        d = relative_entropy(op, rho_b).value
        v = relative_entropy_variance(op, rho_b).value
        mean += px * d
        second += px * (v + d * d)
        v_breve += px * v
    return float(max(second - mean * mean, 0.0)), float(v_breve)


def joint_state(cq: CqSource) -> DensityOperator:
    """The block-diagonal cq state sum_x p_x |x><x| (x) rho_x."""
    d = cq.dim
    m = cq.size
    out = np.zeros((m * d, m * d), np.complex128)
    for x, (px, op) in enumerate(zip(cq.prior, cq.states)):
        out[x * d : (x + 1) * d, x * d : (x + 1) * d] = px * op.matrix
    return DensityOperator(out)


def product_source(cq: CqSource, n: int) -> CqSource:
    """The n-fold memoryless extension; alphabet X^n in lexicographic order."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if cq.size**n * cq.dim ** (2 * n) > 2e7:
        raise ValidationError(f"product source with |X|^n = {cq.size**n} letters is too large")
    prior = cq.prior.copy()
    mats = [op.matrix for op in cq.states]
    states = list(mats)
    fracs = cq.prior_fractions
    for _ in range(n - 1):
        prior = np.kron(prior, cq.prior)
        states = [np.kron(a, b) for a in states for b in mats]
        if fracs is not None:
            fracs = tuple(f * g for f in fracs for g in cq.prior_fractions)
    return CqSource(prior, states, prior_fractions=fracs)
