"""Shared model builders for the test suite."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from softcover import CqSource


def binary_orthogonal() -> CqSource:
    return CqSource([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def pure_mixed() -> CqSource:
    # marginal diag(3/4, 1/4)
    return CqSource([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.5, 0.5])])


def tilted_triple() -> CqSource:
    plus = np.full((2, 2), 0.5, dtype=np.complex128)
    ymix = np.array([[0.6, -0.2j], [0.2j, 0.4]], dtype=np.complex128)
    return CqSource(
        [0.5, 0.25, 0.25],
        [np.diag([0.8, 0.2]).astype(np.complex128), plus, ymix],
        prior_fractions=("1/2", "1/4", "1/4"),
    )


# rational priors with small denominators so constant-composition codebooks
# exist at small block lengths
PRIOR_POOL = {
    2: [("1/2", "1/2"), ("1/3", "2/3"), ("1/4", "3/4"), ("2/3", "1/3"), ("3/4", "1/4")],
    3: [("1/3", "1/3", "1/3"), ("1/2", "1/4", "1/4"), ("1/4", "1/2", "1/4")],
}


def random_density(rng, d: int, mix: float = 0.0) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    if mix > 0.0:
        m = (1.0 - mix) * m + mix * np.eye(d) / d
    return m


def random_qubit_source(rng, size: int = 2, mix: float = 0.1) -> CqSource:
    """Qubit-output model with an exactly rational prior and full-rank states."""
    pool = PRIOR_POOL[size]
    fracs = tuple(Fraction(q) for q in pool[int(rng.integers(len(pool)))])
    states = [random_density(rng, 2, mix) for _ in range(size)]
    return CqSource([float(f) for f in fracs], states, prior_fractions=fracs)


def random_diagonal_source(rng, size: int = 3, d: int = 3) -> CqSource:
    """Commuting model: diagonal states, generic float prior."""
    p = rng.random(size) + 0.1
    p = p / p.sum()
    states = []
    for _ in range(size):
        lam = rng.random(d) + 0.05
        states.append(np.diag(lam / lam.sum()))
    return CqSource(p, states)
