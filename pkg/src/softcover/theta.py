"""The centered averaging map on operator-valued fields and its L_p bound.

A field assigns a Hermitian matrix to each point of a finite probability
space.  Theta lifts a field f on Omega to Omega^M by averaging the M
coordinate pull-backs and subtracting the mean:

    Theta(f)(w_1..w_M) = (1/M) sum_i f(w_i) - E[f].

Its L_p -> L_p norm is at most 2^(2/p - 1) M^((1-p)/p) for p in [1, 2],
which is what `verify_theta_bound` checks on concrete fields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hermitian import assert_hermitian

ENUM_GUARD = 10**6


@dataclass(frozen=True)
class OperatorField:
    """values[w] is the matrix at point w; weights is the probability measure."""

    values: np.ndarray  # (|Omega|, d, d) complex
    weights: np.ndarray  # (|Omega|,) probabilities

    def __post_init__(self):
        v = np.asarray(self.values, np.complex128)
        w = np.asarray(self.weights, np.float64)
        if v.ndim != 3 or v.shape[1] != v.shape[2]:
            raise ValidationError(f"values must be (|Omega|, d, d), got {v.shape}")
        if w.ndim != 1 or len(w) != v.shape[0]:
            raise ValidationError("weights must match the number of points")
        if float(w.min()) < -1e-12 or abs(float(w.sum()) - 1.0) > 1e-10:
            raise ValidationError("weights must be a probability vector")
        for mat in v:
            assert_hermitian(mat)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))

    @property
    def points(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def _schatten_pows(values: np.ndarray, p: float) -> np.ndarray:
    s = np.abs(np.linalg.eigvalsh(values))
    return (s**p).sum(axis=1)


def lp_norm(field: OperatorField, p: float) -> float:
    """( sum_w mu(w) ||f(w)||_p^p )^(1/p) with the Schatten p-norm inside."""
    if p == np.inf:
        sup = 0.0
        for w, mat in zip(field.weights, field.values):
            if w > 0.0:
                sup = max(sup, float(np.abs(np.linalg.eigvalsh(mat)).max()))
        return sup
    if p < 1:
        raise ValidationError(f"L_p norm requires p >= 1, got {p}")
    total = float(field.weights @ _schatten_pows(field.values, p))
    return total ** (1.0 / p)


def mean_field(field: OperatorField) -> np.ndarray:
    return np.tensordot(field.weights, field.values, axes=(0, 0))


def pi_embed(field: OperatorField, M: int, i: int) -> OperatorField:
    """Pull-back along the i-th coordinate projection Omega^M -> Omega."""
    if not 0 <= i < M:
        raise ValidationError(f"coordinate index {i} outside [0, {M})")
    k, d = field.points, field.dim
    total = k**M
    if total > ENUM_GUARD:
        raise ValidationError(f"|Omega|^M = {total} exceeds the {ENUM_GUARD:.0e} guard")
    idx = (np.arange(total, dtype=np.int64) // k ** (M - 1 - i)) % k
    weights = _product_weights(field.weights, M)
    return OperatorField(field.values[idx], weights)


def _product_weights(w: np.ndarray, M: int) -> np.ndarray:
    out = w
    for _ in range(M - 1):
        out = np.kron(out, w)
    # kron keeps lexicographic order: index = sum_i w_i k^(M-1-i)
    out = out / out.sum()
    return out


def theta_apply(field: OperatorField, M: int) -> OperatorField:
    """Theta(f) as an explicit field on the product space Omega^M."""
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    k, d = field.points, field.dim
    total = k**M
    if total > ENUM_GUARD:
        raise ValidationError(f"|Omega|^M = {total} exceeds the {ENUM_GUARD:.0e} guard")
    mean = mean_field(field)
    values = np.empty((total, d, d), np.complex128)
    chunk = max(1, int(2e6 / (d * d * M)))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((len(idx), M), np.int64)
        rem = idx.copy()
        for j in range(M - 1, -1, -1):
            digits[:, j] = rem % k
            rem //= k
        values[idx] = field.values[digits].mean(axis=1) - mean
    return OperatorField(values, _product_weights(field.weights, M))


def l2_inner(a: OperatorField, b: OperatorField) -> float:
    """Hilbert-Schmidt inner product under the shared measure."""
    if a.values.shape != b.values.shape:
        raise ValidationError("fields live on different spaces")
    hs = np.einsum("wij,wij->w", a.values.conj(), b.values).real
    return float(a.weights @ hs)


def theta_norm_bound(M: int, p: float) -> float:
    if not 1.0 <= p <= 2.0:
        raise ValidationError(f"the Theta bound needs p in [1, 2], got {p}")
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    return 2.0 ** (2.0 / p - 1.0) * M ** ((1.0 - p) / p)


def verify_theta_bound(field: OperatorField, M: int, p: float):
    """(lhs, rhs, holds): the realized ratio ||Theta f||_p / ||f||_p against
    the proved norm bound, with a 1e-9 slack on the comparison."""
    rhs = theta_norm_bound(M, p)
    denom = lp_norm(field, p)
    if denom <= 0.0:
        return 0.0, rhs, True
    lhs = lp_norm(theta_apply(field, M), p) / denom
    return lhs, rhs, bool(lhs <= rhs + 1e-9)
