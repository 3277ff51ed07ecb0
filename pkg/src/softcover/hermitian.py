"""Hermitian linear algebra with explicit support handling.

All powers and logarithms of positive semidefinite matrices act on the
support only; spectral weight below SUPPORT_RTOL times the largest
eigenvalue counts as kernel.  Logarithms are natural throughout.
"""
from __future__ import annotations

import numpy as np

from .errors import ValidationError

HERMITICITY_TOL = 1e-12
SUPPORT_RTOL = 1e-14
PSD_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Coerce a DensityOperator or array-like to a complex square matrix."""
    if isinstance(a, DensityOperator):
        return a.matrix
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def assert_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> None:
    gap = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if gap > tol:
        raise ValidationError(f"matrix is not Hermitian: max |A - A^dag| = {gap:.3e} > {tol:g}")


def eigh(a, tol: float = HERMITICITY_TOL):
    """Eigenvalues (descending) and matching unitary of a Hermitian matrix."""
    m = as_matrix(a)
    assert_hermitian(m, tol)
    w, v = np.linalg.eigh(hermitize(m))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def _psd_spectrum(a, tol: float = PSD_TOL):
    w, v = eigh(a)
    scale = max(float(w[0]), 0.0) if len(w) else 0.0
    floor = -tol * max(scale, 1.0)
    if len(w) and float(w[-1]) < floor:
        raise ValidationError(
            f"matrix is not positive semidefinite: eigenvalue {float(w[-1]):.3e} < {floor:.3e}"
        )
    return np.clip(w, 0.0, None), v


def matrix_power(a, t: float):
    """A**t on the support of A; the kernel stays kernel.

    Negative powers of a vanishing matrix return zero (the degenerate case
    is the caller's concern, flagged here only through the zero result).
    """
    w, v = _psd_spectrum(a)
    scale = float(w[0]) if len(w) else 0.0
    mapped = np.zeros_like(w)
    if scale > 0.0:
        supp = w > SUPPORT_RTOL * scale
        mapped[supp] = w[supp] ** t
    return (v * mapped) @ v.conj().T


def matrix_log(a):
    """Natural log on the support of A; kernel directions map to zero."""
    w, v = _psd_spectrum(a)
    scale = float(w[0]) if len(w) else 0.0
    mapped = np.zeros_like(w)
    if scale > 0.0:
        supp = w > SUPPORT_RTOL * scale
        mapped[supp] = np.log(w[supp])
    return (v * mapped) @ v.conj().T


def matrix_exp_hermitian(h):
    w, v = eigh(h)
    return (v * np.exp(w)) @ v.conj().T


def schatten_norm(a, p) -> float:
    """Schatten p-norm for p >= 1 or p = inf; p < 1 is rejected."""
    m = as_matrix(a)
    if p != np.inf and p < 1:
        raise ValidationError(f"Schatten norm requires p >= 1, got p = {p}")
    s = np.linalg.svd(m, compute_uv=False)
    if p == np.inf:
        return float(s[0]) if len(s) else 0.0
    return float((s**p).sum() ** (1.0 / p))


def trace_distance(rho, sigma) -> float:
    a = as_matrix(rho)
    b = as_matrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    ev = np.linalg.eigvalsh(hermitize(a - b))
    return float(min(max(0.5 * np.abs(ev).sum(), 0.0), 1.0))


def helstrom_value(rho, sigma):
    """Max over projectors of Tr[P (rho - sigma)], with the optimizer.

    Equals the trace distance; the returned projector spans the positive
    eigenspace of the difference.
    """
    a = as_matrix(rho)
    b = as_matrix(sigma)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    w, v = eigh(a - b)
    pos = w > 0.0
    proj = v[:, pos] @ v[:, pos].conj().T
    return float(w[pos].sum()), proj


class DensityOperator:
    """A validated density matrix with its eigensystem.

    Input must be Hermitian within 1e-12, have eigenvalues >= -1e-10 (small
    negatives are clamped to zero), and unit trace within 1e-10.  `matrix`
    is reconstructed from the clamped spectrum, so it is exactly PSD.
    """

    __slots__ = ("matrix", "eigenvalues", "eigenvectors", "dim")

    def __init__(self, matrix):
        m = as_matrix(matrix)
        assert_hermitian(m)
        w, v = np.linalg.eigh(hermitize(m))
        if float(w.min()) < -PSD_TOL:
            raise ValidationError(f"not a state: eigenvalue {float(w.min()):.3e} < -{PSD_TOL:g}")
        w = np.clip(w, 0.0, None)
        tr = float(w.sum())
        if abs(tr - 1.0) > PSD_TOL:
            raise ValidationError(f"not a state: trace {tr!r} differs from 1 by more than {PSD_TOL:g}")
        order = np.argsort(-w, kind="stable")
        w = w[order]
        v = v[:, order]
        self.eigenvalues = w
        self.eigenvectors = v
        self.matrix = (v * w) @ v.conj().T
        self.dim = m.shape[0]

    @property
    def support_mask(self) -> np.ndarray:
        top = float(self.eigenvalues[0])
        return self.eigenvalues > SUPPORT_RTOL * top

    @property
    def support_dim(self) -> int:
        return int(self.support_mask.sum())

    def support_basis(self) -> np.ndarray:
        """Isometry whose columns span the support."""
        return self.eigenvectors[:, self.support_mask]

    def support_projector(self) -> np.ndarray:
        u = self.support_basis()
        return u @ u.conj().T

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim}, rank={self.support_dim})"


def _support_isometry(a) -> np.ndarray:
    if isinstance(a, DensityOperator):
        return a.support_basis()
    w, v = _psd_spectrum(a)
    scale = float(w[0]) if len(w) else 0.0
    supp = w > SUPPORT_RTOL * max(scale, 0.0) if scale > 0.0 else np.zeros(len(w), bool)
    return v[:, supp]


def support_contained(rho, sigma, tol: float = 1e-9) -> bool:
    """Whether supp(rho) lies inside supp(sigma), up to tol in projector trace."""
    ur = _support_isometry(rho)
    us = _support_isometry(sigma)
    leak = ur.shape[1] - float(np.linalg.norm(us.conj().T @ ur) ** 2)
    return leak <= tol


def supports_intersect(rho, sigma, tol: float = 1e-9) -> bool:
    ur = _support_isometry(rho)
    us = _support_isometry(sigma)
    return float(np.linalg.norm(us.conj().T @ ur) ** 2) > tol
