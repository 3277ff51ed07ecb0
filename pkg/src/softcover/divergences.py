"""Renyi and relative-entropy divergences between quantum states.

Conventions: natural logarithms, so every value is in nats.  The first
argument must be a density operator; the second only needs to be positive
semidefinite with positive trace.  A support mismatch makes the true value
infinite and is reported through the `support_violated` flag rather than an
exception.  alpha = 1 is rejected outright: use relative_entropy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hermitian import SUPPORT_RTOL, DensityOperator, _psd_spectrum, as_matrix


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    alpha: float | None
    kind: str
    support_violated: bool = False

    def __float__(self) -> float:
        return self.value


def _as_density(rho) -> DensityOperator:
    return rho if isinstance(rho, DensityOperator) else DensityOperator(rho)


def _sigma_spectrum(sigma):
    w, v = _psd_spectrum(sigma)
    scale = float(w[0]) if len(w) else 0.0
    if scale <= 0.0:
        raise ValidationError("second argument is the zero matrix")
    supp = w > SUPPORT_RTOL * scale
    return w[supp], v[:, supp]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0.0:
        raise ValidationError(f"alpha must be positive and finite, got {alpha!r}")
    if alpha == 1.0:
        raise ValidationError("alpha = 1 is excluded; use relative_entropy")
    return alpha


def _overlaps(rho: DensityOperator, sw, sv):
    """Support spectra of both arguments and the squared-overlap matrix."""
    a = rho.eigenvalues[rho.support_mask]
    ur = rho.support_basis()
    if ur.shape[0] != sv.shape[0]:
        raise ValidationError(f"dimension mismatch: {ur.shape[0]} vs {sv.shape[0]}")
    o = np.abs(ur.conj().T @ sv) ** 2
    return a, o


def _containment_defect(o: np.ndarray) -> float:
    # rows sum to 1 over the full sigma eigenbasis; the shortfall over the
    # support columns is the mass of rho leaking into ker(sigma)
    return float(np.max(1.0 - o.sum(axis=1))) if o.size else 1.0


def petz_renyi(rho, sigma, alpha: float) -> DivergenceValue:
    """Petz-Renyi divergence ln Tr[rho^a sigma^(1-a)] / (a - 1)."""
    alpha = _check_alpha(alpha)
    rho = _as_density(rho)
    sw, sv = _sigma_spectrum(sigma)
    a, o = _overlaps(rho, sw, sv)
    if alpha > 1.0 and _containment_defect(o) > 1e-9:
        return DivergenceValue(np.inf, alpha, "petz", support_violated=True)
    if alpha < 1.0 and (o.size == 0 or float(o.max()) < 1e-12):
        # disjoint supports: the overlap is pure roundoff, the value infinite
        return DivergenceValue(np.inf, alpha, "petz", support_violated=True)
    q = float((a**alpha) @ o @ (sw ** (1.0 - alpha)))
    if q <= 0.0:
        return DivergenceValue(np.inf, alpha, "petz", support_violated=True)
    return DivergenceValue(math.log(q) / (alpha - 1.0), alpha, "petz")


def sandwiched_renyi(rho, sigma, alpha: float) -> DivergenceValue:
    """Sandwiched Renyi divergence ln Tr[(sigma^t rho sigma^t)^a] / (a - 1),
    with t = (1 - a) / (2a)."""
    alpha = _check_alpha(alpha)
    rho = _as_density(rho)
    sw, sv = _sigma_spectrum(sigma)
    if sv.shape[0] != rho.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sv.shape[0]}")
    t = (1.0 - alpha) / (2.0 * alpha)
    if alpha > 1.0:
        a, o = _overlaps(rho, sw, sv)
        if _containment_defect(o) > 1e-9:
            return DivergenceValue(np.inf, alpha, "sandwiched", support_violated=True)
    st = sw**t
    rho_s = sv.conj().T @ rho.matrix @ sv
    if alpha < 1.0 and float(np.trace(rho_s).real) < 1e-12:
        return DivergenceValue(np.inf, alpha, "sandwiched", support_violated=True)
    mid = (st[:, None] * rho_s) * st[None, :]
    lam = np.clip(np.linalg.eigvalsh(0.5 * (mid + mid.conj().T)), 0.0, None)
    q = float((lam**alpha).sum())
    if q <= 0.0:
        return DivergenceValue(np.inf, alpha, "sandwiched", support_violated=True)
    return DivergenceValue(math.log(q) / (alpha - 1.0), alpha, "sandwiched")


def _log_spectra(rho: DensityOperator, sigma):
    sw, sv = _sigma_spectrum(sigma)
    a, o = _overlaps(rho, sw, sv)
    violated = _containment_defect(o) > 1e-9
    return a, sw, o, violated


def relative_entropy(rho, sigma) -> DivergenceValue:
    """Umegaki relative entropy Tr[rho (ln rho - ln sigma)] in nats."""
    rho = _as_density(rho)
    a, sw, o, violated = _log_spectra(rho, sigma)
    if violated:
        return DivergenceValue(np.inf, None, "relative", support_violated=True)
    d = float(a @ np.log(a) - a @ o @ np.log(sw))
    return DivergenceValue(d, None, "relative")


def relative_entropy_variance(rho, sigma) -> DivergenceValue:
    """Variance of the log-likelihood ratio:
    Tr[rho (ln rho - ln sigma)^2] - D(rho||sigma)^2."""
    rho = _as_density(rho)
    a, sw, o, violated = _log_spectra(rho, sigma)
    if violated:
        return DivergenceValue(np.inf, None, "variance", support_violated=True)
    diff = np.log(a)[:, None] - np.log(sw)[None, :]
    d = float((a[:, None] * o * diff).sum())
    second = float((a[:, None] * o * diff**2).sum())
    return DivergenceValue(max(second - d * d, 0.0), None, "variance")
