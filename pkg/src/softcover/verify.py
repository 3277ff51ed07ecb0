"""Named verification suites behind the command-line `verify` subcommand.

Each suite evaluates a family of proved inequalities or identities on
concrete inputs and reports one row per check.  Rows never raise; the
caller decides what a failed row means (the CLI exits 3).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import petz_renyi, relative_entropy, sandwiched_renyi
from .errors import ValidationError
from .exponents import (
    nshot_bounds,
    one_shot_achievability_bound,
    one_shot_sc_bound,
)
from .hermitian import hermitize, matrix_power
from .info import (
    SolverConfig,
    petz_down_augustin_info,
    petz_down_renyi_info,
    sandwiched_augustin_info,
    sandwiched_renyi_info,
)
from .codebooks import enumerate_type_class, type_class_probability, type_class_size
from .sources import CqSource, marginal, mutual_information, product_source, variances
from .theta import OperatorField, l2_inner, lp_norm, mean_field, pi_embed, theta_apply, verify_theta_bound


@dataclass(frozen=True)
class CheckRow:
    suite: str
    check: str
    lhs: float
    rhs: float
    passed: bool
    detail: str = ""

    def fields(self):
        return {
            "suite": self.suite,
            "check": self.check,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "detail": self.detail,
        }


def demo_models():
    """Small fixed models exercised by the suites: one orthogonal-pure, one
    pure-vs-mixed, one non-commuting triple."""
    uniform = CqSource([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    pure_mixed = CqSource([0.5, 0.5], [np.diag([1.0, 0.0]), np.diag([0.5, 0.5])])
    plus = np.full((2, 2), 0.5, dtype=np.complex128)
    ymix = np.array([[0.6, -0.2j], [0.2j, 0.4]], dtype=np.complex128)
    triple = CqSource(
        [0.5, 0.25, 0.25],
        [np.diag([0.8, 0.2]).astype(np.complex128), plus, ymix],
        prior_fractions=("1/2", "1/4", "1/4"),
    )
    return [("uniform-orthogonal", uniform), ("pure-mixed", pure_mixed), ("tilted-triple", triple)]


def _row(suite, check, lhs, rhs, passed, detail=""):
    return CheckRow(suite, check, float(lhs), float(rhs), bool(passed), detail)


def _random_density(rng, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def _random_psd(rng, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g @ g.conj().T


def suite_theta(seed: int = 0):
    rows = []
    # scalar Rademacher field saturates the p = 2 norm bound exactly
    rad = OperatorField(np.array([[[1.0]], [[-1.0]]], np.complex128), np.array([0.5, 0.5]))
    for m in (2, 4, 8):
        lhs, rhs, _ = verify_theta_bound(rad, m, 2.0)
        rows.append(_row("theta", f"rademacher-tight-M{m}", lhs, rhs, abs(lhs - rhs) <= 1e-12))
    rng = np.random.default_rng(seed)
    vals = np.stack([hermitize(_random_psd(rng, 2)) - np.eye(2) for _ in range(3)])
    w = rng.random(3)
    field = OperatorField(vals, w / w.sum())
    for p in (1.0, 1.3, 1.7, 2.0):
        for m in (2, 3):
            lhs, rhs, ok = verify_theta_bound(field, m, p)
            rows.append(_row("theta", f"bound-p{p}-M{m}", lhs, rhs, ok))
    n_f = lp_norm(field, 1.5)
    emb = pi_embed(field, 3, 1)
    rows.append(
        _row("theta", "pullback-isometry", lp_norm(emb, 1.5), n_f, abs(lp_norm(emb, 1.5) - n_f) <= 1e-12)
    )
    mean = mean_field(field)
    const = OperatorField(np.stack([mean] * field.points), field.weights)
    rows.append(
        _row("theta", "mean-contraction", lp_norm(const, 1.5), n_f, lp_norm(const, 1.5) <= n_f + 1e-12)
    )
    m = 3
    centered = []
    for i in range(m):
        emb_i = pi_embed(field, m, i)
        centered.append(OperatorField(emb_i.values - mean, emb_i.weights))
    worst = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            worst = max(worst, abs(l2_inner(centered[i], centered[j])))
    rows.append(_row("theta", "coordinate-orthogonality", worst, 1e-12, worst <= 1e-12))
    return rows


def suite_trace_inequality(seed: int = 0):
    """Tr[K (K+L)^(-1/2) L (K+L)^(-1/2)] <= Tr[K^(1-s) L^s] on random PSD pairs."""
    rng = np.random.default_rng(seed)
    rows = []
    for d in (2, 3, 4):
        k_mat = _random_psd(rng, d)
        l_mat = _random_psd(rng, d)
        root = matrix_power(k_mat + l_mat, -0.5)
        lhs = float(np.trace(k_mat @ root @ l_mat @ root).real)
        for s in (0.25, 0.5, 0.75):
            rhs = float(np.trace(matrix_power(k_mat, 1.0 - s) @ matrix_power(l_mat, s)).real)
            rows.append(_row("trace-inequality", f"d{d}-s{s}", lhs, rhs, lhs <= rhs + 1e-9))
    k_mat = _random_psd(rng, 3)
    root = matrix_power(2.0 * k_mat, -0.5)
    lhs = float(np.trace(k_mat @ root @ k_mat @ root).real)
    half_tr = 0.5 * float(np.trace(k_mat).real)
    rows.append(_row("trace-inequality", "equal-arguments", lhs, half_tr, abs(lhs - half_tr) <= 1e-9))
    return rows


def suite_orderings(seed: int = 0):
    rows = []
    rng = np.random.default_rng(seed)
    rho = _random_density(rng, 3)
    sigma = _random_density(rng, 3)
    alphas = [0.5, 0.75, 0.9, 1.1, 1.5, 2.0]
    petz_vals = [petz_renyi(rho, sigma, a).value for a in alphas]
    sand_vals = [sandwiched_renyi(rho, sigma, a).value for a in alphas]
    mono_p = all(b >= a - 1e-10 for a, b in zip(petz_vals, petz_vals[1:]))
    mono_s = all(b >= a - 1e-10 for a, b in zip(sand_vals, sand_vals[1:]))
    rows.append(_row("orderings", "petz-alpha-monotone", min(petz_vals), max(petz_vals), mono_p))
    rows.append(_row("orderings", "sandwiched-alpha-monotone", min(sand_vals), max(sand_vals), mono_s))
    worst = max(s - p for s, p in zip(sand_vals, petz_vals))
    rows.append(_row("orderings", "sandwiched-below-petz", worst, 0.0, worst <= 1e-10))
    cfg = SolverConfig()
    for name, cq in demo_models():
        for a in (1.1, 1.5, 2.0):
            i_star = sandwiched_renyi_info(cq, a, cfg).value
            i_star_b = sandwiched_augustin_info(cq, a, cfg).value
            i_down = petz_down_renyi_info(cq, a).value
            i_down_b = petz_down_augustin_info(cq, a).value
            rows.append(
                _row("orderings", f"{name}-a{a}-star-below-down", i_star, i_down, i_star <= i_down + 1e-7)
            )
            rows.append(
                _row(
                    "orderings",
                    f"{name}-a{a}-augustin-below-renyi",
                    i_star_b,
                    i_star,
                    i_star_b <= i_star + 1e-7,
                )
            )
            rows.append(
                _row(
                    "orderings",
                    f"{name}-a{a}-down-augustin-below-renyi",
                    i_down_b,
                    i_down,
                    i_down_b <= i_down + 1e-10,
                )
            )
        v, v_breve = variances(cq)
        rho_b = marginal(cq)
        spread = 0.0
        mean_d = mutual_information(cq)
        for px, op in zip(cq.prior, cq.states):
            if px > 0.0:
                d_x = relative_entropy(op, rho_b).value
                spread += px * (d_x - mean_d) ** 2
        rows.append(
            _row(
                "orderings",
                f"{name}-variance-split",
                v,
                v_breve + spread,
                abs(v - (v_breve + spread)) <= 1e-10,
            )
        )
    return rows


def _richardson(f, base: float, h: float = 1e-3):
    s1 = (f(1.0 + h) - base) / h
    s2 = (f(1.0 + 10.0 * h) - base) / (10.0 * h)
    return (10.0 * s1 - s2) / 9.0


def suite_derivatives(seed: int = 0):
    """Slopes of the information quantities at alpha -> 1 against V/2."""
    rows = []
    cfg = SolverConfig()
    for name, cq in demo_models():
        i_val = mutual_information(cq)
        v, v_breve = variances(cq)
        checks = [
            ("star-renyi", lambda a, s=cq: sandwiched_renyi_info(s, a, cfg).value, v / 2.0),
            ("star-augustin", lambda a, s=cq: sandwiched_augustin_info(s, a, cfg).value, v_breve / 2.0),
            ("down-renyi", lambda a, s=cq: petz_down_renyi_info(s, 2.0 - 1.0 / a).value, v / 2.0),
            ("down-augustin", lambda a, s=cq: petz_down_augustin_info(s, 2.0 - 1.0 / a).value, v_breve / 2.0),
        ]
        for label, f, target in checks:
            got = _richardson(f, i_val)
            tol = max(1e-4, 1e-3 * abs(target))
            rows.append(_row("derivatives", f"{name}-{label}", got, target, abs(got - target) <= tol))
    return rows


def suite_additivity(seed: int = 0):
    rows = []
    cfg = SolverConfig()
    for name, cq in demo_models():
        sq = product_source(cq, 2)
        for a in (0.5, 1.5, 2.0):
            one = petz_down_renyi_info(cq, a).value
            two = petz_down_renyi_info(sq, a).value
            rows.append(_row("additivity", f"{name}-down-renyi-a{a}", two, 2 * one, abs(two - 2 * one) <= 1e-9))
            one_b = petz_down_augustin_info(cq, a).value
            two_b = petz_down_augustin_info(sq, a).value
            rows.append(
                _row("additivity", f"{name}-down-augustin-a{a}", two_b, 2 * one_b, abs(two_b - 2 * one_b) <= 1e-9)
            )
        for a in (1.5,):
            one = sandwiched_renyi_info(cq, a, cfg).value
            two = sandwiched_renyi_info(sq, a, cfg).value
            rows.append(_row("additivity", f"{name}-star-renyi-a{a}", two, 2 * one, abs(two - 2 * one) <= 1e-6))
    return rows


def suite_type_class(seed: int = 0):
    rows = []
    cases = [
        (("1/2", "1/2"), 4),
        (("1/2", "1/2"), 32),
        (("3/4", "1/4"), 4),
        (("3/4", "1/4"), 32),
        (("1/2", "1/4", "1/4"), 4),
        (("1/2", "1/4", "1/4"), 32),
    ]
    from fractions import Fraction

    for prior, n in cases:
        fr = tuple(Fraction(q) for q in prior)
        br = type_class_probability(fr, n)
        exact = float(br.exact)
        label = "p(" + ",".join(prior) + f")-n{n}"
        rows.append(
            _row(
                "type-class",
                f"bracket-{label}",
                exact,
                br.stirling_hi,
                br.stirling_lo <= exact <= br.stirling_hi,
                detail=f"lo={br.stirling_lo!r}",
            )
        )
        if n <= 8:
            members = enumerate_type_class(fr, n)
            size = type_class_size(fr, n)
            rows.append(
                _row("type-class", f"enumeration-{label}", len(members), size, len(members) == size)
            )
    return rows


def suite_consistency(seed: int = 0):
    """nshot_bounds at n = 1 against the standalone one-shot operations."""
    rows = []
    cfg = SolverConfig()
    rate = math.log(2.0)
    for name, cq in demo_models():
        rec = nshot_bounds(cq, 1, rate, cfg)
        sc_direct = one_shot_sc_bound(cq, rec.M, rec.alpha_sc_iid)
        rows.append(
            _row(
                "consistency",
                f"{name}-sc-oneshot",
                max(sc_direct, 0.0),
                rec.sc_iid,
                abs(max(sc_direct, 0.0) - rec.sc_iid) <= 1e-9,
            )
        )
        a = rec.alpha_ach_iid
        direct = one_shot_achievability_bound(cq, rec.M, a, cfg) if a < 2.0 else None
        if direct is not None:
            expected = 2.0 ** (2.0 / a - 2.0) * rec.ach_iid
            rows.append(
                _row(
                    "consistency",
                    f"{name}-ach-prefactor",
                    direct,
                    expected,
                    abs(direct - expected) <= 1e-9,
                )
            )
    return rows


SUITES = {
    "theta": suite_theta,
    "trace-inequality": suite_trace_inequality,
    "orderings": suite_orderings,
    "derivatives": suite_derivatives,
    "additivity": suite_additivity,
    "type-class": suite_type_class,
    "consistency": suite_consistency,
}


def run_suites(names=None, seed: int = 0):
    if names is None or names == ["all"]:
        names = list(SUITES)
    rows = []
    for name in names:
        fn = SUITES.get(name)
        if fn is None:
            raise ValidationError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
        rows.extend(fn(seed))
    return rows
