"""Covering error exponents and finite-n trace-distance bounds.

Achievability: for rates above the mutual information the expected covering
error of a random codebook decays like exp(-n E(R)) with

    E*(R)     = sup_{a in (1,2)} (a-1)/a (R - I*_a)       (i.i.d. codebooks)
    E-breve*  = the same with the Augustin form             (constant comp.)

Strong converse: below the mutual information the error tends to one like
1 - 4 exp(-n E_sc(R)) with

    E_sc(R)   = sup_{a in (1/2,1)} (1-a)/a (I-down_{2-1/a} - R)

and its Augustin variant for constant composition.  Suprema are found on a
64-point grid over the open alpha interval followed by golden-section
refinement around the best point; rates are in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebooks import stirling_constant, type_class_probability
from .errors import SolverError, ValidationError
from .info import (
    SolverConfig,
    petz_down_augustin_info,
    petz_down_renyi_info,
    sandwiched_augustin_info,
    sandwiched_renyi_info,
)
from .sources import CqSource

ALPHA_EDGE = 1e-4
GRID_POINTS = 64
GOLDEN_ROUNDS = 3
GOLDEN_ITERS_PER_ROUND = 8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check_rate(rate: float) -> float:
    rate = float(rate)
    if not math.isfinite(rate) or rate < 0.0:
        raise ValidationError(f"rate must be finite and >= 0 nats, got {rate!r}")
    return rate


def _star_info(cq: CqSource, alpha: float, form: str, cfg: SolverConfig):
    """Certified starred information at alpha, or None when the solver fails.

    Objectives map a failed alpha to -inf, excluding it from the supremum;
    if every alpha is excluded the optimization raises SolverError.
    """
    if form == "iid":
        res = sandwiched_renyi_info(cq, alpha, cfg)
    else:
        res = sandwiched_augustin_info(cq, alpha, cfg)
    return res.value if res.converged else None


def _grid_max(fn, lo: float, hi: float):
    xs = np.linspace(lo, hi, GRID_POINTS)
    vals = [fn(float(x)) for x in xs]
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, GRID_POINTS - 1)])
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(GOLDEN_ROUNDS * GOLDEN_ITERS_PER_ROUND):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = fn(x1)
    for x, v in ((x1, f1), (x2, f2)):
        if v > best_v:
            best_x, best_v = x, v
    if not math.isfinite(best_v):
        raise SolverError("no alpha on the grid produced a certified value")
    return best_v, best_x


def one_shot_achievability_bound(
    cq: CqSource, M: int, alpha: float, cfg: SolverConfig | None = None
) -> float:
    """2^(2/a - 2) exp((a-1)/a (I*_a - ln M)) for a in (1, 2)."""
    alpha = float(alpha)
    if not 1.0 < alpha < 2.0:
        raise ValidationError(f"alpha must lie in (1, 2), got {alpha!r}")
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    res = sandwiched_renyi_info(cq, alpha, cfg or SolverConfig())
    if not res.converged:
        raise SolverError(f"solver did not certify I*_alpha at alpha = {alpha}")
    return 2.0 ** (2.0 / alpha - 2.0) * math.exp((alpha - 1.0) / alpha * (res.value - math.log(M)))


def one_shot_sc_bound(cq: CqSource, M: int, alpha: float) -> float:
    """1 - 4 exp((a-1)/a (I-down_{2-1/a} - ln M)) for a in (1/2, 1).

    Meaningful when positive; the raw value is returned either way.
    """
    alpha = float(alpha)
    if not 0.5 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (1/2, 1), got {alpha!r}")
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    info = petz_down_renyi_info(cq, 2.0 - 1.0 / alpha).value
    return 1.0 - 4.0 * math.exp((alpha - 1.0) / alpha * (info - math.log(M)))


def achievability_exponent_iid(cq: CqSource, rate: float, cfg: SolverConfig | None = None):
    """(E*(R), argmax alpha); zero when the rate is not above I(X:B)."""
    rate = _check_rate(rate)
    cfg = cfg or SolverConfig()

    def fn(a: float) -> float:
        info = _star_info(cq, a, "iid", cfg)
        return -math.inf if info is None else (a - 1.0) / a * (rate - info)

    val, a_star = _grid_max(fn, 1.0 + ALPHA_EDGE, 2.0 - ALPHA_EDGE)
    return max(val, 0.0), a_star


def achievability_exponent_cc(cq: CqSource, rate: float, cfg: SolverConfig | None = None):
    """Constant-composition variant, built on the Augustin form."""
    rate = _check_rate(rate)
    cfg = cfg or SolverConfig()

    def fn(a: float) -> float:
        info = _star_info(cq, a, "cc", cfg)
        return -math.inf if info is None else (a - 1.0) / a * (rate - info)

    val, a_star = _grid_max(fn, 1.0 + ALPHA_EDGE, 2.0 - ALPHA_EDGE)
    return max(val, 0.0), a_star


def sc_exponent_iid(cq: CqSource, rate: float):
    """(E_sc(R), argmax alpha); zero when the rate is not below I(X:B)."""
    rate = _check_rate(rate)

    def fn(a: float) -> float:
        return (1.0 - a) / a * (petz_down_renyi_info(cq, 2.0 - 1.0 / a).value - rate)

    val, a_star = _grid_max(fn, 0.5 + ALPHA_EDGE, 1.0 - ALPHA_EDGE)
    return max(val, 0.0), a_star


def sc_exponent_cc(cq: CqSource, rate: float):
    rate = _check_rate(rate)

    def fn(a: float) -> float:
        return (1.0 - a) / a * (petz_down_augustin_info(cq, 2.0 - 1.0 / a).value - rate)

    val, a_star = _grid_max(fn, 0.5 + ALPHA_EDGE, 1.0 - ALPHA_EDGE)
    return max(val, 0.0), a_star


@dataclass(frozen=True)
class BoundRecord:
    """Finite-n covering bounds at rate R with M = ceil(exp(nR)) codewords.

    ach_* / sc_* carry the plain exponent forms exp(-n E) and
    max(1 - 4 exp(-n E_sc), 0).  The *_tight achievability fields keep the
    one-shot prefactor 2^(2/a - 2) and use ln M instead of nR, which is
    what a simulation should be compared against.  sc_cc_exact evaluates
    the constant-composition converse with the exact type-class
    probability instead of a Stirling estimate; it is NaN when the
    composition n p is not integral.
    """

    n: int
    rate: float
    M: int
    ach_iid: float
    ach_cc: float
    sc_iid: float
    sc_cc: float
    ach_iid_tight: float
    ach_cc_tight: float
    sc_cc_exact: float
    alpha_ach_iid: float
    alpha_ach_cc: float
    alpha_sc_iid: float
    alpha_sc_cc: float
    alpha_sc_cc_exact: float
    k_p: float
    note: str = ""

    def fields(self):
        return {
            "n": self.n,
            "rate": self.rate,
            "M": self.M,
            "ach_iid": self.ach_iid,
            "ach_cc": self.ach_cc,
            "sc_iid": self.sc_iid,
            "sc_cc": self.sc_cc,
            "ach_iid_tight": self.ach_iid_tight,
            "ach_cc_tight": self.ach_cc_tight,
            "sc_cc_exact": self.sc_cc_exact,
            "alpha_ach_iid": self.alpha_ach_iid,
            "alpha_ach_cc": self.alpha_ach_cc,
            "alpha_sc_iid": self.alpha_sc_iid,
            "alpha_sc_cc": self.alpha_sc_cc,
            "alpha_sc_cc_exact": self.alpha_sc_cc_exact,
            "k_p": self.k_p,
            "note": self.note,
        }


def _tight_ach(cq: CqSource, n: int, ln_m: float, form: str, cfg: SolverConfig):
    def neg_log_bound(a: float) -> float:
        info = _star_info(cq, a, form, cfg)
        if info is None:
            return -math.inf
        return -((2.0 / a - 2.0) * math.log(2.0) + (a - 1.0) / a * (n * info - ln_m))

    val, a_star = _grid_max(neg_log_bound, 1.0 + ALPHA_EDGE, 2.0 - ALPHA_EDGE)
    return math.exp(-val), a_star


def bounds_at_m(cq: CqSource, n: int, M: int, kind: str = "iid", cfg: SolverConfig | None = None) -> dict:
    """Best finite-n bounds for an explicit codebook size M.

    Achievability keeps the one-shot prefactor; the cc strong converse uses
    the exact type-class probability, so it raises when the composition
    n p is not integral.  These are the curves a simulation is held to.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")
    cfg = cfg or SolverConfig()
    ln_m = math.log(M)
    if kind == "iid":
        ach, a_ach = _tight_ach(cq, n, ln_m, "iid", cfg)

        def neg_term(a: float) -> float:
            return -((a - 1.0) / a * (n * petz_down_renyi_info(cq, 2.0 - 1.0 / a).value - ln_m))

    elif kind == "cc":
        ach, a_ach = _tight_ach(cq, n, ln_m, "cc", cfg)
        bracket = type_class_probability(cq, n)
        ln_pt = math.log(bracket.exact.numerator) - math.log(bracket.exact.denominator)

        def neg_term(a: float) -> float:
            info = petz_down_augustin_info(cq, 2.0 - 1.0 / a).value
            return -((1.0 - a) / a * ln_m + (a - 1.0) / a * (n * info + ln_pt))

    else:
        raise ValidationError(f"kind must be 'iid' or 'cc', got {kind!r}")
    best, a_sc = _grid_max(neg_term, 0.5 + ALPHA_EDGE, 1.0 - ALPHA_EDGE)
    return {
        "ach": ach,
        "sc": 1.0 - 4.0 * math.exp(-best),
        "alpha_ach": a_ach,
        "alpha_sc": a_sc,
    }


def nshot_bounds(cq: CqSource, n: int, rate: float, cfg: SolverConfig | None = None) -> BoundRecord:
    """All finite-n bounds at block length n and rate R nats per copy."""
    rate = _check_rate(rate)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if n * rate > 700.0:
        raise ValidationError(f"n * rate = {n * rate:.1f} exceeds the exp overflow guard (700)")
    cfg = cfg or SolverConfig()
    M = max(int(math.ceil(math.exp(n * rate) - 1e-12)), 1)
    ln_m = math.log(M)
    e_iid, a_iid = achievability_exponent_iid(cq, rate, cfg)
    e_cc, a_cc = achievability_exponent_cc(cq, rate, cfg)
    esc_iid, b_iid = sc_exponent_iid(cq, rate)
    esc_cc, b_cc = sc_exponent_cc(cq, rate)
    tight_iid, _ = _tight_ach(cq, n, ln_m, "iid", cfg)
    tight_cc, _ = _tight_ach(cq, n, ln_m, "cc", cfg)
    note = ""
    try:
        at_m = bounds_at_m(cq, n, M, "cc", cfg)
        sc_cc_exact = max(at_m["sc"], 0.0)
        b_exact = at_m["alpha_sc"]
    except ValidationError as err:
        sc_cc_exact = math.nan
        b_exact = math.nan
        note = f"cc composition unavailable: {err}"
    try:
        k_p = stirling_constant(cq)
    except ValidationError:
        k_p = math.nan
    return BoundRecord(
        n=int(n),
        rate=rate,
        M=M,
        ach_iid=math.exp(-n * e_iid),
        ach_cc=math.exp(-n * e_cc),
        sc_iid=max(1.0 - 4.0 * math.exp(-n * esc_iid), 0.0),
        sc_cc=max(1.0 - 4.0 * math.exp(-n * esc_cc), 0.0),
        ach_iid_tight=tight_iid,
        ach_cc_tight=tight_cc,
        sc_cc_exact=sc_cc_exact,
        alpha_ach_iid=a_iid,
        alpha_ach_cc=a_cc,
        alpha_sc_iid=b_iid,
        alpha_sc_cc=b_cc,
        alpha_sc_cc_exact=b_exact,
        k_p=k_p,
        note=note,
    )


@dataclass(frozen=True)
class ModerateRow:
    n: int
    a_n: float
    rate: float
    n_exp_iid: float
    n_exp_cc: float
    gauss_iid: float
    gauss_cc: float
    ratio_iid: float
    ratio_cc: float

    def fields(self):
        return {
            "n": self.n,
            "a_n": self.a_n,
            "rate": self.rate,
            "n_exp_iid": self.n_exp_iid,
            "n_exp_cc": self.n_exp_cc,
            "gauss_iid": self.gauss_iid,
            "gauss_cc": self.gauss_cc,
            "ratio_iid": self.ratio_iid,
            "ratio_cc": self.ratio_cc,
        }


def moderate_deviation_scan(
    cq: CqSource, t: float, c: float, n_list, cfg: SolverConfig | None = None
) -> list:
    """Rates I + c n^(-t) for t in (0, 1/2): the scaled exponents n E(R_n)
    against their Gaussian predictions n a_n^2 / (2 V).  Ratios are
    reported, not asserted; they approach 1 only as n grows.
    """
    from .sources import mutual_information, variances

    t = float(t)
    c = float(c)
    if not 0.0 < t < 0.5:
        raise ValidationError(f"t must lie in (0, 1/2), got {t!r}")
    if c <= 0.0:
        raise ValidationError(f"c must be positive, got {c!r}")
    ns = [int(n) for n in n_list]
    if not ns or any(n < 1 for n in ns):
        raise ValidationError("n_list must contain integers >= 1")
    cfg = cfg or SolverConfig()
    i_val = mutual_information(cq)
    v, v_breve = variances(cq)
    if v <= 1e-6 or v_breve <= 1e-6:
        raise ValidationError(
            f"information variance too small for a moderate-deviation scan (V={v:.2e}, V-breve={v_breve:.2e})"
        )
    rows = []
    for n in ns:
        a_n = c * n ** (-t)
        rate = i_val + a_n
        e_iid, _ = achievability_exponent_iid(cq, rate, cfg)
        e_cc, _ = achievability_exponent_cc(cq, rate, cfg)
        g_iid = n * a_n * a_n / (2.0 * v)
        g_cc = n * a_n * a_n / (2.0 * v_breve)
        rows.append(
            ModerateRow(
                n=n,
                a_n=a_n,
                rate=rate,
                n_exp_iid=n * e_iid,
                n_exp_cc=n * e_cc,
                gauss_iid=g_iid,
                gauss_cc=g_cc,
                ratio_iid=(n * e_iid) / g_iid if g_iid > 0 else math.nan,
                ratio_cc=(n * e_cc) / g_cc if g_cc > 0 else math.nan,
            )
        )
    return rows
