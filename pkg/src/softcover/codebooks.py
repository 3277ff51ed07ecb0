"""Types, random codebooks, and expected covering error.

Combinatorics (type sizes, type probabilities, composition checks) run in
exact rational arithmetic; only the final numerical summaries are floats.
Random sampling is counter-based: symbol i of codeword m in sampled
codebook s depends only on the key (seed, s, m, i), so results never depend
on evaluation order or threading.  Standalone codebook draws use s = 0,
which is also Monte Carlo sample 0 for the same seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ValidationError
from .hermitian import DensityOperator
from .sources import CqSource, marginal, rationalize_prior

DIM_GUARD = 4096
ENUM_GUARD = 10**7
LN2 = math.log(2.0)


@dataclass(frozen=True)
class Codebook:
    words: np.ndarray  # (M, n) int64 letters
    kind: str  # "iid" | "cc"
    seed: int

    @property
    def M(self) -> int:
        return self.words.shape[0]

    @property
    def n(self) -> int:
        return self.words.shape[1]


@dataclass(frozen=True)
class ExpectationEstimate:
    mean: float
    half_width_95: float
    samples: int
    exact: bool


@dataclass(frozen=True)
class TypeClassBracket:
    exact: Fraction
    stirling_lo: float
    stirling_hi: float


def empirical_distribution(seq, alphabet_size: int):
    """Exact type of a sequence as a tuple of Fractions over the alphabet."""
    seq = np.asarray(seq, dtype=np.int64)
    if seq.ndim != 1 or len(seq) == 0:
        raise ValidationError("sequence must be a non-empty 1-d array of letters")
    if int(seq.min()) < 0 or int(seq.max()) >= alphabet_size:
        raise ValidationError(
            f"letters must lie in [0, {alphabet_size}), got range [{int(seq.min())}, {int(seq.max())}]"
        )
    n = len(seq)
    counts = np.bincount(seq, minlength=alphabet_size)
    return tuple(Fraction(int(c), n) for c in counts)


def _prior_fractions(prior) -> tuple:
    if isinstance(prior, CqSource):
        prior = prior.prior if prior.prior_fractions is None else prior.prior_fractions
    items = list(prior)
    if all(isinstance(q, Fraction) for q in items):
        fracs = tuple(items)
        if sum(fracs) != 1 or any(q < 0 for q in fracs):
            raise ValidationError("rational prior must be nonnegative and sum to 1")
        return fracs
    fracs = rationalize_prior([float(q) for q in items])
    if fracs is None:
        raise ValidationError(
            "prior is not recognizably rational (denominators up to 10^6, tolerance 1e-9)"
        )
    return fracs


def composition(prior, n: int) -> tuple:
    """Letter counts n * p_x as exact integers; rejects non-integral ones."""
    fracs = _prior_fractions(prior)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    counts = []
    for x, q in enumerate(fracs):
        c = q * n
        if c.denominator != 1:
            raise ValidationError(f"letter {x}: n*p = {c} is not an integer, no type class exists")
        counts.append(int(c))
    return tuple(counts)


def type_class_size(prior, n: int) -> int:
    counts = composition(prior, n)
    size = math.factorial(n)
    for c in counts:
        size //= math.factorial(c)
    return size


def stirling_constant(prior) -> float:
    """K_p = k/(12 ln 2) + (k-1)/2 ln(2 pi) + 1/2 sum ln p_x + ln 4 over the support."""
    fracs = _prior_fractions(prior)
    supp = [float(q) for q in fracs if q > 0]
    k = len(supp)
    return k / (12.0 * LN2) + 0.5 * (k - 1) * math.log(2.0 * math.pi) + 0.5 * sum(
        math.log(q) for q in supp
    ) + math.log(4.0)


def type_class_probability(prior, n: int) -> TypeClassBracket:
    """P(type class of p under p^n): exact rational plus a Stirling bracket.

    The bracket is exp(-xi k / (12 ln 2)) (2 pi n)^(-(k-1)/2) prod_supp
    p_x^(-1/2) with xi in [0, 1]; xi = 0 gives the upper end, xi = 1 the
    lower.
    """
    fracs = _prior_fractions(prior)
    counts = composition(prior, n)
    size = type_class_size(prior, n)
    exact = Fraction(size)
    for q, c in zip(fracs, counts):
        if c:
            exact *= q**c
    supp = [float(q) for q in fracs if q > 0]
    k = len(supp)
    base = -0.5 * (k - 1) * math.log(2.0 * math.pi * n) - 0.5 * sum(math.log(q) for q in supp)
    hi = math.exp(base)
    lo = math.exp(base - k / (12.0 * LN2))
    return TypeClassBracket(exact, lo, hi)


def canonical_sequence(prior, n: int) -> np.ndarray:
    """Letters in ascending order, each repeated n*p_x times."""
    counts = composition(prior, n)
    return np.repeat(np.arange(len(counts), dtype=np.int64), counts)


def enumerate_type_class(prior, n: int) -> np.ndarray:
    """All members of the type class, lexicographically ascending rows."""
    size = type_class_size(prior, n)
    if size > ENUM_GUARD:
        raise ValidationError(f"type class has {size} members, above the {ENUM_GUARD:.0e} guard")
    seq = list(canonical_sequence(prior, n))
    out = np.empty((size, n), dtype=np.int64)
    row = 0
    while True:
        out[row] = seq
        row += 1
        # next multiset permutation in lexicographic order
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1 :] = reversed(seq[i + 1 :])
    if row != size:
        raise AssertionError(f"enumeration produced {row} rows, expected {size}")
    return out


def _check_counts(n: int, M: int) -> None:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if M < 1:
        raise ValidationError(f"M must be >= 1, got {M}")


def sample_iid_codebook(cq: CqSource, n: int, M: int, seed: int = 0) -> Codebook:
    """M codewords of n i.i.d. letters from the prior, keyed by (seed, 0, m, i)."""
    _check_counts(n, M)
    cum = np.cumsum(cq.prior)
    cum[-1] = 1.0
    words = kernels.iid_symbols(cum, int(seed), 0, M, n)
    return Codebook(words, "iid", int(seed))


def sample_cc_codebook(cq: CqSource, n: int, M: int, seed: int = 0) -> Codebook:
    """M uniform members of the type class, via keyed Fisher-Yates shuffles."""
    _check_counts(n, M)
    base = canonical_sequence(cq, n)
    words = np.stack([kernels.cc_codeword(base, int(seed), 0, m) for m in range(M)])
    return Codebook(words, "cc", int(seed))


def _check_dim(cq: CqSource, n: int) -> int:
    d_pow = cq.dim**n
    if d_pow > DIM_GUARD:
        mem = d_pow * d_pow * 16 / 2**30
        raise ValidationError(
            f"d_B^n = {d_pow} exceeds {DIM_GUARD}; one operator would take {mem:.1f} GiB"
        )
    return d_pow


def tensor_power(matrix: np.ndarray, n: int) -> np.ndarray:
    out = matrix
    for _ in range(n - 1):
        out = np.kron(out, matrix)
    return out


def induced_state(cq: CqSource, codebook) -> DensityOperator:
    """Codebook average of the codeword product states."""
    words = codebook.words if isinstance(codebook, Codebook) else np.asarray(codebook, np.int64)
    if words.ndim != 2:
        raise ValidationError("codebook must be an (M, n) array of letters")
    M, n = words.shape
    _check_counts(n, M)
    D = _check_dim(cq, n)
    if int(words.min()) < 0 or int(words.max()) >= cq.size:
        raise ValidationError(f"codebook letters must lie in [0, {cq.size})")
    letters = cq.state_matrices()
    acc = np.zeros((D, D), np.complex128)
    for row in words:
        acc += kernels.product_state(letters, row)
    return DensityOperator(acc / M)


def cc_reference_state(cq: CqSource, n: int) -> DensityOperator:
    """Uniform mixture of product states over the type class of the prior."""
    _check_dim(cq, n)
    members = enumerate_type_class(cq, n)
    letters = cq.state_matrices()
    acc = np.zeros((cq.dim**n,) * 2, np.complex128)
    for row in members:
        acc += kernels.product_state(letters, row)
    return DensityOperator(acc / len(members))


def _reference(cq: CqSource, n: int, kind: str) -> np.ndarray:
    if kind == "iid":
        return tensor_power(marginal(cq).matrix, n)
    if kind == "cc":
        return cc_reference_state(cq, n).matrix
    raise ValidationError(f"kind must be 'iid' or 'cc', got {kind!r}")


def exact_expected_td(cq: CqSource, n: int, M: int, kind: str = "iid") -> ExpectationEstimate:
    """Exact E_C[ (1/2) || rho_B^C - reference ||_1 ] by full enumeration.

    iid: sum over all |X|^(nM) ordered codeword tuples weighted by the
    product prior.  cc: uniform over |T|^M tuples from the type class,
    against the type-class reference state.  Duplicate codewords within a
    tuple are kept, matching how random codebooks are drawn.
    """
    _check_counts(n, M)
    D = _check_dim(cq, n)
    letters = cq.state_matrices()
    if kind == "iid":
        total = cq.size ** (n * M)
        if total > ENUM_GUARD:
            raise ValidationError(
                f"|X|^(nM) = {total} exceeds the {ENUM_GUARD:.0e} enumeration guard; use mc_expected_td"
            )
        K = cq.size**n
        seqs = np.stack(np.meshgrid(*([np.arange(cq.size, dtype=np.int64)] * n), indexing="ij"), -1)
        seqs = seqs.reshape(K, n)
        logs = np.full(cq.size, -np.inf)
        pos = cq.prior > 0.0
        logs[pos] = np.log(cq.prior[pos])
        lw = logs[seqs].sum(axis=1)
        weights = np.where(np.isfinite(lw), np.exp(lw), 0.0)
    elif kind == "cc":
        seqs = enumerate_type_class(cq, n)
        K = len(seqs)
        total = K**M
        if total > ENUM_GUARD:
            raise ValidationError(
                f"|T|^M = {total} exceeds the {ENUM_GUARD:.0e} enumeration guard; use mc_expected_td"
            )
        weights = np.full(K, 1.0 / K)
    else:
        raise ValidationError(f"kind must be 'iid' or 'cc', got {kind!r}")
    ref = _reference(cq, n, kind)
    value = float(kernels.exact_td(letters, seqs, weights, ref, M))
    return ExpectationEstimate(value, 0.0, int(total), True)


def mc_expected_td(
    cq: CqSource, n: int, M: int, kind: str = "iid", seed: int = 0, samples: int = 1000
) -> ExpectationEstimate:
    """Monte Carlo estimate of the expected covering error.

    Deterministic for fixed (seed, samples) on every backend; the half
    width is 1.96 sample standard deviations over sqrt(samples).
    """
    _check_counts(n, M)
    if samples < 2:
        raise ValidationError(f"samples must be >= 2, got {samples}")
    _check_dim(cq, n)
    letters = cq.state_matrices()
    cum = np.cumsum(cq.prior)
    cum[-1] = 1.0
    if kind == "cc":
        base = canonical_sequence(cq, n)
        knd = 1
    elif kind == "iid":
        base = np.zeros(n, dtype=np.int64)
        knd = 0
    else:
        raise ValidationError(f"kind must be 'iid' or 'cc', got {kind!r}")
    ref = _reference(cq, n, kind)
    dists = kernels.mc_distances(letters, cum, base, knd, n, M, int(seed), int(samples), ref)
    mean = float(dists.mean())
    hw = 1.96 * float(dists.std(ddof=1)) / math.sqrt(samples)
    return ExpectationEstimate(mean, hw, int(samples), False)
