"""Hot numerical kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable SOFTCOVER_PURE_NUMPY is unset or empty; setting it to any
non-empty value forces the fallback.  SOFTCOVER_THREADS caps the numba
thread pool.  Every kernel is deterministic for a fixed seed on either
backend, independent of thread count.

Counter-based randomness: each uniform variate is a pure function of the
key (seed, sample, codeword, position) through a splitmix64-style mixing
chain, so sampling order never matters.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


PURE_NUMPY = bool(os.environ.get("SOFTCOVER_PURE_NUMPY"))
USING_NUMBA = HAS_NUMBA and not PURE_NUMPY

if HAS_NUMBA:
    _threads = os.environ.get("SOFTCOVER_THREADS")
    if _threads:
        try:
            numba.set_num_threads(max(1, min(int(_threads), numba.config.NUMBA_NUM_THREADS)))
        except (ValueError, RuntimeError):
            pass


def backend_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Counter-based RNG.  Three equivalent implementations: python ints (scalar
# reference), numpy uint64 arrays (vectorized fallback), and a numba twin.
# ---------------------------------------------------------------------------

_M64 = (1 << 64) - 1
_GOLD = 0x9E3779B97F4B7C15
_PI = 0x243F6A8885A308D3
_C1 = 0xBF58476D1CE4E5B9
_C2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * _C1) & _M64
    z = ((z ^ (z >> 27)) * _C2) & _M64
    return z ^ (z >> 31)


def hash_u01(seed: int, a: int, b: int, c: int) -> float:
    """Uniform double in [0,1) keyed by (seed, a, b, c)."""
    h = _mix64((seed & _M64) ^ _PI)
    h = _mix64(h ^ ((a + _GOLD) & _M64))
    h = _mix64(h ^ ((b + _GOLD) & _M64))
    h = _mix64(h ^ ((c + _GOLD) & _M64))
    return (h >> 11) * 2.0**-53


def _hash_u01_vec(seed: int, a, b, c):
    """Vectorized hash_u01 on broadcastable uint64 arrays."""

    def mix(z):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_C1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_C2)
        return z ^ (z >> np.uint64(31))

    # uint64 wraparound is the point here; silence numpy's scalar overflow
    # warnings (0-d intermediates decay to numpy scalars, which warn).
    with np.errstate(over="ignore"):
        h = mix(np.uint64(seed & _M64) ^ np.uint64(_PI))
        h = mix(h ^ (np.asarray(a, np.uint64) + np.uint64(_GOLD)))
        h = mix(h ^ (np.asarray(b, np.uint64) + np.uint64(_GOLD)))
        h = mix(h ^ (np.asarray(c, np.uint64) + np.uint64(_GOLD)))
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


@njit(cache=True)
def _u01_nb(seed, a, b, c):
    h = np.uint64(seed) ^ np.uint64(_PI)
    h = (h ^ (h >> np.uint64(30))) * np.uint64(_C1)
    h = (h ^ (h >> np.uint64(27))) * np.uint64(_C2)
    h = h ^ (h >> np.uint64(31))
    for v in (a, b, c):
        h = h ^ (np.uint64(v) + np.uint64(_GOLD))
        h = (h ^ (h >> np.uint64(30))) * np.uint64(_C1)
        h = (h ^ (h >> np.uint64(27))) * np.uint64(_C2)
        h = h ^ (h >> np.uint64(31))
    return np.float64(h >> np.uint64(11)) * 2.0**-53


# ---------------------------------------------------------------------------
# Codeword sampling.  A draw at key (seed, s, m, i) is the i-th symbol of
# codeword m in sampled codebook s; standalone codebook sampling uses s = 0.
# ---------------------------------------------------------------------------


def iid_symbols_numpy(cum: np.ndarray, seed: int, s: int, M: int, n: int) -> np.ndarray:
    m_idx, i_idx = np.meshgrid(np.arange(M, dtype=np.uint64), np.arange(n, dtype=np.uint64), indexing="ij")
    u = _hash_u01_vec(seed, np.uint64(s), m_idx, i_idx)
    out = np.searchsorted(cum, u.ravel(), side="right").reshape(M, n)
    return np.minimum(out, len(cum) - 1).astype(np.int64)


@njit(cache=True)
def _iid_symbols_nb(cum, seed, s, M, n):
    out = np.empty((M, n), np.int64)
    K = cum.shape[0]
    for m in range(M):
        for i in range(n):
            u = _u01_nb(seed, s, m, i)
            j = K - 1
            for q in range(K):
                if u < cum[q]:
                    j = q
                    break
            out[m, i] = j
    return out


def iid_symbols(cum: np.ndarray, seed: int, s: int, M: int, n: int) -> np.ndarray:
    if USING_NUMBA:
        return _iid_symbols_nb(cum, seed, s, M, n)
    return iid_symbols_numpy(cum, seed, s, M, n)


def cc_codeword_numpy(base: np.ndarray, seed: int, s: int, m: int) -> np.ndarray:
    seq = base.copy()
    n = len(seq)
    for j in range(n - 1, 0, -1):
        u = hash_u01(seed, s, m, j)
        k = min(int(u * (j + 1)), j)
        seq[j], seq[k] = seq[k], seq[j]
    return seq


@njit(cache=True)
def _cc_codeword_nb(base, seed, s, m):
    seq = base.copy()
    n = seq.shape[0]
    for j in range(n - 1, 0, -1):
        u = _u01_nb(seed, s, m, j)
        k = int(u * (j + 1))
        if k > j:
            k = j
        tmp = seq[j]
        seq[j] = seq[k]
        seq[k] = tmp
    return seq


def cc_codeword(base: np.ndarray, seed: int, s: int, m: int) -> np.ndarray:
    if USING_NUMBA:
        return _cc_codeword_nb(base, seed, s, m)
    return cc_codeword_numpy(base, seed, s, m)


# ---------------------------------------------------------------------------
# Sandwiched-information objective and its coordinate-descent minimizer.
# theta parameterizes sigma = exp(H)/Tr[exp(H)] with H = sum_k theta_k G_k
# over a traceless Hermitian basis G; `which` selects the objective:
# 0 -> log of the prior-averaged alpha-power trace (Renyi form),
# 1 -> prior average of per-letter logs (Augustin form).
# ---------------------------------------------------------------------------


def _sandwich_objective_impl(rhos, p, alpha, which, basis, theta):
    r = rhos.shape[1]
    nb = basis.shape[0]
    H = np.zeros((r, r), dtype=np.complex128)
    for k in range(nb):
        H = H + theta[k] * basis[k]
    w, v = np.linalg.eigh(H)
    wmax = w[r - 1]
    z = 0.0
    for i in range(r):
        z += np.exp(w[i] - wmax)
    t = (1.0 - alpha) / (2.0 * alpha)
    st = np.empty(r)
    for i in range(r):
        lam = np.exp(w[i] - wmax) / z
        if lam < 1e-300:
            lam = 1e-300
        st[i] = lam**t
    S = (v * st.astype(np.complex128)) @ np.conj(v).T
    acc = 0.0
    m = rhos.shape[0]
    for x in range(m):
        A = S @ (rhos[x] @ S)
        a = np.linalg.eigvalsh(A)
        s = 0.0
        for i in range(r):
            ai = a[i]
            if ai > 0.0:
                s += ai**alpha
        if s < 1e-300:
            s = 1e-300
        if which == 0:
            acc += p[x] * s
        else:
            acc += p[x] * np.log(s)
    if which == 0:
        if acc < 1e-300:
            acc = 1e-300
        return np.log(acc) / (alpha - 1.0)
    return acc / (alpha - 1.0)


def _build_cd(objective):
    def _cd(rhos, p, alpha, which, basis, theta0, step0, tol, max_sweeps, min_step):
        nb = theta0.shape[0]
        theta = theta0.copy()
        steps = np.full(nb, step0)
        f = objective(rhos, p, alpha, which, basis, theta)
        sweeps = 0
        improvement = np.inf
        converged = 0
        while sweeps < max_sweeps:
            sweeps += 1
            improvement = 0.0
            for k in range(nb):
                moved = False
                for sgn in (1.0, -1.0):
                    cand = theta.copy()
                    cand[k] = theta[k] + sgn * steps[k]
                    fc = objective(rhos, p, alpha, which, basis, cand)
                    if fc < f - 1e-15:
                        ext = 0
                        while ext < 200:
                            ext += 1
                            cand2 = cand.copy()
                            cand2[k] = cand[k] + sgn * steps[k]
                            f2 = objective(rhos, p, alpha, which, basis, cand2)
                            if f2 < fc - 1e-15:
                                cand = cand2
                                fc = f2
                            else:
                                break
                        improvement += f - fc
                        theta = cand
                        f = fc
                        if steps[k] < 1.0:
                            steps[k] = steps[k] * 1.5
                        moved = True
                        break
                if not moved and steps[k] > 1e-12:
                    steps[k] = steps[k] * 0.5
            if improvement < tol:
                smax = 0.0
                for k in range(nb):
                    if steps[k] > smax:
                        smax = steps[k]
                if smax <= min_step:
                    converged = 1
                    break
        return theta, f, sweeps, improvement, converged

    return _cd


sandwich_objective_numpy = _sandwich_objective_impl
cd_sandwich_numpy = _build_cd(_sandwich_objective_impl)

if HAS_NUMBA:
    sandwich_objective_numba = njit(cache=True)(_sandwich_objective_impl)
    # closures over jitted callees cannot use the on-disk cache
    cd_sandwich_numba = njit(_build_cd(sandwich_objective_numba))


def sandwich_objective(rhos, p, alpha, which, basis, theta):
    if USING_NUMBA:
        return sandwich_objective_numba(rhos, p, alpha, which, basis, theta)
    return sandwich_objective_numpy(rhos, p, alpha, which, basis, theta)


def cd_sandwich(rhos, p, alpha, which, basis, theta0, step0, tol, max_sweeps, min_step):
    args = (rhos, p, alpha, which, basis, theta0, step0, tol, max_sweeps, min_step)
    if USING_NUMBA:
        return cd_sandwich_numba(*args)
    return cd_sandwich_numpy(*args)


# ---------------------------------------------------------------------------
# Bloch-ball grid search for qubit outputs.  Letter states enter as Bloch
# vectors plus determinants; closed 2x2 forms avoid any eigensolver call.
# ---------------------------------------------------------------------------


@njit(cache=True, parallel=True)
def _bloch_min_nb(p, rvecs, dets, alpha, resolution, which):
    # parallel over x-slabs; per-point values are identical on every
    # thread count, and min over the slab minima is order-free
    rmax = 1.0 - 1e-6
    t = (1.0 - alpha) / (2.0 * alpha)
    m = p.shape[0]
    partial = np.full(resolution, np.inf)
    for ix in prange(resolution):
        x = -rmax + 2.0 * rmax * ix / (resolution - 1)
        best = np.inf
        for iy in range(resolution):
            y = -rmax + 2.0 * rmax * iy / (resolution - 1)
            xy2 = x * x + y * y
            if xy2 > rmax * rmax:
                continue
            for iz in range(resolution):
                z = -rmax + 2.0 * rmax * iz / (resolution - 1)
                r2 = xy2 + z * z
                if r2 > rmax * rmax:
                    continue
                rr = np.sqrt(r2)
                lp = 0.5 * (1.0 + rr)
                lm = 0.5 * (1.0 - rr)
                ap = lp**t
                am = lm**t
                c2 = 0.5 * (ap * ap + am * am)
                d2 = 0.5 * (ap * ap - am * am)
                dt = (lp * lm) ** (2.0 * t)
                if rr > 0.0:
                    nx = x / rr
                    ny = y / rr
                    nz = z / rr
                else:
                    nx = 0.0
                    ny = 0.0
                    nz = 0.0
                acc = 0.0
                for j in range(m):
                    dot = nx * rvecs[j, 0] + ny * rvecs[j, 1] + nz * rvecs[j, 2]
                    tr_a = c2 + d2 * dot
                    det_a = dt * dets[j]
                    half = 0.5 * tr_a
                    disc = half * half - det_a
                    if disc < 0.0:
                        disc = 0.0
                    root = np.sqrt(disc)
                    a1 = half + root
                    a2 = half - root
                    s = 0.0
                    if a1 > 0.0:
                        s += a1**alpha
                    if a2 > 0.0:
                        s += a2**alpha
                    if s < 1e-300:
                        s = 1e-300
                    if which == 0:
                        acc += p[j] * s
                    else:
                        acc += p[j] * np.log(s)
                if which == 0:
                    if acc < 1e-300:
                        acc = 1e-300
                    val = np.log(acc) / (alpha - 1.0)
                else:
                    val = acc / (alpha - 1.0)
                if val < best:
                    best = val
        partial[ix] = best
    return partial.min()


def _bloch_min_numpy(p, rvecs, dets, alpha, resolution, which):
    rmax = 1.0 - 1e-6
    t = (1.0 - alpha) / (2.0 * alpha)
    axis = np.linspace(-rmax, rmax, resolution)
    yy, zz = np.meshgrid(axis, axis, indexing="ij")
    best = np.inf
    for x in axis:
        r2 = x * x + yy * yy + zz * zz
        mask = r2 <= rmax * rmax
        if not mask.any():
            continue
        rr = np.sqrt(r2[mask])
        lp = 0.5 * (1.0 + rr)
        lm = 0.5 * (1.0 - rr)
        ap = lp**t
        am = lm**t
        c2 = 0.5 * (ap * ap + am * am)
        d2 = 0.5 * (ap * ap - am * am)
        dt = (lp * lm) ** (2.0 * t)
        safe = np.where(rr > 0.0, rr, 1.0)
        nx = np.where(rr > 0.0, x / safe, 0.0)
        ny = np.where(rr > 0.0, yy[mask] / safe, 0.0)
        nz = np.where(rr > 0.0, zz[mask] / safe, 0.0)
        acc = np.zeros_like(rr)
        for j in range(len(p)):
            dot = nx * rvecs[j, 0] + ny * rvecs[j, 1] + nz * rvecs[j, 2]
            half = 0.5 * (c2 + d2 * dot)
            disc = np.maximum(half * half - dt * dets[j], 0.0)
            root = np.sqrt(disc)
            a1 = np.maximum(half + root, 0.0)
            a2 = np.maximum(half - root, 0.0)
            s = np.maximum(a1**alpha + a2**alpha, 1e-300)
            if which == 0:
                acc += p[j] * s
            else:
                acc += p[j] * np.log(s)
        if which == 0:
            vals = np.log(np.maximum(acc, 1e-300)) / (alpha - 1.0)
        else:
            vals = acc / (alpha - 1.0)
        vmin = vals.min()
        if vmin < best:
            best = float(vmin)
    return best


def bloch_min(p, rvecs, dets, alpha, resolution, which):
    # single-threaded, numpy's simd pow beats the scalar libm calls in the
    # compiled loop; the prange kernel only pays off with real parallelism
    if USING_NUMBA and numba.get_num_threads() > 1:
        return _bloch_min_nb(p, rvecs, dets, alpha, resolution, which)
    return _bloch_min_numpy(p, rvecs, dets, alpha, resolution, which)


# ---------------------------------------------------------------------------
# Exact expectation of the trace distance by total enumeration over ordered
# codeword tuples (lexicographic: first codeword is the most significant
# digit).  Candidate codewords enter as rows of a sequence table over the
# letter alphabet; `weights` carries per-codeword probabilities, a constant
# 1/K vector realizing the uniform type-class case.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _product_state_nb(letters, seq):
    d = letters.shape[1]
    n = seq.shape[0]
    cur = letters[seq[0]].copy()
    size = d
    for i in range(1, n):
        b = letters[seq[i]]
        nxt = np.empty((size * d, size * d), np.complex128)
        for a1 in range(size):
            for a2 in range(size):
                cij = cur[a1, a2]
                for b1 in range(d):
                    for b2 in range(d):
                        nxt[a1 * d + b1, a2 * d + b2] = cij * b[b1, b2]
        cur = nxt
        size *= d
    return cur


@njit(cache=True)
def _exact_td_nb(letters, seqs, weights, ref, M):
    K = seqs.shape[0]
    D = ref.shape[0]
    total = 1
    for _ in range(M):
        total *= K
    digits = np.empty(M, np.int64)
    acc = 0.0
    inv = 1.0 / M
    for item in range(total):
        rem = item
        for j in range(M - 1, -1, -1):
            digits[j] = rem % K
            rem //= K
        w = 1.0
        for j in range(M):
            w *= weights[digits[j]]
        if w == 0.0:
            continue
        mean = np.zeros((D, D), np.complex128)
        for j in range(M):
            mean += _product_state_nb(letters, seqs[digits[j]])
        mean = mean * inv - ref
        ev = np.linalg.eigvalsh(mean)
        td = 0.0
        for a in range(D):
            td += abs(ev[a])
        acc += w * 0.5 * td
    return acc


def _product_state_numpy(letters, seq):
    cur = letters[seq[0]]
    for i in range(1, len(seq)):
        cur = np.kron(cur, letters[seq[i]])
    return cur


def product_state(letters, seq):
    """Tensor product of letter states along a sequence."""
    return _product_state_numpy(letters, seq)


def _exact_td_numpy(letters, seqs, weights, ref, M):
    K = seqs.shape[0]
    D = ref.shape[0]
    total = K**M
    # a per-codeword state table shortens the inner loop when it fits
    states = None
    if K * D * D * 16 <= 2e8:
        states = np.stack([_product_state_numpy(letters, seqs[k]) for k in range(K)])
    chunk = max(1, int(2e6 / (D * D * max(M, 1))))
    acc = 0.0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((len(idx), M), np.int64)
        rem = idx.copy()
        for j in range(M - 1, -1, -1):
            digits[:, j] = rem % K
            rem //= K
        w = weights[digits].prod(axis=1)
        if states is not None:
            mats = states[digits].mean(axis=1) - ref
        else:
            mats = np.stack(
                [
                    sum(_product_state_numpy(letters, seqs[k]) for k in row) / M - ref
                    for row in digits
                ]
            )
        ev = np.linalg.eigvalsh(mats)
        acc += float(w @ (0.5 * np.abs(ev).sum(axis=1)))
    return acc


def exact_td(letters, seqs, weights, ref, M):
    if USING_NUMBA:
        return _exact_td_nb(letters, seqs, weights, ref, M)
    return _exact_td_numpy(letters, seqs, weights, ref, M)


# ---------------------------------------------------------------------------
# Monte Carlo distances.  kind 0 draws i.i.d. symbols by inverse CDF; kind 1
# Fisher-Yates-shuffles the canonical type sequence.  Sample s consumes only
# keys (seed, s, *, *), so the estimate is invariant under any partitioning
# of the sample range.
# ---------------------------------------------------------------------------


def _mc_distances_impl(letters, cum, base, kind, n, M, seed, samples, ref):
    d = letters.shape[1]
    D = ref.shape[0]
    K = cum.shape[0]
    out = np.empty(samples)
    seq = np.empty(n, np.int64)
    for s in range(samples):
        mean = np.zeros((D, D), np.complex128)
        for m in range(M):
            if kind == 0:
                for i in range(n):
                    u = _u01_nb(seed, s, m, i)
                    j = K - 1
                    for q in range(K):
                        if u < cum[q]:
                            j = q
                            break
                    seq[i] = j
            else:
                for i in range(n):
                    seq[i] = base[i]
                for j in range(n - 1, 0, -1):
                    u = _u01_nb(seed, s, m, j)
                    k = int(u * (j + 1))
                    if k > j:
                        k = j
                    tmp = seq[j]
                    seq[j] = seq[k]
                    seq[k] = tmp
            cur = letters[seq[0]].copy()
            size = d
            for i in range(1, n):
                b = letters[seq[i]]
                nxt = np.empty((size * d, size * d), np.complex128)
                for a1 in range(size):
                    for a2 in range(size):
                        cij = cur[a1, a2]
                        for b1 in range(d):
                            for b2 in range(d):
                                nxt[a1 * d + b1, a2 * d + b2] = cij * b[b1, b2]
                cur = nxt
                size *= d
            mean += cur
        mean = mean * (1.0 / M) - ref
        ev = np.linalg.eigvalsh(mean)
        td = 0.0
        for a in range(D):
            td += abs(ev[a])
        out[s] = 0.5 * td
    return out


if HAS_NUMBA:
    _mc_distances_nb = njit(cache=True)(_mc_distances_impl)


def _mc_distances_numpy(letters, cum, base, kind, n, M, seed, samples, ref):
    D = ref.shape[0]
    out = np.empty(samples)
    for s in range(samples):
        mean = np.zeros((D, D), np.complex128)
        for m in range(M):
            if kind == 0:
                K = len(cum)
                seq = [
                    min(int(np.searchsorted(cum, hash_u01(seed, s, m, i), side="right")), K - 1)
                    for i in range(n)
                ]
            else:
                seq = cc_codeword_numpy(base, seed, s, m)
            cur = letters[seq[0]]
            for i in range(1, n):
                cur = np.kron(cur, letters[seq[i]])
            mean += cur
        ev = np.linalg.eigvalsh(mean / M - ref)
        out[s] = 0.5 * float(np.abs(ev).sum())
    return out


def mc_distances(letters, cum, base, kind, n, M, seed, samples, ref):
    args = (letters, cum, base, kind, n, M, seed, samples, ref)
    if USING_NUMBA:
        return _mc_distances_nb(*args)
    return _mc_distances_numpy(*args)


def warmup() -> None:
    """Compile the jitted kernels on tiny inputs so later timings are pure compute."""
    if not USING_NUMBA:
        return
    eye = np.eye(2, dtype=np.complex128)
    half = 0.5 * eye
    cum = np.array([0.5, 1.0])
    base = np.array([0, 1], dtype=np.int64)
    _iid_symbols_nb(cum, 1, 0, 2, 2)
    _cc_codeword_nb(base, 1, 0, 0)
    basis = np.zeros((1, 2, 2), np.complex128)
    basis[0, 0, 0] = 1 / np.sqrt(2)
    basis[0, 1, 1] = -1 / np.sqrt(2)
    rhos = np.stack([half, half])
    p = np.array([0.5, 0.5])
    theta = np.zeros(1)
    cd_sandwich_numba(rhos, p, 1.5, 0, basis, theta, 0.25, 1e-6, 5, 1e-3)
    _bloch_min_nb(p, np.zeros((2, 3)), np.full(2, 0.25), 1.5, 4, 0)
    letters = np.stack([eye / 2, eye / 2])
    seqs = np.array([[0, 1], [1, 0]], dtype=np.int64)
    ref4 = np.kron(half, half).astype(np.complex128)
    _exact_td_nb(letters, seqs, np.array([0.5, 0.5]), ref4, 2)
    _mc_distances_nb(letters, cum, base, 0, 2, 1, 1, 2, ref4)
    _mc_distances_nb(letters, cum, base, 1, 2, 1, 1, 2, ref4)
