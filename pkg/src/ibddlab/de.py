"""Density evolution for hard-decision iterative decoding with scaled reliability.

Models the generalized-LDPC view of product codes (degree-2 bit nodes, two
component-word constraints per bit) and its spatially-coupled analog for
staircase codes.  Component decoders are bounded-distance decoders, so the
analysis tracks three message types: decoded-in-error, decoded-correct, and
failure.  Miscorrections are accounted for through combinatorial transition
tables derived from the component code's weight enumerator.

The per-iteration reliability weights used by the scaled-reliability decoders
fall out of the same recursion as log-ratios of the correct/error transition
probabilities, evaluated at the current message error rate.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from .channel import make_params, q_function

# exact integer combinatorics below this block length; log-gamma above
_EXACT_N_LIMIT = 300

DEFAULT_WEIGHT_CAP = 64.0
DEFAULT_TARGET = 1e-9


def _logcomb(a: int, b: int) -> float:
    if b < 0 or a < 0 or b > a:
        return -np.inf
    return float(gammaln(a + 1) - gammaln(b + 1) - gammaln(a - b + 1))


def f1(n: int, h: int, j: int, delta: int, i: int) -> float:
    """Fraction of the C(n-1, i) error placements compatible with a weight
    transition that flips j bits on a weight-h overlap and delta-j bits off it.

    Zero whenever the binomial factors are out of range.
    """
    if h < 0 or h - j < 0 or h - j > h or delta - j < 0 or n - h - 1 < delta - j:
        return 0.0
    if i < 0 or i > n - 1:
        return 0.0
    if n - 1 <= _EXACT_N_LIMIT:
        den = math.comb(n - 1, i)
        if den == 0:
            return 0.0
        return math.comb(h, h - j) * math.comb(n - h - 1, delta - j) / den
    val = _logcomb(h, h - j) + _logcomb(n - h - 1, delta - j) - _logcomb(n - 1, i)
    return float(np.exp(val))


def f2(n: int, h: int, j: int, delta: int, i: int) -> float:
    """Companion placement fraction with one fewer off-overlap flip than f1."""
    if h < 0 or h - j < 0 or delta - j - 1 < 0 or n - h - 1 < delta - j - 1:
        return 0.0
    if i < 0 or i > n - 1:
        return 0.0
    if n - 1 <= _EXACT_N_LIMIT:
        den = math.comb(n - 1, i)
        if den == 0:
            return 0.0
        return math.comb(h, h - j) * math.comb(n - h - 1, delta - j - 1) / den
    val = _logcomb(h, h - j) + _logcomb(n - h - 1, delta - j - 1) - _logcomb(n - 1, i)
    return float(np.exp(val))


@dataclass(frozen=True)
class ComponentProfile:
    """Per-input-error-count outcome tables for one component decoder.

    Index i counts errors among the other n-1 positions of a component word.
    The p-tables condition on the observed bit being in error, the q-tables on
    it being correct; e/c/eps split the outcomes into decoded-in-error,
    decoded-correct, and decoder failure.  Each (e, c, eps) triple sums to one.
    """

    n: int
    t: int
    pe: np.ndarray
    pc: np.ndarray
    peps: np.ndarray
    qe: np.ndarray
    qc: np.ndarray
    qeps: np.ndarray
    log_weights: np.ndarray


def _middle_sums_exact(n, t, counts, i):
    """(pe, qc, pc, qe) sums for one i with exact integer arithmetic."""
    pe_num = 0
    qc_num = 0
    pc_num = 0
    qe_num = 0
    # delta is the decoding distance; delta = 0 covers inputs that already
    # form a codeword (the decoder returns them unchanged)
    for delta in range(0, t + 1):
        for j in range(0, delta + 1):
            h = i - delta + 2 * j
            if 0 <= h <= n - 1 and h - j >= 0 and 0 <= delta - j <= n - h - 1:
                c1 = math.comb(h, h - j) * math.comb(n - h - 1, delta - j)
                if h + 1 <= n:
                    pe_num += counts[h + 1] * (h + 1) * c1
                qc_num += counts[h] * (n - h) * c1
        for j in range(0, delta):
            h = i - delta + 2 * j + 1
            if 0 <= h <= n - 1 and h - j >= 0 and 0 <= delta - j - 1 <= n - h - 1:
                c2 = math.comb(h, h - j) * math.comb(n - h - 1, delta - j - 1)
                pc_num += counts[h] * (n - h) * c2
                if h + 1 <= n:
                    qe_num += counts[h + 1] * (h + 1) * c2
    den = n * math.comb(n - 1, i)
    return pe_num / den, qc_num / den, pc_num / den, qe_num / den


def _middle_sums_log(n, t, log_w, i):
    """Same sums evaluated term-by-term in log space (long codes)."""
    log_den = math.log(n) + _logcomb(n - 1, i)
    pe = qc = pc = qe = 0.0
    for delta in range(0, t + 1):
        for j in range(0, delta + 1):
            h = i - delta + 2 * j
            if not (0 <= h <= n - 1):
                continue
            lf = _logcomb(h, h - j) + _logcomb(n - h - 1, delta - j)
            if lf == -np.inf:
                continue
            if h + 1 <= n and log_w[h + 1] > -np.inf:
                pe += math.exp(log_w[h + 1] + math.log(h + 1) + lf - log_den)
            if log_w[h] > -np.inf and n - h > 0:
                qc += math.exp(log_w[h] + math.log(n - h) + lf - log_den)
        for j in range(0, delta):
            h = i - delta + 2 * j + 1
            if not (0 <= h <= n - 1):
                continue
            lf = _logcomb(h, h - j) + _logcomb(n - h - 1, delta - j - 1)
            if lf == -np.inf:
                continue
            if log_w[h] > -np.inf and n - h > 0:
                pc += math.exp(log_w[h] + math.log(n - h) + lf - log_den)
            if h + 1 <= n and log_w[h + 1] > -np.inf:
                qe += math.exp(log_w[h + 1] + math.log(h + 1) + lf - log_den)
    return pe, qc, pc, qe


def component_profile(
    n: int,
    t: int,
    weights: np.ndarray | None = None,
    log_weights: np.ndarray | None = None,
) -> ComponentProfile:
    """Build the six outcome tables from a weight distribution.

    Pass either ``weights`` (length n+1 codeword counts, exact or modeled) or
    ``log_weights`` (their logs, -inf marking empty weights).
    """
    if (weights is None) == (log_weights is None):
        raise ValueError("pass exactly one of weights / log_weights")
    exact_counts = None
    if weights is not None:
        weights = np.asarray(weights)
        if weights.shape != (n + 1,):
            raise ValueError(f"weights must have length {n + 1}")
        if n <= _EXACT_N_LIMIT and np.issubdtype(weights.dtype, np.integer):
            exact_counts = [int(w) for w in weights]
        with np.errstate(divide="ignore"):
            log_weights = np.where(weights > 0, np.log(weights.astype(np.float64)), -np.inf)
    else:
        log_weights = np.asarray(log_weights, dtype=np.float64)
        if log_weights.shape != (n + 1,):
            raise ValueError(f"log_weights must have length {n + 1}")

    pe = np.zeros(n)
    pc = np.zeros(n)
    qe = np.zeros(n)
    qc = np.zeros(n)
    for i in range(n):
        need_p = t <= i <= n - t - 2
        need_q = t + 1 <= i <= n - t - 1
        if need_p or need_q:
            if exact_counts is not None:
                s_pe, s_qc, s_pc, s_qe = _middle_sums_exact(n, t, exact_counts, i)
            else:
                s_pe, s_qc, s_pc, s_qe = _middle_sums_log(n, t, log_weights, i)
        if i <= t - 1:
            pe[i], pc[i] = 0.0, 1.0
        elif need_p:
            pe[i], pc[i] = s_pe, s_pc
        else:
            pe[i], pc[i] = 1.0, 0.0
        if i <= t:
            qe[i], qc[i] = 0.0, 1.0
        elif need_q:
            qe[i], qc[i] = s_qe, s_qc
        else:
            qe[i], qc[i] = 1.0, 0.0
    peps = np.maximum(0.0, 1.0 - pe - pc)
    qeps = np.maximum(0.0, 1.0 - qe - qc)
    return ComponentProfile(
        n=n, t=t, pe=pe, pc=pc, peps=peps, qe=qe, qc=qc, qeps=qeps, log_weights=log_weights
    )


def auto_profile(code, enumerator: str = "auto") -> ComponentProfile:
    """Profile for a component code, choosing the weight-distribution source.

    "exact" enumerates all codewords (short test codes), "approx" uses the
    binomial model (long codes), "auto" picks exact whenever enumeration is
    feasible (k <= 24).
    """
    from .bch import weight_enumerator_approx, weight_enumerator_exact

    if enumerator == "auto":
        enumerator = "exact" if code.k <= 24 else "approx"
    if enumerator == "exact":
        return component_profile(code.n, code.t, weights=weight_enumerator_exact(code))
    if enumerator == "approx":
        approx = weight_enumerator_approx(code)
        return component_profile(code.n, code.t, log_weights=approx.log_table())
    raise ValueError(f"unknown enumerator choice {enumerator!r}")


# ---------------------------------------------------------------------------
# transition functions


class TransitionValues(NamedTuple):
    fe: float
    fc: float
    feps: float
    fqe: float
    fpc: float


class TransitionKernels:
    """Binomially averaged transition functions for a fixed channel error rate.

    Precomputes the outcome kernels so that evaluating all five functions at a
    message error rate x costs a single binomial pmf plus dot products.
    """

    def __init__(self, profile: ComponentProfile, p_ch: float):
        self.profile = profile
        self.p_ch = float(p_ch)
        self.n = profile.n
        self._ke = p_ch * profile.pe + (1.0 - p_ch) * profile.qe
        self._kc = p_ch * profile.pc + (1.0 - p_ch) * profile.qc
        self._keps = p_ch * profile.peps + (1.0 - p_ch) * profile.qeps
        trials = self.n - 1
        i = np.arange(self.n, dtype=np.float64)
        self._i = i
        self._trials = trials
        self._logbin = gammaln(trials + 1) - gammaln(i + 1) - gammaln(trials - i + 1)

    def pmf(self, x: float) -> np.ndarray:
        """Binomial(n-1, x) pmf over i = 0..n-1."""
        x = min(max(float(x), 0.0), 1.0)
        out = np.zeros(self.n)
        if x == 0.0:
            out[0] = 1.0
            return out
        if x == 1.0:
            out[-1] = 1.0
            return out
        logp = self._logbin + self._i * math.log(x) + (self._trials - self._i) * math.log1p(-x)
        return np.exp(logp)

    def pmf_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.clip(np.asarray(xs, dtype=np.float64), 0.0, 1.0)
        out = np.zeros((len(xs), self.n))
        interior = (xs > 0.0) & (xs < 1.0)
        if np.any(interior):
            xi = xs[interior][:, None]
            logp = self._logbin[None, :] + self._i[None, :] * np.log(xi)
            logp += (self._trials - self._i)[None, :] * np.log1p(-xi)
            out[interior] = np.exp(logp)
        out[xs == 0.0, 0] = 1.0
        out[xs == 1.0, -1] = 1.0
        return out

    def eval(self, x: float) -> TransitionValues:
        w = self.pmf(x)
        return TransitionValues(
            fe=float(w @ self._ke),
            fc=float(w @ self._kc),
            feps=float(w @ self._keps),
            fqe=float(w @ self.profile.qe),
            fpc=float(w @ self.profile.pc),
        )

    def eval_many(self, xs: np.ndarray) -> TransitionValues:
        w = self.pmf_many(xs)
        return TransitionValues(
            fe=w @ self._ke,
            fc=w @ self._kc,
            feps=w @ self._keps,
            fqe=w @ self.profile.qe,
            fpc=w @ self.profile.pc,
        )


def transition_fns(profile: ComponentProfile, x: float, p_ch: float) -> TransitionValues:
    """All five transition functions evaluated at message error rate x."""
    return TransitionKernels(profile, p_ch).eval(x)


def _weight_scalar(fc: float, fe: float, cap: float) -> float:
    if fc <= 0.0:
        warnings.warn(
            "degenerate transition state: correct-decode probability is zero",
            RuntimeWarning,
            stacklevel=3,
        )
        return 0.0
    if fe <= 0.0:
        return cap
    w = math.log(fc) - math.log(fe)
    return min(max(w, 0.0), cap)


def _weights_vector(fc: np.ndarray, fe: np.ndarray, cap: float) -> np.ndarray:
    out = np.full(len(fc), cap)
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = fe > 0.0
        out[pos] = np.log(fc[pos]) - np.log(fe[pos])
    out[fc <= 0.0] = 0.0
    return np.clip(out, 0.0, cap)


def scaling_factors(
    profile: ComponentProfile, x_in: float, p_ch: float, cap: float = DEFAULT_WEIGHT_CAP
) -> float:
    """Reliability weight log(f_c / f_e) at message error rate x_in, clamped to [0, cap]."""
    v = transition_fns(profile, x_in, p_ch)
    return _weight_scalar(v.fc, v.fe, cap)


def scaling_factor_numeric(
    profile: ComponentProfile,
    x_in: float,
    p_ch: float,
    sigma: float,
    cap: float = DEFAULT_WEIGHT_CAP,
    grid_points: int = 641,
) -> float:
    """Weight chosen by minimizing the one-step updated error rate on a grid.

    Cross-check for the closed-form rule; the two agree to grid resolution.
    """
    kern = TransitionKernels(profile, p_ch)
    v = kern.eval(x_in)
    ws = np.linspace(0.0, cap, grid_points)
    xs = _vn_update_values(v, ws, p_ch, sigma)
    return float(ws[np.argmin(xs)])


def _vn_update_values(v: TransitionValues, w, p_ch: float, sigma: float):
    qm = q_function(1.0 / sigma - sigma * np.asarray(w) / 2.0)
    qp = q_function(1.0 / sigma + sigma * np.asarray(w) / 2.0)
    return v.fqe * (qm - p_ch) + v.fpc * qp + (1.0 - v.fpc) * p_ch


# ---------------------------------------------------------------------------
# uncoupled (product-code) recursion


@dataclass(frozen=True)
class DeState:
    x_row: float
    x_col: float
    p_ch: float
    sigma: float


def de_step_gldpc(
    state: DeState,
    profile: ComponentProfile | TransitionKernels,
    w_row: float,
    w_col: float,
    sigma: float | None = None,
) -> DeState:
    """One full iteration (row then column half) of the uncoupled recursion."""
    kern = (
        profile
        if isinstance(profile, TransitionKernels)
        else TransitionKernels(profile, state.p_ch)
    )
    sigma = state.sigma if sigma is None else sigma
    x_row = float(_vn_update_values(kern.eval(state.x_col), w_row, state.p_ch, sigma))
    x_col = float(_vn_update_values(kern.eval(x_row), w_col, state.p_ch, sigma))
    return DeState(x_row=x_row, x_col=x_col, p_ch=state.p_ch, sigma=sigma)


@dataclass
class GldpcDeResult:
    ebn0_db: float
    rate: float
    p_ch: float
    sigma: float
    w_row: np.ndarray
    w_col: np.ndarray
    trajectory: np.ndarray  # message error rate after each half-iteration
    final_x: float
    converged: bool
    improving: bool
    iterations_run: int


def run_gldpc(
    profile: ComponentProfile,
    ebn0_db: float,
    rate: float,
    iterations: int = 1000,
    *,
    cap: float = DEFAULT_WEIGHT_CAP,
    target: float = DEFAULT_TARGET,
    weight_rule: str = "formula",
    stop_early: bool = True,
) -> GldpcDeResult:
    """Run the uncoupled recursion from the channel state.

    Weights are recomputed before each half-iteration from the incoming
    message error rate ("formula": closed-form log-ratio; "numeric": grid
    minimization of the one-step update).
    """
    params = make_params(ebn0_db, rate)
    p_ch, sigma = params.p_ch, params.sigma
    kern = TransitionKernels(profile, p_ch)

    def weight(x_in: float) -> float:
        if weight_rule == "formula":
            v = kern.eval(x_in)
            return _weight_scalar(v.fc, v.fe, cap)
        if weight_rule == "numeric":
            return scaling_factor_numeric(profile, x_in, p_ch, sigma, cap)
        raise ValueError(f"unknown weight rule {weight_rule!r}")

    x_col = p_ch
    w_rows: list[float] = []
    w_cols: list[float] = []
    traj: list[float] = []
    it = 0
    for it in range(1, iterations + 1):
        wr = weight(x_col)
        v = kern.eval(x_col)
        x_row = float(_vn_update_values(v, wr, p_ch, sigma))
        wc = weight(x_row)
        v = kern.eval(x_row)
        x_col = float(_vn_update_values(v, wc, p_ch, sigma))
        w_rows.append(wr)
        w_cols.append(wc)
        traj.extend([x_row, x_col])
        if stop_early and x_col < target * 1e-3:
            break
    final = x_col
    return GldpcDeResult(
        ebn0_db=ebn0_db,
        rate=rate,
        p_ch=p_ch,
        sigma=sigma,
        w_row=np.array(w_rows),
        w_col=np.array(w_cols),
        trajectory=np.array(traj),
        final_x=final,
        converged=bool(final < target),
        improving=bool(final < p_ch * (1.0 - 1e-9)),
        iterations_run=it,
    )


# ---------------------------------------------------------------------------
# spatially-coupled window recursion (u = 2)


def sc_cn_averages(x: np.ndarray, window_start: int, window_size: int) -> np.ndarray:
    """Per-constraint-position neighbor averages with out-of-window terms zeroed.

    Constraint position c in [s, s+W] sees bit positions c-1 and c; positions
    outside [s, s+W-1] contribute zero (decided or not yet received).
    """
    s, w = window_start, window_size
    padded = np.concatenate([[0.0], x[s : s + w], [0.0]])
    return 0.5 * (padded[:-1] + padded[1:])


def de_step_sc(
    x: np.ndarray,
    window_start: int,
    window_size: int,
    kernels: TransitionKernels,
    w_cn: np.ndarray,
    sigma: float,
) -> np.ndarray:
    """One parallel update of the in-window bit positions (coupling width 2).

    ``w_cn`` holds one weight per constraint position [s, s+W]; each bit
    position averages the contributions of its two constraint neighbors.
    """
    s, w = window_start, window_size
    if len(w_cn) != w + 1:
        raise ValueError(f"need {w + 1} constraint weights, got {len(w_cn)}")
    bavg = sc_cn_averages(x, s, w)
    v = kernels.eval_many(bavg)
    contrib = _vn_update_values(v, w_cn, kernels.p_ch, sigma)
    out = x.copy()
    out[s : s + w] = 0.5 * (contrib[:-1] + contrib[1:])
    return out


@dataclass
class ScDeResult:
    ebn0_db: float
    rate: float
    p_ch: float
    sigma: float
    window: int
    iters_per_slide: int
    emitted: np.ndarray
    schedules: list[np.ndarray]  # per slide, shape (window+1, iters) CN weights
    steady_slide: int | None
    slides_run: int
    converged: bool
    improving: bool


def run_sc_window(
    profile: ComponentProfile,
    ebn0_db: float,
    rate: float,
    window: int,
    iters_per_slide: int,
    *,
    cap: float = DEFAULT_WEIGHT_CAP,
    target: float = DEFAULT_TARGET,
    steady_tol: float = 1e-6,
    max_slides: int = 80,
    full_iterations: bool = False,
    fail_fast: bool = True,
) -> ScDeResult:
    """Slide a decoding window along the coupled chain and track convergence.

    Each slide iterates the in-window positions (``full_iterations`` disables
    the early fixed-point break so every slide logs a complete weight
    schedule), then advances by one position, freezing the position it leaves
    behind.  The left end of the chain is terminated by known bits.
    """
    params = make_params(ebn0_db, rate)
    p_ch, sigma = params.p_ch, params.sigma
    kern = TransitionKernels(profile, p_ch)

    x = np.full(max_slides + window + 2, p_ch)
    x[0] = 0.0  # known termination; masked out of every window anyway

    emitted: list[float] = []
    schedules: list[np.ndarray] = []
    steady_slide: int | None = None
    converged = False
    prev_sched: np.ndarray | None = None
    prev_profile: np.ndarray | None = None
    s = 0
    for s in range(1, max_slides + 1):
        sched = np.zeros((window + 1, iters_per_slide))
        for it in range(iters_per_slide):
            bavg = sc_cn_averages(x, s, window)
            v = kern.eval_many(bavg)
            w_cn = _weights_vector(v.fc, v.fe, cap)
            sched[:, it] = w_cn
            contrib = _vn_update_values(v, w_cn, p_ch, sigma)
            new = 0.5 * (contrib[:-1] + contrib[1:])
            delta = float(np.max(np.abs(new - x[s : s + window])))
            x[s : s + window] = new
            if not full_iterations and (delta < 1e-17 or float(np.max(new)) < target * 1e-6):
                sched = sched[:, : it + 1]
                break
        schedules.append(sched)
        emitted.append(float(x[s]))

        if fail_fast and emitted[-1] >= target:
            converged = False
            break

        if full_iterations:
            if prev_sched is not None and sched.shape == prev_sched.shape:
                if float(np.max(np.abs(sched - prev_sched))) < steady_tol:
                    steady_slide = s
                    converged = bool(max(emitted) < target)
                    break
            prev_sched = sched
        else:
            prof = x[s : s + window].copy()
            if prev_profile is not None:
                if float(np.max(np.abs(prof - prev_profile))) < max(steady_tol, 1e-12):
                    steady_slide = s
                    converged = bool(max(emitted) < target)
                    break
            prev_profile = prof

    improving = bool(emitted and emitted[-1] < p_ch * (1.0 - 1e-9))
    return ScDeResult(
        ebn0_db=ebn0_db,
        rate=rate,
        p_ch=p_ch,
        sigma=sigma,
        window=window,
        iters_per_slide=iters_per_slide,
        emitted=np.array(emitted),
        schedules=schedules,
        steady_slide=steady_slide,
        slides_run=s,
        converged=converged,
        improving=improving,
    )


# ---------------------------------------------------------------------------
# threshold search


class BracketError(RuntimeError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def threshold_search(
    ensemble: str,
    profile: ComponentProfile,
    rate: float,
    *,
    tol_db: float = 0.01,
    bracket: tuple[float, float] | None = None,
    window: int | None = None,
    gldpc_iterations: int = 1000,
    sc_iters_per_slide: int = 24,
    cap: float = DEFAULT_WEIGHT_CAP,
    target: float = DEFAULT_TARGET,
    max_slides: int = 400,
) -> float:
    """Bisect Eb/N0 for the smallest value where the recursion decodes.

    ``ensemble`` is "gldpc" (uncoupled) or "sc" (window-decoded coupled chain,
    requires ``window``).  Success means the message error rate falls below
    ``target`` within the iteration budget.  Raises BracketError when the
    bracket endpoints do not straddle the threshold.

    The iteration budgets are part of the ensemble definition: the windowed
    threshold depends on how long each window may work on its positions
    before sliding.  The default of 24 update rounds per slide mirrors a
    practical decoder budget of 12 iterations, each touching a bit through
    both of its component codes; letting every window run to its fixed point
    would instead recover the unwindowed coupled-chain threshold.
    """
    if ensemble not in ("gldpc", "sc"):
        raise ValueError(f"unknown ensemble {ensemble!r}")
    if ensemble == "sc" and not window:
        raise ValueError("sc ensemble needs a window size")

    def success(ebn0: float) -> bool:
        if ensemble == "gldpc":
            res = run_gldpc(
                profile, ebn0, rate, gldpc_iterations, cap=cap, target=target
            )
            return res.converged
        res = run_sc_window(
            profile,
            ebn0,
            rate,
            window,
            sc_iters_per_slide,
            cap=cap,
            target=target,
            max_slides=max_slides,
        )
        return res.converged

    if bracket is None:
        lo, hi = None, None
        prev = 0.5
        prev_ok = success(prev)
        for ebn0 in np.arange(1.0, 13.0, 0.5):
            ok = success(float(ebn0))
            if ok and not prev_ok:
                lo, hi = prev, float(ebn0)
                break
            prev, prev_ok = float(ebn0), ok
        if lo is None:
            raise BracketError(
                "no threshold bracket found in [0.5, 12.5] dB",
                {"ensemble": ensemble, "rate": rate},
            )
    else:
        lo, hi = float(bracket[0]), float(bracket[1])
        lo_ok, hi_ok = success(lo), success(hi)
        if lo_ok or not hi_ok:
            raise BracketError(
                f"bracket does not straddle the threshold: "
                f"decodes@{lo}dB={lo_ok}, decodes@{hi}dB={hi_ok}",
                {"lo": lo, "hi": hi, "lo_ok": lo_ok, "hi_ok": hi_ok},
            )

    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if success(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# export


def gldpc_profile_json(
    result: GldpcDeResult, n: int, t: int, threshold: float | None = None
) -> dict:
    return {
        "ensemble": "gldpc",
        "n": n,
        "t": t,
        "ebn0_db": result.ebn0_db,
        "rate": result.rate,
        "weights_row": [float(w) for w in result.w_row],
        "weights_col": [float(w) for w in result.w_col],
        "trajectory": [float(v) for v in result.trajectory],
        "converged": bool(result.converged),
        "improving": bool(result.improving),
        "threshold": threshold,
    }


def sc_profile_json(
    result: ScDeResult, n: int, t: int, threshold: float | None = None
) -> dict:
    steady = result.schedules[-1] if result.schedules else np.zeros((result.window + 1, 0))
    return {
        "ensemble": "sc_gldpc",
        "n": n,
        "t": t,
        "ebn0_db": result.ebn0_db,
        "rate": result.rate,
        "window": result.window,
        "weights_row": [[float(v) for v in row] for row in steady],
        "weights_col": [],
        "trajectory": [float(v) for v in result.emitted],
        "steady_slide": result.steady_slide,
        "converged": bool(result.converged),
        "improving": bool(result.improving),
        "threshold": threshold,
    }
