"""Monte-Carlo bit/frame error-rate estimation with paired noise.

Every decoder mode at a given (config, E_b/N_0) point sees bit-identical
channel LLRs: frame ``i`` draws its noise from ``default_rng([seed, i])``
and all modes decode that same realization, so mode comparisons are paired
and the whole run is reproducible for any worker count (workers only split
the frame index range; they never own RNG state).

Stopping is frame-error driven: a point runs until every active mode has
accumulated ``min_error_events`` frame errors, or the frame budget is
exhausted.  Frames fail in bursts, so the frame event -- a product array,
or one counted staircase block -- is the independent statistical unit:
FER gets a Wilson 95% interval and BER a per-frame bootstrap interval.

Staircase counting: streams carry ``blocks_per_stream`` encoded blocks; the
all-zero terminator, the first window_blocks-1 warm-up blocks, and the last
window_blocks-1 flush blocks are excluded from all counts.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from functools import cached_property

import numpy as np

from .bch import BchCode, build_bch
from .channel import harden, make_params, transmit
from .de import auto_profile, run_gldpc
from .product import (
    ProductCode,
    ScalingSchedule,
    ibdd_decode,
    ibdd_sr_decode,
    ideal_ibdd_decode,
    pc_encode,
)
from .staircase import (
    ScheduleUnavailable,
    StaircaseCode,
    WindowConfig,
    WindowSchedule,
    encode_stream,
    schedule_for_window,
    window_decode,
)

MODES = ("ibdd", "ibdd_sr", "ideal")
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class ComponentSpec:
    """Component-code parameters: GF(2^m) BCH with t-error correction."""

    m: int
    t: int
    shorten: int = 0

    def build(self) -> BchCode:
        return build_bch(self.m, self.t, shorten=self.shorten)

    @cached_property
    def label(self) -> str:
        code = self.build()
        return f"n{code.n}k{code.k}t{code.t}"


@dataclass(frozen=True)
class SimConfig:
    """One Monte-Carlo campaign: scheme, grid, modes, budgets, seed."""

    scheme: str
    component: ComponentSpec
    ebn0_grid: tuple
    modes: tuple = MODES
    schedule_source: str = "de_at_operating_snr"
    fixed_weight: float | None = None
    min_error_events: int = 50
    max_frames: int = 200_000
    seed: int = 1
    workers: int = 1
    sr_iters: int = 10
    plain_iters: int = 2
    window_blocks: int = 7
    blocks_per_stream: int = 20
    random_info: bool = False
    ber_floor: float = 1e-7

    def __post_init__(self):
        object.__setattr__(self, "ebn0_grid", tuple(float(e) for e in self.ebn0_grid))
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.scheme not in ("pc", "staircase"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.modes or any(m not in MODES for m in self.modes):
            raise ValueError(f"modes must be a nonempty subset of {MODES}")
        if list(self.ebn0_grid) != sorted(self.ebn0_grid):
            raise ValueError("ebn0_grid must be sorted ascending")
        if self.min_error_events < 50:
            raise ValueError("min_error_events below 50 gives junk intervals")
        if self.max_frames < 1 or self.workers < 1:
            raise ValueError("max_frames and workers must be positive")
        if self.schedule_source not in ("de_at_operating_snr", "fixed"):
            raise ValueError(f"unknown schedule source {self.schedule_source!r}")
        if self.schedule_source == "fixed" and self.fixed_weight is None:
            raise ValueError("fixed schedule source needs fixed_weight")
        if self.scheme == "staircase":
            if self.window_blocks < 2:
                raise ValueError("window must span at least two blocks")
            if self.blocks_per_stream < 2 * self.window_blocks - 1:
                raise ValueError(
                    "streams must outlast warm-up plus flush: need "
                    f"blocks_per_stream >= {2 * self.window_blocks - 1}"
                )


@dataclass(frozen=True)
class BerPoint:
    """Aggregated result for one (point, mode); fully determined by config+seed."""

    scheme: str
    component: str
    mode: str
    ebn0_db: float
    frames: int
    frame_errors: int
    bits_simulated: int
    bit_errors: int
    ber: float
    fer: float
    wilson_ci95: tuple  # 95% interval on FER
    ber_ci95: tuple  # bootstrap 95% interval on BER
    seed: int
    wall_seconds: float
    frame_bit_errors: tuple = field(repr=False, default=())

    def stat_key(self) -> tuple:
        """Everything reproducible — i.e. all statistics except wall time."""
        return (
            self.scheme, self.component, self.mode, self.ebn0_db,
            self.frames, self.frame_errors, self.bits_simulated,
            self.bit_errors, self.ber, self.fer, self.wilson_ci95,
            self.ber_ci95, self.seed, self.frame_bit_errors,
        )


@dataclass(frozen=True)
class SkippedPoint:
    """Placeholder row for a (point, mode) that could not run."""

    scheme: str
    component: str
    mode: str
    ebn0_db: float
    seed: int
    reason: str


# ---------------------------------------------------------------------------
# interval estimators

def wilson_ci95(successes: int, trials: int) -> tuple:
    """Wilson score 95% interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    z2 = _Z95 * _Z95
    phat = successes / trials
    denom = 1.0 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = (
        _Z95
        * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    return (max(0.0, centre - half), min(1.0, centre + half))


def bootstrap_ber_ci(
    frame_bit_errors, bits_per_frame: int, seed: int, n_boot: int = 1000
) -> tuple:
    """Percentile bootstrap 95% interval for BER, resampling whole frames."""
    counts = np.asarray(frame_bit_errors, dtype=np.int64)
    n = len(counts)
    if n == 0 or counts.sum() == 0:
        return (0.0, 0.0)
    rng = np.random.default_rng([seed, 0xB0075])
    idx = rng.integers(0, n, size=(n_boot, n))
    bers = counts[idx].sum(axis=1) / (n * bits_per_frame)
    lo, hi = np.percentile(bers, [2.5, 97.5])
    return (float(lo), float(hi))


def paired_gap_bootstrap(
    frame_bit_errors_a,
    frame_bit_errors_b,
    bits_per_frame: int,
    seed: int,
    n_boot: int = 1000,
) -> tuple:
    """Bootstrap 95% interval for BER(a) - BER(b) over shared noise.

    Both inputs are per-frame error counts from the SAME frames (paired
    noise); each replicate resamples frame indices once and applies them to
    both, so common randomness cancels from the gap.
    """
    a = np.asarray(frame_bit_errors_a, dtype=np.int64)
    b = np.asarray(frame_bit_errors_b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError("paired counts must cover the same frames")
    n = len(a)
    if n == 0:
        return (0.0, 0.0)
    rng = np.random.default_rng([seed, 0xD1FF])
    idx = rng.integers(0, n, size=(n_boot, n))
    gaps = (a[idx].sum(axis=1) - b[idx].sum(axis=1)) / (n * bits_per_frame)
    lo, hi = np.percentile(gaps, [2.5, 97.5])
    return (float(lo), float(hi))


# ---------------------------------------------------------------------------
# per-scheme frame engines: built once per process, run many frames

class _PcEngine:
    def __init__(self, cfg: SimConfig, ebn0_db: float, modes: tuple):
        self.cfg = cfg
        self.modes = modes
        self.code = ProductCode(cfg.component.build())
        self.params = make_params(ebn0_db, self.code.rate)
        self.bits_per_unit = self.code.n * self.code.n
        self.units_per_frame = 1
        self.schedule = None
        self.skip_reason = None
        if "ibdd_sr" in modes:
            if cfg.schedule_source == "fixed":
                self.schedule = ScalingSchedule.constant(cfg.fixed_weight, cfg.sr_iters)
            else:
                res = run_gldpc(
                    auto_profile(self.code.component),
                    ebn0_db,
                    self.code.rate,
                    iterations=cfg.sr_iters,
                    stop_early=False,
                )
                if res.improving:
                    self.schedule = ScalingSchedule.from_gldpc_result(res)
                else:
                    self.skip_reason = (
                        f"recursion not improving at {ebn0_db} dB "
                        f"(rate {self.code.rate:.4f}): no weight schedule"
                    )

    def run_frame(self, index: int) -> dict:
        cfg = self.cfg
        rng = np.random.default_rng([cfg.seed, index])
        n, k = self.code.n, self.code.k
        if cfg.random_info:
            tx = pc_encode(self.code, rng.integers(0, 2, (k, k), dtype=np.uint8))
        else:
            tx = np.zeros((n, n), dtype=np.uint8)
        llr = transmit(tx, self.params, rng)
        total = cfg.sr_iters + cfg.plain_iters
        out = {}
        for mode in self.modes:
            if mode == "ibdd":
                dec = ibdd_decode(self.code, harden(llr), total)
            elif mode == "ideal":
                dec = ideal_ibdd_decode(self.code, harden(llr), tx, total)
            elif self.schedule is not None:
                dec = ibdd_sr_decode(
                    self.code, llr, self.schedule, cfg.sr_iters, cfg.plain_iters
                )
            else:
                continue
            out[mode] = np.array([np.sum(dec != tx)], dtype=np.int64)
        return out


class _StaircaseEngine:
    def __init__(self, cfg: SimConfig, ebn0_db: float, modes: tuple):
        self.cfg = cfg
        self.modes = modes
        self.code = StaircaseCode(cfg.component.build())
        self.params = make_params(ebn0_db, self.code.rate)
        half = self.code.block_size
        self.bits_per_unit = half * half
        skirt = cfg.window_blocks - 1  # warm-up and flush exclusion, each end
        self.counted = slice(skirt, cfg.blocks_per_stream - skirt)
        self.units_per_frame = cfg.blocks_per_stream - 2 * skirt
        self.skip_reason = None
        schedule = None
        if "ibdd_sr" in modes:
            if cfg.schedule_source == "fixed":
                schedule = WindowSchedule(
                    early=(),
                    steady=np.full(
                        (cfg.window_blocks, cfg.sr_iters), float(cfg.fixed_weight)
                    ),
                    steady_slide=1,
                    ebn0_db=ebn0_db,
                    rate=self.code.rate,
                )
            else:
                try:
                    schedule = schedule_for_window(
                        auto_profile(self.code.component),
                        ebn0_db,
                        self.code.rate,
                        cfg.window_blocks,
                        cfg.sr_iters,
                    )
                except ScheduleUnavailable as exc:
                    self.skip_reason = str(exc)
        self.cfg_sr = (
            WindowConfig(cfg.window_blocks, cfg.sr_iters, cfg.plain_iters, schedule)
            if schedule is not None
            else None
        )
        self.cfg_plain = WindowConfig(cfg.window_blocks, cfg.sr_iters, cfg.plain_iters)

    def run_frame(self, index: int) -> dict:
        cfg = self.cfg
        rng = np.random.default_rng([cfg.seed, index])
        half, code = self.code.block_size, self.code
        if cfg.random_info:
            infos = [
                rng.integers(0, 2, (half, code.info_cols), dtype=np.uint8)
                for _ in range(cfg.blocks_per_stream)
            ]
            tx = encode_stream(code, infos)[1:]
        else:
            tx = [
                np.zeros((half, half), dtype=np.uint8)
                for _ in range(cfg.blocks_per_stream)
            ]
        llr = [transmit(b, self.params, rng) for b in tx]
        out = {}
        for mode in self.modes:
            if mode == "ibdd":
                dec = window_decode(code, llr, self.cfg_plain, mode="ibdd")
            elif mode == "ideal":
                dec = window_decode(
                    code, llr, self.cfg_plain, mode="ideal", transmitted=tx
                )
            elif self.cfg_sr is not None:
                dec = window_decode(code, llr, self.cfg_sr, mode="ibdd_sr")
            else:
                continue
            errs = [
                np.sum(d != t)
                for d, t in zip(dec[self.counted], tx[self.counted])
            ]
            out[mode] = np.array(errs, dtype=np.int64)
        return out


def _build_engine(cfg: SimConfig, ebn0_db: float, modes: tuple):
    if cfg.scheme == "pc":
        return _PcEngine(cfg, ebn0_db, modes)
    return _StaircaseEngine(cfg, ebn0_db, modes)


_ENGINE = None


def _init_worker(cfg: SimConfig, ebn0_db: float, modes: tuple):
    global _ENGINE
    _ENGINE = _build_engine(cfg, ebn0_db, modes)


def _worker_batch(indices) -> list:
    return [_ENGINE.run_frame(i) for i in indices]


# ---------------------------------------------------------------------------
# point and curve drivers

def _batch_plan(units_per_frame: int, start_units: int = 32, cap_units: int = 4096):
    """Deterministic batch schedule, sized in frame units, yielded in frames."""
    units = start_units
    while True:
        yield max(1, round(units / units_per_frame))
        units = min(units * 2, cap_units)


def run_point(cfg: SimConfig, ebn0_db: float, modes=None) -> dict:
    """Simulate one grid point; returns {mode: BerPoint | SkippedPoint}.

    All returned modes share the same frames and noise.  The number of
    frames is a deterministic function of (cfg, ebn0_db, modes): batches are
    scheduled by a fixed plan and the stop rule consults only aggregated
    counts, so worker parallelism cannot change any statistic.
    """
    modes = tuple(modes) if modes is not None else cfg.modes
    t0 = time.perf_counter()
    engine = _build_engine(cfg, ebn0_db, modes)
    result: dict = {}
    active = list(modes)
    if engine.skip_reason is not None:
        warnings.warn(f"ibdd_sr skipped at {ebn0_db} dB: {engine.skip_reason}")
        result["ibdd_sr"] = SkippedPoint(
            scheme=cfg.scheme,
            component=cfg.component.label,
            mode="ibdd_sr",
            ebn0_db=ebn0_db,
            seed=cfg.seed,
            reason=engine.skip_reason,
        )
        active = [m for m in modes if m != "ibdd_sr"]

    counts = {m: [] for m in active}
    events = {m: 0 for m in active}
    units_done = 0
    next_index = 0
    plan = _batch_plan(engine.units_per_frame)
    executor = None
    try:
        if cfg.workers > 1 and active:
            executor = ProcessPoolExecutor(
                max_workers=cfg.workers,
                initializer=_init_worker,
                initargs=(cfg, ebn0_db, modes),
            )
        while active:
            if all(events[m] >= cfg.min_error_events for m in active):
                break
            if units_done >= cfg.max_frames:
                break
            units_left = cfg.max_frames - units_done
            frames_left = math.ceil(units_left / engine.units_per_frame)
            n_frames = min(next(plan), frames_left)
            indices = range(next_index, next_index + n_frames)
            next_index += n_frames
            if executor is not None:
                chunk = math.ceil(n_frames / cfg.workers)
                chunks = [
                    list(indices)[i : i + chunk]
                    for i in range(0, n_frames, chunk)
                ]
                frame_results = [
                    res
                    for batch in executor.map(_worker_batch, chunks)
                    for res in batch
                ]
            else:
                frame_results = [engine.run_frame(i) for i in indices]
            for fr in frame_results:
                for m in active:
                    counts[m].append(fr[m])
                    events[m] += int(np.count_nonzero(fr[m]))
            units_done += n_frames * engine.units_per_frame
    finally:
        if executor is not None:
            executor.shutdown()

    wall = time.perf_counter() - t0
    for m in active:
        per_unit = (
            np.concatenate(counts[m]) if counts[m] else np.zeros(0, dtype=np.int64)
        )
        frames = len(per_unit)
        frame_errors = int(np.count_nonzero(per_unit))
        bits = frames * engine.bits_per_unit
        bit_errors = int(per_unit.sum())
        result[m] = BerPoint(
            scheme=cfg.scheme,
            component=cfg.component.label,
            mode=m,
            ebn0_db=ebn0_db,
            frames=frames,
            frame_errors=frame_errors,
            bits_simulated=bits,
            bit_errors=bit_errors,
            ber=bit_errors / bits if bits else 0.0,
            fer=frame_errors / frames if frames else 0.0,
            wilson_ci95=wilson_ci95(frame_errors, frames),
            ber_ci95=bootstrap_ber_ci(per_unit, engine.bits_per_unit, cfg.seed),
            seed=cfg.seed,
            wall_seconds=wall,
            frame_bit_errors=tuple(int(v) for v in per_unit),
        )
    return {m: result[m] for m in modes if m in result}


def run_curve(cfg: SimConfig):
    """Iterate run_point over the ascending grid, yielding (ebn0_db, dict).

    A mode is retired from later (higher-SNR) points once its measured BER
    drops below cfg.ber_floor; a non-monotone BER step whose bootstrap
    intervals do not overlap draws a warning.
    """
    retired: set = set()
    last: dict = {}
    for ebn0 in cfg.ebn0_grid:
        modes = [m for m in cfg.modes if m not in retired]
        if not modes:
            break
        points = run_point(cfg, ebn0, modes=modes)
        for m, pt in points.items():
            if not isinstance(pt, BerPoint):
                continue
            if pt.ber < cfg.ber_floor:
                retired.add(m)
            prev = last.get(m)
            if (
                prev is not None
                and pt.ber > prev.ber
                and pt.ber_ci95[0] > prev.ber_ci95[1]
            ):
                warnings.warn(
                    f"BER not monotone for {m}: {prev.ber:.3e} @ "
                    f"{prev.ebn0_db} dB -> {pt.ber:.3e} @ {ebn0} dB"
                )
            last[m] = pt
        yield ebn0, points


def interpolate_ebn0_at_ber(points, target_ber: float) -> float | None:
    """E_b/N_0 where a measured curve crosses target_ber (log-linear).

    ``points`` is one mode's BerPoint sequence; returns None unless two
    consecutive points with positive BER bracket the target.
    """
    pts = sorted(
        (p for p in points if isinstance(p, BerPoint) and p.ber > 0.0),
        key=lambda p: p.ebn0_db,
    )
    for a, b in zip(pts, pts[1:]):
        lo, hi = sorted((a.ber, b.ber))
        if lo <= target_ber <= hi:
            la, lb, lt = math.log10(a.ber), math.log10(b.ber), math.log10(target_ber)
            if la == lb:
                return a.ebn0_db
            return a.ebn0_db + (b.ebn0_db - a.ebn0_db) * (lt - la) / (lb - la)
    return None


def paired_gain_estimate(points_a, points_b, target_ber: float) -> float | None:
    """SNR advantage (dB) of curve b over curve a at the target BER.

    Positive when curve b reaches the target at lower E_b/N_0.  None when
    either curve fails to bracket the target.
    """
    ea = interpolate_ebn0_at_ber(points_a, target_ber)
    eb = interpolate_ebn0_at_ber(points_b, target_ber)
    if ea is None or eb is None:
        return None
    return ea - eb


def paired_gain_bootstrap_ci(
    points_a,
    points_b,
    target_ber: float,
    seed: int,
    n_boot: int = 1000,
) -> tuple | None:
    """Bootstrap 95% interval for the interpolated gain of curve b over a.

    Per replicate, each grid point's frames are resampled once and applied
    to both modes (the curves share noise), both curves are re-interpolated
    at the target, and the gain recomputed.  Replicates whose resampled
    curves no longer bracket the target are dropped; returns None when more
    than 20% drop or the point estimate itself is unavailable.
    """
    if paired_gain_estimate(points_a, points_b, target_ber) is None:
        return None
    by_snr_a = {p.ebn0_db: p for p in points_a if isinstance(p, BerPoint)}
    by_snr_b = {p.ebn0_db: p for p in points_b if isinstance(p, BerPoint)}
    snrs = sorted(set(by_snr_a) & set(by_snr_b))
    rng = np.random.default_rng([seed, 0x6A17])
    # replicate BER tables, shape (n_boot, n_points), paired resampling
    bers_a = np.empty((n_boot, len(snrs)))
    bers_b = np.empty((n_boot, len(snrs)))
    for col, snr in enumerate(snrs):
        pa, pb = by_snr_a[snr], by_snr_b[snr]
        if pa.frames != pb.frames:
            raise ValueError("paired curves must share frame counts per point")
        ca = np.asarray(pa.frame_bit_errors, dtype=np.int64)
        cb = np.asarray(pb.frame_bit_errors, dtype=np.int64)
        n = pa.frames
        bits = pa.bits_simulated
        done = 0
        while done < n_boot:  # chunked to bound index-matrix memory
            m = min(200, n_boot - done)
            idx = rng.integers(0, n, size=(m, n))
            bers_a[done : done + m, col] = ca[idx].sum(axis=1) / bits
            bers_b[done : done + m, col] = cb[idx].sum(axis=1) / bits
            done += m

    def _interp(row_bers):
        e = None
        for i in range(len(snrs) - 1):
            b0, b1 = row_bers[i], row_bers[i + 1]
            if b0 <= 0 or b1 <= 0:
                continue
            lo, hi = min(b0, b1), max(b0, b1)
            if lo <= target_ber <= hi:
                l0, l1 = math.log10(b0), math.log10(b1)
                lt = math.log10(target_ber)
                e = snrs[i] if l0 == l1 else snrs[i] + (
                    (snrs[i + 1] - snrs[i]) * (lt - l0) / (l1 - l0)
                )
                break
        return e

    gains = []
    for r in range(n_boot):
        ea, eb = _interp(bers_a[r]), _interp(bers_b[r])
        if ea is not None and eb is not None:
            gains.append(ea - eb)
    if len(gains) < 0.8 * n_boot:
        return None
    lo, hi = np.percentile(gains, [2.5, 97.5])
    return (float(lo), float(hi))


# ---------------------------------------------------------------------------
# result serialization

CSV_COLUMNS = (
    "scheme,component,mode,ebn0_db,frames,frame_errors,bits,bit_errors,"
    "ber,fer,ci_lo,ci_hi,seed,wall_s"
)


def csv_row(pt) -> str:
    if isinstance(pt, SkippedPoint):
        return (
            f"{pt.scheme},{pt.component},{pt.mode},{pt.ebn0_db:g},"
            f"0,0,0,0,nan,nan,nan,nan,{pt.seed},0.000"
        )
    return (
        f"{pt.scheme},{pt.component},{pt.mode},{pt.ebn0_db:g},"
        f"{pt.frames},{pt.frame_errors},{pt.bits_simulated},{pt.bit_errors},"
        f"{pt.ber:.10e},{pt.fer:.10e},"
        f"{pt.ber_ci95[0]:.10e},{pt.ber_ci95[1]:.10e},"
        f"{pt.seed},{pt.wall_seconds:.3f}"
    )


def write_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_COLUMNS + "\n")
        for pt in rows:
            fh.write(csv_row(pt) + "\n")


def point_dict(pt) -> dict:
    if isinstance(pt, SkippedPoint):
        return {**asdict(pt), "skipped": True}
    d = asdict(pt)
    d.pop("frame_bit_errors")
    d["skipped"] = False
    return d


def results_json(cfg: SimConfig, rows, manifest: str | None = None) -> dict:
    return {
        "config": asdict(cfg),
        "manifest": manifest,
        "points": [point_dict(pt) for pt in rows],
    }
