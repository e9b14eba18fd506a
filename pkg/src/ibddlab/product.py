"""Product-code construction and its iterative hard-decision decoders.

A product code squares one systematic component code: information bits fill a
k-by-k array, every row is encoded, then every column of the intermediate
array.  Decoding alternates bounded-distance decoding (BDD) of all rows and
all columns.  Three decoders share that serial row-then-column schedule:

* ``ibdd_decode``       -- plain iterative BDD on hard decisions; failed
                           component words pass through unchanged.
* ``ibdd_sr_decode``    -- scaled reliability: each BDD verdict is weighed
                           against the channel LLR before re-hardening, via
                           the comparison kernel ``combine_decision``.
* ``ideal_ibdd_decode`` -- genie-aided BDD that corrects up to t errors and
                           never miscorrects (analysis benchmark).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bch import BchCode, bdd_decode_matrix, ideal_decode_matrix
from .channel import harden


@dataclass(frozen=True)
class ProductCode:
    """Symmetric product code: the same component protects rows and columns."""

    component: BchCode

    @property
    def n(self) -> int:
        return self.component.n

    @property
    def k(self) -> int:
        return self.component.k

    @property
    def rate(self) -> float:
        return (self.component.k / self.component.n) ** 2

    def is_codeword(self, arr: np.ndarray) -> bool:
        comp = self.component
        return bool(
            np.all(comp.is_codeword(arr)) and np.all(comp.is_codeword(arr.T))
        )

    def __repr__(self):
        return f"ProductCode(({self.n},{self.k})^2, rate={self.rate:.4f})"


def pc_encode(code: ProductCode, info: np.ndarray) -> np.ndarray:
    """Encode a k-by-k information array into an n-by-n codeword array.

    Rows first, then columns of the row-encoded array; for a linear
    systematic component the checks-on-checks block makes every row and
    every column a component codeword regardless of the encoding order.
    """
    comp = code.component
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (comp.k, comp.k):
        raise ValueError(f"expected {comp.k}x{comp.k} information array")
    rows_done = comp.encode(info)  # (k, n)
    full = comp.encode(np.ascontiguousarray(rows_done.T)).T  # (n, n)
    return np.ascontiguousarray(full)


def combine_decision(mu_bar, w, llr) -> np.ndarray:
    """Hard decision B(w*mu_bar + llr), realized as a comparison.

    The BDD verdict wins only when it exists (mu_bar != 0) and its weight
    strictly exceeds the channel magnitude; otherwise -- including the tie
    w == |llr| -- the channel sign decides.  Ties and llr == 0 resolve to
    bit 0, matching B.
    """
    mu = np.asarray(mu_bar)
    llr = np.asarray(llr)
    bdd_wins = (mu != 0) & (np.asarray(w, dtype=float) > np.abs(llr))
    return np.where(bdd_wins, mu < 0, llr < 0).astype(np.uint8)


@dataclass(frozen=True)
class ScalingSchedule:
    """Per-iteration combining weights for the two component phases.

    ``w_row[l]`` scales the BDD verdicts of the row pass of iteration l+1,
    ``w_col[l]`` those of the column pass.
    """

    w_row: np.ndarray
    w_col: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w_row", np.asarray(self.w_row, dtype=float))
        object.__setattr__(self, "w_col", np.asarray(self.w_col, dtype=float))
        if np.any(self.w_row < 0) or np.any(self.w_col < 0):
            raise ValueError("combining weights must be nonnegative")
        if not (np.all(np.isfinite(self.w_row)) and np.all(np.isfinite(self.w_col))):
            raise ValueError("combining weights must be finite")

    @property
    def iterations(self) -> int:
        return min(len(self.w_row), len(self.w_col))

    @classmethod
    def constant(cls, w: float, iterations: int) -> "ScalingSchedule":
        return cls(np.full(iterations, float(w)), np.full(iterations, float(w)))

    @classmethod
    def from_gldpc_result(cls, result) -> "ScalingSchedule":
        """Adopt the weight trajectory of a GLDPC recursion run."""
        return cls(result.w_row, result.w_col)


def ibdd_sr_decode(
    code: ProductCode,
    llr: np.ndarray,
    schedule: ScalingSchedule,
    sr_iters: int = 10,
    plain_iters: int = 2,
    observer=None,
) -> np.ndarray:
    """Iterative BDD with scaled-reliability combining against channel LLRs.

    Each scaled iteration BDD-decodes all rows, re-decides every bit through
    ``combine_decision`` with the iteration's row weight, then repeats for
    columns.  After ``sr_iters`` such iterations, ``plain_iters`` rounds of
    conventional decoding (which ignore the channel, flipping the error-floor
    mechanism off) finish the job.  Exits early once the array is a product
    codeword.  ``observer(stage, iteration, psi)`` is called after every
    half-iteration when given.
    """
    if schedule.iterations < sr_iters:
        raise ValueError(
            f"schedule covers {schedule.iterations} iterations, need {sr_iters}"
        )
    comp = code.component
    llr = np.asarray(llr, dtype=float)
    psi = harden(llr)
    for ell in range(sr_iters):
        if code.is_codeword(psi):
            break
        mu, _, _ = bdd_decode_matrix(comp, psi)
        psi = combine_decision(mu, schedule.w_row[ell], llr)
        if observer is not None:
            observer("row", ell + 1, psi)
        mu_t, _, _ = bdd_decode_matrix(comp, np.ascontiguousarray(psi.T))
        psi = np.ascontiguousarray(combine_decision(mu_t, schedule.w_col[ell], llr.T).T)
        if observer is not None:
            observer("col", ell + 1, psi)
    if plain_iters > 0:
        psi = ibdd_decode(code, psi, plain_iters, observer=observer)
    return psi


def ibdd_decode(
    code: ProductCode, r: np.ndarray, iters: int = 12, observer=None
) -> np.ndarray:
    """Conventional iterative BDD on a hard-decision array.

    Rows then columns per iteration; decoded component words replace their
    input, failures leave it untouched.  Early exit on a valid codeword.
    """
    comp = code.component
    psi = np.array(r, dtype=np.uint8, copy=True)
    for ell in range(iters):
        if code.is_codeword(psi):
            break
        _, psi, _ = bdd_decode_matrix(comp, psi)
        if observer is not None:
            observer("row", ell + 1, psi)
        _, dec_t, _ = bdd_decode_matrix(comp, np.ascontiguousarray(psi.T))
        psi = np.ascontiguousarray(dec_t.T)
        if observer is not None:
            observer("col", ell + 1, psi)
    return psi


def ideal_ibdd_decode(
    code: ProductCode,
    r: np.ndarray,
    transmitted: np.ndarray,
    iters: int = 12,
) -> np.ndarray:
    """Iterative genie decoding: components correct within t, never miscorrect.

    The transmitted array is side information for the genie only; the
    schedule and stopping rule match ``ibdd_decode``.
    """
    comp = code.component
    psi = np.array(r, dtype=np.uint8, copy=True)
    transmitted = np.asarray(transmitted, dtype=np.uint8)
    for _ in range(iters):
        if code.is_codeword(psi):
            break
        _, psi, _ = ideal_decode_matrix(comp, psi, transmitted)
        _, dec_t, _ = ideal_decode_matrix(
            comp, np.ascontiguousarray(psi.T), np.ascontiguousarray(transmitted.T)
        )
        psi = np.ascontiguousarray(dec_t.T)
    return psi
