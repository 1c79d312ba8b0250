"""Fading, predictability and aliasing measurements over whole pipelines."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channel import on_grid_bins
from .core import ChannelSpec, DDFilter, FrameParams, validate_crystallization
from .modem import FilterSpec, ModemKind, response_matrix, transceive
from .pulsone import dd_pulse
from .twisted import twisted_conv

__all__ = [
    "FLAT_TOL",
    "SIGNIFICANT_REL",
    "Flatness",
    "SweepRow",
    "AliasedCell",
    "power_profile",
    "flatness",
    "crystallization_sweep",
    "predictability_residual",
    "aliasing_map",
    "sweep_workers",
]

# max_over_min below 1 + FLAT_TOL counts as flat for on-grid cyclic runs.
FLAT_TOL = 1e-6
# Cells of a probe response at or above this fraction of the peak are taps.
SIGNIFICANT_REL = 1e-6


class Flatness(NamedTuple):
    max_over_min: float
    normalized_std: float


@dataclass(frozen=True)
class SweepRow:
    tau_p: float
    nu_p: float
    delay_ok: bool
    doppler_ok: bool
    max_over_min: float
    normalized_std: float
    profile: np.ndarray

    @property
    def crystalline(self) -> bool:
        return self.delay_ok and self.doppler_ok


class AliasedCell(NamedTuple):
    k: int
    l: int
    paths: tuple[int, ...]


def power_profile(
    kind: ModemKind | str,
    chan: ChannelSpec,
    fp: FrameParams,
    filters: FilterSpec | None = None,
) -> np.ndarray:
    """Expected received power per output sample under iid unit-power symbols.

    ``P[j] = sum_i |C[j, i]|**2`` where ``C`` is the pipeline's response
    matrix, obtained by probing every unit symbol. OTFS outputs are
    flattened as ``k*N + l``.
    """
    C = response_matrix(kind, chan, fp, filters)
    return np.sum(np.abs(C) ** 2, axis=1)


def flatness(P: Sequence[float]) -> Flatness:
    P = np.asarray(P, dtype=float)
    if np.any(P < 0):
        raise ValueError("power profile must be nonnegative")
    hi = float(P.max())
    if hi == 0:
        raise ValueError("power profile is identically zero")
    lo = float(P.min())
    ratio = hi / lo if lo > 0 else math.inf
    return Flatness(ratio, float(P.std() / P.mean()))


def sweep_workers() -> int:
    raw = os.environ.get("ZAKDD_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"ZAKDD_THREADS: expected an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


def _sweep_row(chan, fp, filters, kind) -> SweepRow:
    check = validate_crystallization(chan, fp)
    P = power_profile(kind, chan, fp, filters)
    flat = flatness(P)
    P.setflags(write=False)
    return SweepRow(fp.tau_p, fp.nu_p, check.delay_ok, check.doppler_ok, flat.max_over_min, flat.normalized_std, P)


def crystallization_sweep(
    chan: ChannelSpec,
    fp_list: Sequence[FrameParams],
    filters: FilterSpec | None = None,
    kind: ModemKind | str = ModemKind.OTFS,
) -> list[SweepRow]:
    """One row per frame: crystallization flags and power-profile flatness.

    All frames must share ``M`` and ``N``; ``nu_p = 1/tau_p`` always.
    """
    fp_list = list(fp_list)
    if len({(fp.M, fp.N) for fp in fp_list}) > 1:
        raise ValueError("all frames in a sweep must share M and N")
    with ThreadPoolExecutor(max_workers=sweep_workers()) as pool:
        return list(pool.map(lambda fp: _sweep_row(chan, fp, filters, kind), fp_list))


# --- predictability -------------------------------------------------------


def _window_origin(chan: ChannelSpec, fp: FrameParams, w_tx: DDFilter, w_rx: DDFilter):
    # Lower corner of the rectangle that holds the effective channel filter.
    d_lo = math.floor(min(p.delay for p in chan.paths) * fp.bandwidth + 1e-9)
    l_lo = math.floor(min(p.doppler for p in chan.paths) * fp.duration + 1e-9)
    d_lo += min(k for k, _ in w_tx.taps) + min(k for k, _ in w_rx.taps)
    l_lo += min(l for _, l in w_tx.taps) + min(l for _, l in w_rx.taps)
    return d_lo, l_lo


def _otfs_predict(resp_a, a, b, fp, origin) -> np.ndarray:
    """Predict the b-response from the a-response tap by tap.

    Each significant cell of the a-response is read as one tap whose offset
    is the representative of (cell - a) inside the window starting at
    ``origin``. Dividing out the twisted phase it picks up for a pulse at
    ``a`` and reapplying it for ``b`` is the discrete form of
    ``g_b = g_a * exp(2j*pi*nu_i*(tau_b - tau_a))``.
    """
    if a == b:
        return resp_a
    M, N = fp.M, fp.N
    ka, la = a
    d_lo, l_lo = origin
    peak = np.max(np.abs(resp_a))
    taps = {}
    for ck, cl in zip(*np.nonzero(np.abs(resp_a) >= SIGNIFICANT_REL * peak)):
        dk = (ck - ka - d_lo) % M + d_lo
        dl = (cl - la - l_lo) % N + l_lo
        probe = twisted_conv(DDFilter(fp, {(dk, dl): 1.0}), dd_pulse(fp, ka, la)).grid[ck, cl]
        taps[(int(dk), int(dl))] = resp_a[ck, cl] / probe
    return twisted_conv(DDFilter(fp, taps), dd_pulse(fp, *b)).grid


def predictability_residual(
    chan: ChannelSpec,
    fp: FrameParams,
    pulse_a,
    pulse_b,
    filters: FilterSpec | None = None,
    kind: ModemKind | str = ModemKind.OTFS,
) -> float:
    """Relative error when the b-response is predicted from the a-response.

    For OTFS, ``pulse_a``/``pulse_b`` are DD cells and the prediction uses
    the per-path phase law, with taps read off the a-response and placed in
    the window set by the channel's smallest delay and Doppler. For TDM and
    FDM they are linear symbol indices and the prediction is the shifted
    a-response (a stationary filter).
    """
    kind = ModemKind(kind)
    filters = filters or FilterSpec()
    unit = np.zeros(fp.size, dtype=complex)
    if kind is ModemKind.OTFS:
        resp = {}
        for cell in (tuple(pulse_a), tuple(pulse_b)):
            pulse = dd_pulse(fp, *cell)
            resp[cell] = transceive(kind, pulse.grid.reshape(-1), chan, fp, filters).reshape(fp.M, fp.N)
        actual = resp[tuple(pulse_b)]
        w_tx, w_rx = filters.dd_pair(fp)
        predicted = _otfs_predict(resp[tuple(pulse_a)], tuple(pulse_a), tuple(pulse_b), fp, _window_origin(chan, fp, w_tx, w_rx))
    else:
        a, b = int(pulse_a), int(pulse_b)
        ua = unit.copy()
        ua[a] = 1.0
        ub = unit.copy()
        ub[b] = 1.0
        resp_a = transceive(kind, ua, chan, fp, filters)
        actual = transceive(kind, ub, chan, fp, filters)
        predicted = np.roll(resp_a, b - a)
    norm = np.linalg.norm(actual)
    if norm == 0:
        raise ValueError("the b-response is identically zero")
    return float(np.linalg.norm(predicted - actual) / norm)


# --- aliasing ---------------------------------------------------------------


def aliasing_map(chan: ChannelSpec, fp: FrameParams) -> list[AliasedCell]:
    """DD cells (offsets modulo the period) reached by two or more distinct paths.

    Paths with identical absolute offsets are one effective tap and do not
    count as aliasing.
    """
    bins = on_grid_bins(chan, fp)
    cells: dict[tuple[int, int], dict[tuple[int, int], list[int]]] = {}
    for i, (d, l) in enumerate(bins):
        cells.setdefault((d % fp.M, l % fp.N), {}).setdefault((d, l), []).append(i)
    out = []
    for (k, l), by_offset in sorted(cells.items()):
        if len(by_offset) >= 2:
            paths = tuple(sorted(i for group in by_offset.values() for i in group))
            out.append(AliasedCell(k, l, paths))
    return out
