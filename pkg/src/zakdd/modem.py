"""TDM, FDM and OTFS transceiver pipelines.

Each modem maps ``M*N`` symbols to one frame of ``M*N`` samples and back;
there is no equalizer, the demodulator returns the raw samples on the
information grid. Symbol ``i`` of an OTFS frame is grid cell
``(i // N, i % N)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .channel import add_awgn, apply_channel
from .core import ChannelSpec, DDFilter, FrameParams, FreqSignal, SymbolGrid, TimeSignal
from .twisted import twisted_conv
from .zak import dzt, idzt, unitary_dft, unitary_idft

__all__ = [
    "ModemKind",
    "FilterSpec",
    "rrc_pulse",
    "otfs_modulate",
    "otfs_demodulate",
    "tdm_modulate",
    "tdm_demodulate",
    "fdm_modulate",
    "fdm_demodulate",
    "transceive",
    "response_matrix",
    "effective_filter_probe",
]

Taps1D = Mapping[int, complex]


class ModemKind(str, enum.Enum):
    TDM = "tdm"
    FDM = "fdm"
    OTFS = "otfs"


def rrc_pulse(t: np.ndarray, rolloff: float) -> np.ndarray:
    """Root-raised-cosine impulse response, ``t`` in units of one bin."""
    t = np.asarray(t, dtype=float)
    b = float(rolloff)
    if b == 0:
        return np.sinc(t)
    out = np.empty_like(t)
    at_zero = np.isclose(t, 0.0)
    at_sing = np.isclose(np.abs(t), 1.0 / (4 * b))
    rest = ~(at_zero | at_sing)
    tr = t[rest]
    out[rest] = (np.sin(np.pi * tr * (1 - b)) + 4 * b * tr * np.cos(np.pi * tr * (1 + b))) / (
        np.pi * tr * (1 - (4 * b * tr) ** 2)
    )
    out[at_zero] = 1 - b + 4 * b / np.pi
    out[at_sing] = (b / math.sqrt(2)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * b)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * b))
    )
    return out


def _rrc_taps(rolloff: float, span: int) -> dict[int, float]:
    offsets = np.arange(-span, span + 1)
    values = rrc_pulse(offsets, rolloff)
    values = values / np.linalg.norm(values)
    return {int(o): float(v) for o, v in zip(offsets, values) if abs(v) > 1e-15}


@dataclass(frozen=True)
class FilterSpec:
    """Transmit/receive pulse choice shared by all three modems.

    ``delta`` (the default) leaves symbols untouched. ``rc:<a>,<b>`` uses
    sampled root-raised-cosine pulses with roll-off ``a`` along delay (and
    TD) and ``b`` along Doppler (and FD), truncated to ``+-span`` bins and
    normalized to unit energy; the receive side is the matched filter.
    """

    delay_rolloff: float | None = None
    doppler_rolloff: float | None = None
    span: int = 3

    def __post_init__(self):
        for name in ("delay_rolloff", "doppler_rolloff"):
            v = getattr(self, name)
            if v is not None and not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if self.span < 0:
            raise ValueError(f"span must be >= 0, got {self.span!r}")

    @classmethod
    def parse(cls, text: str) -> "FilterSpec":
        text = text.strip()
        if text == "delta":
            return cls()
        if text.startswith("rc:"):
            parts = text[3:].split(",")
            if len(parts) == 2:
                try:
                    return cls(float(parts[0]), float(parts[1]))
                except ValueError as exc:
                    raise ValueError(f"filter: {exc}") from None
        raise ValueError(f"filter: expected 'delta' or 'rc:<a>,<b>', got {text!r}")

    @property
    def is_delta(self) -> bool:
        return self.delay_rolloff is None and self.doppler_rolloff is None

    def __str__(self) -> str:
        if self.is_delta:
            return "delta"
        return f"rc:{self.delay_rolloff or 0.0:g},{self.doppler_rolloff or 0.0:g}"

    def _axis(self, rolloff):
        if rolloff is None:
            return {0: 1.0}
        return _rrc_taps(rolloff, self.span)

    def td_pair(self) -> tuple[dict, dict]:
        tx = self._axis(self.delay_rolloff)
        return tx, _matched_1d(tx)

    def fd_pair(self) -> tuple[dict, dict]:
        tx = self._axis(self.doppler_rolloff)
        return tx, _matched_1d(tx)

    def dd_pair(self, fp: FrameParams) -> tuple[DDFilter, DDFilter]:
        along_k = self._axis(self.delay_rolloff)
        along_l = self._axis(self.doppler_rolloff)
        tx = DDFilter(fp, {(k, l): a * b for k, a in along_k.items() for l, b in along_l.items()})
        return tx, _matched_dd(tx)


def _matched_1d(taps: Taps1D) -> dict[int, complex]:
    return {-n: np.conj(v) for n, v in taps.items()}


def _matched_dd(w: DDFilter) -> DDFilter:
    # twisted adjoint: a single tap v at (k, l) is undone by conj(v)*exp(2j*pi*k*l/MN) at (-k, -l)
    L = w.params.size
    return DDFilter(
        w.params,
        {(-k, -l): np.conj(v) * np.exp(2j * np.pi * ((k * l) % L) / L) for (k, l), v in w.items()},
    )


def _cyclic_filter(seq: np.ndarray, taps: Taps1D) -> np.ndarray:
    out = np.zeros(seq.shape[0], dtype=complex)
    for n, v in taps.items():
        out += v * np.roll(seq, n)
    return out


# --- OTFS -----------------------------------------------------------------


def otfs_modulate(x: SymbolGrid, w_tx: DDFilter) -> TimeSignal:
    """Quasi-periodic lift of ``x``, twisted-filter by ``w_tx``, inverse Zak."""
    return idzt(twisted_conv(w_tx, x.as_dd()))


def otfs_demodulate(r: TimeSignal, w_rx: DDFilter) -> np.ndarray:
    """Zak transform, twisted-filter by ``w_rx``, sample the ``M x N`` grid."""
    return np.array(twisted_conv(w_rx, dzt(r)).grid)


# --- TDM / FDM ------------------------------------------------------------


def _as_sequence(fp: FrameParams, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex).reshape(-1)
    if x.shape[0] != fp.size:
        raise ValueError(f"expected {fp.size} symbols, got {x.shape[0]}")
    return x


def tdm_modulate(fp: FrameParams, x, w_tx: Taps1D | None = None) -> TimeSignal:
    """Symbol ``k`` rides the TD pulse at ``t = k/B``, shaped by ``w_tx``."""
    x = _as_sequence(fp, x)
    return TimeSignal(fp, _cyclic_filter(x, w_tx or {0: 1.0}))


def tdm_demodulate(r: TimeSignal, w_rx: Taps1D | None = None) -> np.ndarray:
    """Receive filter, then sample at ``t = k/B``."""
    return _cyclic_filter(r.samples, w_rx or {0: 1.0})


def fdm_modulate(fp: FrameParams, x, w_tx: Taps1D | None = None) -> TimeSignal:
    """Symbol ``k`` rides the FD pulse at ``f = k/T``; inverse unitary DFT to TD."""
    x = _as_sequence(fp, x)
    return unitary_idft(FreqSignal(fp, _cyclic_filter(x, w_tx or {0: 1.0})))


def fdm_demodulate(r: TimeSignal, w_rx: Taps1D | None = None) -> np.ndarray:
    """Unitary DFT, receive filter, sample at ``f = k/T``."""
    return _cyclic_filter(np.array(unitary_dft(r).bins), w_rx or {0: 1.0})


# --- full pipelines -------------------------------------------------------


def transceive(
    kind: ModemKind | str,
    symbols,
    chan: ChannelSpec,
    fp: FrameParams,
    filters: FilterSpec | None = None,
    noise_power: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Run one frame through modulator, channel, optional noise and demodulator.

    ``symbols`` holds ``M*N`` values in the linear symbol order; the result
    uses the same order.
    """
    kind = ModemKind(kind)
    filters = filters or FilterSpec()
    x = _as_sequence(fp, symbols)
    if kind is ModemKind.OTFS:
        w_tx, w_rx = filters.dd_pair(fp)
        s = otfs_modulate(SymbolGrid(fp, x.reshape(fp.M, fp.N)), w_tx)
    elif kind is ModemKind.TDM:
        w_tx, w_rx = filters.td_pair()
        s = tdm_modulate(fp, x, w_tx)
    else:
        w_tx, w_rx = filters.fd_pair()
        s = fdm_modulate(fp, x, w_tx)
    r = add_awgn(apply_channel(chan, s), noise_power, seed)
    if kind is ModemKind.OTFS:
        return otfs_demodulate(r, w_rx).reshape(fp.size)
    if kind is ModemKind.TDM:
        return tdm_demodulate(r, w_rx)
    return fdm_demodulate(r, w_rx)


def response_matrix(
    kind: ModemKind | str, chan: ChannelSpec, fp: FrameParams, filters: FilterSpec | None = None
) -> np.ndarray:
    """Noise-free linear map of the pipeline; column ``i`` is the response to symbol ``i``."""
    eye = np.eye(fp.size, dtype=complex)
    cols = [transceive(kind, eye[:, i], chan, fp, filters) for i in range(fp.size)]
    return np.stack(cols, axis=1)


def effective_filter_probe(
    kind: ModemKind | str,
    chan: ChannelSpec,
    fp: FrameParams,
    filters: FilterSpec | None,
    k,
) -> np.ndarray:
    """Response to a unit symbol, re-indexed relative to the symbol position.

    TDM/FDM: ``k`` is a linear index and entry ``n`` is the coefficient of
    ``x[k]`` at output ``k + n`` (cyclically), i.e. ``h[n; k]``.
    OTFS: ``k`` is a cell ``(k0, l0)`` and entry ``[n, m]`` sits at output
    cell ``(k0 + n, l0 + m)`` modulo the grid.
    """
    kind = ModemKind(kind)
    unit = np.zeros(fp.size, dtype=complex)
    if kind is ModemKind.OTFS:
        k0, l0 = k
        unit[k0 * fp.N + l0] = 1.0
        y = transceive(kind, unit, chan, fp, filters).reshape(fp.M, fp.N)
        return np.roll(y, (-k0, -l0), axis=(0, 1))
    unit[int(k)] = 1.0
    return np.roll(transceive(kind, unit, chan, fp, filters), -int(k))
