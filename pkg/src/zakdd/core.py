"""Shared domain types and the discretization convention.

A frame is described by ``FrameParams(M, N, tau_p)``. Everything else is
derived from those three numbers::

    nu_p = 1 / tau_p          Doppler period
    B    = M / tau_p          bandwidth, sample n sits at t = n / B
    T    = N * tau_p          duration,  bin q sits at f = q / T
    M*N  = B * T              samples (and bins) per frame

Grid indices ``[k, l]`` always mean (delay bin, Doppler bin).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

__all__ = [
    "FrameParams",
    "TimeSignal",
    "FreqSignal",
    "DDSignal",
    "SymbolGrid",
    "ChannelMode",
    "ChannelPath",
    "ChannelSpec",
    "DDFilter",
    "CrystallizationCheck",
    "validate_crystallization",
    "channel_from_json",
    "channel_to_json",
    "load_channel",
]


def _frozen_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128, copy=True)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrameParams:
    """Discretization lattice: ``M`` delay bins, ``N`` Doppler bins, delay period."""

    M: int
    N: int
    tau_p: float

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M!r}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not (self.tau_p > 0 and math.isfinite(self.tau_p)):
            raise ValueError(f"tau_p must be a positive finite number, got {self.tau_p!r}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "tau_p", float(self.tau_p))

    @property
    def nu_p(self) -> float:
        return 1.0 / self.tau_p

    @property
    def size(self) -> int:
        return self.M * self.N

    @property
    def bandwidth(self) -> float:
        return self.M / self.tau_p

    @property
    def duration(self) -> float:
        return self.N * self.tau_p

    @property
    def dt(self) -> float:
        """Sample period (one delay bin)."""
        return self.tau_p / self.M

    @property
    def df(self) -> float:
        """Frequency bin spacing (one Doppler bin)."""
        return self.nu_p / self.N

    def with_tau_p(self, tau_p: float) -> "FrameParams":
        return FrameParams(self.M, self.N, tau_p)


@dataclass(frozen=True)
class TimeSignal:
    """``M*N`` time samples; sample ``n`` is taken at ``t = n / B``."""

    params: FrameParams
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, (self.params.size,)))

    def energy(self) -> float:
        return float(np.vdot(self.samples, self.samples).real)


@dataclass(frozen=True)
class FreqSignal:
    """``M*N`` frequency bins; bin ``q`` sits at ``f = q / T``."""

    params: FrameParams
    bins: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bins", _frozen_array(self.bins, (self.params.size,)))

    def energy(self) -> float:
        return float(np.vdot(self.bins, self.bins).real)


@dataclass(frozen=True)
class DDSignal:
    """Quasi-periodic DD signal, stored on the fundamental period only.

    ``grid[k, l]`` is the value at ``(k * tau_p / M, l * nu_p / N)``. Values
    outside the fundamental period come from :func:`zakdd.zak.quasi_extend`.
    """

    params: FrameParams
    grid: np.ndarray

    def __post_init__(self):
        shape = (self.params.M, self.params.N)
        object.__setattr__(self, "grid", _frozen_array(self.grid, shape))

    def energy(self) -> float:
        return float(np.vdot(self.grid, self.grid).real)


@dataclass(frozen=True)
class SymbolGrid:
    """Information symbols ``x[k, l]`` on the ``M x N`` grid."""

    params: FrameParams
    symbols: np.ndarray

    def __post_init__(self):
        shape = (self.params.M, self.params.N)
        object.__setattr__(self, "symbols", _frozen_array(self.symbols, shape))

    def as_dd(self) -> DDSignal:
        # The quasi-periodic lift of x[k, l] is exactly the DDSignal extension rule.
        return DDSignal(self.params, self.symbols)


class ChannelMode(str, enum.Enum):
    CYCLIC = "cyclic"
    FRAMED = "framed"


@dataclass(frozen=True)
class ChannelPath:
    gain: complex
    delay: float
    doppler: float

    def __post_init__(self):
        if not self.delay >= 0:
            raise ValueError(f"path delay must be >= 0, got {self.delay!r}")
        object.__setattr__(self, "gain", complex(self.gain))
        object.__setattr__(self, "delay", float(self.delay))
        object.__setattr__(self, "doppler", float(self.doppler))


@dataclass(frozen=True)
class ChannelSpec:
    """Sparse DD spreading function: a finite list of (gain, delay, Doppler) paths."""

    paths: tuple[ChannelPath, ...]
    mode: ChannelMode = ChannelMode.CYCLIC

    def __post_init__(self):
        paths = tuple(self.paths)
        if not paths:
            raise ValueError("a channel needs at least one path")
        object.__setattr__(self, "paths", paths)
        object.__setattr__(self, "mode", ChannelMode(self.mode))

    @classmethod
    def from_tuples(cls, paths: Iterable[tuple], mode="cyclic") -> "ChannelSpec":
        return cls(tuple(ChannelPath(*p) for p in paths), ChannelMode(mode))

    @property
    def delay_spread(self) -> float:
        delays = [p.delay for p in self.paths]
        return max(delays) - min(delays)

    @property
    def doppler_spread(self) -> float:
        dopplers = [p.doppler for p in self.paths]
        return max(dopplers) - min(dopplers)

    def with_mode(self, mode) -> "ChannelSpec":
        return ChannelSpec(self.paths, ChannelMode(mode))

    def with_gains(self, gains: Iterable[complex]) -> "ChannelSpec":
        gains = list(gains)
        if len(gains) != len(self.paths):
            raise ValueError(f"expected {len(self.paths)} gains, got {len(gains)}")
        return ChannelSpec(
            tuple(ChannelPath(g, p.delay, p.doppler) for g, p in zip(gains, self.paths)),
            self.mode,
        )


@dataclass(frozen=True)
class DDFilter:
    """Finite set of DD taps ``(k, l) -> value`` acting by twisted convolution.

    Offsets are plain integers and may lie outside the fundamental period;
    a tap at ``(k, l)`` and one at ``(k + M, l)`` are different filters.
    """

    params: FrameParams
    taps: Mapping[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.taps).items():
            k, l = key
            key = (int(k), int(l))
            if key != (k, l):
                raise ValueError(f"tap offsets must be integers, got {(k, l)!r}")
            if key in clean:
                raise ValueError(f"duplicate tap at {key}")
            clean[key] = complex(value)
        object.__setattr__(self, "taps", dict(sorted(clean.items())))

    @classmethod
    def delta(cls, params: FrameParams) -> "DDFilter":
        return cls(params, {(0, 0): 1.0})

    @classmethod
    def from_entries(cls, params: FrameParams, entries: Iterable[tuple[int, int, complex]]):
        """Build a filter, summing values that land on the same offset."""
        acc: dict[tuple[int, int], complex] = {}
        for k, l, v in entries:
            acc[(int(k), int(l))] = acc.get((int(k), int(l)), 0j) + complex(v)
        return cls(params, acc)

    def items(self):
        return self.taps.items()

    def __len__(self) -> int:
        return len(self.taps)

    def pruned(self, atol: float = 0.0) -> "DDFilter":
        return DDFilter(self.params, {kl: v for kl, v in self.taps.items() if abs(v) > atol})


class CrystallizationCheck(NamedTuple):
    delay_ok: bool
    doppler_ok: bool
    spread_product: float

    @property
    def crystalline(self) -> bool:
        return self.delay_ok and self.doppler_ok


def validate_crystallization(chan: ChannelSpec, fp: FrameParams) -> CrystallizationCheck:
    """Check that both periods strictly exceed the matching channel spread."""
    return CrystallizationCheck(
        delay_ok=fp.tau_p > chan.delay_spread,
        doppler_ok=fp.nu_p > chan.doppler_spread,
        spread_product=chan.delay_spread * chan.doppler_spread,
    )


# --- ChannelSpec JSON -----------------------------------------------------


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ValueError(f"{where}.{key}: missing")
    return obj[key]


def _as_float(value, where) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{where}: expected a number, got {value!r}")
    return float(value)


def channel_from_json(data) -> ChannelSpec:
    """Parse the ``{"mode": ..., "paths": [...]}`` document.

    Errors name the offending field, e.g. ``paths[2].delay_s``.
    """
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValueError(f"channel: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValueError("channel: expected a JSON object")
    mode = data.get("mode", "cyclic")
    try:
        mode = ChannelMode(mode)
    except ValueError:
        raise ValueError(f"mode: expected 'cyclic' or 'framed', got {mode!r}") from None
    raw_paths = _require(data, "paths", "channel")
    if not isinstance(raw_paths, list) or not raw_paths:
        raise ValueError("paths: expected a non-empty list")
    paths = []
    for i, p in enumerate(raw_paths):
        where = f"paths[{i}]"
        gain = _require(p, "gain", where)
        if isinstance(gain, (list, tuple)) and len(gain) == 2:
            gain = complex(_as_float(gain[0], f"{where}.gain[0]"), _as_float(gain[1], f"{where}.gain[1]"))
        else:
            raise ValueError(f"{where}.gain: expected [re, im], got {gain!r}")
        delay = _as_float(_require(p, "delay_s", where), f"{where}.delay_s")
        doppler = _as_float(_require(p, "doppler_hz", where), f"{where}.doppler_hz")
        if delay < 0:
            raise ValueError(f"{where}.delay_s: must be >= 0, got {delay!r}")
        paths.append(ChannelPath(gain, delay, doppler))
    return ChannelSpec(tuple(paths), mode)


def channel_to_json(chan: ChannelSpec) -> dict:
    return {
        "mode": chan.mode.value,
        "paths": [
            {"gain": [p.gain.real, p.gain.imag], "delay_s": p.delay, "doppler_hz": p.doppler}
            for p in chan.paths
        ],
    }


def load_channel(path) -> ChannelSpec:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return channel_from_json(text)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
