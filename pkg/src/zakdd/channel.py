"""Doubly-spread channel applied to sampled TD signals.

Two modes are supported. ``cyclic`` needs every path on the lattice
(delay a multiple of ``1/B``, Doppler a multiple of ``1/T``) and acts by
cyclic shifts and periodic tones, which keeps every DD identity exact.
``framed`` accepts arbitrary real delays and Dopplers: delays go through
band-limited periodic interpolation over the frame, Doppler tones are
evaluated exactly at the sample instants.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import ChannelMode, ChannelPath, ChannelSpec, FrameParams, TimeSignal

__all__ = [
    "OffGridError",
    "on_grid_bins",
    "apply_channel",
    "fig7_channel",
    "lattice_channel",
    "add_awgn",
    "FIG7_DELAYS",
    "FIG7_DOPPLERS",
]

# Path delays (s) and Dopplers (Hz) of the four-path example channel.
FIG7_DELAYS = (2e-6, 2e-6, 3e-6, 4e-6)
FIG7_DOPPLERS = (0.0, -950.0, 0.0, 750.0)

_GRID_TOL = 1e-9


class OffGridError(ValueError):
    """A cyclic-mode channel path is not on the delay/Doppler lattice."""


def _nearest_int(value: float) -> int | None:
    r = round(value)
    if abs(value - r) <= _GRID_TOL * max(1.0, abs(value)):
        return int(r)
    return None


def on_grid_bins(chan: ChannelSpec, fp: FrameParams) -> list[tuple[int, int]]:
    """Integer (delay bin, Doppler bin) of each path, or :class:`OffGridError`."""
    bins = []
    for i, p in enumerate(chan.paths):
        d = _nearest_int(p.delay * fp.bandwidth)
        if d is None:
            raise OffGridError(
                f"paths[{i}].delay_s={p.delay!r} is not a multiple of 1/B={fp.dt!r} s"
            )
        l = _nearest_int(p.doppler * fp.duration)
        if l is None:
            raise OffGridError(
                f"paths[{i}].doppler_hz={p.doppler!r} is not a multiple of 1/T={fp.df!r} Hz"
            )
        bins.append((d, l))
    return bins


def _apply_cyclic(chan: ChannelSpec, x: TimeSignal) -> np.ndarray:
    fp = x.params
    L = fp.size
    n = np.arange(L)
    y = np.zeros(L, dtype=complex)
    for p, (d, l) in zip(chan.paths, on_grid_bins(chan, fp)):
        # integer arithmetic keeps the tone exactly L-periodic
        phase = np.exp(2j * np.pi * np.mod(l * (n - d), L) / L)
        y += p.gain * np.roll(x.samples, d) * phase
    return y


def _apply_framed(chan: ChannelSpec, x: TimeSignal) -> np.ndarray:
    fp = x.params
    L = fp.size
    t = np.arange(L) / fp.bandwidth
    spectrum = np.fft.fft(x.samples)
    # band [0, B): bin q sits at f = q / T, matching the FD convention
    q = np.arange(L)
    y = np.zeros(L, dtype=complex)
    for p in chan.paths:
        shift = p.delay * fp.bandwidth
        frac = shift - np.floor(shift)
        delayed = np.fft.ifft(spectrum * np.exp(-2j * np.pi * q * frac / L))
        delayed = np.roll(delayed, int(np.floor(shift)) % L)
        y += p.gain * delayed * np.exp(2j * np.pi * p.doppler * (t - p.delay))
    return y


def apply_channel(chan: ChannelSpec, x: TimeSignal) -> TimeSignal:
    """Sum of delayed, Doppler-shifted, scaled copies of ``x``.

    ``y[n] = sum_i h_i * x(n/B - tau_i) * exp(2j*pi*nu_i*(n/B - tau_i))``
    """
    if chan.mode is ChannelMode.CYCLIC:
        y = _apply_cyclic(chan, x)
    else:
        y = _apply_framed(chan, x)
    return TimeSignal(x.params, y)


def fig7_channel(
    gains: Sequence[complex] = (1, 1, 1, 1), mode: ChannelMode | str = ChannelMode.FRAMED
) -> ChannelSpec:
    """Four-path example channel: delays 2, 2, 3, 4 us; Dopplers 0, -950, 0, +750 Hz.

    The path gains are not fixed by the source material, so they are an
    argument; unit gains are the default for reproduction runs.
    """
    gains = list(gains)
    if len(gains) != 4:
        raise ValueError(f"fig7 channel takes 4 gains, got {len(gains)}")
    paths = tuple(ChannelPath(g, d, nu) for g, d, nu in zip(gains, FIG7_DELAYS, FIG7_DOPPLERS))
    return ChannelSpec(paths, ChannelMode(mode))


def lattice_channel(
    fp: FrameParams,
    taps: Sequence[tuple[complex, int, int]],
    mode: ChannelMode | str = ChannelMode.CYCLIC,
) -> ChannelSpec:
    """Channel with each path ``(gain, d, m)`` at delay ``d/B`` and Doppler ``m/T``."""
    paths = tuple(ChannelPath(g, d * fp.dt, m * fp.df) for g, d, m in taps)
    return ChannelSpec(paths, ChannelMode(mode))


def add_awgn(x: TimeSignal, noise_power: float, seed: int) -> TimeSignal:
    """Add circularly-symmetric complex Gaussian noise of per-sample power ``noise_power``."""
    if noise_power < 0:
        raise ValueError(f"noise_power must be >= 0, got {noise_power!r}")
    if noise_power == 0:
        return x
    rng = np.random.default_rng(seed)
    n = x.params.size
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return TimeSignal(x.params, x.samples + np.sqrt(noise_power / 2) * noise)
