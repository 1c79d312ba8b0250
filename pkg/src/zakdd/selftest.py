"""Embedded oracle suite run by ``zakdd selftest``.

Every check is deterministic (fixed seeds) so repeated runs print the same
bytes.
"""

from __future__ import annotations

import sys

import numpy as np

from .analysis import aliasing_map, flatness, power_profile, predictability_residual
from .channel import apply_channel, lattice_channel
from .core import DDFilter, DDSignal, FrameParams, TimeSignal
from .modem import ModemKind, transceive
from .pulsone import pulsone_gram
from .twisted import effective_dd_filter, twisted_conv
from .zak import dzt, dzt_direct, freq_invert, freq_realize, freq_realize_direct, idzt, quasi_extend_grid, unitary_dft

TRANSFORM_TOL = 1e-9
PIPELINE_TOL = 1e-8


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _check_transforms():
    rng = np.random.default_rng(11)
    worst = 0.0
    for M in (1, 2, 4, 8):
        for N in (1, 2, 4, 8):
            fp = FrameParams(M, N, 1e-3)
            x = TimeSignal(fp, _crandn(rng, fp.size))
            X = dzt(x)
            worst = max(
                worst,
                _rel(X.grid, dzt_direct(x).grid),
                _rel(idzt(X).samples, x.samples),
                _rel(freq_realize(X).bins, unitary_dft(x).bins),
                _rel(freq_realize(X).bins, freq_realize_direct(X).bins),
                _rel(freq_invert(freq_realize(X)).grid, X.grid),
                abs(X.energy() - x.energy()) / x.energy(),
            )
    return worst < TRANSFORM_TOL, f"max rel err {worst:.3e}"


def _check_quasi_periodicity():
    rng = np.random.default_rng(12)
    fp = FrameParams(4, 8, 1e-3)
    X = dzt(TimeSignal(fp, _crandn(rng, fp.size)))
    k = np.arange(fp.M)[:, None]
    l = np.arange(fp.N)[None, :]
    ok = (
        np.array_equal(quasi_extend_grid(X, k, l), X.grid)
        and _rel(quasi_extend_grid(X, k + fp.M, l), np.exp(2j * np.pi * l / fp.N) * X.grid) < TRANSFORM_TOL
        and np.array_equal(quasi_extend_grid(X, k, l + fp.N), X.grid)
    )
    return ok, "three extension identities"


def _check_gram():
    worst = max(_rel(pulsone_gram(FrameParams(M, N, 1e-3)), np.eye(M * N)) for M, N in ((2, 2), (4, 4), (8, 4)))
    return worst < 1e-12, f"max |G - I| {worst:.3e}"


def _check_io_law():
    rng = np.random.default_rng(13)
    worst = 0.0
    for M, N in ((4, 4), (4, 8)):
        fp = FrameParams(M, N, 1e-3)
        for _ in range(5):
            taps = [(complex(*rng.standard_normal(2)), int(rng.integers(0, 2 * M)), int(rng.integers(-N, N))) for _ in range(3)]
            chan = lattice_channel(fp, taps)
            X = DDSignal(fp, _crandn(rng, M, N))
            lhs = dzt(apply_channel(chan, idzt(X))).grid
            h = effective_dd_filter(chan, DDFilter.delta(fp), DDFilter.delta(fp))
            worst = max(worst, _rel(lhs, twisted_conv(h, X).grid))
    return worst < PIPELINE_TOL, f"max rel err {worst:.3e}"


def _check_loopback():
    rng = np.random.default_rng(14)
    fp = FrameParams(4, 4, 1e-3)
    ident = lattice_channel(fp, [(1, 0, 0)])
    x = _crandn(rng, fp.size)
    worst = max(_rel(transceive(kind, x, ident, fp), x) for kind in ModemKind)
    return worst < TRANSFORM_TOL, f"max rel err {worst:.3e}"


def _check_crystalline_otfs():
    fp = FrameParams(8, 8, 1e-3)
    ph = lambda a: np.exp(1j * a)  # noqa: E731
    chan = lattice_channel(fp, [(1, 2, 0), (ph(0.4), 2, -1), (ph(1.3), 3, 0), (ph(2.2), 4, 1)])
    ratio = flatness(power_profile(ModemKind.OTFS, chan, fp)).max_over_min
    resid = predictability_residual(chan, fp, (1, 2), (5, 5))
    ok = ratio < 1 + 1e-6 and resid < PIPELINE_TOL and not aliasing_map(chan, fp)
    return ok, f"max/min {ratio:.12f}, residual {resid:.3e}"


CHECKS = (
    ("transforms", _check_transforms),
    ("quasi_periodicity", _check_quasi_periodicity),
    ("pulsone_gram", _check_gram),
    ("otfs_io_law", _check_io_law),
    ("loopback", _check_loopback),
    ("crystalline_otfs", _check_crystalline_otfs),
)


def run_selftest(out=None) -> bool:
    out = out or sys.stdout
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok &= bool(ok)
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    return all_ok
