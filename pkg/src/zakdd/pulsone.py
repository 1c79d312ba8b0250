"""Pulsones: TD and FD realizations of a single DD pulse."""

from __future__ import annotations

import numpy as np

from .core import DDSignal, FrameParams, FreqSignal, TimeSignal
from .zak import freq_realize, idzt

__all__ = ["dd_pulse", "pulsone_td", "pulsone_fd", "pulsone_gram"]

# The closed forms are asserted against the transform output at this tolerance.
_CLOSED_FORM_TOL = 1e-9


def _check_indices(fp: FrameParams, k0: int, l0: int) -> None:
    if not (0 <= k0 < fp.M):
        raise ValueError(f"k0 must lie in [0, {fp.M}), got {k0}")
    if not (0 <= l0 < fp.N):
        raise ValueError(f"l0 must lie in [0, {fp.N}), got {l0}")


def dd_pulse(fp: FrameParams, k0: int, l0: int) -> DDSignal:
    """Unit DD pulse at cell ``(k0, l0)`` of the fundamental period."""
    _check_indices(fp, k0, l0)
    grid = np.zeros((fp.M, fp.N), dtype=complex)
    grid[k0, l0] = 1.0
    return DDSignal(fp, grid)


def _td_closed_form(fp: FrameParams, k0: int, l0: int) -> np.ndarray:
    out = np.zeros(fp.size, dtype=complex)
    n = np.arange(fp.N)
    out[k0 + n * fp.M] = np.exp(2j * np.pi * n * l0 / fp.N) / np.sqrt(fp.N)
    return out


def _fd_closed_form(fp: FrameParams, k0: int, l0: int) -> np.ndarray:
    out = np.zeros(fp.size, dtype=complex)
    q = l0 + np.arange(fp.M) * fp.N
    out[q] = np.exp(-2j * np.pi * q * k0 / fp.size) / np.sqrt(fp.M)
    return out


def pulsone_td(fp: FrameParams, k0: int, l0: int) -> TimeSignal:
    """TD pulsone: a pulse train of period ``M`` samples starting at ``k0``,
    modulated by the tone of Doppler bin ``l0``."""
    x = idzt(dd_pulse(fp, k0, l0))
    ref = _td_closed_form(fp, k0, l0)
    if np.max(np.abs(x.samples - ref)) > _CLOSED_FORM_TOL:
        raise AssertionError("TD pulsone deviates from its closed form")
    return x


def pulsone_fd(fp: FrameParams, k0: int, l0: int) -> FreqSignal:
    """FD pulsone: bins ``l0 + m*N`` carrying the FD tone ``exp(-2j*pi*q*k0/MN)``."""
    X = freq_realize(dd_pulse(fp, k0, l0))
    ref = _fd_closed_form(fp, k0, l0)
    if np.max(np.abs(X.bins - ref)) > _CLOSED_FORM_TOL:
        raise AssertionError("FD pulsone deviates from its closed form")
    return X


def pulsone_gram(fp: FrameParams) -> np.ndarray:
    """Gram matrix of all ``M*N`` TD pulsones, ordered by ``k*N + l``.

    Row ``(k, l)``, column ``(k', l')`` holds ``<p_{k'l'}, p_{kl}>``.
    """
    basis = np.empty((fp.size, fp.size), dtype=complex)
    for k in range(fp.M):
        for l in range(fp.N):
            basis[:, k * fp.N + l] = pulsone_td(fp, k, l).samples
    return basis.conj().T @ basis
