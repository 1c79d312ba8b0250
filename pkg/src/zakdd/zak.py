"""Discrete Zak transforms between the TD, FD and DD representations.

All maps are unitary. The fast paths use length-``N`` FFTs per delay bin
(and length-``M`` FFTs per Doppler bin for the FD side); the ``*_direct``
functions evaluate the defining sums literally and serve as oracles.
"""

from __future__ import annotations

import numpy as np

from .core import DDSignal, FrameParams, FreqSignal, TimeSignal

__all__ = [
    "dzt",
    "idzt",
    "freq_realize",
    "freq_invert",
    "quasi_extend",
    "quasi_extend_grid",
    "unitary_dft",
    "unitary_idft",
    "dzt_direct",
    "idzt_direct",
    "freq_realize_direct",
]


def dzt(x: TimeSignal) -> DDSignal:
    """Time Zak transform of a sampled TD signal.

    ``grid[k, l] = N**-0.5 * sum_n x[k + n*M] * exp(-2j*pi*n*l/N)``
    """
    fp = x.params
    # rows of the (N, M) view are the delay-period segments x[n*M : (n+1)*M]
    segments = x.samples.reshape(fp.N, fp.M)
    grid = np.fft.fft(segments, axis=0, norm="ortho").T
    return DDSignal(fp, grid)


def idzt(X: DDSignal) -> TimeSignal:
    """Inverse time Zak transform; exact inverse of :func:`dzt`."""
    fp = X.params
    segments = np.fft.ifft(X.grid.T, axis=0, norm="ortho")
    return TimeSignal(fp, segments.reshape(fp.size))


def _fd_twiddle(fp: FrameParams) -> np.ndarray:
    k = np.arange(fp.M)[:, None]
    l = np.arange(fp.N)[None, :]
    return np.exp(-2j * np.pi * k * l / fp.size)


def freq_realize(X: DDSignal) -> FreqSignal:
    """Inverse frequency Zak transform: DD grid to ``M*N`` FD bins.

    ``bins[q] = M**-0.5 * sum_k grid[k, q % N] * exp(-2j*pi*q*k/(M*N))``
    """
    fp = X.params
    # q = l + m*N splits the phase into exp(-2j*pi*l*k/MN) * exp(-2j*pi*m*k/M)
    pre = X.grid * _fd_twiddle(fp)
    per_m = np.fft.fft(pre, axis=0, norm="ortho")  # [m, l]
    return FreqSignal(fp, per_m.reshape(fp.size))


def freq_invert(Xf: FreqSignal) -> DDSignal:
    """Frequency Zak transform; exact inverse of :func:`freq_realize`."""
    fp = Xf.params
    per_m = Xf.bins.reshape(fp.M, fp.N)
    pre = np.fft.ifft(per_m, axis=0, norm="ortho")
    return DDSignal(fp, pre * np.conj(_fd_twiddle(fp)))


def unitary_dft(x: TimeSignal) -> FreqSignal:
    return FreqSignal(x.params, np.fft.fft(x.samples, norm="ortho"))


def unitary_idft(Xf: FreqSignal) -> TimeSignal:
    return TimeSignal(Xf.params, np.fft.ifft(Xf.bins, norm="ortho"))


def quasi_extend_grid(X: DDSignal, k, l) -> np.ndarray:
    """Vectorized :func:`quasi_extend` over integer index arrays."""
    fp = X.params
    k = np.asarray(k, dtype=np.int64)
    l = np.asarray(l, dtype=np.int64)
    n, k0 = np.divmod(k, fp.M)
    l0 = np.mod(l, fp.N)
    # delay-period wraps pick up exp(2j*pi*n*l0/N); Doppler wraps are phase-free
    phase = np.exp(2j * np.pi * np.mod(n * l0, fp.N) / fp.N)
    return phase * X.grid[k0, l0]


def quasi_extend(X: DDSignal, k: int, l: int) -> complex:
    """Value of the quasi-periodic extension of ``X`` at any integer cell."""
    return complex(quasi_extend_grid(X, k, l))


# --- direct-sum references ------------------------------------------------


def dzt_direct(x: TimeSignal) -> DDSignal:
    fp = x.params
    M, N = fp.M, fp.N
    grid = np.zeros((M, N), dtype=complex)
    for k in range(M):
        for l in range(N):
            acc = 0j
            for n in range(N):
                acc += x.samples[k + n * M] * np.exp(-2j * np.pi * n * l / N)
            grid[k, l] = acc / np.sqrt(N)
    return DDSignal(fp, grid)


def idzt_direct(X: DDSignal) -> TimeSignal:
    fp = X.params
    M, N = fp.M, fp.N
    out = np.zeros(fp.size, dtype=complex)
    for k in range(M):
        for n in range(N):
            acc = 0j
            for l in range(N):
                acc += X.grid[k, l] * np.exp(2j * np.pi * n * l / N)
            out[k + n * M] = acc / np.sqrt(N)
    return TimeSignal(fp, out)


def freq_realize_direct(X: DDSignal) -> FreqSignal:
    fp = X.params
    M, N = fp.M, fp.N
    out = np.zeros(fp.size, dtype=complex)
    for q in range(fp.size):
        acc = 0j
        for k in range(M):
            acc += X.grid[k, q % N] * np.exp(-2j * np.pi * q * k / fp.size)
        out[q] = acc / np.sqrt(M)
    return FreqSignal(fp, out)
