"""Discrete twisted convolution on quasi-periodic DD signals."""

from __future__ import annotations

import numpy as np

from .channel import on_grid_bins
from .core import ChannelSpec, DDFilter, DDSignal, FrameParams
from .zak import quasi_extend_grid

__all__ = [
    "twisted_conv",
    "twisted_conv_signal_major",
    "twisted_compose",
    "channel_taps",
    "effective_dd_filter",
]


def _same_params(a: FrameParams, b: FrameParams) -> None:
    if a != b:
        raise ValueError(f"frame parameter mismatch: {a} vs {b}")


def twisted_conv(a: DDFilter, X: DDSignal) -> DDSignal:
    """``out[k',l'] = sum a[k,l] * X(k'-k, l'-l) * exp(2j*pi*(k'-k)*l/(M*N))``

    ``X(.)`` is the quasi-periodic extension, so the output is again
    quasi-periodic and only its fundamental period is returned.
    """
    _same_params(a.params, X.params)
    fp = X.params
    L = fp.size
    kp = np.arange(fp.M)[:, None]
    lp = np.arange(fp.N)[None, :]
    out = np.zeros((fp.M, fp.N), dtype=complex)
    for (k, l), value in a.items():
        shifted = quasi_extend_grid(X, kp - k, lp - l)
        out += value * shifted * np.exp(2j * np.pi * np.mod((kp - k) * l, L) / L)
    return DDSignal(fp, out)


def twisted_conv_signal_major(a: DDFilter, X: DDSignal) -> DDSignal:
    """Same map as :func:`twisted_conv`, accumulated by scattering input cells.

    Every lattice cell ``(k, l)`` of the extended input that some tap can
    move into the fundamental period contributes
    ``a[k'-k, l'-l] * X(k, l) * exp(2j*pi*(l'-l)*k/(M*N))``.
    """
    _same_params(a.params, X.params)
    fp = X.params
    L = fp.size
    out = np.zeros((fp.M, fp.N), dtype=complex)
    if not len(a):
        return DDSignal(fp, out)
    ks = [k for k, _ in a.taps]
    ls = [l for _, l in a.taps]
    for k in range(-max(ks), fp.M - min(ks)):
        for l in range(-max(ls), fp.N - min(ls)):
            x_kl = quasi_extend_grid(X, k, l)
            if x_kl == 0:
                continue
            for (dk, dl), value in a.items():
                kp, lp = k + dk, l + dl
                if 0 <= kp < fp.M and 0 <= lp < fp.N:
                    out[kp, lp] += value * x_kl * np.exp(2j * np.pi * ((dl * k) % L) / L)
    return DDSignal(fp, out)


def twisted_compose(a: DDFilter, b: DDFilter) -> DDFilter:
    """Filter ``c`` with ``twisted_conv(c, X) == twisted_conv(a, twisted_conv(b, X))``.

    ``c[k,l] = sum a[k',l'] * b[k-k', l-l'] * exp(2j*pi*l'*(k-k')/(M*N))``
    """
    _same_params(a.params, b.params)
    L = a.params.size
    entries = []
    for (ka, la), va in a.items():
        for (kb, lb), vb in b.items():
            entries.append((ka + kb, la + lb, va * vb * np.exp(2j * np.pi * ((la * kb) % L) / L)))
    return DDFilter.from_entries(a.params, entries)


def channel_taps(chan: ChannelSpec, fp: FrameParams) -> DDFilter:
    """DD taps of an on-grid channel: gain ``h_i`` at ``(B*tau_i, T*nu_i)``.

    Phase convention. For one path, ``y[n] = h x[n-d] exp(2j*pi*m*(n-d)/MN)``.
    Taking the DZT of ``y`` at ``(k, l)`` and pulling the tone through the
    segment sum (``n = k + pM`` gives ``exp(2j*pi*m*(k-d)/MN) * exp(2j*pi*m*p/N)``)::

        Y[k, l] = h * exp(2j*pi*m*(k-d)/MN) * X(k-d, l-m)

    which is exactly the twisted-convolution term of a tap ``h`` at
    ``(d, m)``. No extra lattice phase is needed; the oracle test
    ``dzt(apply_channel(idzt(X))) == twisted_conv(taps, X)`` pins this.
    Paths landing on the same offset are merged.
    """
    bins = on_grid_bins(chan, fp)
    return DDFilter.from_entries(fp, [(d, m, p.gain) for p, (d, m) in zip(chan.paths, bins)])


def effective_dd_filter(chan: ChannelSpec, w_tx: DDFilter, w_rx: DDFilter) -> DDFilter:
    """``w_rx * h * w_tx`` under twisted composition, for an on-grid channel."""
    _same_params(w_tx.params, w_rx.params)
    h = channel_taps(chan, w_tx.params)
    return twisted_compose(w_rx, twisted_compose(h, w_tx))
