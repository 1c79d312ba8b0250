import numpy as np
import pytest

from conftest import crandn, rel_err
from zakdd import (
    ChannelMode,
    ChannelSpec,
    FrameParams,
    OffGridError,
    TimeSignal,
    add_awgn,
    apply_channel,
    fig7_channel,
    lattice_channel,
    on_grid_bins,
    unitary_dft,
)


def brute_cyclic(taps, x, L):
    # y[n] = sum_i h_i x[n - d_i] exp(2j*pi*m_i*(n - d_i)/L), indices mod L
    y = np.zeros(L, dtype=complex)
    for h, d, m in taps:
        for n in range(L):
            y[n] += h * x[(n - d) % L] * np.exp(2j * np.pi * m * (n - d) / L)
    return y


def test_identity_channel(rng):
    fp = FrameParams(4, 4, 1e-3)
    x = TimeSignal(fp, crandn(rng, 16))
    for mode in ChannelMode:
        chan = ChannelSpec.from_tuples([(1, 0, 0)], mode)
        np.testing.assert_allclose(apply_channel(chan, x).samples, x.samples, atol=1e-14)


def test_pure_delay_moves_impulse():
    fp = FrameParams(4, 4, 1e-3)
    x = np.zeros(16)
    x[0] = 1
    y = apply_channel(lattice_channel(fp, [(0.5 - 2j, 3, 0)]), TimeSignal(fp, x)).samples
    expected = np.zeros(16, dtype=complex)
    expected[3] = 0.5 - 2j
    np.testing.assert_allclose(y, expected, atol=1e-15)


def test_cyclic_matches_brute_force(rng):
    fp = FrameParams(4, 8, 1e-3)
    taps = [(1 + 0.5j, 2, -3), (-0.3j, 9, 5), (0.7, 0, 1)]
    x = crandn(rng, 32)
    y = apply_channel(lattice_channel(fp, taps), TimeSignal(fp, x)).samples
    assert rel_err(y, brute_cyclic(taps, x, 32)) < 1e-12


def test_framed_equals_cyclic_on_grid(rng):
    fp = FrameParams(4, 8, 1e-3)
    taps = [(1 + 0.5j, 2, -3), (-0.3j, 9, 5), (0.7, 0, 1)]
    x = TimeSignal(fp, crandn(rng, 32))
    cyc = apply_channel(lattice_channel(fp, taps, ChannelMode.CYCLIC), x).samples
    fr = apply_channel(lattice_channel(fp, taps, ChannelMode.FRAMED), x).samples
    assert rel_err(fr, cyc) < 1e-12


def test_off_grid_cyclic_names_path():
    fp = FrameParams(4, 4, 1e-3)
    chan = ChannelSpec.from_tuples([(1, 0, 0), (1, 0.3e-3, 0)])
    with pytest.raises(OffGridError, match=r"paths\[1\]\.delay_s"):
        apply_channel(chan, TimeSignal(fp, np.zeros(16)))
    chan = ChannelSpec.from_tuples([(1, 0, 10.0)])
    with pytest.raises(OffGridError, match=r"paths\[0\]\.doppler_hz"):
        on_grid_bins(chan, fp)


def test_fig7_framed_fd_tone():
    # T = 20 ms gives 50 Hz bins, so 15 kHz, 15 kHz - 950 Hz and 15 kHz + 750 Hz are all bins
    fp = FrameParams(16, 32, 20e-3 / 32)
    assert fp.df == pytest.approx(50.0)
    L = fp.size
    q0 = 300
    n = np.arange(L)
    x = TimeSignal(fp, np.exp(2j * np.pi * q0 * n / L) / np.sqrt(L))
    gains = [1.0, 0.8j, -0.6, 0.5 + 0.5j]
    Y = unitary_dft(apply_channel(fig7_channel(gains), x)).bins

    expected = np.zeros(L, dtype=complex)
    f0 = q0 * fp.df
    for g, tau, nu in zip(gains, (2e-6, 2e-6, 3e-6, 4e-6), (0.0, -950.0, 0.0, 750.0)):
        # path i turns exp(2j*pi*f0*t) into h_i exp(2j*pi*(f0 + nu_i)*(t - tau_i))
        expected[q0 + round(nu / fp.df)] += g * np.exp(-2j * np.pi * (f0 + nu) * tau)
    assert np.max(np.abs(Y - expected)) < 1e-12
    assert set(np.flatnonzero(np.abs(Y) > 1e-9)) == {281, 300, 315}


def test_framed_fractional_delay_of_band_limited_tone(rng):
    fp = FrameParams(4, 4, 1e-3)
    L = fp.size
    n = np.arange(L)
    q = 5
    x = TimeSignal(fp, np.exp(2j * np.pi * q * n / L))
    tau = 0.37 * fp.dt
    y = apply_channel(ChannelSpec.from_tuples([(1, tau, 0)], "framed"), x).samples
    np.testing.assert_allclose(y, np.exp(2j * np.pi * q * (n - 0.37) / L), atol=1e-12)


def test_fig7_defaults():
    chan = fig7_channel()
    assert chan.mode is ChannelMode.FRAMED
    assert [p.gain for p in chan.paths] == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        fig7_channel([1, 2, 3])


def test_awgn_zero_power_and_errors(rng):
    fp = FrameParams(2, 2, 1e-3)
    x = TimeSignal(fp, crandn(rng, 4))
    assert add_awgn(x, 0.0, 1) is x
    with pytest.raises(ValueError):
        add_awgn(x, -1.0, 1)


def test_awgn_power_and_determinism():
    fp = FrameParams(1000, 1000, 1e-3)
    x = TimeSignal(fp, np.zeros(fp.size))
    y = add_awgn(x, 0.25, seed=7).samples
    assert np.mean(np.abs(y) ** 2) == pytest.approx(0.25, rel=0.01)
    # circular symmetry: real and imaginary parts share the power
    assert np.mean(y.real**2) == pytest.approx(0.125, rel=0.02)
    np.testing.assert_array_equal(add_awgn(x, 0.25, seed=7).samples, y)
