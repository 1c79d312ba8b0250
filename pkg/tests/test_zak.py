import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import crandn, rel_err
from zakdd import DDSignal, FrameParams, FreqSignal, TimeSignal, dzt, freq_invert, freq_realize, idzt, quasi_extend, unitary_dft
from zakdd.zak import dzt_direct, freq_realize_direct, idzt_direct, quasi_extend_grid

SIZES = [(M, N) for M in (1, 2, 4, 8) for N in (1, 2, 4, 8)]


def zak_matrix(M, N):
    # row k*N + l, column n: coefficient of x[n] in grid[k, l]
    Z = np.zeros((M * N, M * N), dtype=complex)
    for k in range(M):
        for l in range(N):
            for n in range(N):
                Z[k * N + l, k + n * M] = np.exp(-2j * np.pi * n * l / N) / np.sqrt(N)
    return Z


def dft_matrix(L):
    q = np.arange(L)
    return np.exp(-2j * np.pi * np.outer(q, q) / L) / np.sqrt(L)


def test_size_one_is_identity():
    fp = FrameParams(1, 1, 1e-3)
    assert dzt(TimeSignal(fp, [3 - 2j])).grid[0, 0] == 3 - 2j


def test_impulse_2x2():
    fp = FrameParams(2, 2, 1e-3)
    g = dzt(TimeSignal(fp, [1, 0, 0, 0])).grid
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(g, [[s, s], [0, 0]], atol=1e-15)


def test_idzt_delta_is_impulse_train():
    fp = FrameParams(2, 2, 1e-3)
    grid = np.zeros((2, 2))
    grid[1, 0] = 1
    np.testing.assert_allclose(idzt(DDSignal(fp, grid)).samples, np.array([0, 1, 0, 1]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("M,N", [(4, 8), (3, 5), (8, 2)])
def test_dzt_matches_matrix_oracle(M, N, rng):
    fp = FrameParams(M, N, 1e-3)
    x = crandn(rng, M * N)
    expected = (zak_matrix(M, N) @ x).reshape(M, N)
    assert rel_err(dzt(TimeSignal(fp, x)).grid, expected) < 1e-12
    assert rel_err(dzt_direct(TimeSignal(fp, x)).grid, expected) < 1e-12


@pytest.mark.parametrize("M,N", [(4, 8), (3, 5)])
def test_idzt_matches_direct(M, N, rng):
    fp = FrameParams(M, N, 1e-3)
    X = DDSignal(fp, crandn(rng, M, N))
    assert rel_err(idzt(X).samples, idzt_direct(X).samples) < 1e-12


@pytest.mark.parametrize("M,N", SIZES)
def test_unitarity_and_round_trips(M, N, rng):
    fp = FrameParams(M, N, 1e-3)
    for _ in range(10):
        x = TimeSignal(fp, crandn(rng, M * N))
        X = dzt(x)
        assert X.energy() == pytest.approx(x.energy(), rel=1e-9)
        assert rel_err(idzt(X).samples, x.samples) < 1e-9
        Xf = freq_realize(X)
        assert rel_err(freq_invert(Xf).grid, X.grid) < 1e-9
        # Fourier transform factors through the DD domain
        assert rel_err(Xf.bins, dft_matrix(M * N) @ x.samples) < 1e-9
        assert rel_err(idzt(freq_invert(unitary_dft(x))).samples, x.samples) < 1e-9


@pytest.mark.parametrize("M,N", [(4, 8), (5, 3)])
def test_freq_realize_matches_direct(M, N, rng):
    X = DDSignal(FrameParams(M, N, 1e-3), crandn(rng, M, N))
    assert rel_err(freq_realize(X).bins, freq_realize_direct(X).bins) < 1e-12


@pytest.mark.parametrize("M,N,l0", [(4, 4, 0), (4, 4, 3), (2, 8, 5)])
def test_freq_realize_delta_is_fd_train(M, N, l0):
    fp = FrameParams(M, N, 1e-3)
    grid = np.zeros((M, N))
    grid[0, l0] = 1
    mags = np.abs(freq_realize(DDSignal(fp, grid)).bins)
    q = np.arange(M * N)
    np.testing.assert_allclose(mags[q % N == l0], 1 / np.sqrt(M), atol=1e-14)
    np.testing.assert_allclose(mags[q % N != l0], 0, atol=1e-14)


def test_freq_invert_size_one():
    fp = FrameParams(1, 1, 1e-3)
    assert freq_invert(FreqSignal(fp, [2j])).grid[0, 0] == pytest.approx(2j)


def test_quasi_extend_identities(rng):
    fp = FrameParams(4, 8, 1e-3)
    X = dzt(TimeSignal(fp, crandn(rng, 32)))
    for k in range(4):
        for l in range(8):
            v = X.grid[k, l]
            assert quasi_extend(X, k, l) == v
            assert quasi_extend(X, k + 4, l) == pytest.approx(np.exp(2j * np.pi * l / 8) * v, rel=1e-12)
            assert quasi_extend(X, k, l + 8) == v
            assert quasi_extend(X, k - 4, l - 16) == pytest.approx(np.exp(-2j * np.pi * l / 8) * v, rel=1e-12)


def test_quasi_extend_agrees_with_longer_zak_sum(rng):
    # extending the defining sum to k >= M with x periodic in MN is exactly the extension
    M, N = 3, 4
    fp = FrameParams(M, N, 1e-3)
    x = crandn(rng, M * N)
    X = dzt(TimeSignal(fp, x))
    for k in range(-2 * M, 3 * M):
        for l in range(-N, 2 * N):
            direct = sum(x[(k + n * M) % (M * N)] * np.exp(-2j * np.pi * n * l / N) for n in range(N)) / np.sqrt(N)
            assert quasi_extend(X, k, l) == pytest.approx(direct, abs=1e-12)


def test_quasi_extend_grid_vectorized(rng):
    fp = FrameParams(2, 3, 1e-3)
    X = DDSignal(fp, crandn(rng, 2, 3))
    ks, ls = np.meshgrid(np.arange(-5, 6), np.arange(-4, 7), indexing="ij")
    vec = quasi_extend_grid(X, ks, ls)
    for idx in np.ndindex(ks.shape):
        assert vec[idx] == pytest.approx(quasi_extend(X, int(ks[idx]), int(ls[idx])), rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(M=st.integers(1, 6), N=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_linearity_and_energy_property(M, N, seed):
    rng = np.random.default_rng(seed)
    fp = FrameParams(M, N, 1e-3)
    a, b = crandn(rng, M * N), crandn(rng, M * N)
    c = complex(*rng.standard_normal(2))
    lhs = dzt(TimeSignal(fp, a + c * b)).grid
    rhs = dzt(TimeSignal(fp, a)).grid + c * dzt(TimeSignal(fp, b)).grid
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * (1 + np.max(np.abs(rhs)))
    assert dzt(TimeSignal(fp, a)).energy() == pytest.approx(float(np.sum(np.abs(a) ** 2)), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(M=st.integers(1, 5), N=st.integers(1, 5), shift=st.integers(-20, 20), seed=st.integers(0, 2**32 - 1))
def test_time_shift_by_whole_bins_is_quasi_shift(M, N, shift, seed):
    # shifting x cyclically by s samples moves the DD grid by s delay bins with quasi-periodic wrap
    rng = np.random.default_rng(seed)
    fp = FrameParams(M, N, 1e-3)
    x = crandn(rng, M * N)
    X = dzt(TimeSignal(fp, x))
    Y = dzt(TimeSignal(fp, np.roll(x, shift))).grid
    k, l = np.meshgrid(np.arange(M), np.arange(N), indexing="ij")
    assert np.max(np.abs(Y - quasi_extend_grid(X, k - shift, l))) < 1e-10 * (1 + np.max(np.abs(Y)))
