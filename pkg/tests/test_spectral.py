import numpy as np
import pytest
from numpy.testing import assert_allclose

from mplm.spectral import (
    LagWindowSpec,
    lag_weighted_spectrum,
    lag_window_weight,
    periodogram,
    sample_acv,
    smoothed_periodogram,
)


def direct_periodogram(x):
    """O(N^2) oracle: |sum x_t e^{-iwt}|^2 / (4 pi^2 N) on the Fourier grid."""
    n = len(x)
    t = np.arange(n)
    out = np.empty(n)
    for h in range(1, n + 1):
        w = 2.0 * np.pi * h / n
        z = np.sum(x * np.exp(-1j * w * t))
        out[h - 1] = (z.real**2 + z.imag**2) / (4.0 * np.pi**2 * n)
    return out


def random_binary(rng, n, p=0.5):
    return (rng.random(n) < p).astype(float)


# ---------------------------------------------------------------------------
# autocovariance
# ---------------------------------------------------------------------------


def test_acv_constant_series_is_zero():
    acv = sample_acv(np.ones(32), 10)
    assert_allclose(acv.values, 0.0, atol=1e-14)


def test_acv_alternating_hand_computation():
    acv = sample_acv(np.array([1.0, -1.0, 1.0, -1.0]), 1)
    assert_allclose(acv.values[0], 1.0, atol=1e-14)
    assert_allclose(acv.values[1], -0.75, atol=1e-14)


def test_acv_bounded_by_lag_zero():
    rng = np.random.default_rng(3)
    for _ in range(25):
        n = int(rng.integers(8, 200))
        x = random_binary(rng, n, rng.uniform(0.2, 0.8))
        acv = sample_acv(x, n - 1)
        assert acv.values[0] >= 0.0
        assert np.all(np.abs(acv.values) <= acv.values[0] + 1e-12)


def test_acv_matches_direct_sum():
    rng = np.random.default_rng(4)
    x = rng.random(101)
    xc = x - x.mean()
    acv = sample_acv(x, 30)
    for h in range(31):
        ref = np.sum(xc[: 101 - h] * xc[h:]) / 101
        assert_allclose(acv.values[h], ref, atol=1e-12)


def test_acv_rejects_bad_lag_and_constant_autocorrelation():
    with pytest.raises(ValueError):
        sample_acv(np.ones(10), 10)
    with pytest.raises(ValueError):
        sample_acv(np.ones(10), 3).autocorrelation()
    rho = sample_acv(np.array([1.0, 0.0, 1.0, 1.0]), 2).autocorrelation()
    assert rho[0] == 1.0


# ---------------------------------------------------------------------------
# periodogram
# ---------------------------------------------------------------------------


def test_periodogram_zero_series():
    per = periodogram(np.zeros(16))
    assert_allclose(per.ordinates, 0.0)


def test_periodogram_unit_impulse():
    x = np.zeros(4)
    x[0] = 1.0
    per = periodogram(x)
    assert_allclose(per.ordinates, 1.0 / (16.0 * np.pi**2), rtol=1e-12)


def test_periodogram_matches_direct_summation():
    # atol floor covers ordinates that are mathematically zero, where the
    # oracle itself only reaches rounding noise near 1e-32
    rng = np.random.default_rng(5)
    for n in (16, 33, 64, 127):
        x = random_binary(rng, n)
        per = periodogram(x)
        ref = direct_periodogram(x)
        assert np.allclose(per.ordinates, ref, rtol=1e-10, atol=1e-20)


def test_periodogram_parseval():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(8, 300))
        x = random_binary(rng, n, rng.uniform(0.1, 0.9))
        per = periodogram(x)
        rhs = np.sum(x**2) / (4.0 * np.pi**2)
        assert abs(per.ordinates.sum() - rhs) <= 1e-9 * rhs


def test_periodogram_centering_changes_only_the_alias():
    rng = np.random.default_rng(7)
    x = random_binary(rng, 50)
    raw = periodogram(x)
    cen = periodogram(x, centered=True)
    assert_allclose(raw.ordinates[:-1], cen.ordinates[:-1], rtol=1e-10)
    assert cen.ordinates[-1] == 0.0
    assert cen.zero_frequency_ordinate() == 0.0


def test_periodogram_grid():
    per = periodogram(np.zeros(8))
    assert_allclose(per.freqs, 2.0 * np.pi * np.arange(1, 9) / 8.0)
    assert np.all(np.diff(per.freqs) > 0)
    assert per.freqs[-1] == 2.0 * np.pi
    with pytest.raises(ValueError):
        periodogram(np.array([1.0]))


# ---------------------------------------------------------------------------
# lag windows
# ---------------------------------------------------------------------------


def test_window_endpoint_values():
    parzen = LagWindowSpec("parzen", 5)
    cosbell = LagWindowSpec("cosbell", 5)
    assert lag_window_weight(parzen, 0.0) == 1.0
    assert lag_window_weight(parzen, 1.0) == 0.0
    assert_allclose(lag_window_weight(parzen, 0.5), 0.25)
    # both branch formulas agree at the junction
    assert_allclose(1.0 - 6.0 * 0.25 + 6.0 * 0.125, 2.0 * 0.5**3)
    assert lag_window_weight(cosbell, 0.0) == 1.0
    assert_allclose(lag_window_weight(cosbell, 1.0), 0.0, atol=1e-16)
    assert_allclose(lag_window_weight(cosbell, 0.5), 0.5)


def test_window_nonincreasing_and_bounded():
    grid = np.linspace(0.0, 1.0, 401)
    for kind in ("parzen", "cosbell"):
        w = lag_window_weight(LagWindowSpec(kind, 3), grid)
        assert np.all(w >= 0.0) and np.all(w <= 1.0)
        assert np.all(np.diff(w) <= 1e-12)


def test_window_rejects_out_of_range():
    with pytest.raises(ValueError):
        lag_window_weight(LagWindowSpec("parzen", 3), 1.2)
    with pytest.raises(ValueError):
        lag_window_weight(LagWindowSpec("parzen", 3), -0.1)
    with pytest.raises(ValueError):
        LagWindowSpec("hann", 3)
    with pytest.raises(ValueError):
        LagWindowSpec("parzen", 0)


# ---------------------------------------------------------------------------
# smoothed spectrum
# ---------------------------------------------------------------------------


def test_unit_weights_recover_plain_lag_sum():
    rng = np.random.default_rng(8)
    n = 48
    x = random_binary(rng, n)
    acv = sample_acv(x, n - 1)
    got = lag_weighted_spectrum(acv, np.ones(n), n)
    freqs = 2.0 * np.pi * np.arange(1, n + 1) / n
    lags = np.arange(1, n)
    ref = np.array([
        (acv.values[0] + 2.0 * np.sum(acv.values[1:] * np.cos(w * lags))) / (2.0 * np.pi)
        for w in freqs
    ])
    assert_allclose(got, ref, atol=1e-12)


def test_smoothed_zero_series():
    f = smoothed_periodogram(np.zeros(64), LagWindowSpec("parzen", 10))
    assert_allclose(f.ordinates, 0.0, atol=1e-15)


def test_smoothed_rejects_truncation_at_series_length():
    with pytest.raises(ValueError):
        smoothed_periodogram(np.ones(16), LagWindowSpec("parzen", 16))


def test_smoothed_white_noise_is_flat():
    # strong smoothing keeps the spread of ordinates tight around the mean;
    # (at weak smoothing, e.g. m = N**0.9, sampling noise dominates and the
    # max/min ratio is far larger)
    rng = np.random.default_rng(9)
    n = 10_000
    x = random_binary(rng, n)
    for kind in ("parzen", "cosbell"):
        for m in (int(n**0.3), int(n**0.5)):
            f = smoothed_periodogram(x, LagWindowSpec(kind, m))
            assert f.ordinates.min() > 0.0
            assert f.ordinates.max() / f.ordinates.min() < 3.0


def test_smoothed_matches_brute_force_cosine_sum():
    rng = np.random.default_rng(10)
    n, m = 40, 12
    x = random_binary(rng, n)
    spec = LagWindowSpec("cosbell", m)
    f = smoothed_periodogram(x, spec)
    acv = sample_acv(x, m)
    w = lag_window_weight(spec, np.arange(m + 1) / m)
    for h in (1, 2, 7, n // 2, n):
        omega = 2.0 * np.pi * h / n
        ref = (w[0] * acv.values[0]
               + 2.0 * np.sum(w[1:] * acv.values[1:] * np.cos(omega * np.arange(1, m + 1))))
        assert_allclose(f.ordinates[h - 1], ref / (2.0 * np.pi), atol=1e-12)


def test_smoothed_kind_metadata():
    f = smoothed_periodogram(np.ones(32) * 0.5, LagWindowSpec("parzen", 8))
    assert f.kind == "smoothed" and f.window == "parzen" and f.truncation == 8
    raw = periodogram(np.ones(32) * 0.5)
    assert raw.kind == "raw" and raw.window is None
