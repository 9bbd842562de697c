"""Binary time series from intermittent interval maps and a renewal chain.

Three generators are provided:

* the interval map ``x -> x + x**(1+s) (mod 1)`` with an indifferent
  fixed point at 0 (``simulate_mp``),
* its piecewise-linear counterpart on a countable partition whose cell
  lengths decay like ``(k+1)**-gamma`` (``simulate_lbp``),
* a countdown Markov chain on the nonnegative integers whose excursion
  lengths have the same tail (``simulate_markov``).

All three emit 0/1 observations: the maps through the indicator of an
open subinterval of [0, 1], the chain through ``1 - indicator(state == 0)``.
Orbits linger near the indifferent fixed point, which produces the long
laminar runs of zeros characteristic of intermittency.  The parameters are
linked by ``gamma = 1 + 1/s``: matched values give matched autocovariance
decay.

Everything is a pure function of its arguments; series are reproducible
bit for bit from (seed, parameters).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ._seeds import make_rng
from ._zeta import partial_sums, tail_sum, zeta_value

# Consecutive identical iterates before a laminar-freeze diagnostic fires.
STALL_LIMIT = 10_000

_LBP_TABLE_CELLS = 100_000
_ZIPF_TABLE_SIZE = 100_000


class StallWarning(RuntimeWarning):
    """An orbit stopped moving at 64-bit resolution near the fixed point."""


class MapKind(str, Enum):
    MANNEVILLE_POMEAU = "mp"
    LINEAR_BY_PART = "lbp"
    MARKOV_CHAIN = "markov"


def equivalent_gamma(s: float) -> float:
    """Tail exponent of the matched piecewise-linear / chain model."""
    if not np.isfinite(s) or s <= 0:
        raise ValueError(f"s must be a positive finite real, got {s}")
    return 1.0 + 1.0 / s


def equivalent_s(gamma: float) -> float:
    """Map exponent matched to a tail exponent gamma > 2."""
    _require_gamma(gamma)
    return 1.0 / (gamma - 1.0)


def _require_s(s: float) -> None:
    if not np.isfinite(s) or s <= 0:
        raise ValueError(f"s must be a positive finite real, got {s}")


def _require_gamma(gamma: float) -> None:
    if not np.isfinite(gamma) or gamma <= 2.0:
        raise ValueError(
            f"gamma must be a finite real > 2 (stationary law undefined otherwise), got {gamma}"
        )


def _require_unit(x: float) -> None:
    if not np.isfinite(x) or x < 0.0 or x > 1.0:
        raise ValueError(f"state must lie in [0, 1], got {x}")


@dataclass(frozen=True)
class MapParams:
    """Which generator produced a series, and with what exponent.

    Exactly one of ``s`` / ``gamma`` is set: ``s`` for the smooth map,
    ``gamma`` for the piecewise-linear map and the chain.
    """

    kind: MapKind
    s: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        if self.kind is MapKind.MANNEVILLE_POMEAU:
            if self.s is None or self.gamma is not None:
                raise ValueError("the smooth map takes s only")
            _require_s(self.s)
        else:
            if self.gamma is None or self.s is not None:
                raise ValueError(f"{self.kind.value} takes gamma only")
            _require_gamma(self.gamma)

    @classmethod
    def mp(cls, s: float) -> "MapParams":
        return cls(MapKind.MANNEVILLE_POMEAU, s=s)

    @classmethod
    def lbp(cls, gamma: float) -> "MapParams":
        return cls(MapKind.LINEAR_BY_PART, gamma=gamma)

    @classmethod
    def markov(cls, gamma: float) -> "MapParams":
        return cls(MapKind.MARKOV_CHAIN, gamma=gamma)


@dataclass(frozen=True)
class ObservableSpec:
    """Indicator of the open interval (lo, hi), with a centering flag.

    ``centered`` records whether downstream analysis should subtract the
    empirical mean; generation itself always emits raw 0/1 values.
    """

    lo: float = 0.1
    hi: float = 0.9
    centered: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi <= 1.0):
            raise ValueError(f"need 0 <= lo < hi <= 1, got ({self.lo}, {self.hi})")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    def indicate(self, x: np.ndarray) -> np.ndarray:
        return ((x > self.lo) & (x < self.hi)).astype(np.float64)


@dataclass(frozen=True, eq=False)
class BinarySeries:
    """A finite 0/1 realization plus the provenance needed to regenerate it."""

    values: np.ndarray
    params: MapParams
    observable: ObservableSpec | None
    seed: int
    burn_in: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("series must be a nonempty 1-d array")
        if not np.all((v == 0.0) | (v == 1.0)):
            raise ValueError("series values must all be 0 or 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size


# ---------------------------------------------------------------------------
# Smooth map
# ---------------------------------------------------------------------------


def mp_step(s: float, x: float) -> float:
    """One application of x -> x + x**(1+s) (mod 1)."""
    _require_s(s)
    _require_unit(x)
    y = x + x ** (1.0 + s)
    return y - 1.0 if y > 1.0 else y


def mp_branch_point(s: float) -> float:
    """The point p in (0, 1) where p + p**(1+s) = 1.

    The left branch maps (0, p) onto (0, 1) and the right branch maps
    (p, 1) onto (0, 1).  Solved by bisection; the defining equation holds
    to better than 1e-12.
    """
    _require_s(s)
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid + mid ** (1.0 + s) > 1.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def _iterate_map(step_batch, x0: np.ndarray, n: int, burn_in: int,
                 observable: ObservableSpec) -> np.ndarray:
    """Drive a vector of states, recording indicator output after burn-in."""
    reps = x0.size
    out = np.empty((reps, n))
    x = x0.copy()
    stall = np.zeros(reps, dtype=np.int64)
    stalled = False
    total = burn_in + n
    for t in range(total):
        if t >= burn_in:
            out[:, t - burn_in] = observable.indicate(x)
        if t == total - 1:
            break
        y = step_batch(x)
        if not stalled:
            stall = np.where(y == x, stall + 1, 0)
            if np.any(stall >= STALL_LIMIT):
                warnings.warn(
                    f"orbit numerically frozen: {STALL_LIMIT} consecutive identical "
                    "iterates (laminar excursion below 64-bit resolution)",
                    StallWarning,
                    stacklevel=3,
                )
                stalled = True
        x = y
    return out


def simulate_mp_batch(s: float, n: int, seeds, burn_in: int = 10_000,
                      observable: ObservableSpec = ObservableSpec()) -> np.ndarray:
    """Simulate one smooth-map series per seed; returns a (reps, n) array.

    Row r is bit-identical to ``simulate_mp(s, n, seeds[r], ...)``: each
    replication owns its stream and only the start point is random.
    """
    _require_s(s)
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn-in must be >= 0, got {burn_in}")
    x0 = np.array([make_rng(sd).random() for sd in seeds])
    e = 1.0 + s

    def step(x):
        y = x + x**e
        return np.where(y > 1.0, y - 1.0, y)

    return _iterate_map(step, x0, n, burn_in, observable)


def simulate_mp(s: float, n: int, seed: int, burn_in: int = 10_000,
                observable: ObservableSpec = ObservableSpec()) -> BinarySeries:
    """Iterate the smooth map from a uniform start and record the indicator.

    The start point is drawn uniformly on (0, 1) from the seeded stream,
    ``burn_in`` iterations are discarded, and the next ``n`` states are
    mapped through the observable.  Values s >= 1 are accepted (the orbit
    is still well defined even though no invariant probability exists).
    """
    values = simulate_mp_batch(s, n, [seed], burn_in, observable)[0]
    return BinarySeries(values, MapParams.mp(s), observable, seed, burn_in)


# ---------------------------------------------------------------------------
# Piecewise-linear map
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _lbp_tables(gamma: float):
    """Descending cell boundaries c[0..K] with c[j] = 1 - S_j / zeta(gamma).

    Cell k is (c[k+1], c[k]]; its length is (k+1)**-gamma / zeta(gamma).
    States below c[K] are handled analytically.  The ascending copy feeds
    searchsorted in the hot simulation loop.
    """
    z = zeta_value(gamma)
    bounds = 1.0 - partial_sums(gamma, _LBP_TABLE_CELLS) / z
    bounds[0] = 1.0
    np.maximum(bounds, 0.0, out=bounds)
    ascending = np.ascontiguousarray(bounds[::-1])
    bounds.setflags(write=False)
    ascending.setflags(write=False)
    return bounds, ascending, z


def lbp_cell_bounds(gamma: float, k: int) -> tuple[float, float]:
    """Endpoints (left, right) of cell k of the piecewise-linear partition."""
    _require_gamma(gamma)
    if k < 0:
        raise ValueError(f"cell index must be >= 0, got {k}")
    bounds, _, z = _lbp_tables(gamma)
    right = bounds[k] if k < bounds.size else tail_sum(gamma, k) / z
    left = bounds[k + 1] if k + 1 < bounds.size else tail_sum(gamma, k + 1) / z
    return float(left), float(right)


def _lbp_deep_cell(gamma: float, x: float, z: float) -> int:
    # cell index k with tail(k+1) < x * z <= tail(k), for x below the table
    target = x * z
    lo = _LBP_TABLE_CELLS
    hi = lo
    while tail_sum(gamma, hi + 1) >= target:
        lo = hi
        hi = 2 * hi + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_sum(gamma, mid + 1) >= target:
            lo = mid
        else:
            hi = mid
    return hi


def _lbp_find_cells(gamma: float, x: np.ndarray):
    bounds, ascending, z = _lbp_tables(gamma)
    idx = np.searchsorted(ascending, x, side="left")
    return _LBP_TABLE_CELLS - idx, bounds, z


def lbp_step(gamma: float, x: float) -> float:
    """One application of the piecewise-linear map.

    Cell k >= 1 is carried affinely onto cell k-1 with slope
    ``((k+1)/k)**gamma``; the rightmost cell is carried onto (0, 1) with
    slope ``zeta(gamma)``, continuously, so the map fixes 1.
    """
    _require_gamma(gamma)
    _require_unit(x)
    if x == 0.0:
        return 0.0
    k_arr, bounds, z = _lbp_find_cells(gamma, np.array([x]))
    k = int(k_arr[0])
    if k == 0:
        return z * (x - (1.0 - 1.0 / z))
    if k >= _LBP_TABLE_CELLS:
        k = _lbp_deep_cell(gamma, x, z)
        left, right = tail_sum(gamma, k + 1) / z, tail_sum(gamma, k) / z
    else:
        left, right = bounds[k + 1], bounds[k]
    slope = ((k + 1.0) / k) ** gamma
    return float(right + slope * (x - left))


def simulate_lbp_batch(gamma: float, n: int, seeds, burn_in: int = 10_000,
                       observable: ObservableSpec = ObservableSpec()) -> np.ndarray:
    """Piecewise-linear analogue of ``simulate_mp_batch``."""
    _require_gamma(gamma)
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn-in must be >= 0, got {burn_in}")
    x0 = np.array([make_rng(sd).random() for sd in seeds])
    bounds, ascending, z = _lbp_tables(gamma)
    c1 = 1.0 - 1.0 / z

    def step(x):
        idx = np.searchsorted(ascending, x, side="left")
        k = _LBP_TABLE_CELLS - idx
        deep = k >= _LBP_TABLE_CELLS
        kk = np.clip(k, 1, _LBP_TABLE_CELLS - 1)
        slope = ((kk + 1.0) / kk) ** gamma
        y = np.where(
            k == 0,
            z * (x - c1),
            bounds[kk] + slope * (x - bounds[kk + 1]),
        )
        y = np.where(x == 0.0, 0.0, y)
        if np.any(deep):
            for i in np.nonzero(deep)[0]:
                if x[i] > 0.0:
                    y[i] = lbp_step(gamma, float(x[i]))
        return y

    return _iterate_map(step, x0, n, burn_in, observable)


def simulate_lbp(gamma: float, n: int, seed: int, burn_in: int = 10_000,
                 observable: ObservableSpec = ObservableSpec()) -> BinarySeries:
    """Simulate the piecewise-linear map with the uniform-start protocol."""
    values = simulate_lbp_batch(gamma, n, [seed], burn_in, observable)[0]
    return BinarySeries(values, MapParams.lbp(gamma), observable, seed, burn_in)


# ---------------------------------------------------------------------------
# Countdown chain
# ---------------------------------------------------------------------------


def markov_stationary(gamma: float, k: int) -> float:
    """Stationary probability of state k for the countdown chain.

    From state 0 the chain jumps to n with probability
    ``(n+1)**-gamma / zeta(gamma)`` and otherwise counts down by one.
    Renewal theory gives pi(k) proportional to the jump tail
    ``sum_{n>=k} (n+1)**-gamma``; normalizing over k yields
    ``pi(k) = tail / zeta(gamma-1)``.
    """
    _require_gamma(gamma)
    if k < 0:
        raise ValueError(f"state index must be >= 0, got {k}")
    return tail_sum(gamma, k) / zeta_value(gamma - 1.0)


@lru_cache(maxsize=32)
def _jump_cdf(gamma: float):
    """CDF table F[i] = P(jump size <= i) for i = 0.._ZIPF_TABLE_SIZE-1."""
    z = zeta_value(gamma)
    pmf = np.arange(1, _ZIPF_TABLE_SIZE + 1, dtype=np.float64) ** (-gamma) / z
    cdf = np.cumsum(pmf)
    cdf.setflags(write=False)
    return cdf, z


def _invert_tail(eval_tail, target: float, start: int) -> int:
    # smallest k >= start with eval_tail(k) <= target (eval_tail decreasing)
    lo, hi = start, start
    while eval_tail(hi) > target:
        lo = hi
        hi = 2 * hi + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if eval_tail(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi if eval_tail(lo) > target else lo


def _sample_jumps(gamma: float, rng: np.random.Generator, count: int) -> np.ndarray:
    """Jump sizes n >= 0 with P(n) = (n+1)**-gamma / zeta(gamma), by inverse CDF.

    A cached cumulative table covers the bulk; draws landing beyond it are
    inverted analytically, so the heavy tail is never truncated.
    """
    cdf, z = _jump_cdf(gamma)
    u = rng.random(count)
    m = np.searchsorted(cdf, u, side="left") + 1
    beyond = m > _ZIPF_TABLE_SIZE
    if np.any(beyond):
        for i in np.nonzero(beyond)[0]:
            target = (1.0 - u[i]) * z
            m[i] = _invert_tail(lambda k: tail_sum(gamma, k), target,
                                _ZIPF_TABLE_SIZE)
    return m - 1


@lru_cache(maxsize=32)
def _stationary_cdf(gamma: float):
    """CDF of the stationary law over states 0.._ZIPF_TABLE_SIZE-1."""
    znorm = zeta_value(gamma - 1.0)
    terms = np.arange(1, _ZIPF_TABLE_SIZE + 1, dtype=np.float64) ** (-gamma)
    # suffix[k] = sum over n = k+1.._ZIPF_TABLE_SIZE of n**-gamma; summing
    # backwards avoids the cancellation of zeta - partial_sum
    suffix = np.cumsum(terms[::-1])[::-1]
    pi = (suffix + tail_sum(gamma, _ZIPF_TABLE_SIZE)) / znorm
    cdf = np.cumsum(pi)
    cdf.setflags(write=False)
    return cdf, znorm


def _stationary_tail_mass(gamma: float, k: int) -> float:
    # P(state > k) = [tail(gamma-1, k+1) - (k+1) tail(gamma, k+1)] / zeta(gamma-1)
    return (tail_sum(gamma - 1.0, k + 1) - (k + 1) * tail_sum(gamma, k + 1)) / zeta_value(gamma - 1.0)


def _sample_stationary_state(gamma: float, rng: np.random.Generator) -> int:
    cdf, _ = _stationary_cdf(gamma)
    u = rng.random()
    k = int(np.searchsorted(cdf, u, side="left"))
    if k >= _ZIPF_TABLE_SIZE:
        k = _invert_tail(lambda j: _stationary_tail_mass(gamma, j), 1.0 - u,
                         _ZIPF_TABLE_SIZE)
    return k


def binary_from_states(states) -> np.ndarray:
    """Path identification: 1 everywhere except at visits to state 0."""
    z = np.asarray(states)
    return (z != 0).astype(np.float64)


def simulate_markov(gamma: float, n: int, seed: int) -> BinarySeries:
    """Stationary countdown-chain path, reported as 0/1 observations.

    The initial state is drawn from the stationary law; afterwards the
    chain counts down deterministically and redraws a jump size whenever
    it hits 0.  The output is 0 exactly at the visits to state 0, so it
    consists of maximal 1-blocks separated by single zeros (with empty
    blocks allowed when the chain jumps straight back to 0).
    """
    _require_gamma(gamma)
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    rng = make_rng(seed)
    first_zero = _sample_stationary_state(gamma, rng)

    values = np.ones(n)
    if first_zero < n:
        zero_positions = [np.array([first_zero], dtype=np.int64)]
        cursor = first_zero
        mean_cycle = zeta_value(gamma - 1.0) / zeta_value(gamma)
        while cursor < n - 1:
            expected = (n - 1 - cursor) / mean_cycle
            chunk = max(64, int(1.25 * expected) + 8)
            jumps = _sample_jumps(gamma, rng, chunk)
            pos = cursor + np.cumsum(jumps + 1)
            zero_positions.append(pos[pos < n])
            cursor = int(pos[-1])
        values[np.concatenate(zero_positions)] = 0.0

    return BinarySeries(values, MapParams.markov(gamma), None, seed, 0)
