"""Simulation of intermittent-map binary time series and estimation of the
map exponent from spectral, variance-scaling, wavelet, and local-regularity
statistics, with a reproducible Monte Carlo harness."""

from .dynamics import (
    BinarySeries,
    MapKind,
    MapParams,
    ObservableSpec,
    StallWarning,
    binary_from_states,
    equivalent_gamma,
    equivalent_s,
    lbp_step,
    markov_stationary,
    mp_branch_point,
    mp_step,
    simulate_lbp,
    simulate_markov,
    simulate_mp,
    simulate_mp_batch,
)
from .estimators import (
    EstimateResult,
    RegressionBand,
    cos_estimate,
    estimate,
    holder_estimate,
    ols_slope,
    parzen_estimate,
    perio_estimate,
    varmp_estimate,
    vpmp_estimate,
    wmp_estimate,
)
from .montecarlo import ExperimentSpec, McSummary, preset_experiment, run_experiment, summarize
from .partial_sums import ScalingFit, scaling_exponent, var_partial_sum
from .spectral import (
    AcvEstimate,
    LagWindowSpec,
    Periodogram,
    lag_window_weight,
    periodogram,
    sample_acv,
    smoothed_periodogram,
)
from .wavelet import WaveletBasis, WaveletLadder, psi, sample_R, wavelet_coefficients

__version__ = "0.1.0"
