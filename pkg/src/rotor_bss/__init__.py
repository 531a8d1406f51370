"""Blind separation of rotor vibration signals in strong noise.

Pipeline: simulate ``x = A(s + v)`` -> autocorrelate and drop near-zero lags ->
maximum-SNR demixing via a generalized eigenproblem -> correlation scoring.
"""
from .autocorr import AutocorrConfig, LagSignal, autocorrelation, denoise
from .errors import ConvergenceError, DegenerateInputError, ValidationError
from .evaluation import EvalReport, corr_coeff, match_sources
from .msnr import (
    DemixResult,
    MsnrConfig,
    compute_demixing,
    correlation_matrices,
    moving_average,
    separate,
    snr_cost,
    snr_cost_gradient,
)
from .numeric import GenEigResult, solve_gen_eig, sym_eig
from .signals import MixingSpec, MultichannelSignal, gen_awgn, gen_sinusoid, measure_snr, mix

__version__ = "0.1.0"
