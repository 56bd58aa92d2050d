"""Simulation and verification toolkit for interference in beta-Ginibre
wireless networks: exact disk-restricted spectra, determinantal samplers,
shot-noise interference, large-deviation rate functions and rare-event
Monte Carlo estimators."""

from .errors import MgfDivergenceError, SamplerStallError
from .fading import FADING_KINDS, FadingSpec
from .interference import (DiskWindow, MarkedPattern, NetworkModel,
                           attenuation, interference, sinr, success_threshold)
from .patterns import (PointPattern, RngStream, read_pattern_csv,
                       write_pattern_csv)
from .rates import (LdpRegime, ProofConstants, growth_function,
                    poisson_comparison, proof_constants, rate, speed,
                    tail_asymptote, weibull_rate_constant)
from .samplers import (KostlanReport, kostlan_validation, sample_beta_ginibre,
                       sample_ginibre_disk, sample_palm_beta_ginibre,
                       sample_poisson)
from .spectral import (DiskRestriction, EigenvalueSeq, chernoff_tail_bound,
                       count_distribution, disk_eigenvalue, eigenvalues,
                       joint_intensity, laplace_bound, log_count_tail,
                       minimized_chernoff_bound, pair_correlation, trace_bound)
from .estimation import (SlopeReport, TailEstimate, dominating_event_probe,
                         estimate_count_tail, estimate_interference_tail,
                         speed_regression, subexp_sum_ratio)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
