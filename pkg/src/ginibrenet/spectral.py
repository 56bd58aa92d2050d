"""Exact spectral computations for the Ginibre kernel restricted to disks.

The kernel exp(x conj(y)) with Gaussian reference measure, restricted to a
centered disk of radius r, diagonalizes over the monomials z^m with
eigenvalues P(Po(r^2) >= m + 1), m = 0, 1, ...  Independent thinning with
retention beta (followed by sqrt(beta) scaling) multiplies every eigenvalue
by beta after replacing r by r / sqrt(beta).  The reduced-Palm kernel at the
origin drops the constant eigenfunction (m = 0).

Everything here is a deterministic function of its inputs; the Monte Carlo
samplers validate against these values, never the other way around.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np
from scipy import special, stats

from .errors import MgfDivergenceError

if TYPE_CHECKING:  # pragma: no cover
    from .interference import NetworkModel

DEFAULT_TOL = 1e-12
# Poisson tails decay superexponentially past the mean; this cap is never the
# binding truncation at the default tolerance.
_HARD_CAP_SLOPE = 10
_HARD_CAP_OFFSET = 64


@dataclass(frozen=True)
class DiskRestriction:
    """Ginibre kernel restricted to a disk, possibly Palm-reduced and thinned.

    ``palm_shift`` drops the constant eigenfunction (reduced Palm kernel at
    the origin); ``beta`` applies independent thinning spectrally.  Counts in
    off-center disks of the stationary process are distributionally identical
    to the centered ones, so only the radius enters the spectrum.
    """

    center: complex = 0j
    radius: float = 1.0
    palm_shift: bool = False
    beta: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        if not (0 < self.beta <= 1):
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")

    @property
    def scaled_radius_sq(self) -> float:
        """Squared radius of the disk mapped through the 1/sqrt(beta) scaling."""
        return self.radius ** 2 / self.beta


@dataclass(frozen=True)
class EigenvalueSeq:
    values: np.ndarray
    truncation_tol: float
    truncation_index: int

    def __len__(self) -> int:
        return len(self.values)


def disk_eigenvalue(m: int, radius: float) -> float:
    """m-th eigenvalue of the Ginibre kernel on b(O, radius): P(Po(radius^2) >= m+1).

    The regularized lower incomplete gamma function is the Poisson survival
    function, P(Gamma(m+1, 1) <= r^2) = P(Po(r^2) >= m+1).
    """
    if m < 0:
        raise ValueError("eigenvalue index must be nonnegative")
    if not (np.isfinite(radius) and radius > 0):
        raise ValueError(f"radius must be positive and finite, got {radius}")
    return float(special.gammainc(m + 1, radius ** 2))


def log_disk_eigenvalue(m: int, radius_sq: float) -> float:
    """log P(Po(radius_sq) >= m+1), usable far below float underflow."""
    sf = stats.poisson.sf(m, radius_sq)
    if sf > 1e-290:
        return math.log(sf)
    # deep tail: sum a geometric-decaying block of log-pmfs
    ks = m + 1 + np.arange(200)
    return float(special.logsumexp(stats.poisson.logpmf(ks, radius_sq)))


@lru_cache(maxsize=256)
def _eigenvalue_cache(radius_sq: float, beta: float, shift: int,
                      tol: float) -> tuple[float, ...]:
    cap = _HARD_CAP_SLOPE * math.ceil(radius_sq) + _HARD_CAP_OFFSET
    ms = np.arange(shift, cap + shift)
    vals = beta * special.gammainc(ms + 1, radius_sq)
    below = np.nonzero(vals < tol)[0]
    keep = below[0] if len(below) else len(vals)
    return tuple(vals[:keep])


def eigenvalues(restriction: DiskRestriction, tol: float = DEFAULT_TOL) -> EigenvalueSeq:
    """Thinning-scaled eigenvalue sequence, truncated once values drop below tol."""
    if not (0 < tol < 1):
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    shift = 1 if restriction.palm_shift else 0
    vals = np.array(_eigenvalue_cache(restriction.scaled_radius_sq,
                                      restriction.beta, shift, tol))
    return EigenvalueSeq(values=vals, truncation_tol=tol, truncation_index=len(vals))


def trace_bound(restriction: DiskRestriction, tol: float = DEFAULT_TOL) -> float:
    """Sum of the eigenvalue sequence; equals radius^2 for the non-Palm kernel."""
    return float(np.sum(eigenvalues(restriction, tol).values))


def laplace_bound(restriction: DiskRestriction, theta: float,
                  tol: float = DEFAULT_TOL) -> float:
    """prod_m (1 + (e^theta - 1) kappa_m), evaluated in log space."""
    if theta < 0:
        raise ValueError(f"theta must be nonnegative, got {theta}")
    vals = eigenvalues(restriction, tol).values
    return float(np.exp(np.sum(np.log1p(np.expm1(theta) * vals))))


def count_distribution(restriction: DiskRestriction, max_n: int,
                       tol: float = DEFAULT_TOL) -> np.ndarray:
    """P(N = k), k = 0..max_n, by exact Poisson-binomial convolution.

    The count of a determinantal process in a window is a sum of independent
    Bernoulli(kappa_m) variables over the window's eigenvalues.
    """
    if max_n < 0:
        raise ValueError(f"max_n must be nonnegative, got {max_n}")
    vals = eigenvalues(restriction, tol).values
    pmf = np.zeros(len(vals) + 1)
    pmf[0] = 1.0
    for p in vals:
        pmf[1:] = pmf[1:] * (1 - p) + pmf[:-1] * p
        pmf[0] *= 1 - p
    out = np.zeros(max_n + 1)
    upto = min(max_n + 1, len(pmf))
    out[:upto] = pmf[:upto]
    return out


def log_count_tail(restriction: DiskRestriction, m: int) -> float:
    """log P(N >= m), exact up to truncation, computed entirely in log space.

    The linear-space convolution underflows around P ~ 1e-300 (already hit at
    m ~ 40 in a unit disk), so the Poisson-binomial recursion runs on
    log-probabilities with log-scale eigenvalues.
    """
    if m < 0:
        raise ValueError("count threshold must be nonnegative")
    if m == 0:
        return 0.0
    shift = 1 if restriction.palm_shift else 0
    rsq = restriction.scaled_radius_sq
    n_eigs = m + 64
    logb = math.log(restriction.beta)
    logp = np.array([logb + log_disk_eigenvalue(k + shift, rsq) for k in range(n_eigs)])
    log1mp = np.log1p(-np.exp(logp))
    logpmf = np.full(n_eigs + 1, -np.inf)
    logpmf[0] = 0.0
    for lp, l1mp in zip(logp, log1mp):
        shifted = np.concatenate(([-np.inf], logpmf[:-1] + lp))
        logpmf = np.logaddexp(logpmf + l1mp, shifted)
    return float(special.logsumexp(logpmf[m:]))


def pair_correlation(x1: complex, x2: complex) -> float:
    """Ginibre pair correlation 1 - exp(-|x1 - x2|^2); at most 1 (repulsion)."""
    return float(-np.expm1(-abs(complex(x1) - complex(x2)) ** 2))


def joint_intensity(points: list[complex]) -> float:
    """k-point joint intensity det(K(x_i, x_j)) of the Ginibre kernel.

    The empty determinant is 1 by convention.  The raw entries e^{x conj(y)}
    overflow for distant points, so the common factor e^{|x_i|^2/2} per
    row/column is pulled out of the determinant first.
    """
    if len(points) == 0:
        return 1.0
    z = np.asarray(points, dtype=complex)
    sq = np.abs(z) ** 2
    expo = np.outer(z, z.conj()) - 0.5 * (sq[:, None] + sq[None, :])
    det = np.linalg.det(np.exp(expo)).real
    return float(max(det, 0.0) * math.exp(np.sum(sq)))


def chernoff_tail_bound(model: "NetworkModel", x: float, eps: float, theta: float,
                        tol: float = DEFAULT_TOL) -> float:
    """Rigorous upper bound on P(eps * I_Lambda >= x) via mark-MGF tilting.

    Uses the enclosing disk b(O, Rtilde) around the origin, its thinned
    eigenvalue sequence, and exp(-theta x + sum_m log(1 + (M - 1) kappa_m))
    with M the fading MGF at theta * eps * R^(-alpha).
    """
    if x <= 0 or eps <= 0 or theta <= 0:
        raise ValueError("x, eps and theta must all be positive")
    r_enclose = abs(model.window.center) + model.window.radius
    restriction = DiskRestriction(radius=r_enclose, beta=model.beta, palm_shift=False)
    vals = eigenvalues(restriction, tol).values
    s = theta * eps * model.atten_R ** (-model.atten_alpha)
    try:
        log_m = model.fading.log_mgf(s)
    except MgfDivergenceError:
        raise
    with np.errstate(divide="ignore"):
        log_terms = np.logaddexp(np.log1p(-vals), np.log(vals) + log_m)
    log_bound = -theta * x + float(np.sum(log_terms))
    return float(min(1.0, np.exp(min(log_bound, 0.0))))


def minimized_chernoff_bound(model: "NetworkModel", x: float, eps: float,
                             theta_grid: np.ndarray | None = None
                             ) -> tuple[float, float]:
    """Minimum of the Chernoff bound over a grid of positive tilts.

    Returns (bound, minimizing theta).  The default grid is log-spaced and
    wide enough that the optimum is interior for moderate tail levels.
    """
    if theta_grid is None:
        theta_grid = np.geomspace(1e-2, 1e3, 300)
    best, best_theta = 1.0, 0.0
    for theta in np.asarray(theta_grid, dtype=float):
        if theta <= 0:
            continue
        try:
            val = chernoff_tail_bound(model, x, eps, theta)
        except MgfDivergenceError:
            continue
        if val < best:
            best, best_theta = val, float(theta)
    return best, best_theta


def weibull_proof_tilt(c: float, gamma: float, r_alpha: float,
                       x: float, eps: float) -> float:
    """The tilt used in the Weibull upper-bound construction:
    theta = (R^alpha * gtilde / eps) * (x/eps * log(x/eps))^((gamma-1)/(gamma+1))."""
    gtilde = 0.5 * (r_alpha * gamma / (gamma - 1.0)) ** ((gamma - 1.0) / (gamma + 1.0)) \
        * (c * (gamma + 1.0)) ** (2.0 / (gamma + 1.0))
    ratio = x / eps
    return r_alpha * gtilde / eps * (ratio * math.log(ratio)) ** ((gamma - 1.0) / (gamma + 1.0))
