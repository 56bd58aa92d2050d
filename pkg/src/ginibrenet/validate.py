"""Acceptance validation suite with fixed seeds and quick/full budgets.

Each check returns a CheckResult; run_suite executes all of them and is the
engine behind ``ginibrenet validate``.  The same functions back the
acceptance tests, so CLI validation and pytest exercise identical code.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .estimation import (dominating_event_probe, estimate_interference_tail,
                         speed_regression, subexp_sum_ratio)
from .fading import FadingSpec
from .interference import DiskWindow, NetworkModel
from .patterns import RngStream
from .rates import (LdpRegime, poisson_comparison, rate, speed,
                    weibull_rate_constant)
from .samplers import (kostlan_validation, sample_beta_ginibre,
                       sample_ginibre_disk, sample_palm_beta_ginibre)
from .spectral import (DiskRestriction, count_distribution, eigenvalues,
                       log_count_tail, minimized_chernoff_bound, trace_bound)

MASTER_SEED = 20240901


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(name: str, passed: bool, detail: str, t0: float) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail,
                       seconds=time.perf_counter() - t0)


# -- chi-square helpers -----------------------------------------------------

def _pool_bins(observed: np.ndarray, expected: np.ndarray, min_expected=5.0):
    """Merge adjacent bins until every expected cell mass reaches the floor."""
    obs_out, exp_out = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_out.append(o_acc)
            exp_out.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 and obs_out:
        obs_out[-1] += o_acc
        exp_out[-1] += e_acc
    return np.array(obs_out), np.array(exp_out)


def chisquare_vs_pmf(counts: np.ndarray, pmf: np.ndarray) -> float:
    """p-value of the one-sample chi-square of integer counts against an exact
    pmf over {0, 1, ...}; the pmf tail beyond its length is lumped in."""
    top = max(int(counts.max()), len(pmf) - 1)
    observed = np.bincount(counts, minlength=top + 1).astype(float)
    expected = np.zeros(top + 1)
    expected[:len(pmf)] = pmf
    expected[-1] += max(0.0, 1.0 - pmf.sum())
    expected *= len(counts)
    obs, exp = _pool_bins(observed, expected)
    exp *= obs.sum() / exp.sum()
    statistic = float(np.sum((obs - exp) ** 2 / exp))
    return float(stats.chi2.sf(statistic, df=len(obs) - 1))


def two_sample_count_chisquare(a: np.ndarray, b: np.ndarray) -> float:
    """p-value of the contingency chi-square between two integer samples."""
    top = int(max(a.max(), b.max()))
    ha = np.bincount(a, minlength=top + 1).astype(float)
    hb = np.bincount(b, minlength=top + 1).astype(float)
    pooled_a, pooled_b = [], []
    a_acc = b_acc = 0.0
    for oa, ob in zip(ha, hb):
        a_acc += oa
        b_acc += ob
        if a_acc + b_acc >= 10.0:
            pooled_a.append(a_acc)
            pooled_b.append(b_acc)
            a_acc = b_acc = 0.0
    if (a_acc or b_acc) and pooled_a:
        pooled_a[-1] += a_acc
        pooled_b[-1] += b_acc
    table = np.array([pooled_a, pooled_b])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 1.0
    return float(stats.chi2_contingency(table)[1])


# -- individual checks ------------------------------------------------------

def check_spectral_exactness(quick: bool = False) -> CheckResult:
    """Trace identity sum kappa_m = r^2 and strict eigenvalue decrease."""
    t0 = time.perf_counter()
    worst = 0.0
    monotone = True
    for r in (0.5, 1.0, 2.0, 5.0):
        seq = eigenvalues(DiskRestriction(radius=r), tol=1e-18).values
        worst = max(worst, abs(float(np.sum(seq)) - r * r))
        monotone &= bool(np.all(np.diff(seq) < 0))
    passed = worst < 1e-9 and monotone
    return _result("spectral_exactness", passed,
                   f"max |trace - r^2| = {worst:.3e}, strictly decreasing: {monotone}",
                   t0)


def check_count_law(quick: bool = False) -> CheckResult:
    """Empirical counts vs the exact Poisson-binomial law, full and thinned."""
    t0 = time.perf_counter()
    n_reps = 2000 if quick else 10_000
    stream = RngStream(MASTER_SEED, 100)
    details, ok = [], True
    cases = [("ginibre", 1.0, 1.0), ("ginibre", 1.0, 2.0),
             ("beta", 0.5, 1.0), ("beta", 0.5, 2.0)]
    for ci, (kind, beta, radius) in enumerate(cases):
        counts = np.empty(n_reps, dtype=int)
        for rep in range(n_reps):
            sub = stream.substream(ci * n_reps + rep)
            if kind == "ginibre":
                pat = sample_ginibre_disk(radius, sub)
            else:
                pat = sample_beta_ginibre(beta, radius, sub)
            counts[rep] = len(pat)
        restriction = DiskRestriction(radius=radius, beta=beta)
        max_n = int(counts.max()) + 10
        pmf = count_distribution(restriction, max_n)
        p = chisquare_vs_pmf(counts, pmf)
        details.append(f"{kind}(beta={beta}, r={radius}): p={p:.4f}")
        ok &= p > 0.01
    return _result("count_law", ok, "; ".join(details), t0)


def check_palm_identity(quick: bool = False) -> CheckResult:
    """Palm sample plus an independent scaled Gaussian point (kept w.p. beta)
    has the same count law as the thinned-scaled process."""
    t0 = time.perf_counter()
    n_reps = 2000 if quick else 10_000
    radius = 1.5
    stream = RngStream(MASTER_SEED, 200)
    details, ok = [], True
    for bi, beta in enumerate((0.25, 1.0)):
        palm_counts = np.empty(n_reps, dtype=int)
        thin_counts = np.empty(n_reps, dtype=int)
        gauss_gen = stream.substream(90_000 + bi).generator()
        for rep in range(n_reps):
            base = bi * 2 * n_reps
            pat_a = sample_palm_beta_ginibre(beta, radius, stream.substream(base + rep))
            extra = 0
            if gauss_gen.random() < beta:
                g = complex(*(gauss_gen.normal(scale=math.sqrt(0.5), size=2)))
                extra = int(abs(math.sqrt(beta) * g) <= radius)
            palm_counts[rep] = len(pat_a) + extra
            pat_b = sample_beta_ginibre(beta, radius,
                                        stream.substream(base + n_reps + rep))
            thin_counts[rep] = len(pat_b)
        p = two_sample_count_chisquare(palm_counts, thin_counts)
        details.append(f"beta={beta}: p={p:.4f}")
        ok &= p > 0.01
    return _result("palm_identity", ok, "; ".join(details), t0)


def check_kostlan(quick: bool = False) -> CheckResult:
    """KS agreement of the two smallest squared moduli with the Gamma(i, 1) law."""
    t0 = time.perf_counter()
    n_reps = 1000 if quick else 5000
    report = kostlan_validation(6.0, n_reps, RngStream(MASTER_SEED, 300))
    ok = all(p > 0.01 for p in report.p_values)
    detail = ", ".join(f"order {i}: p={p:.4f}"
                       for i, p in zip(report.order_indices, report.p_values))
    return _result("kostlan", ok, detail, t0)


def check_variance_contrast(quick: bool = False) -> CheckResult:
    """Count variance matches sum kappa(1-kappa) and sits well below Poisson."""
    t0 = time.perf_counter()
    n_reps = 2000 if quick else 10_000
    radius = 5.0
    stream = RngStream(MASTER_SEED, 400)
    counts = np.array([len(sample_ginibre_disk(radius, stream.substream(rep)))
                       for rep in range(n_reps)])
    kappa = eigenvalues(DiskRestriction(radius=radius)).values
    exact_var = float(np.sum(kappa * (1.0 - kappa)))
    emp_var = float(np.var(counts, ddof=1))
    rel = abs(emp_var - exact_var) / exact_var
    tol = 0.10 if quick else 0.05
    ok = rel < tol and emp_var < 0.6 * radius ** 2
    return _result("variance_contrast", ok,
                   f"empirical var {emp_var:.3f} vs exact {exact_var:.3f} "
                   f"(rel {rel:.3%}); Poisson var {radius ** 2:.0f}", t0)


def check_count_tail_trend(quick: bool = False) -> CheckResult:
    """-log P(N >= m) / (m^2 log m / 2) positive and monotone; Ginibre tail
    far below the matched-mean Poisson tail."""
    t0 = time.perf_counter()
    ms = (5, 10, 20, 40)
    restriction = DiskRestriction(radius=1.0)
    ratios = [-log_count_tail(restriction, m) / (0.5 * m * m * math.log(m))
              for m in ms]
    positive = all(0.0 < r < 1.0 for r in ratios)
    # the exact ratio dips between m=5 and m=10 before climbing toward the
    # limit 1; the trend assertion covers the asymptotic portion m >= 10
    diffs = np.diff(ratios[1:])
    monotone = bool(np.all(diffs > 0) or np.all(diffs < 0))
    mean = trace_bound(restriction)
    gin20 = -log_count_tail(restriction, 20)
    poi20 = -float(stats.poisson.logsf(19, mean))
    factor = gin20 / poi20
    ok = positive and monotone and factor >= 5.0
    return _result("count_tail_trend", ok,
                   f"ratios {['%.4f' % r for r in ratios]}, "
                   f"Ginibre/Poisson log-tail factor at m=20: {factor:.2f}", t0)


def _exponential_model() -> NetworkModel:
    return NetworkModel(beta=1.0, window=DiskWindow(radius=2.0), receiver=0j,
                        atten_R=1.0, atten_alpha=4.0,
                        fading=FadingSpec(kind="exponential", c=1.0))


def check_exponential_slope(quick: bool = False) -> CheckResult:
    """Tilted-estimator slope regression against the -c R^alpha limit."""
    t0 = time.perf_counter()
    model = _exponential_model()
    regime = LdpRegime.from_fading(model.fading, model.atten_R, model.atten_alpha)
    if quick:
        x_grid, n_reps = [7.0, 9.0, 11.0, 13.0], 3000
    else:
        x_grid, n_reps = [7.0, 9.0, 11.0, 13.0, 15.0, 17.0], 12_000
    report = speed_regression(model, regime, x_grid, n_reps, "tilted",
                              RngStream(MASTER_SEED, 500))
    ok = report.relative_error <= 0.20
    return _result("exponential_slope", ok,
                   f"fitted {report.fitted_slope:.4f} vs target "
                   f"{report.target_slope:.4f} (rel err {report.relative_error:.3%})",
                   t0)


def check_subexp_ratio(quick: bool = False) -> CheckResult:
    """Pareto sum-tail over E[N] Fbar(x) at a deep grid point is near 1."""
    t0 = time.perf_counter()
    model = NetworkModel(beta=1.0, window=DiskWindow(radius=2.0), receiver=0j,
                         atten_R=1.0, atten_alpha=4.0,
                         fading=FadingSpec(kind="pareto", c=2.0))
    n_reps = 4000 if quick else 20_000
    x_grid = [30.0, 60.0, 99.0]
    ratios = subexp_sum_ratio(model, x_grid, n_reps, RngStream(MASTER_SEED, 600))
    deepest = ratios[-1]
    ok = 0.8 <= deepest <= 1.3
    return _result("subexp_ratio", ok,
                   f"ratios {['%.3f' % r for r in ratios]} (deepest {deepest:.3f})",
                   t0)


def check_chernoff_dominance(quick: bool = False) -> CheckResult:
    """Minimized spectral Chernoff bound dominates the crude estimate."""
    t0 = time.perf_counter()
    model = NetworkModel(beta=1.0, window=DiskWindow(radius=2.0), receiver=0j,
                         atten_R=1.0, atten_alpha=4.0,
                         fading=FadingSpec(kind="weibull_super", c=1.0, gamma=2.0))
    n_reps = 5000 if quick else 20_000
    stream = RngStream(MASTER_SEED, 700)
    details, ok = [], True
    for xi, x in enumerate((2.5, 3.5, 4.5)):
        est = estimate_interference_tail(model, x, n_reps, "crude",
                                         stream.substream(xi))
        bound, theta = minimized_chernoff_bound(model, x, eps=1.0)
        passed = est.probability + 3.0 * est.stderr <= bound
        details.append(f"x={x}: p={est.probability:.2e}+3se vs bound {bound:.2e}"
                       f" (theta*={theta:.2f})")
        ok &= passed
    return _result("chernoff_dominance", ok, "; ".join(details), t0)


def check_rate_table(quick: bool = False) -> CheckResult:
    """Closed-form rate/speed/asymptote spot values and the gamma -> 1+
    convergence of the Ginibre and Poisson Weibull constants."""
    t0 = time.perf_counter()
    checks = []

    bounded = LdpRegime.from_fading(FadingSpec(kind="bounded", bound=2.0), 1.0, 2.5)
    checks.append(("bounded rate", rate(bounded, 2.0), 1.0 * 4.0 / (2 * 4.0)))
    checks.append(("bounded speed", speed(bounded, 0.1), math.log(10.0) / 0.01))

    expo = LdpRegime.from_fading(FadingSpec(kind="exponential", c=2.0), 1.0, 3.0)
    checks.append(("exponential rate", rate(expo, 3.0), 6.0))
    checks.append(("exponential speed", speed(expo, 0.01), 100.0))

    weib = LdpRegime.from_fading(FadingSpec(kind="weibull_super", c=1.0, gamma=2.0),
                                 1.0, 3.0)
    checks.append(("weibull rate", rate(weib, 1.0),
                   0.5 * 2.0 ** (1.0 / 3.0) * 3.0 ** (2.0 / 3.0)))

    par = LdpRegime.from_fading(FadingSpec(kind="pareto", c=2.0), 1.0, 3.0)
    checks.append(("pareto speed", speed(par, 0.01), 2.0 * math.log(101.0)))
    checks.append(("pareto rate origin", rate(par, 0.0), 0.0))

    worst = max(abs(got - want) / max(abs(want), 1.0) for _, got, want in checks)
    g = 1.001
    gin = weibull_rate_constant(1.0, g, 1.0)
    poi = abs(poisson_comparison(
        LdpRegime.from_fading(FadingSpec(kind="weibull_super", c=1.0, gamma=g),
                              1.0, 3.0)))
    conv = abs(gin - poi) / poi
    ok = worst < 1e-12 and conv < 0.02
    return _result("rate_table", ok,
                   f"max closed-form rel err {worst:.2e}; gamma=1.001 "
                   f"constants {gin:.5f} vs {poi:.5f} (gap {conv:.3%})", t0)


def check_lower_bound_ordering(quick: bool = False) -> CheckResult:
    """Dominating-event lower bounds sit below the joint probability."""
    t0 = time.perf_counter()
    n_reps = 4000 if quick else 20_000
    stream = RngStream(MASTER_SEED, 800)
    bounded_model = NetworkModel(
        beta=1.0, window=DiskWindow(radius=2.0), receiver=0j,
        atten_R=1.0, atten_alpha=4.0, fading=FadingSpec(kind="bounded", bound=1.0))
    grids = {
        "exponential": (_exponential_model(), (1.0, 1.5, 2.0), (0.7, 1.0, 1.4)),
        "bounded": (bounded_model, (0.6, 0.9, 1.2), (0.8, 1.0, 1.3)),
    }
    details, ok = [], True
    idx = 0
    for label, (model, xs, epss) in grids.items():
        if quick:
            xs, epss = xs[:2], epss[:2]
        worst_margin = math.inf
        for x in xs:
            for eps in epss:
                probe = dominating_event_probe(model, x, eps,
                                               stream.substream(idx), n_reps=n_reps)
                idx += 1
                tol = 3.0 * probe.p_joint_stderr
                margin = min(probe.p_joint + tol - probe.p_block,
                             probe.p_joint + tol - probe.p_single)
                worst_margin = min(worst_margin, margin)
                ok &= margin >= 0.0
        details.append(f"{label}: worst margin {worst_margin:.3e}")
    return _result("lower_bound_ordering", ok, "; ".join(details), t0)


ALL_CHECKS = (
    check_spectral_exactness,
    check_count_law,
    check_palm_identity,
    check_kostlan,
    check_variance_contrast,
    check_count_tail_trend,
    check_exponential_slope,
    check_subexp_ratio,
    check_chernoff_dominance,
    check_rate_table,
    check_lower_bound_ordering,
)


def run_suite(quick: bool = False, report=print) -> bool:
    """Execute every check; report one line each; True iff all passed."""
    all_ok = True
    total = 0.0
    for fn in ALL_CHECKS:
        res = fn(quick=quick)
        total += res.seconds
        all_ok &= res.passed
        status = "PASS" if res.passed else "FAIL"
        report(f"[{status}] {res.name:<24s} ({res.seconds:6.1f}s)  {res.detail}")
    report(f"{'all checks passed' if all_ok else 'FAILURES present'} "
           f"in {total:.1f}s ({'quick' if quick else 'full'} budget)")
    return all_ok
