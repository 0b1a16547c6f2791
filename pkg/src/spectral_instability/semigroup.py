"""Projection-series view of the semigroup e^{-tA}.

With rank-1 spectral projections P_n f = <f, conj(u_n)> u_n (biorthogonal
normalization <u_n, conj(u_n)> = 1, norm ||P_n|| = kappa_n) the semigroup
expands as sum_n e^{-t lambda_n} P_n.  Whether that series converges in
norm depends on the race between the exponential growth kappa_n ~ e^{c n}
and the decay e^{-t Re lambda_n}: for k >= 2 the Weyl growth
Re lambda_n ~ n^{2k/(k+1)} always wins, while for k = 1 it wins only for
t beyond a threshold.

Two closed-form threshold candidates exist for k = 1 and differ by a
factor 2: c_1/cos(theta/2) and the per-term rate c_1/(2 cos(theta/2))
obtained by combining the kappa growth law with Re lambda_n ~
2(n+1/2) cos(theta/2).  Neither is asserted here; the empirical crossover
of the fitted term slope is measured and reported next to both.
"""

from dataclasses import dataclass
import cmath
import csv
import json
import math

import numpy as np
import scipy.linalg

from .asymptotics import OscillatorParams, semigroup_threshold
from .errors import DomainError, RefusalError
from .spectral import (DiscretizationConfig, SpectrumResult, build_matrix,
                       solve_spectrum)

__all__ = [
    "TermSeries",
    "Classification",
    "SemigroupSeriesReport",
    "term_norms",
    "classify_convergence",
    "threshold_candidates",
    "empirical_crossover",
    "compare_partial_sum",
    "semigroup_report",
    "write_report_json",
    "write_term_norms_csv",
    "read_report_json",
    "read_term_norms_csv",
]

SLOPE_TOL = 0.02
MIN_WINDOW = 8


@dataclass(frozen=True)
class TermSeries:
    """Per-term norms e^{-t Re lambda_n} kappa_n of the projection series.

    Indices whose kappa is flagged (overflow or precision-limited) are
    excluded rather than extrapolated; ``excluded`` records how many.
    """

    t: float
    ns: np.ndarray
    values: np.ndarray
    excluded: int


@dataclass(frozen=True)
class Classification:
    label: str  # converging | diverging | inconclusive
    slope: float
    reason: str | None = None


def term_norms(params: OscillatorParams, config: DiscretizationConfig,
               t: float, spectrum: SpectrumResult | None = None) -> TermSeries:
    """Term norms for the retained window at time t > 0."""
    if not (t > 0):
        raise DomainError(f"term_norms requires t > 0, got {t!r}")
    result = spectrum or solve_spectrum(params, config)
    ns, values = [], []
    excluded = 0
    for p in result.pairs:
        if p.kappa_flag != "ok":
            excluded += 1
            continue
        ns.append(p.index)
        values.append(math.exp(-t * p.eigenvalue.real) * p.kappa)
    return TermSeries(t=t, ns=np.asarray(ns, dtype=int),
                      values=np.asarray(values), excluded=excluded)


def classify_convergence(values, ns=None, tol: float = SLOPE_TOL) -> Classification:
    """Classify a window of term norms by the sign of its fitted log-slope.

    slope < -tol: converging, slope > +tol: diverging, else inconclusive.
    Windows shorter than 8 points are rejected; non-finite entries
    (excluded terms) make the answer inconclusive with a reason.
    """
    values = np.asarray(values, dtype=float)
    if ns is None:
        ns = np.arange(1, len(values) + 1)
    ns = np.asarray(ns, dtype=float)
    if len(values) < MIN_WINDOW:
        raise DomainError(
            f"classification window needs >= {MIN_WINDOW} points, got {len(values)}")
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        return Classification("inconclusive", math.nan,
                              reason="window contains excluded or invalid terms")
    design = np.vstack([ns, np.ones_like(ns)]).T
    slope = float(np.linalg.lstsq(design, np.log(values), rcond=None)[0][0])
    if slope < -tol:
        return Classification("converging", slope)
    if slope > tol:
        return Classification("diverging", slope)
    return Classification("inconclusive", slope)


def threshold_candidates(params: OscillatorParams) -> tuple[float | None, float | None]:
    """(closed-form threshold, per-term-rate candidate) for k = 1, else (None, None).

    The two differ by a factor 2; see the module docstring.
    """
    if params.k != 1 or abs(params.theta) > math.pi / 2:
        return None, None
    paper = semigroup_threshold(params.theta)
    return paper, 0.5 * paper


def empirical_crossover(params: OscillatorParams, config: DiscretizationConfig,
                        window: tuple[int, int] | None = None,
                        spectrum: SpectrumResult | None = None) -> float | None:
    """Time t* at which the fitted term slope changes sign.

    The term slope is linear in t: slope(t) = slope(log kappa) -
    t * slope(Re lambda), both fitted over the index window, so t* is
    their ratio.  Returns None when every usable kappa grows slower than
    the tolerance (selfadjoint case).
    """
    result = spectrum or solve_spectrum(params, config)
    if window is None:
        window = (max(1, config.n_max - 15), config.n_max)
    lo, hi = window
    ns, logk, rel = [], [], []
    for p in result.pairs:
        if p.kappa_flag != "ok" or not (lo <= p.index <= hi):
            continue
        ns.append(p.index)
        logk.append(math.log(p.kappa))
        rel.append(p.eigenvalue.real)
    if len(ns) < 2:
        return None
    ns = np.asarray(ns, dtype=float)
    design = np.vstack([ns, np.ones_like(ns)]).T
    s_kappa = float(np.linalg.lstsq(design, np.asarray(logk), rcond=None)[0][0])
    s_re = float(np.linalg.lstsq(design, np.asarray(rel), rcond=None)[0][0])
    if s_kappa <= SLOPE_TOL or s_re <= 0:
        return None
    return s_kappa / s_re


def _biorthogonal_vectors(result: SpectrumResult, count: int) -> np.ndarray:
    """Columns w_n = c_n / sqrt(sum c_n^2), so that sum w_n^2 = 1.

    The square-root branch cancels in the rank-1 projection (quadratic in
    w), so either choice is fine.
    """
    cols = []
    for p in result.pairs[:count]:
        s = cmath.sqrt(complex(np.sum(p.coeffs * p.coeffs)))
        cols.append(p.coeffs / s)
    return np.column_stack(cols)


def compare_partial_sum(params: OscillatorParams, config: DiscretizationConfig,
                        t: float, v: np.ndarray, n_terms: int,
                        spectrum: SpectrumResult | None = None) -> float:
    """Relative error of the n_terms partial projection sum against the
    matrix exponential applied to v.

    The oracle side is scaling-and-squaring Pade (scipy.linalg.expm) on
    the Galerkin matrix.  Requesting a regime classified as diverging is
    refused: the series does not converge in norm there and the partial
    sum is not an approximation of anything.
    """
    if not (1 <= n_terms <= config.n_max):
        raise DomainError(f"n_terms must lie in [1, n_max], got {n_terms}")
    result = spectrum or solve_spectrum(params, config)
    series = term_norms(params, config, t, spectrum=result)
    if len(series.values) >= MIN_WINDOW:
        cls = classify_convergence(series.values, series.ns)
        if cls.label == "diverging":
            raise RefusalError(
                f"projection series diverges at t={t} (fitted slope "
                f"{cls.slope:+.3f}); partial sums do not approximate the "
                f"semigroup in this regime")
    v = np.asarray(v, dtype=complex).ravel()
    if v.shape[0] != config.basis_size:
        raise DomainError(
            f"vector length {v.shape[0]} != basis size {config.basis_size}")
    w = _biorthogonal_vectors(result, n_terms)
    lam = result.eigenvalues()[:n_terms]
    coeffs = w.T @ v  # <v, conj(u_n)> in coefficient space
    partial = w @ (np.exp(-t * lam) * coeffs)
    oracle = scipy.linalg.expm(-t * build_matrix(params, config)) @ v
    return float(np.linalg.norm(partial - oracle) / np.linalg.norm(v))


@dataclass(frozen=True)
class SemigroupSeriesReport:
    """Everything measured about the series at one time t.

    ``thresholds`` pairs the closed-form candidate with the measured
    crossover; ``threshold_term_rate`` is the halved candidate (see
    module docstring).  ``comparison_error`` is absent when the series is
    not safely converging at t.
    """

    t: float
    ns: np.ndarray
    term_norms: np.ndarray
    excluded: int
    classification: str
    slope: float
    threshold_paper: float | None
    threshold_term_rate: float | None
    crossover_empirical: float | None
    comparison_error: float | None
    comparison_terms: int | None

    def thresholds(self) -> tuple[float | None, float | None]:
        return self.threshold_paper, self.crossover_empirical

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "ns": self.ns.tolist(),
            "term_norms": self.term_norms.tolist(),
            "excluded": self.excluded,
            "classification": self.classification,
            "slope": None if math.isnan(self.slope) else self.slope,
            "thresholds": [self.threshold_paper, self.crossover_empirical],
            "threshold_term_rate": self.threshold_term_rate,
            "comparison_error": self.comparison_error,
            "comparison_terms": self.comparison_terms,
        }


def semigroup_report(params: OscillatorParams, config: DiscretizationConfig,
                     t: float, window: tuple[int, int] | None = None,
                     comparison_vector: np.ndarray | None = None,
                     spectrum: SpectrumResult | None = None) -> SemigroupSeriesReport:
    """Measure the series at time t: term norms, classification over the
    index window (default: the top 16 trusted indices), thresholds and,
    when the series converges, the partial-sum error against the matrix
    exponential for a Gaussian test vector."""
    result = spectrum or solve_spectrum(params, config)
    series = term_norms(params, config, t, spectrum=result)
    if window is None:
        window = (max(1, config.n_max - 15), config.n_max)
    mask = (series.ns >= window[0]) & (series.ns <= window[1])
    if int(mask.sum()) >= MIN_WINDOW:
        cls = classify_convergence(series.values[mask], series.ns[mask])
    else:
        cls = Classification("inconclusive", math.nan,
                             reason="window too short after exclusions")
    paper, term_rate = threshold_candidates(params)
    crossover = empirical_crossover(params, config, window, spectrum=result)
    comparison = None
    n_used = None
    if cls.label == "converging":
        if comparison_vector is None:
            comparison_vector = np.zeros(config.basis_size, dtype=complex)
            comparison_vector[0] = 1.0  # Gaussian ground basis state
        n_used = config.n_max
        comparison = compare_partial_sum(params, config, t, comparison_vector,
                                         n_used, spectrum=result)
    return SemigroupSeriesReport(
        t=t, ns=series.ns, term_norms=series.values, excluded=series.excluded,
        classification=cls.label, slope=cls.slope,
        threshold_paper=paper, threshold_term_rate=term_rate,
        crossover_empirical=crossover,
        comparison_error=comparison, comparison_terms=n_used)


def write_report_json(report: SemigroupSeriesReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=1)
        fh.write("\n")


def read_report_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_term_norms_csv(report: SemigroupSeriesReport, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "term_norm"])
        for n, v in zip(report.ns, report.term_norms):
            writer.writerow([int(n), format(v, ".17g")])


def read_term_norms_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["n", "term_norm"]:
            raise DomainError(f"unexpected term-norm CSV header: {header!r}")
        return np.array([[float(a), float(b)] for a, b in reader])
