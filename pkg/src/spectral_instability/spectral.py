"""Hermite-Galerkin discretization of the rotated anharmonic oscillator.

The operator -d^2/dx^2 + e^{i*theta} x^{2k} is projected on dilated
orthonormal Hermite functions phi_j(alpha*x).  In that basis the matrix is
complex symmetric and banded (bandwidth 2k); its low-lying eigenpairs
converge spectrally.  The instability index of an eigenvalue is computed
entirely in coefficient space, where Parseval turns both integrals of the
projection-norm formula into exact sums:

    kappa = sum |c_j|^2 / |sum c_j^2|.

The denominator suffers catastrophic cancellation as kappa grows, so it is
accumulated with exact summation and kappa values beyond 1e12 are flagged
``precision-limited`` (values at the overflow guard come back as inf with
flag ``overflow``).
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .asymptotics import OscillatorParams, semiclassical_parameter
from .errors import AccuracyError, ConfigError, DomainError
from .specfun import QuadratureConfig, integrate_line

__all__ = [
    "DiscretizationConfig",
    "Eigenpair",
    "SpectrumResult",
    "RateFit",
    "ResolvableRangeWarning",
    "KAPPA_PRECISION_LIMIT",
    "build_matrix",
    "solve_spectrum",
    "kappa_from_coeffs",
    "kappa_spectrum",
    "evaluate_eigenfunction",
    "hermite_functions",
    "wkb_action",
    "wkb_leading_error",
    "rate_fit",
]

RESIDUAL_TOL = 1e-8
KAPPA_OVERFLOW_GUARD = 1e-300
KAPPA_PRECISION_LIMIT = 1e12


class ResolvableRangeWarning(UserWarning):
    """Evaluation requested outside the basis's resolvable region."""


@dataclass(frozen=True)
class DiscretizationConfig:
    """Basis size N, trusted window n_max and dilation ``scale``.

    Only the first n_max <= N/4 eigenpairs of the N-dimensional matrix are
    trusted (Galerkin truncation pollutes the upper part of the computed
    spectrum).  ``scale = None`` selects N^((k-1)/(2k+2)), which balances
    the kinetic and potential bands at the truncation edge and reduces to
    the exact harmonic eigenbasis at k = 1.
    """

    basis_size: int
    n_max: int
    scale: float | None = None

    def __post_init__(self):
        if self.basis_size < 4:
            raise ConfigError(f"basis_size must be >= 4, got {self.basis_size}")
        if not (1 <= self.n_max <= self.basis_size // 4):
            raise ConfigError(
                f"need 1 <= n_max <= basis_size/4 (truncation-trust rule), "
                f"got n_max={self.n_max}, basis_size={self.basis_size}")
        if self.scale is not None and not (self.scale > 0):
            raise ConfigError(f"scale must be positive, got {self.scale!r}")

    def effective_scale(self, k: int) -> float:
        if self.scale is not None:
            return self.scale
        return float(self.basis_size) ** ((k - 1) / (2.0 * k + 2.0))


@dataclass(frozen=True)
class Eigenpair:
    """One retained eigenpair.

    ``index`` is 1-based in nondecreasing |eigenvalue| order.  ``coeffs``
    has unit Euclidean norm with the largest-modulus entry rotated to the
    positive real axis.  ``kappa_flag`` is one of ``ok``,
    ``precision-limited`` (kappa > 1e12, excluded from rate fits) or
    ``overflow`` (denominator below the cancellation guard, kappa = inf).
    """

    index: int
    eigenvalue: complex
    coeffs: np.ndarray
    kappa: float
    kappa_flag: str = "ok"


@dataclass(frozen=True)
class SpectrumResult:
    params: OscillatorParams
    config: DiscretizationConfig
    pairs: list[Eigenpair]
    residuals: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.array([p.eigenvalue for p in self.pairs])

    def kappas(self) -> np.ndarray:
        return np.array([p.kappa for p in self.pairs])


def _position_matrix(n: int) -> np.ndarray:
    x = np.zeros((n, n))
    off = np.sqrt((np.arange(n - 1) + 1) / 2.0)
    x[np.arange(n - 1), np.arange(1, n)] = off
    x[np.arange(1, n), np.arange(n - 1)] = off
    return x


def _momentum_squared(n: int) -> np.ndarray:
    p2 = np.zeros((n, n))
    j = np.arange(n)
    p2[j, j] = j + 0.5
    i = np.arange(n - 2)
    v = -0.5 * np.sqrt((i + 1.0) * (i + 2.0))
    p2[i, i + 2] = v
    p2[i + 2, i] = v
    return p2


def build_matrix(params: OscillatorParams, config: DiscretizationConfig) -> np.ndarray:
    """Galerkin matrix of the oscillator in the dilated Hermite basis.

    Exactly complex symmetric, banded with bandwidth 2k.  The potential
    block X^{2k} is formed on a padded basis and cropped, so every entry
    of the returned matrix equals the exact infinite-matrix entry (no
    truncation error inside the block); for k = 1, theta = 0, scale = 1
    the result is exactly diag(1, 3, 5, ...).
    """
    n = config.basis_size
    k = params.k
    if n < 4 * k:
        raise ConfigError(f"basis_size {n} too small for k={k} (need >= {4 * k})")
    alpha = config.effective_scale(k)
    pad = n + 2 * k + 2
    x2k = np.linalg.matrix_power(_position_matrix(pad), 2 * k)[:n, :n]
    x2k = 0.5 * (x2k + x2k.T)  # exact symmetry at machine level
    m = (alpha ** 2 * _momentum_squared(n)
         + np.exp(1j * params.theta) * alpha ** (-2.0 * k) * x2k)
    assert np.array_equal(m, m.T), "Galerkin matrix must be exactly symmetric"
    return m


def kappa_from_coeffs(coeffs: np.ndarray) -> float:
    """Instability index from basis coefficients.

    In a real orthonormal basis the projection-norm formula becomes
    sum|c_j|^2 / |sum c_j^2|.  The denominator is an exact (fsum)
    accumulation; if it falls below 1e-300 of the numerator the index is
    reported as inf (overflow flag).
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    num = float(np.sum(np.abs(c) ** 2))
    if num == 0.0:
        raise DomainError("kappa_from_coeffs: zero coefficient vector")
    c2 = c * c
    den = abs(complex(math.fsum(c2.real), math.fsum(c2.imag)))
    if den < KAPPA_OVERFLOW_GUARD * num:
        return math.inf
    return num / den


def _kappa_flag(kappa: float) -> str:
    if math.isinf(kappa):
        return "overflow"
    if kappa > KAPPA_PRECISION_LIMIT:
        return "precision-limited"
    return "ok"


def solve_spectrum(params: OscillatorParams, config: DiscretizationConfig) -> SpectrumResult:
    """Dense eigendecomposition of the Galerkin matrix.

    The matrix couples only equal parities, so the even and odd blocks are
    solved separately (halves the cost and makes the parity of every
    coefficient vector exact).  Pairs are sorted by |eigenvalue| with ties
    broken by real part; only the first n_max are retained, each with a
    residual check against RESIDUAL_TOL.
    """
    m = build_matrix(params, config)
    n = config.basis_size
    values = []
    vectors = []
    for start in (0, 1):
        idx = np.arange(start, n, 2)
        block = m[np.ix_(idx, idx)]
        lam, vec = np.linalg.eig(block)
        full = np.zeros((n, len(idx)), dtype=complex)
        full[idx, :] = vec
        values.append(lam)
        vectors.append(full)
    lam = np.concatenate(values)
    vec = np.hstack(vectors)
    order = np.lexsort((lam.real, np.abs(lam)))
    lam = lam[order][:config.n_max]
    vec = vec[:, order][:, :config.n_max]

    pairs = []
    residuals = np.empty(config.n_max)
    for i in range(config.n_max):
        c = vec[:, i]
        c = c / np.linalg.norm(c)
        residuals[i] = np.linalg.norm(m @ c - lam[i] * c)
        if residuals[i] > RESIDUAL_TOL:
            raise AccuracyError(
                f"eigenpair {i + 1}: residual {residuals[i]:.3e} exceeds "
                f"{RESIDUAL_TOL} (basis too small?)")
        top = int(np.argmax(np.abs(c)))
        phase = c[top] / abs(c[top])
        c = c * phase.conjugate()
        kappa = kappa_from_coeffs(c)
        pairs.append(Eigenpair(index=i + 1, eigenvalue=complex(lam[i]),
                               coeffs=c, kappa=kappa,
                               kappa_flag=_kappa_flag(kappa)))
    return SpectrumResult(params=params, config=config, pairs=pairs,
                          residuals=residuals)


def kappa_spectrum(params: OscillatorParams, config: DiscretizationConfig):
    """List of (index, |eigenvalue|, kappa) for the trusted window."""
    result = solve_spectrum(params, config)
    return [(p.index, abs(p.eigenvalue), p.kappa) for p in result.pairs]


def hermite_functions(count: int, y: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions phi_0..phi_{count-1} at points y.

    Stable three-term recurrence; returns shape (count, len(y)).
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((count,) + y.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * y * y)
    if count > 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for j in range(1, count - 1):
        out[j + 1] = (math.sqrt(2.0 / (j + 1)) * y * out[j]
                      - math.sqrt(j / (j + 1.0)) * out[j - 1])
    return out


def evaluate_eigenfunction(coeffs: np.ndarray, scale: float, xs) -> np.ndarray:
    """Pointwise eigenfunction sum_j c_j phi_j(scale * x).

    Points with |x| beyond the resolvable region sqrt(2N)/scale trigger a
    ResolvableRangeWarning; values there decay like the basis tail rather
    than like the true eigenfunction.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    limit = math.sqrt(2.0 * len(c)) / scale
    if np.any(np.abs(xs) > limit):
        warnings.warn(
            f"evaluation outside resolvable region |x| <= {limit:.3f}",
            ResolvableRangeWarning, stacklevel=2)
    basis = hermite_functions(len(c), scale * xs)
    return c @ basis


def wkb_action(x: float, k: int, cfg: QuadratureConfig | None = None) -> float:
    """Action integral of sqrt(t^{2k} - 1) from the turning point 1 to x > 1."""
    if x <= 1.0:
        raise DomainError(f"wkb_action requires x > 1, got {x!r}")
    value = integrate_line(lambda t: (t ** (2 * k) - 1.0) ** 0.5, 1.0, x,
                           cfg or QuadratureConfig(abs_tol=1e-12, rel_tol=1e-11))
    return float(value.real)


def wkb_leading_error(params: OscillatorParams, eigenpair: Eigenpair,
                      config: DiscretizationConfig,
                      window: tuple[float, float] = (1.5, 2.5),
                      points: int = 41) -> float:
    """Max relative deviation between the computed eigenfunction and the
    leading WKB tail form over the rescaled window.

    The comparison runs on the selfadjoint reduction: the rotated problem
    is unitarily equivalent (analytic dilation) to the theta = 0 operator
    at the same |eigenvalue|, whose eigenfunction restricted to real
    points y in ``window`` should match
    (y^{2k} - 1)^{-1/4} exp(-S(y)/h) to O(h) after both sides are
    normalized at the window midpoint.  Expect roughly 0.15*h for k = 1.

    Double precision bounds how deep into the tail this is meaningful:
    coefficient noise ~1e-16 of the unit-norm vector swamps the true
    values once S(y_max)/h exceeds ~30, so large k >= 2 indices cannot be
    compared on the default window (the k = 1 diagonal case is exact and
    has no such floor).
    """
    k = params.k
    h = semiclassical_parameter(abs(eigenpair.eigenvalue), k)
    if h > 0.2:
        raise DomainError(
            f"wkb_leading_error needs h <= 0.2, got h={h:.4f} "
            f"(index {eigenpair.index} too low)")
    if params.theta == 0.0:
        pair = eigenpair
        scale = config.effective_scale(k)
    else:
        flat = solve_spectrum(OscillatorParams(params.k, 0.0), config)
        pair = flat.pairs[eigenpair.index - 1]
        scale = config.effective_scale(k)
    lam_abs = abs(pair.eigenvalue)
    ys = np.linspace(window[0], window[1], points)
    xs = ys * lam_abs ** (1.0 / (2 * k))
    # Coefficients at the eigensolver noise floor are pure rounding debris
    # (backward-stable solves leave ~1e-15 relative noise on components
    # whose true value is far smaller); they would dominate the tail
    # through the still-oscillatory high-index basis functions, so they
    # are dropped before evaluating this far below the peak.
    coeffs = pair.coeffs.copy()
    coeffs[np.abs(coeffs) < 1e-13 * np.abs(coeffs).max()] = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolvableRangeWarning)
        psi = evaluate_eigenfunction(coeffs, scale, xs)
    wkb = (ys ** (2 * k) - 1.0) ** -0.25 * np.exp(
        -np.array([wkb_action(float(y), k) for y in ys]) / h)
    mid = points // 2
    if psi[mid] == 0 or not np.all(np.isfinite(psi)):
        raise AccuracyError("eigenfunction underflowed on the WKB window")
    ref = wkb / wkb[mid]
    dev = np.abs(psi / psi[mid] - ref) / np.abs(ref)
    return float(dev.max())


@dataclass(frozen=True)
class RateFit:
    """Least-squares fits of log kappa_n over an index window.

    ``slope`` is the plain straight-line slope of log kappa_n vs n.
    ``model_slope`` and ``prefactor`` come from fitting the leading growth
    law kappa ~ (K/sqrt(n)) e^{c n}, i.e. regressing
    log kappa + 0.5*log n on n.  Flagged kappa values are excluded.
    """

    window: tuple[int, int]
    used_indices: list[int]
    excluded: int
    slope: float
    intercept: float
    model_slope: float
    prefactor: float

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "used_indices": self.used_indices,
            "excluded": self.excluded,
            "slope": self.slope,
            "intercept": self.intercept,
            "model_slope": self.model_slope,
            "prefactor": self.prefactor,
        }


def rate_fit(result: SpectrumResult, window: tuple[int, int]) -> RateFit:
    """Fit the exponential growth of the instability indices.

    Uses 1-based indices n in [window[0], window[1]] whose kappa carries
    the ``ok`` flag (overflow and precision-limited values are excluded,
    honesty over reach).
    """
    lo, hi = window
    ns, logs = [], []
    excluded = 0
    for p in result.pairs:
        if not (lo <= p.index <= hi):
            continue
        if p.kappa_flag != "ok":
            excluded += 1
            continue
        ns.append(p.index)
        logs.append(math.log(p.kappa))
    if len(ns) < 2:
        raise DomainError(
            f"rate_fit window [{lo}, {hi}] leaves {len(ns)} usable points")
    ns_arr = np.asarray(ns, dtype=float)
    ys = np.asarray(logs)
    design = np.vstack([ns_arr, np.ones_like(ns_arr)]).T
    slope, intercept = np.linalg.lstsq(design, ys, rcond=None)[0]
    model_slope, model_icpt = np.linalg.lstsq(
        design, ys + 0.5 * np.log(ns_arr), rcond=None)[0]
    return RateFit(window=(lo, hi), used_indices=ns, excluded=excluded,
                   slope=float(slope), intercept=float(intercept),
                   model_slope=float(model_slope),
                   prefactor=float(math.exp(model_icpt)))
