"""Special functions and quadrature primitives.

Real Gamma (Lanczos), complex Airy Ai, a branch-tracked complex square
root, and adaptive Gauss-Legendre integration along straight segments.
Everything here is pure; ``branched_sqrt`` mutates only the state object
the caller passes in, so concurrent use on disjoint states is safe.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import cmath
import math

import numpy as np

from .errors import BranchCutError, ConfigError, ConvergenceError, DomainError

__all__ = [
    "QuadratureConfig",
    "BranchedSqrtState",
    "gamma_real",
    "airy_ai",
    "branched_sqrt",
    "integrate_line",
]


@dataclass
class QuadratureConfig:
    """Tolerances and budget for :func:`integrate_line`.

    ``rule_order`` is the number of Gauss-Legendre nodes per panel.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_subdivisions: int = 2000
    rule_order: int = 15

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ConfigError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ConfigError("max_subdivisions must be a positive integer")
        if self.rule_order < 2:
            raise ConfigError("rule_order must be at least 2")


@dataclass
class BranchedSqrtState:
    """Continuity state for :func:`branched_sqrt` along a path."""

    previous_value: complex = 0j
    initialized: bool = False


# ----------------------------------------------------------------------
# Gamma
# ----------------------------------------------------------------------

# Lanczos coefficients, g = 7, 9 terms.  Relative error below 1e-13 on
# the positive real axis, which is all this package ever evaluates.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_real(x: float) -> float:
    """Gamma function for positive real argument.

    Raises DomainError for x <= 0 (poles and the left half axis are out
    of contract).
    """
    if not (x > 0):
        raise DomainError(f"gamma_real requires x > 0, got {x!r}")
    if x < 0.5:
        # reflection keeps the Lanczos sum well away from its least
        # accurate corner
        return math.pi / (math.sin(math.pi * x) * gamma_real(1.0 - x))
    z = x - 1.0
    a = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        a += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * a


# ----------------------------------------------------------------------
# Airy Ai
# ----------------------------------------------------------------------

_AI0 = 0.3550280538878172  # Ai(0)  = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.2588194037928068  # Ai'(0) = -3^(-1/3)/Gamma(1/3)


def _airy_maclaurin(z: complex) -> tuple[complex, complex]:
    """(Ai, Ai') by the Maclaurin series; accurate while Re((2/3)z^{3/2})
    stays small enough that the f/g cancellation is harmless."""
    if z == 0:
        return _AI0, _AIP0
    z3 = z * z * z
    f = 1.0 + 0j
    g = z
    fp = 0j
    gp = 1.0 + 0j
    a = 1.0 + 0j  # current term of f
    b = z         # current term of g
    for m in range(1, 300):
        a = a * z3 / ((3 * m) * (3 * m - 1))
        b = b * z3 / ((3 * m) * (3 * m + 1))
        f += a
        g += b
        fp += a * (3 * m) / z
        gp += b * (3 * m + 1) / z
        if abs(a) + abs(b) < 1e-18 * (abs(f) + abs(g)):
            break
    return _AI0 * f + _AIP0 * g, _AI0 * fp + _AIP0 * gp


def _airy_asymptotic(z: complex) -> tuple[complex, complex]:
    """(Ai, Ai') from the exponentially decaying expansion.

    Valid for |arg z| < pi; the caller keeps |arg z| <= 2*pi/3 where the
    optimally truncated error is negligible at |z| >= 8.
    """
    zeta = (2.0 / 3.0) * z ** 1.5
    s = 1.0 + 0j
    sp = 1.0 + 0j
    u = 1.0
    term = 1.0 + 0j
    for k in range(1, 100):
        u = u * (6 * k - 5) * (6 * k - 1) / (72.0 * k)
        new = u * (-1.0 / zeta) ** k
        if abs(new) > abs(term):
            break  # past optimal truncation
        term = new
        s += term
        sp += term * (6 * k + 1) / (1.0 - 6 * k)
        if abs(term) < 1e-18 * abs(s):
            break
    pref = cmath.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    return pref * s / z ** 0.25, -pref * sp * z ** 0.25


def _airy_taylor_march(z: complex, z0: complex, y: complex, yp: complex,
                       step: float = 0.4) -> tuple[complex, complex]:
    """March y'' = x*y from z0 to z with local Taylor steps.

    Used inward along a ray from the asymptotically seeded start, where
    the wanted solution grows and the march is stable.
    """
    nsteps = max(4, int(abs(z - z0) / step) + 1)
    dz = (z - z0) / nsteps
    p = z0
    for _ in range(nsteps):
        c = [y, yp]
        small = 0
        while len(c) < 80:
            m = len(c) - 2  # recurrence produces c_{m+2}
            prev = c[m - 1] if m >= 1 else 0.0
            c.append((p * c[m] + prev) / ((m + 1.0) * (m + 2.0)))
            if abs(c[-1]) * abs(dz) ** (m + 2) < 1e-19 * (abs(y) + 1e-300):
                small += 1
                if small >= 2:
                    break
            else:
                small = 0
        yv = 0j
        for coeff in reversed(c):
            yv = yv * dz + coeff
        ypv = 0j
        for mm in range(len(c) - 1, 0, -1):
            ypv = ypv * dz + mm * c[mm]
        y, yp = yv, ypv
        p = p + dz
    return y, yp


# Crossovers: the Maclaurin branch loses ~e^{2 Re zeta} digits to
# cancellation, so it is restricted to Re zeta <= 5; the asymptotic
# branch needs |zeta| >= (2/3) 8^{3/2} for 1e-13 truncation.
_SERIES_RADIUS = 8.0
_SERIES_MAX_RE_ZETA = 5.0
_MARCH_START_RADIUS = 12.0


def airy_ai(z: complex) -> complex:
    """Airy function Ai on the complex plane.

    Total function; intended usage region is |z| <= 30 but any argument
    is accepted (large |z| falls through to the asymptotic branch).
    """
    z = complex(z)
    r = abs(z)
    if r <= _SERIES_RADIUS:
        re_zeta = ((2.0 / 3.0) * z ** 1.5).real if z != 0 else 0.0
        if re_zeta <= _SERIES_MAX_RE_ZETA:
            return _airy_maclaurin(z)[0]
        # decay region of moderate |z|: seed on the same ray at radius 12
        # and march inward (stable direction).
        zs = _MARCH_START_RADIUS * z / r
        a0, ap0 = _airy_asymptotic(zs)
        return _airy_taylor_march(z, zs, a0, ap0)[0]
    if abs(cmath.phase(z)) <= 2.0 * math.pi / 3.0:
        return _airy_asymptotic(z)[0]
    # near the negative axis: connection formula onto the good sector
    w = cmath.exp(2j * math.pi / 3.0)
    return -(w * _airy_asymptotic(w * z)[0] + _airy_asymptotic(z / w)[0] / w)


# ----------------------------------------------------------------------
# Branch-tracked square root
# ----------------------------------------------------------------------

def branched_sqrt(w: complex, state: BranchedSqrtState) -> complex:
    """Square root with branch chosen by continuity along a path.

    On the first call the branch is the determination cut along
    [0, +inf) with sqrt(-1) = +i (result argument in (0, pi]); afterwards
    the root closer to the previous value is selected.  The state object
    is updated in place and owned by the caller.
    """
    w = complex(w)
    if not state.initialized:
        if w.imag == 0.0 and w.real >= 0.0:
            raise BranchCutError(
                f"uninitialized branched_sqrt at {w!r} on the cut [0, +inf)")
        phase = cmath.phase(w) % (2.0 * math.pi)  # in (0, 2*pi)
        value = math.sqrt(abs(w)) * cmath.exp(0.5j * phase)
    else:
        value = cmath.sqrt(w)
        prev = state.previous_value
        if abs(value - prev) > abs(value + prev):
            value = -value
    state.previous_value = value
    state.initialized = True
    return value


# ----------------------------------------------------------------------
# Adaptive Gauss-Legendre line integration
# ----------------------------------------------------------------------

@lru_cache(maxsize=32)
def _gauss_legendre(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _panel(f, a, b, nodes, weights):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    acc = 0j
    for x, w in zip(nodes, weights):
        acc += w * f(mid + half * x)
    return acc * half


def integrate_line(f, a: complex, b: complex, cfg: QuadratureConfig | None = None) -> complex:
    """Integral of ``f`` along the straight segment from ``a`` to ``b``.

    Adaptive bisection of Gauss-Legendre panels; a panel is accepted when
    its refinement changes it by less than the share of the global
    tolerance proportional to its length.  Raises ConvergenceError (with
    ``best_estimate`` attached) if ``cfg.max_subdivisions`` is exhausted.
    """
    cfg = cfg or QuadratureConfig()
    a = complex(a)
    b = complex(b)
    if a == b:
        return 0j
    nodes, weights = _gauss_legendre(cfg.rule_order)
    total_len = abs(b - a)
    first = _panel(f, a, b, nodes, weights)
    global_scale = abs(first)
    accepted = 0j
    # stack entries: (start, end, coarse estimate)
    stack = [(a, b, first)]
    splits = 0
    while stack:
        pa, pb, coarse = stack.pop()
        mid = 0.5 * (pa + pb)
        left = _panel(f, pa, mid, nodes, weights)
        right = _panel(f, mid, pb, nodes, weights)
        refined = left + right
        tol = max(cfg.abs_tol, cfg.rel_tol * global_scale)
        share = tol * abs(pb - pa) / total_len
        if abs(refined - coarse) <= share:
            accepted += refined
            continue
        splits += 1
        if splits > cfg.max_subdivisions:
            best = accepted + refined + sum(item[2] for item in stack)
            raise ConvergenceError(
                f"integrate_line: subdivision budget {cfg.max_subdivisions} "
                f"exhausted on [{a!r}, {b!r}]", best_estimate=best)
        stack.append((pa, mid, left))
        stack.append((mid, pb, right))
        global_scale = max(global_scale,
                           abs(accepted + sum(item[2] for item in stack)))
    return complex(accepted)
