"""Tests for the closed-form asymptotic quantities.

Independent oracles: bisection on the phase derivative for the saddle,
finite differences for the derivative, scipy quadrature plus golden-
section maximization for the growth rate, direct high-precision integrals
of the exact k = 1 eigenfunctions for the Laplace prefactor, and the
harmonic-case closed form throughout.
"""

import cmath
import math

import numpy as np
import pytest
import scipy.integrate
import scipy.optimize

from spectral_instability.asymptotics import (OscillatorParams,
                                              asymptotic_report,
                                              davies_kuijlaars_rate,
                                              growth_rate, laplace_phase,
                                              laplace_phase_derivative,
                                              laplace_prefactor, saddle_point,
                                              semiclassical_parameter,
                                              semigroup_threshold,
                                              weyl_coefficient, weyl_modulus)
from spectral_instability.errors import BranchCutError, DomainError

# frozen with a 40-digit mpmath evaluation of the closed forms
RATE_1_HALFPI = 0.88137358701954303
RATE_2_08 = 0.30279776085447914
RATE_2_QUARTERPI = 0.29707049624925286
RATE_3_05 = 0.14897148641007448


# ----------------------------------------------------------------------
# parameters
# ----------------------------------------------------------------------

def test_params_validation():
    OscillatorParams(1, 3.1)          # < pi, fine
    OscillatorParams(2, -2.35)        # < 3pi/4 in modulus
    with pytest.raises(DomainError):
        OscillatorParams(1, math.pi)
    with pytest.raises(DomainError):
        OscillatorParams(2, 2.4)
    with pytest.raises(DomainError):
        OscillatorParams(0, 0.1)
    with pytest.raises(DomainError):
        OscillatorParams(-3, 0.1)


# ----------------------------------------------------------------------
# saddle point
# ----------------------------------------------------------------------

def test_saddle_harmonic_closed_form():
    # at k = 1 the formula reduces to (2 cos(theta/2))^{-1/2}
    x = saddle_point(OscillatorParams(1, math.pi / 2))
    assert x == pytest.approx(2.0 ** -0.25, rel=1e-14)
    for theta in (0.2, 0.9, 1.4):
        assert saddle_point(OscillatorParams(1, theta)) == pytest.approx(
            (2.0 * math.cos(0.5 * theta)) ** -0.5, rel=1e-14)


def test_saddle_even_in_theta():
    assert saddle_point(OscillatorParams(1, -math.pi / 2)) == \
        saddle_point(OscillatorParams(1, math.pi / 2))


def test_saddle_matches_bisection_root():
    # independent root of the phase derivative on (0, 1)
    params = OscillatorParams(2, 0.6)
    f = lambda x: laplace_phase_derivative(params, x)
    root = scipy.optimize.bisect(f, 1e-6, 1.0 - 1e-9, xtol=1e-13)
    assert saddle_point(params) == pytest.approx(root, abs=1e-10)


def test_saddle_rejects_theta_zero():
    with pytest.raises(DomainError):
        saddle_point(OscillatorParams(2, 0.0))


def test_saddle_stationarity_grid():
    for k in (1, 2, 3):
        for theta in (0.3, 0.8, 1.2):
            params = OscillatorParams(k, theta)
            assert abs(laplace_phase_derivative(params, saddle_point(params))) <= 1e-10


# ----------------------------------------------------------------------
# phase and its derivative
# ----------------------------------------------------------------------

def test_phase_at_origin_is_zero():
    assert laplace_phase(OscillatorParams(1, 0.7), 0.0) == 0.0
    assert laplace_phase(OscillatorParams(3, -1.1), 0.0) == 0.0


def test_phase_vanishes_on_real_segment():
    # theta = 0, x < 1: integrand purely imaginary, phase identically 0
    assert laplace_phase(OscillatorParams(1, 0.0), 0.5) == pytest.approx(0.0, abs=1e-13)
    assert laplace_phase(OscillatorParams(2, 0.0), 0.9) == pytest.approx(0.0, abs=1e-12)


def test_phase_cross_formula_harmonic():
    # at k = 1 the rate is 4*phase(saddle); compare against the
    # independent closed form
    params = OscillatorParams(1, math.pi / 2)
    phase = laplace_phase(params, saddle_point(params))
    assert 4.0 * phase == pytest.approx(davies_kuijlaars_rate(math.pi / 2), abs=1e-11)


def test_phase_branch_proximity_error():
    # theta = 0, x > 1: the segment passes through the branch point t = 1
    with pytest.raises(BranchCutError):
        laplace_phase(OscillatorParams(1, 0.0), 1.5)
    with pytest.raises(BranchCutError):
        laplace_phase(OscillatorParams(2, 0.0), 1.0 - 1e-12)


def test_phase_derivative_at_saddle_vanishes():
    params = OscillatorParams(1, math.pi / 2)
    assert abs(laplace_phase_derivative(params, saddle_point(params))) <= 1e-10


@pytest.mark.parametrize("k,theta,x", [
    (1, math.pi / 2, 0.1),
    (1, 0.7, 0.5),
    (2, 0.8, 0.9),
    (2, 0.8, 1.7),
    (3, 0.5, 1.3),
])
def test_phase_derivative_matches_finite_difference(k, theta, x):
    params = OscillatorParams(k, theta)
    h = 1e-5
    fd = (laplace_phase(params, x + h) - laplace_phase(params, x - h)) / (2.0 * h)
    assert laplace_phase_derivative(params, x) == pytest.approx(fd, abs=1e-6)


def test_phase_derivative_quartic_real_segment():
    # theta = 0, x in (0,1): w is negative real, arg = pi, and the
    # half-angle cosine vanishes
    assert laplace_phase_derivative(OscillatorParams(2, 0.0), 0.5) == \
        pytest.approx(0.0, abs=1e-15)


def test_phase_concave_at_saddle():
    for k, theta in ((1, math.pi / 2), (2, 0.8), (3, 0.5)):
        params = OscillatorParams(k, theta)
        x = saddle_point(params)
        h = 1e-5
        d2 = (laplace_phase_derivative(params, x + h)
              - laplace_phase_derivative(params, x - h)) / (2.0 * h)
        assert d2 < 0.0


# ----------------------------------------------------------------------
# growth rate
# ----------------------------------------------------------------------

def test_rate_zero_at_theta_zero():
    assert growth_rate(OscillatorParams(1, 0.0)) == 0.0
    assert growth_rate(OscillatorParams(3, 0.0)) == 0.0


def test_rate_equals_harmonic_closed_form():
    for theta in (0.2, 0.7, 1.2, 1.5, math.pi / 2):
        assert abs(growth_rate(OscillatorParams(1, theta))
                   - davies_kuijlaars_rate(theta)) <= 1e-10


def _rate_oracle(k, theta):
    """Independent route: scipy quadrature of the ray integral plus
    golden-section maximization, no shared code with the package."""
    ray = theta / (2.0 * (k + 1))

    def phase(x):
        end = x * cmath.exp(1j * ray)

        def re_part(s):
            w = (s * end) ** (2 * k) - 1.0
            root = cmath.sqrt(w)
            if root.imag < 0:
                root = -root  # branch with sqrt(-1) = +i (w stays in UHP)
            return (root * end).real

        val, _ = scipy.integrate.quad(re_part, 0.0, 1.0, limit=200)
        return -val

    best = scipy.optimize.minimize_scalar(lambda x: -phase(x),
                                          bounds=(1e-3, 1.2), method="bounded",
                                          options={"xatol": 1e-12})
    coeff = (k + 1) * math.sqrt(math.pi) * math.gamma((k + 1) / (2 * k)) \
        / math.gamma(1 / (2 * k))
    return 2.0 * coeff * phase(best.x)


@pytest.mark.parametrize("k,theta,frozen", [
    (2, math.pi / 4, RATE_2_QUARTERPI),
    (2, 0.8, RATE_2_08),
    (3, 0.5, RATE_3_05),
])
def test_rate_against_independent_quadrature(k, theta, frozen):
    rate = growth_rate(OscillatorParams(k, theta))
    assert rate == pytest.approx(frozen, abs=1e-11)
    assert rate == pytest.approx(_rate_oracle(k, theta), abs=1e-8)


def test_rate_vanishes_continuously():
    for k in (1, 2, 3):
        assert growth_rate(OscillatorParams(k, 1e-3)) < 1e-2


# ----------------------------------------------------------------------
# harmonic closed form
# ----------------------------------------------------------------------

def test_davies_kuijlaars_zero_and_symmetry():
    assert davies_kuijlaars_rate(0.0) == pytest.approx(0.0, abs=1e-15)
    for theta in (0.3, 1.0, 1.5):
        assert davies_kuijlaars_rate(-theta) == davies_kuijlaars_rate(theta)


def test_davies_kuijlaars_known_value():
    assert davies_kuijlaars_rate(math.pi / 2) == pytest.approx(
        RATE_1_HALFPI, rel=1e-13)
    # at theta = pi/2 the rate happens to equal asinh(1) = log(1 + sqrt 2)
    assert RATE_1_HALFPI == pytest.approx(math.asinh(1.0), rel=1e-15)


def test_davies_kuijlaars_domain():
    with pytest.raises(DomainError):
        davies_kuijlaars_rate(math.pi)


# ----------------------------------------------------------------------
# Weyl law and the semiclassical parameter
# ----------------------------------------------------------------------

def test_weyl_harmonic_exact():
    for n in range(0, 30):
        assert weyl_modulus(n, 1) == pytest.approx(2 * n + 1, rel=1e-14)
    assert weyl_modulus(0, 1) == pytest.approx(1.0, rel=1e-14)


def test_weyl_against_quartic_galerkin():
    from spectral_instability.spectral import (DiscretizationConfig,
                                               solve_spectrum)
    result = solve_spectrum(OscillatorParams(2, 0.0),
                            DiscretizationConfig(basis_size=200, n_max=12))
    lam11 = abs(result.pairs[10].eigenvalue)  # 1-based index 11 <-> n = 10
    assert abs(lam11 / weyl_modulus(10, 2) - 1.0) < 0.01


def test_semiclassical_parameter():
    assert semiclassical_parameter(1.0, 3) == 1.0
    for x in (0.5, 2.0, 7.7):
        assert semiclassical_parameter(x, 1) == pytest.approx(1.0 / x, rel=1e-15)
    assert semiclassical_parameter(16.0, 2) == pytest.approx(0.125, rel=1e-15)
    with pytest.raises(DomainError):
        semiclassical_parameter(0.0, 1)


# ----------------------------------------------------------------------
# Laplace prefactor
# ----------------------------------------------------------------------

def test_laplace_prefactor_finite_positive():
    c = laplace_prefactor(OscillatorParams(1, math.pi / 2))
    assert math.isfinite(c) and c > 0


def test_laplace_prefactor_direct_integral_oracle():
    # Recover the constant from the measured norm growth of the
    # eigenfunctions: kappa_n e^{-d/h} psi_wkb(y)^2 / psi_num(y)^2 equals
    # C (1 + O(h)); Richardson extrapolation over two indices kills the
    # O(h) term.  psi_num is the selfadjoint eigenfunction at the same
    # modulus (stable real-axis evaluation), psi_wkb the leading tail form
    # that defines the normalization.
    from spectral_instability.spectral import (DiscretizationConfig,
                                               evaluate_eigenfunction,
                                               solve_spectrum, wkb_action)
    params = OscillatorParams(1, math.pi / 2)
    config = DiscretizationConfig(basis_size=300, n_max=30, scale=1.0)
    rotated = solve_spectrum(params, config)
    flat = solve_spectrum(OscillatorParams(1, 0.0), config)
    d = 2.0 * laplace_phase(params, saddle_point(params))
    y_ref = 1.3
    estimates = []
    for n in (20, 30):
        pair = rotated.pairs[n - 1]
        assert pair.kappa_flag == "ok"
        lam = abs(pair.eigenvalue)
        h = 1.0 / lam
        psi_num = float(np.real(evaluate_eigenfunction(
            flat.pairs[n - 1].coeffs, 1.0, [math.sqrt(lam) * y_ref])[0]))
        psi_wkb = (y_ref ** 2 - 1.0) ** -0.25 * math.exp(-wkb_action(y_ref, 1) / h)
        estimates.append((h, pair.kappa * math.exp(-d / h)
                          * psi_wkb ** 2 / psi_num ** 2))
    (h1, c1), (h2, c2) = estimates
    extrapolated = c2 + (c2 - c1) * h2 / (h1 - h2)
    assert extrapolated == pytest.approx(
        laplace_prefactor(params), rel=1e-2)


def test_laplace_prefactor_step_halving_stability():
    from spectral_instability.asymptotics import _phase_second_at_saddle
    params = OscillatorParams(2, 0.6)
    x = saddle_point(params)
    d2a = _phase_second_at_saddle(params, x, 1e-5)
    d2b = _phase_second_at_saddle(params, x, 5e-6)
    assert abs(d2a - d2b) <= 1e-4 * abs(d2a)
    laplace_prefactor(params)  # and the wrapped validation passes


def test_laplace_prefactor_rejects_theta_zero():
    with pytest.raises(DomainError):
        laplace_prefactor(OscillatorParams(1, 0.0))


# ----------------------------------------------------------------------
# semigroup threshold
# ----------------------------------------------------------------------

def test_threshold_values():
    assert semigroup_threshold(0.0) == 0.0
    expected = RATE_1_HALFPI / math.cos(math.pi / 4)
    assert semigroup_threshold(math.pi / 2) == pytest.approx(expected, rel=1e-10)
    assert semigroup_threshold(-0.8) == pytest.approx(semigroup_threshold(0.8),
                                                      rel=1e-12)
    with pytest.raises(DomainError):
        semigroup_threshold(1.8)


# ----------------------------------------------------------------------
# report
# ----------------------------------------------------------------------

def test_report_consistency_identity():
    for k, theta in ((1, math.pi / 2), (2, 0.8), (3, 0.5)):
        rep = asymptotic_report(OscillatorParams(k, theta))
        assert rep.growth_rate == pytest.approx(
            rep.laplace_exponent * rep.weyl_coefficient, rel=1e-12)
        assert rep.laplace_exponent == pytest.approx(2 * rep.phase_at_saddle,
                                                     rel=1e-15)
        assert rep.growth_rate > 0
        assert rep.phase_at_saddle >= 0


def test_report_even_in_theta():
    a = asymptotic_report(OscillatorParams(2, 0.8)).to_dict()
    b = asymptotic_report(OscillatorParams(2, -0.8)).to_dict()
    for key in ("x_saddle", "phase_at_saddle", "laplace_exponent",
                "growth_rate", "laplace_prefactor", "weyl_coefficient"):
        assert a[key] == b[key], key


def test_report_at_theta_zero():
    rep = asymptotic_report(OscillatorParams(1, 0.0))
    assert rep.x_saddle is None
    assert rep.growth_rate == 0.0
    assert rep.laplace_prefactor is None
    assert rep.semigroup_threshold == 0.0
    rep2 = asymptotic_report(OscillatorParams(2, 0.3))
    assert rep2.semigroup_threshold is None  # k = 1 only


def test_weyl_coefficient_harmonic():
    assert weyl_coefficient(1) == pytest.approx(2.0, rel=1e-14)
