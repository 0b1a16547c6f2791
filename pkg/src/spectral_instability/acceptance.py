"""Acceptance suite: every exit criterion of the library, runnable both
from pytest (tests/test_acceptance.py) and from the ``verify`` CLI
subcommand.

Each criterion returns one or more :class:`CriterionResult` rows with the
measured numbers in ``detail``, so a failure is diagnosable from the
printed line alone.  The criteria are desk-scale (seconds to ~1 minute
each) and deterministic.

Known red: the k = 2 leg of the rate-reproduction criterion asserts the
plain least-squares slope of log kappa_n over the pre-asymptotic window
n in [8, 18] against the asymptotic rate at 15%.  The windowed slope is
0.2533 (fully converged in basis size) while the rate is 0.30280, a gap
of 16.4%: the criterion is unattainable as stated, by about 1.4 points.
The companion fit of the full leading law (K/sqrt(n)) e^{c n} lands
within 3% and is reported alongside.  See the repository notes for the
analysis; the assertion is kept as stated rather than loosened.
"""

from dataclasses import dataclass
import math

import numpy as np

from .asymptotics import (OscillatorParams, davies_kuijlaars_rate, growth_rate,
                          laplace_phase_derivative, saddle_point, weyl_modulus)
from .pseudospectra import disk_inclusion_check
from .semigroup import (classify_convergence, compare_partial_sum,
                        semigroup_report, term_norms, threshold_candidates)
from .spectral import (DiscretizationConfig, rate_fit, solve_spectrum,
                       wkb_leading_error)

__all__ = ["CriterionResult", "run_all", "parameter_checks", "CRITERIA"]


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.criterion}: {self.detail}"


def a1_rate_reproduction() -> list[CriterionResult]:
    out = []
    cases = [
        ("A1a", 1, math.pi / 2, 300, (10, 25), 0.10),
        ("A1b", 2, 0.8, 300, (8, 18), 0.15),
    ]
    for name, k, theta, basis, window, tol in cases:
        params = OscillatorParams(k, theta)
        config = DiscretizationConfig(basis_size=basis, n_max=window[1],
                                      scale=1.0 if k == 1 else None)
        fit = rate_fit(solve_spectrum(params, config), window)
        rate = growth_rate(params)
        gap = abs(fit.slope - rate) / rate
        model_gap = abs(fit.model_slope - rate) / rate
        out.append(CriterionResult(
            name, gap <= tol,
            f"k={k} theta={theta:.4f} window={window}: plain slope "
            f"{fit.slope:.5f} vs rate {rate:.5f} (gap {gap:.1%}, tol "
            f"{tol:.0%}); leading-law slope {fit.model_slope:.5f} "
            f"(gap {model_gap:.1%}), prefactor {fit.prefactor:.3f}"))
    return out


def a2_davies_kuijlaars() -> list[CriterionResult]:
    worst = 0.0
    for theta in (0.2, 0.7, 1.2, 1.5):
        diff = abs(growth_rate(OscillatorParams(1, theta))
                   - davies_kuijlaars_rate(theta))
        worst = max(worst, diff)
    return [CriterionResult("A2", worst <= 1e-10,
                            f"max |quadrature rate - closed form| = {worst:.3e} "
                            f"over theta in {{0.2, 0.7, 1.2, 1.5}} (tol 1e-10)")]


def a3_half_line() -> list[CriterionResult]:
    out = []
    for k, theta, basis in ((1, 1.0, 300), (2, 0.6, 300), (3, 0.5, 400)):
        params = OscillatorParams(k, theta)
        config = DiscretizationConfig(basis_size=basis, n_max=20)
        lam = solve_spectrum(params, config).eigenvalues()
        err = float(np.abs(np.angle(lam) - theta / (k + 1)).max())
        out.append(CriterionResult(
            f"A3(k={k})", err <= 1e-8,
            f"theta={theta}: max |arg lambda_n - theta/(k+1)| = {err:.2e} "
            f"over n <= 20 (tol 1e-8)"))
    return out


def a4_weyl_law() -> list[CriterionResult]:
    params = OscillatorParams(2, 0.0)
    config = DiscretizationConfig(basis_size=300, n_max=20)
    lam = solve_spectrum(params, config).eigenvalues()
    gap10 = abs(abs(lam[9]) / weyl_modulus(9, 2) - 1.0)
    gap20 = abs(abs(lam[19]) / weyl_modulus(19, 2) - 1.0)
    ok = gap10 <= 0.01 and gap20 <= 0.005 and gap20 < gap10
    return [CriterionResult(
        "A4", ok,
        f"k=2 theta=0: Weyl gap {gap10:.2e} at n=10 (tol 1e-2), "
        f"{gap20:.2e} at n=20 (tol 5e-3), decreasing={gap20 < gap10}")]


def a5_saddle_stationarity() -> list[CriterionResult]:
    worst = 0.0
    for k in (1, 2, 3):
        for theta in (0.3, 0.8, 1.2):
            params = OscillatorParams(k, theta)
            worst = max(worst, abs(laplace_phase_derivative(
                params, saddle_point(params))))
    return [CriterionResult(
        "A5", worst <= 1e-10,
        f"max |phase'(saddle)| = {worst:.2e} over k in {{1,2,3}} x "
        f"theta in {{0.3, 0.8, 1.2}} (tol 1e-10)")]


def a6_disk_inclusion() -> list[CriterionResult]:
    params = OscillatorParams(1, math.pi / 2)
    config = DiscretizationConfig(basis_size=200, n_max=10, scale=1.0)
    lam4 = abs(solve_spectrum(params, config).pairs[3].eigenvalue)
    deltas = [1e-3 * lam4, 1e-4 * lam4]
    ratios = [r for _, r in disk_inclusion_check(params, config, 4, deltas)]
    in_band = all(0.85 <= r <= 1.15 for r in ratios)
    improving = abs(ratios[1] - 1.0) <= abs(ratios[0] - 1.0)
    return [CriterionResult(
        "A6", in_band and improving,
        f"k=1 theta=pi/2 n=4: ratios {ratios[0]:.6f} (delta=1e-3|l4|), "
        f"{ratios[1]:.6f} (delta=1e-4|l4|); band [0.85, 1.15], "
        f"improving={improving}")]


def a7_biorthogonality() -> list[CriterionResult]:
    out = []
    for k, theta, basis in ((1, 1.0, 200), (2, 0.6, 300)):
        params = OscillatorParams(k, theta)
        config = DiscretizationConfig(basis_size=basis, n_max=10)
        result = solve_spectrum(params, config)
        cols = []
        for p in result.pairs:
            s = complex(np.sum(p.coeffs * p.coeffs)) ** 0.5
            cols.append(p.coeffs / s)
        w = np.column_stack(cols)
        gram = w.T @ w
        err = float(np.abs(gram - np.eye(10)).max())
        out.append(CriterionResult(
            f"A7(k={k})", err <= 1e-8,
            f"theta={theta}: max |<u_n, conj(u_m)> - delta_nm| = {err:.2e} "
            f"for n,m <= 10 (tol 1e-8)"))
    return out


def a8_semigroup() -> list[CriterionResult]:
    out = []
    params = OscillatorParams(2, math.pi / 4)
    config = DiscretizationConfig(basis_size=200, n_max=25)
    spectrum = solve_spectrum(params, config)
    for t in (0.1, 0.5, 1.0):
        series = term_norms(params, config, t, spectrum=spectrum)
        cls = classify_convergence(series.values[-16:], series.ns[-16:])
        v = np.zeros(config.basis_size, dtype=complex)
        v[0] = 1.0
        err = compare_partial_sum(params, config, t, v, 20, spectrum=spectrum)
        out.append(CriterionResult(
            f"A8i(t={t})", cls.label == "converging" and err <= 1e-6,
            f"k=2 theta=pi/4: classification={cls.label} "
            f"(slope {cls.slope:+.3f}), 20-term error vs expm = {err:.2e} "
            f"(tol 1e-6)"))

    params1 = OscillatorParams(1, math.pi / 2)
    config1 = DiscretizationConfig(basis_size=300, n_max=25, scale=1.0)
    spectrum1 = solve_spectrum(params1, config1)
    paper, term_rate = threshold_candidates(params1)
    t_low = 0.1 * min(paper, term_rate)
    t_high = 3.0 * max(paper, term_rate)
    rep_low = semigroup_report(params1, config1, t_low, window=(10, 25),
                               spectrum=spectrum1)
    rep_high = semigroup_report(params1, config1, t_high, window=(10, 25),
                                spectrum=spectrum1)
    ok = (rep_low.classification == "diverging"
          and rep_high.classification == "converging")
    out.append(CriterionResult(
        "A8ii", ok,
        f"k=1 theta=pi/2: t={t_low:.4f} -> {rep_low.classification}, "
        f"t={t_high:.4f} -> {rep_high.classification}; thresholds: "
        f"closed form {paper:.4f}, term-rate {term_rate:.4f}, empirical "
        f"crossover {rep_low.crossover_empirical:.4f}"))
    return out


def a9_wkb() -> list[CriterionResult]:
    params = OscillatorParams(1, 0.0)
    config = DiscretizationConfig(basis_size=200, n_max=40, scale=1.0)
    spectrum = solve_spectrum(params, config)
    devs = {}
    for n in (20, 40):
        pair = spectrum.pairs[n - 1]
        h = abs(pair.eigenvalue) ** -1.0
        devs[n] = (wkb_leading_error(params, pair, config), h)
    ratio = devs[40][0] / devs[20][0]
    ok = (ratio <= 0.7 and devs[20][0] <= 5 * devs[20][1]
          and devs[40][0] <= 5 * devs[40][1])
    return [CriterionResult(
        "A9", ok,
        f"k=1: deviation {devs[20][0]:.4f} at n=20 (5h={5*devs[20][1]:.3f}), "
        f"{devs[40][0]:.4f} at n=40 (5h={5*devs[40][1]:.3f}), "
        f"ratio {ratio:.3f} (tol 0.7)")]


def a10_selfadjoint() -> list[CriterionResult]:
    out = []
    for k, basis in ((1, 64), (2, 200), (3, 300)):
        params = OscillatorParams(k, 0.0)
        config = DiscretizationConfig(basis_size=basis, n_max=15)
        kappas = solve_spectrum(params, config).kappas()
        err = float(np.abs(kappas - 1.0).max())
        out.append(CriterionResult(
            f"A10(k={k})", err <= 1e-12,
            f"theta=0: max |kappa_n - 1| = {err:.2e} for n <= 15 (tol 1e-12)"))
    return out


CRITERIA = [
    a1_rate_reproduction,
    a2_davies_kuijlaars,
    a3_half_line,
    a4_weyl_law,
    a5_saddle_stationarity,
    a6_disk_inclusion,
    a7_biorthogonality,
    a8_semigroup,
    a9_wkb,
    a10_selfadjoint,
]


def run_all(printer=print) -> list[CriterionResult]:
    """Run every acceptance criterion, printing one pass/fail line each."""
    results = []
    for criterion in CRITERIA:
        for result in criterion():
            results.append(result)
            if printer is not None:
                printer(result.line())
    return results


def parameter_checks(params: OscillatorParams,
                     config: DiscretizationConfig,
                     printer=print) -> list[CriterionResult]:
    """Sanity checks bound to one (k, theta): residuals, half-line,
    parity, biorthogonality, kappa floor, and kappa = 1 when selfadjoint."""
    results = []
    spectrum = solve_spectrum(params, config)

    res = float(spectrum.residuals.max())
    results.append(CriterionResult(
        "residuals", res <= 1e-8, f"max Galerkin residual {res:.2e} (tol 1e-8)"))

    lam = spectrum.eigenvalues()
    arg_err = float(np.abs(np.angle(lam) - params.half_ray_angle).max()) \
        if params.theta != 0 else float(np.abs(lam.imag).max())
    results.append(CriterionResult(
        "half-line", arg_err <= 1e-8,
        f"max eigenvalue angle deviation {arg_err:.2e} (tol 1e-8)"))

    parity_ok = True
    for p in spectrum.pairs:
        expected = (p.index - 1) % 2  # n-th pair uses indices of parity n-1
        mass = float(np.abs(p.coeffs[(1 - expected)::2]).max()
                     if len(p.coeffs) > 1 else 0.0)
        parity_ok = parity_ok and mass == 0.0
    results.append(CriterionResult(
        "parity", parity_ok, "coefficient vectors have exact parity"))

    m = min(10, config.n_max)
    cols = []
    for p in spectrum.pairs[:m]:
        s = complex(np.sum(p.coeffs * p.coeffs)) ** 0.5
        cols.append(p.coeffs / s)
    gram = np.column_stack(cols).T @ np.column_stack(cols)
    bio = float(np.abs(gram - np.eye(m)).max())
    results.append(CriterionResult(
        "biorthogonality", bio <= 1e-8,
        f"max |<u_n, conj(u_m)> - delta_nm| = {bio:.2e} for n,m <= {m}"))

    kappas = spectrum.kappas()
    results.append(CriterionResult(
        "kappa-floor", bool(np.all(kappas >= 1.0 - 1e-12)),
        f"min kappa = {kappas.min():.12f} (>= 1 required)"))

    if params.theta == 0.0:
        dev = float(np.abs(kappas - 1.0).max())
        results.append(CriterionResult(
            "selfadjoint-kappa", dev <= 1e-12,
            f"max |kappa - 1| = {dev:.2e} (tol 1e-12)"))

    if printer is not None:
        for r in results:
            printer(r.line())
    return results
