"""Spectral instability of rotated anharmonic oscillators.

Numerical study of the non-selfadjoint operators

    -d^2/dx^2 + e^{i*theta} x^{2k}     on L^2(R),
    k >= 1,  |theta| < (k+1)*pi/(2k),

whose eigenvalues sit on the half-line of argument theta/(k+1) but whose
spectral projections grow exponentially in norm.  The package computes

* closed-form asymptotic constants (growth rate, saddle point, Laplace
  prefactor, Weyl law, semigroup threshold)   -> :mod:`asymptotics`
* spectra, eigenfunctions and instability indices via a Hermite-Galerkin
  discretization                              -> :mod:`spectral`
* resolvent-norm grids and the pseudospectral disk law near eigenvalues
                                              -> :mod:`pseudospectra`
* per-term behavior of the projection series of e^{-tA} against a
  matrix-exponential oracle                   -> :mod:`semigroup`
* special-function / quadrature primitives    -> :mod:`specfun`

The command line front end lives in :mod:`spectral_instability.cli`
(installed as ``spectral-instability``), and the acceptance suite both as
pytest tests and as the ``verify`` subcommand.
"""

from .asymptotics import (
    AsymptoticReport,
    OscillatorParams,
    asymptotic_report,
    davies_kuijlaars_rate,
    growth_rate,
    laplace_phase,
    laplace_phase_derivative,
    laplace_prefactor,
    saddle_point,
    semiclassical_parameter,
    semigroup_threshold,
    weyl_coefficient,
    weyl_modulus,
)
from .errors import (
    AccuracyError,
    BranchCutError,
    ConfigError,
    ConvergenceError,
    DomainError,
    RefusalError,
    SpectralInstabilityError,
)
from .pseudospectra import (
    GridSpec,
    ResolventGrid,
    disk_inclusion_check,
    resolvent_grid,
    resolvent_norm,
)
from .semigroup import (
    SemigroupSeriesReport,
    classify_convergence,
    compare_partial_sum,
    empirical_crossover,
    semigroup_report,
    term_norms,
    threshold_candidates,
)
from .specfun import (
    BranchedSqrtState,
    QuadratureConfig,
    airy_ai,
    branched_sqrt,
    gamma_real,
    integrate_line,
)
from .spectral import (
    DiscretizationConfig,
    Eigenpair,
    RateFit,
    SpectrumResult,
    build_matrix,
    evaluate_eigenfunction,
    kappa_from_coeffs,
    kappa_spectrum,
    rate_fit,
    solve_spectrum,
    wkb_action,
    wkb_leading_error,
)

__version__ = "0.1.0"
