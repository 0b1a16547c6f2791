"""Resolvent-norm grids and the eigenvalue-disk law of the pseudospectra.

The resolvent norm at z is 1/sigma_min(M - zI) on the Galerkin matrix M.
Near a simple eigenvalue the resolvent is dominated by its rank-1 pole,
so resolvent_norm * distance approaches the instability index kappa; the
``disk_inclusion_check`` measures that ratio.  Nodes exactly on (or
numerically indistinguishable from) the spectrum get an infinity
sentinel.

Grid evaluation is deterministic: nodes are independent, rows may be
computed in parallel (capped by the SPECTRAL_INSTABILITY_THREADS
environment variable) and each row is filled sequentially so that the
inverse-iteration path can reuse the neighboring node's singular vector.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import json
import math
import os

import numpy as np
import scipy.linalg

from .asymptotics import OscillatorParams
from .errors import ConfigError, DomainError
from .spectral import DiscretizationConfig, build_matrix, solve_spectrum

__all__ = [
    "GridSpec",
    "ResolventGrid",
    "resolvent_norm",
    "resolvent_grid",
    "disk_inclusion_check",
    "write_grid_csv",
    "read_grid_csv",
    "write_grid_json",
    "read_grid_json",
]

SINGULARITY_SENTINEL_FACTOR = 1e-14
FULL_SVD_MAX_SIZE = 300
GRID_NODE_BUDGET = 10 ** 6


@dataclass(frozen=True)
class GridSpec:
    """Rectangular complex region and its resolution."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ConfigError("grid region must have positive extent")
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("grid resolution must be positive")
        if self.nx * self.ny > GRID_NODE_BUDGET:
            raise ConfigError(
                f"grid has {self.nx * self.ny} nodes, exceeding the "
                f"{GRID_NODE_BUDGET} budget")

    def re_points(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    def im_points(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)


@dataclass(frozen=True)
class ResolventGrid:
    spec: GridSpec
    values: np.ndarray  # shape (ny, nx), +inf at (numerical) eigenvalues
    params: OscillatorParams
    config: DiscretizationConfig
    metadata: dict = field(default_factory=dict)


def _sigma_min_svd(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def _sigma_min_inverse_iteration(a, seed, rtol=1e-6, max_iter=200):
    """Smallest singular value of ``a`` by inverse iteration on a*a.

    Returns (sigma_min, right singular vector) for grid continuation.
    Falls back to the sentinel path by returning 0 when the factorization
    is singular.
    """
    n = a.shape[0]
    try:
        lu = scipy.linalg.lu_factor(a, check_finite=False)
    except scipy.linalg.LinAlgError:
        return 0.0, seed
    v = seed / np.linalg.norm(seed)
    sigma = math.inf
    for _ in range(max_iter):
        try:
            w = scipy.linalg.lu_solve(lu, v, trans=2, check_finite=False)
            w = scipy.linalg.lu_solve(lu, w, trans=0, check_finite=False)
        except (scipy.linalg.LinAlgError, FloatingPointError):
            return 0.0, v
        norm_w = np.linalg.norm(w)
        if not np.isfinite(norm_w) or norm_w == 0.0:
            return 0.0, v
        new_sigma = norm_w ** -0.5
        v = w / norm_w
        if abs(new_sigma - sigma) <= rtol * new_sigma:
            return new_sigma, v
        sigma = new_sigma
    return sigma, v


def resolvent_norm(matrix: np.ndarray, z: complex,
                   seed: np.ndarray | None = None) -> float:
    """1/sigma_min(matrix - z*I); math.inf when z is numerically on the
    spectrum (sigma_min below 1e-14 of the matrix norm).

    Full SVD up to size 300; beyond that, LU-based inverse iteration on
    the normal equations (seeded by ``seed`` when given, e.g. from the
    neighboring grid node), relative tolerance 1e-6.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError("resolvent_norm needs a square matrix")
    n = matrix.shape[0]
    shifted = matrix - z * np.eye(n)
    scale = float(np.linalg.norm(matrix, "fro"))
    if n <= FULL_SVD_MAX_SIZE:
        smin = _sigma_min_svd(shifted)
    else:
        if seed is None:
            seed = np.full(n, 1.0 + 0j) / math.sqrt(n)
        smin, _ = _sigma_min_inverse_iteration(shifted, seed)
    if smin < SINGULARITY_SENTINEL_FACTOR * scale:
        return math.inf
    return 1.0 / smin


def _grid_row(matrix, scale, zs, use_svd):
    out = np.empty(len(zs))
    n = matrix.shape[0]
    eye = np.eye(n)
    seed = np.full(n, 1.0 + 0j) / math.sqrt(n)
    for i, z in enumerate(zs):
        shifted = matrix - z * eye
        if use_svd:
            smin = _sigma_min_svd(shifted)
        else:
            smin, vec = _sigma_min_inverse_iteration(shifted, seed)
            seed = vec  # continuation to the next node of the row
        out[i] = math.inf if smin < SINGULARITY_SENTINEL_FACTOR * scale \
            else 1.0 / smin
    return out


def _thread_cap() -> int:
    env = os.environ.get("SPECTRAL_INSTABILITY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(
                f"SPECTRAL_INSTABILITY_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def resolvent_grid(params: OscillatorParams, config: DiscretizationConfig,
                   spec: GridSpec) -> ResolventGrid:
    """Resolvent norms of the Galerkin matrix over every node of ``spec``.

    Deterministic (bit-identical across runs and thread counts).  If part
    of the region lies beyond 0.8 * |lambda_{n_max}| the result carries a
    truncation warning in its metadata: Galerkin pseudospectra are not
    trustworthy near the truncation edge.
    """
    matrix = build_matrix(params, config)
    scale = float(np.linalg.norm(matrix, "fro"))
    use_svd = matrix.shape[0] <= FULL_SVD_MAX_SIZE
    res = solve_spectrum(params, config)
    trust_radius = 0.8 * abs(res.pairs[-1].eigenvalue)
    re = spec.re_points()
    im = spec.im_points()
    corners = [complex(r, i) for r in (spec.re_min, spec.re_max)
               for i in (spec.im_min, spec.im_max)]
    metadata = {"trust_radius": trust_radius}
    if max(abs(c) for c in corners) > trust_radius:
        metadata["warning"] = (
            f"grid extends beyond the trusted window |z| <= "
            f"{trust_radius:.6g}; values there reflect the truncated "
            f"matrix, not the operator")
    rows = [re + 1j * imv for imv in im]
    workers = min(_thread_cap(), spec.ny)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(
                lambda zs: _grid_row(matrix, scale, zs, use_svd), rows))
    else:
        values = [_grid_row(matrix, scale, zs, use_svd) for zs in rows]
    return ResolventGrid(spec=spec, values=np.vstack(values), params=params,
                         config=config, metadata=metadata)


def disk_inclusion_check(params: OscillatorParams, config: DiscretizationConfig,
                         n: int, deltas) -> list[tuple[float, float]]:
    """Ratios resolvent_norm(lambda_n + delta*dir) * delta / kappa_n.

    ``dir`` is the unit direction perpendicular to the half-line carrying
    the spectrum (the pseudospectral disks are isotropic to second order,
    so one direction suffices).  The ratio tends to 1 as delta -> 0 when
    the disk law holds.  Deltas beyond half the spectral gap at lambda_n
    are rejected.
    """
    result = solve_spectrum(params, config)
    if not (1 <= n <= config.n_max):
        raise DomainError(f"index {n} outside the trusted window")
    pair = result.pairs[n - 1]
    lam = pair.eigenvalue
    others = [p.eigenvalue for p in result.pairs if p.index != n]
    gap = min(abs(lam - mu) for mu in others) if others else math.inf
    direction = 1j * np.exp(1j * params.half_ray_angle)
    matrix = build_matrix(params, config)
    out = []
    for delta in deltas:
        if not (0 < delta <= 0.5 * gap):
            raise DomainError(
                f"delta {delta!r} exceeds half the spectral gap {gap:.3e} "
                f"at index {n}")
        z = lam + delta * direction
        out.append((float(delta), resolvent_norm(matrix, z) * delta / pair.kappa))
    return out


# ----------------------------------------------------------------------
# Export / import
# ----------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_grid_csv(grid: ResolventGrid, path) -> None:
    """Rows `re,im,resolvent_norm`, row-major over (im, re), 17 digits."""
    re = grid.spec.re_points()
    im = grid.spec.im_points()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im", "resolvent_norm"])
        for iy in range(grid.spec.ny):
            for ix in range(grid.spec.nx):
                writer.writerow([_fmt(re[ix]), _fmt(im[iy]),
                                 _fmt(grid.values[iy, ix])])


def read_grid_csv(path) -> np.ndarray:
    """Read back a grid CSV as an array of (re, im, value) rows."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["re", "im", "resolvent_norm"]:
            raise DomainError(f"unexpected grid CSV header: {header!r}")
        rows = [[float(cell) for cell in row] for row in reader]
    return np.array(rows)


def write_grid_json(grid: ResolventGrid, path) -> None:
    payload = {
        "spec": {
            "re_min": grid.spec.re_min, "re_max": grid.spec.re_max,
            "im_min": grid.spec.im_min, "im_max": grid.spec.im_max,
            "nx": grid.spec.nx, "ny": grid.spec.ny,
        },
        "params": {"k": grid.params.k, "theta": grid.params.theta},
        "config": {
            "basis_size": grid.config.basis_size,
            "n_max": grid.config.n_max,
            "scale": grid.config.effective_scale(grid.params.k),
        },
        "metadata": grid.metadata,
        "values": [None if math.isinf(v) else v
                   for v in grid.values.ravel().tolist()],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def read_grid_json(path) -> ResolventGrid:
    with open(path) as fh:
        payload = json.load(fh)
    spec = GridSpec(**payload["spec"])
    values = np.array([math.inf if v is None else v
                       for v in payload["values"]]).reshape(spec.ny, spec.nx)
    params = OscillatorParams(**payload["params"])
    config = DiscretizationConfig(
        basis_size=payload["config"]["basis_size"],
        n_max=payload["config"]["n_max"],
        scale=payload["config"]["scale"])
    return ResolventGrid(spec=spec, values=values, params=params,
                         config=config, metadata=payload.get("metadata", {}))
