"""Friedrichs bump mollifiers and regularized singular potentials.

The bump phi(x) = c * exp(1/(x^2 - 1)) on |x| < 1 (zero outside) is scaled to
unit mass; the net phi_eps(x) = phi(x/eps)/eps concentrates it while keeping
the mass.  Delta-like potentials are modeled by weighted scaled bumps, the
squared-delta kind by the square of the scaled bump.
"""

from dataclasses import dataclass
from functools import cache

import numpy as np
from scipy.integrate import quad

from .grid import Grid, RealField

__all__ = [
    "POTENTIAL_KINDS",
    "REGULAR_KINDS",
    "SINGULAR_KINDS",
    "HARMONIC_CENTER",
    "MollifierSpec",
    "PotentialSpec",
    "RegularizedPotential",
    "bump_normalization",
    "friedrichs_mollifier",
    "scaled_mollifier",
    "mollify_samples",
    "regularize_potential",
    "sup_norm",
    "moderateness_exponent",
]

REGULAR_KINDS = ("zero", "constant_one", "harmonic_shifted")
SINGULAR_KINDS = ("delta", "delta_squared")
POTENTIAL_KINDS = REGULAR_KINDS + SINGULAR_KINDS

HARMONIC_CENTER = 5.0


@cache
def bump_normalization() -> float:
    """Constant c giving unit mass to c*exp(1/(x^2-1)); about 2.2523."""
    raw, _ = quad(lambda t: np.exp(1.0 / (t * t - 1.0)), -1.0, 1.0,
                  epsabs=1e-13, epsrel=1e-13)
    c = 1.0 / raw
    # guard against a silently broken quadrature backend
    if abs(c - 2.2523) > 5e-4:
        raise RuntimeError(f"bump normalization came out wrong: {c}")
    return c


def friedrichs_mollifier(y, spec=None):
    """Pointwise bump c*exp(1/(y^2-1)) for |y| < 1, zero elsewhere."""
    c = bump_normalization() if spec is None else spec.normalization_constant
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    inside = np.abs(y) < 1.0
    out[inside] = c * np.exp(1.0 / (y[inside] ** 2 - 1.0))
    return out


@dataclass(frozen=True)
class MollifierSpec:
    """The bump family in use and its normalization constant."""

    kind: str = "standard_bump"
    normalization_constant: float = 0.0

    def __post_init__(self):
        if self.kind != "standard_bump":
            raise ValueError(f"unknown mollifier kind: {self.kind!r}")
        if self.normalization_constant == 0.0:
            object.__setattr__(self, "normalization_constant", bump_normalization())


def scaled_mollifier(grid: Grid, epsilon: float, center: float = 0.0,
                     spec=None) -> RealField:
    """Samples of phi_eps(x - center) = phi((x - center)/eps)/eps on the grid."""
    _check_epsilon(epsilon)
    _check_support(grid, center, epsilon)
    values = friedrichs_mollifier((grid.nodes - center) / epsilon, spec) / epsilon
    return RealField(grid, values)


def mollify_samples(values, grid: Grid, epsilon: float):
    """Discrete mollification: convolve samples with the scaled bump kernel.

    The kernel is renormalized per node over the in-range window (zero padding
    outside the array), so constants are reproduced exactly everywhere and
    nonnegativity is preserved.
    """
    _check_epsilon(epsilon)
    values = np.asarray(values)
    if values.shape != (grid.n,):
        raise ValueError(f"expected {grid.n} samples, got shape {values.shape}")
    half = int(np.floor(epsilon / grid.dx))
    offsets = grid.dx * np.arange(-half, half + 1)
    kernel = friedrichs_mollifier(offsets / epsilon)
    smoothed = np.convolve(values, kernel, mode="same")
    window = np.convolve(np.ones(grid.n), kernel, mode="same")
    return smoothed / window


@dataclass(frozen=True)
class PotentialSpec:
    """What potential to run: a regular profile or a singular model.

    site and weight only matter for the singular kinds; the harmonic profile
    is pinned to the packet center.
    """

    kind: str
    site: float = 3.0
    weight: float = 1.0 / 30.0

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValueError(
                f"unknown potential kind {self.kind!r}; expected one of {POTENTIAL_KINDS}"
            )
        if not np.isfinite(self.site):
            raise ValueError("site must be finite")
        if not (np.isfinite(self.weight) and self.weight > 0):
            raise ValueError("weight must be a positive real")

    @property
    def is_singular(self) -> bool:
        return self.kind in SINGULAR_KINDS


@dataclass(frozen=True)
class RegularizedPotential:
    """A potential sampled on a grid at a fixed regularization width."""

    spec: PotentialSpec
    epsilon: float
    field: RealField

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        if np.min(self.field.values) < 0.0:
            raise ValueError("potential samples must be nonnegative")


def regularize_potential(spec: PotentialSpec, grid: Grid, epsilon: float,
                         mollify_regular: bool = False,
                         mollifier=None) -> RegularizedPotential:
    """Sample the potential on the grid.

    Regular kinds are sampled exactly unless mollify_regular is set, in which
    case they are smoothed by discrete convolution with the scaled bump.
    Singular kinds are weighted scaled bumps (delta) or their square
    (delta_squared); their support must sit inside the domain.
    """
    _check_epsilon(epsilon)
    x = grid.nodes
    if spec.kind == "zero":
        values = np.zeros(grid.n)
    elif spec.kind == "constant_one":
        values = np.ones(grid.n)
    elif spec.kind == "harmonic_shifted":
        values = (x - HARMONIC_CENTER) ** 2
    elif spec.kind == "delta":
        _check_support(grid, spec.site, epsilon)
        values = spec.weight * friedrichs_mollifier((x - spec.site) / epsilon, mollifier) / epsilon
    else:  # delta_squared
        _check_support(grid, spec.site, epsilon)
        scaled = friedrichs_mollifier((x - spec.site) / epsilon, mollifier) / epsilon
        values = spec.weight * scaled**2
    if mollify_regular and spec.kind in REGULAR_KINDS:
        values = mollify_samples(values, grid, epsilon)
    return RegularizedPotential(spec, epsilon, RealField(grid, values))


def sup_norm(field) -> float:
    """Largest sample magnitude."""
    return float(np.max(np.abs(field.values)))


def moderateness_exponent(epsilons, norms):
    """Least-squares slope N of log(norm) against log(1/eps).

    Returns (slope, rms_residual).  A slope N means the norms grow like
    eps^(-N).  Raises on nonpositive norms; callers should treat an all-zero
    net as negligible at machine scale instead of fitting it.
    """
    eps = np.asarray(epsilons, dtype=float)
    nrm = np.asarray(norms, dtype=float)
    if eps.shape != nrm.shape or eps.ndim != 1 or eps.size < 3:
        raise ValueError("need three or more (epsilon, norm) samples")
    if np.any(eps <= 0) or np.unique(eps).size != eps.size:
        raise ValueError("epsilons must be positive and distinct")
    if np.any(nrm <= 0):
        raise ValueError("norms must be positive for a log-log fit")
    t = np.log(1.0 / eps)
    y = np.log(nrm)
    slope, intercept = np.polyfit(t, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * t + intercept)) ** 2)))
    return float(slope), residual


def _check_epsilon(epsilon: float) -> None:
    if not (np.isfinite(epsilon) and 0 < epsilon <= 1):
        raise ValueError(f"regularization width must lie in (0, 1], got {epsilon}")


def _check_support(grid: Grid, center: float, epsilon: float) -> None:
    if center - epsilon < grid.x_min or center + epsilon > grid.x_max:
        raise ValueError(
            f"bump support [{center - epsilon}, {center + epsilon}] falls outside "
            f"the domain [{grid.x_min}, {grid.x_max})"
        )
