"""Spherical functions, spherical transforms, Plancherel densities and heat
kernels on Euclidean space and the hyperbolic disk.

Conventions
-----------
* Euclidean dual: radial frequency zeta >= 0 with character exp(-2 pi i <x, .>),
  so the d=2 spherical function is J_0(2 pi zeta s) and the radial Plancherel
  density is Vol(S^{d-1}) zeta^{d-1}.
* Hyperbolic disk: principal parameter lam >= 0 with spherical function
  omega_lam(s) = (1/pi) int_0^pi (cosh s - sinh s cos t)^(-1/2 - i lam) dt,
  complementary parameter s0 in (0, 1/2] reached as lam = i s0.  Radial
  volume element sinh(s)/2 (ball mass sinh(R/2)^2).  The radial Plancherel
  density paired with THIS normalization is

      rho(lam) = 2 lam tanh(pi lam),

  i.e. the classical Mehler-Fock weight rescaled to the sinh(s)/2 element.
  This calibration is pinned by the Plancherel-identity residual of the
  Gaussian test profile (exact isometry to ~1e-13); see the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import geometry, specfun
from .errors import DomainError, NumericError, ValidationError
from .geometry import Space

__all__ = [
    "SpectralParameter",
    "principal",
    "complementary",
    "RadialFunction",
    "HeatTime",
    "ball_indicator",
    "heat_profile",
    "gaussian_profile",
    "spherical_function",
    "plancherel_density",
    "plancherel_interval_mass",
    "spherical_transform",
    "ball_indicator_transform",
    "heat_kernel_spatial",
    "heat_kernel_transform",
    "plancherel_identity_residual",
    "functional_equation_residual",
]

PRINCIPAL = "principal"
COMPLEMENTARY = "complementary"


@dataclass(frozen=True)
class SpectralParameter:
    """Point of the positive-definite spherical dual.

    Euclidean spaces only carry principal parameters (zeta >= 0).  The disk
    has the principal branch lam >= 0 and the complementary segment
    s0 in (0, 1/2].
    """

    space: Space
    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in (PRINCIPAL, COMPLEMENTARY):
            raise ValidationError(f"unknown spectral parameter kind {self.kind!r}")
        if self.kind == PRINCIPAL:
            if self.value < 0:
                raise ValidationError("principal parameter must be >= 0")
        else:
            if not self.space.is_hyperbolic:
                raise ValidationError("complementary parameters exist only on the disk")
            if not (0.0 < self.value <= 0.5):
                raise ValidationError("complementary parameter must lie in (0, 1/2]")

    @property
    def is_principal(self) -> bool:
        return self.kind == PRINCIPAL


def principal(space: Space, value: float) -> SpectralParameter:
    return SpectralParameter(space, PRINCIPAL, float(value))


def complementary(s0: float) -> SpectralParameter:
    return SpectralParameter(geometry.hyperbolic_disk(), COMPLEMENTARY, float(s0))


@dataclass(frozen=True)
class HeatTime:
    tau: float

    def __post_init__(self):
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ValidationError("heat time must be positive and finite")


@dataclass(frozen=True)
class RadialFunction:
    """Radial test function given by its profile s >= 0 -> value.

    ``support_radius`` is the compact support radius, or None for a
    rapidly-decaying profile.  ``profile`` must accept numpy arrays; the
    quadrature engines sample it directly so no grid is ever stored.
    ``kind``/``param`` are structural hints ("ball", "heat", "gaussian",
    "generic") that enable exact tail handling where available, and
    ``suggested_radius`` is an effective integration radius for
    rapidly-decaying profiles.
    """

    profile: Callable
    support_radius: Optional[float]
    description: str = ""
    kind: str = "generic"
    param: float = 0.0
    suggested_radius: Optional[float] = None
    suggested_cutoff: Optional[float] = None  # frequency beyond which f_hat is dust


def ball_indicator(space: Space, r: float) -> RadialFunction:
    """Indicator of the centered geodesic ball of radius r."""
    if r <= 0:
        raise ValidationError("ball radius must be positive")

    def prof(s, _r=float(r)):
        return np.where(np.asarray(s, dtype=float) <= _r, 1.0, 0.0)

    return RadialFunction(prof, float(r), f"indicator of B_{r}", kind="ball", param=float(r))


def heat_profile(space: Space, tau: float) -> RadialFunction:
    """Radial profile of the heat kernel at time tau (rapid decay)."""
    t = HeatTime(float(tau))

    def prof(s):
        return heat_kernel_spatial(space, t, s)

    # integrate while h(s) vol'(s) matters: exp(-s^2/4 tau + s/2) above dust
    s_star = t.tau + math.sqrt(t.tau**2 + 170.0 * t.tau) + 1.0
    if space.is_euclidean:
        cut = 0.75 / math.sqrt(t.tau) + 1.5  # exp(-8 pi^2 tau zeta^2) below 1e-16
    else:
        cut = math.sqrt(20.0 / t.tau) + 4.0  # exp(-2 tau lam^2) below 1e-16
    return RadialFunction(
        prof,
        None,
        f"heat kernel profile tau={tau}",
        kind="heat",
        param=float(tau),
        suggested_radius=s_star,
        suggested_cutoff=cut,
    )


def gaussian_profile(space: Space) -> RadialFunction:
    """Gaussian test profile: exp(-pi s^2) on R^d (self-dual for d=2),
    exp(-s^2) on the disk."""
    if space.is_euclidean:
        prof = lambda s: np.exp(-math.pi * np.asarray(s, dtype=float) ** 2)
        s_star = math.sqrt(45.0 / math.pi) + 1.0
        cut = 4.0  # f_hat = exp(-pi zeta^2)
    else:
        prof = lambda s: np.exp(-np.asarray(s, dtype=float) ** 2)
        s_star = 8.5  # exp(-s^2 + s) dead well before this against sinh growth
        cut = 10.0  # transform decays like exp(-lam^2/4)
    return RadialFunction(
        prof, None, "gaussian profile", kind="gaussian", suggested_radius=s_star, suggested_cutoff=cut
    )


# ---------------------------------------------------------------------------
# Gauss-Legendre machinery

_ALLOWED_NODES = (64, 96, 128, 192, 256, 384, 512, 768, 1024, 1536, 2048, 3072, 4096, 6144, 8192)


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _gl(a: float, b: float, n: int):
    """Gauss-Legendre rule on [a, b]; composite 512-node panels above 1024
    nodes (large single rules are prohibitively slow to generate)."""
    if n <= 1024:
        x, w = _leggauss(n)
        return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w
    panels = int(math.ceil(n / 512.0))
    x0, w0 = _leggauss(512)
    edges = np.linspace(a, b, panels + 1)
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        xs.append(0.5 * (hi - lo) * x0 + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w0)
    return np.concatenate(xs), np.concatenate(ws)


def _nodes_for_phase(phase: float, base: int = 96) -> int:
    target = base + 3.4 * max(phase, 0.0)
    for n in _ALLOWED_NODES:
        if n >= target:
            return n
    return _ALLOWED_NODES[-1]


def _next_nodes(n: int) -> int:
    for m in _ALLOWED_NODES:
        if m > n:
            return m
    return n


# ---------------------------------------------------------------------------
# Spherical functions

def _disk_exponent(p: SpectralParameter):
    # principal lam: u^(-1/2) cos(lam ln u); complementary s0: u^(s0 - 1/2)
    if p.is_principal:
        return p.value, None
    return None, p.value


# Two representations of the disk spherical function are used:
#   * the Legendre cosine-power integral
#       omega(s) = (1/pi) int_0^pi (cosh s - sinh s cos t)^(-1/2 - i lam) dt
#     whose integrand has dynamic range e^s -- fine for s <= 6;
#   * the Mehler-Dirichlet cosine form
#       omega(s) = (sqrt 2/pi) int_0^s cos(lam v)/sqrt(cosh s - cosh v) dv
#     whose integrand has uniform magnitude ~ e^(-s/2), used for s > 4 where
#     the first form starts losing digits to cancellation.
_OMEGA_SPLIT_S = 4.0


def _cosh_diff(a, b):
    # cosh a - cosh b = 2 sinh((a+b)/2) sinh((a-b)/2), stable for a ~ b
    return 2.0 * np.sinh(0.5 * (a + b)) * np.sinh(0.5 * (a - b))


def _omega_legendre_block(lam, s0, s_block, t, wt):
    u = np.cosh(s_block)[:, None] - np.sinh(s_block)[:, None] * np.cos(t)[None, :]
    if s0 is None:
        vals = u ** (-0.5) * np.cos(lam * np.log(u))
    else:
        vals = u ** (s0 - 0.5)
    return (vals @ wt) / math.pi


def _omega_md_block(lam, s0, s_block, y, wy):
    # v = s (1 - y^2): shared y-grid across radii, endpoint sqrt removed
    s_col = s_block[:, None]
    v = s_col * (1.0 - y * y)[None, :]
    den = np.sqrt(_cosh_diff(s_col * np.ones_like(v), v))
    amp = 2.0 * s_col * y[None, :] / den
    if s0 is None:
        osc = np.cos(lam * v)
    else:
        osc = np.cosh(s0 * v)
    return math.sqrt(2.0) / math.pi * ((amp * osc) @ wy)


def _omega_disk_s_array(p: SpectralParameter, s_arr, n_nodes: Optional[int] = None):
    """omega_p over an array of radii (disk)."""
    s = np.asarray(s_arr, dtype=float)
    lam, s0 = _disk_exponent(p)
    out = np.empty_like(s)
    small = (s > 0.0) & (s <= _OMEGA_SPLIT_S)
    large = s > _OMEGA_SPLIT_S
    if np.any(small):
        sb = s[small]
        smax = float(np.max(sb))
        n = n_nodes or _nodes_for_phase(2.0 * (lam or 0.0) * smax)
        t, wt = _gl(0.0, math.pi, n)
        res = np.empty(sb.size)
        block = max(1, int(4e6 // max(len(t), 1)))
        for i in range(0, sb.size, block):
            res[i : i + block] = _omega_legendre_block(lam, s0, sb[i : i + block], t, wt)
        out[small] = res
    if np.any(large):
        sb = s[large]
        smax = float(np.max(sb))
        n = n_nodes or _nodes_for_phase((lam or 0.0) * smax)
        y, wy = _gl(0.0, 1.0, n)
        res = np.empty(sb.size)
        block = max(1, int(4e6 // max(len(y), 1)))
        for i in range(0, sb.size, block):
            res[i : i + block] = _omega_md_block(lam, s0, sb[i : i + block], y, wy)
        out[large] = res
    out[s == 0.0] = 1.0
    return out


def _omega_disk_lam_array(lams, s: float, n_nodes: Optional[int] = None):
    """omega over an array of principal parameters at fixed radius (disk)."""
    lams = np.asarray(lams, dtype=float)
    if s == 0.0:
        return np.ones_like(lams)
    lmax = float(np.max(np.abs(lams)))
    out = np.empty_like(lams)
    if s <= _OMEGA_SPLIT_S:
        n = n_nodes or _nodes_for_phase(2.0 * lmax * s)
        t, wt = _gl(0.0, math.pi, n)
        u = math.cosh(s) - math.sinh(s) * np.cos(t)
        lu = np.log(u)
        amp = u ** (-0.5) * wt
        block = max(1, int(4e6 // max(n, 1)))
        for i in range(0, lams.size, block):
            out[i : i + block] = np.cos(np.outer(lams[i : i + block], lu)) @ amp
        return out / math.pi
    n = n_nodes or _nodes_for_phase(lmax * s)
    y, wy = _gl(0.0, 1.0, n)
    v = s * (1.0 - y * y)
    den = np.sqrt(_cosh_diff(np.full_like(v, s), v))
    amp = 2.0 * s * y / den * wy
    block = max(1, int(4e6 // max(n, 1)))
    for i in range(0, lams.size, block):
        out[i : i + block] = np.cos(np.outer(lams[i : i + block], v)) @ amp
    return math.sqrt(2.0) / math.pi * out


def _omega_euclid(d: int, zeta: float, s_arr):
    """Normalized radial plane-wave average on R^d."""
    s = np.asarray(s_arr, dtype=float)
    x = 2.0 * math.pi * zeta * s
    if zeta == 0.0:
        return np.ones_like(s)
    if d == 1:
        return np.cos(x)
    if d == 2:
        j0, _ = specfun.bessel_j01_grid(x)
        return j0
    if d == 3:
        out = np.ones_like(x)
        nz = x != 0
        out[nz] = np.sin(x[nz]) / x[nz]
        return out
    if d == 4:
        _, j1 = specfun.bessel_j01_grid(x)
        out = np.ones_like(x)
        nz = x != 0
        out[nz] = 2.0 * j1[nz] / x[nz]
        return out
    raise ValidationError("euclidean dimension must be 1..4")


def spherical_function(space: Space, p: SpectralParameter, s: float) -> float:
    """Value omega_p(s) of the spherical function at geodesic radius s.

    Always 1 at s = 0; bounded by 1 in absolute value on the
    positive-definite dual.
    """
    if s < 0:
        raise DomainError("radius must be >= 0")
    if space.is_euclidean:
        if not p.is_principal:
            raise ValidationError("euclidean spaces have no complementary parameters")
        return float(_omega_euclid(space.dim, p.value, np.asarray([s]))[0])
    val = _omega_disk_s_array(p, np.asarray([s]))
    return float(val[0])


# ---------------------------------------------------------------------------
# Plancherel measure

def _surface_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def plancherel_density(space: Space, p: SpectralParameter) -> float:
    """Radial density of the spherical Plancherel measure.

    Vol(S^{d-1}) zeta^{d-1} on R^d; 2 lam tanh(pi lam) on the disk (see the
    module docstring for how this constant is calibrated).  Zero on the
    complementary segment.
    """
    if not p.is_principal:
        return 0.0
    if space.is_euclidean:
        return _surface_area(space.dim) * p.value ** (space.dim - 1)
    lam = p.value
    return 2.0 * lam * math.tanh(math.pi * lam)


def _plancherel_density_grid(space: Space, vals):
    vals = np.asarray(vals, dtype=float)
    if space.is_euclidean:
        return _surface_area(space.dim) * vals ** (space.dim - 1)
    return 2.0 * vals * np.tanh(math.pi * vals)


def plancherel_interval_mass(space: Space, eps: float) -> float:
    """sigma_P((0, eps]) in the radial coordinate."""
    if eps <= 0:
        return 0.0
    if space.is_euclidean:
        d = space.dim
        return _surface_area(d) * eps**d / d
    if eps < 0.2:
        # series of int_0^eps 2 lam tanh(pi lam) dlam
        e3 = eps**3
        return (2 * math.pi / 3) * e3 - (2 * math.pi**3 / 15) * eps**5 + (4 * math.pi**5 / 105) * eps**7
    lams, w = _gl(0.0, eps, 192)
    return float(np.sum(2.0 * lams * np.tanh(math.pi * lams) * w))


# ---------------------------------------------------------------------------
# Spherical transform

def _profile_values(f: RadialFunction, s):
    vals = f.profile(s)
    return np.asarray(vals, dtype=float)


def _auto_support(space: Space, f: RadialFunction) -> float:
    if f.support_radius is not None:
        return float(f.support_radius)
    if f.suggested_radius is not None:
        return float(f.suggested_radius)
    # expand until the mass density is negligible
    S = 8.0
    grid = np.linspace(0, S, 64)
    peak = float(np.max(np.abs(_profile_values(f, grid) * geometry.radial_volume_density(space, grid))))
    peak = max(peak, 1e-300)
    while S < 64.0:
        edge = abs(float(_profile_values(f, np.asarray([S]))[0])) * float(geometry.radial_volume_density(space, S))
        if edge < 1e-16 * peak:
            return S
        S *= 1.5
    return S


def _transform_once(space: Space, f: RadialFunction, p: SpectralParameter, S: float, n: int) -> float:
    s, w = _gl(0.0, S, n)
    if space.is_euclidean:
        om = _omega_euclid(space.dim, p.value, s)
    else:
        om = _omega_disk_s_array(p, s, n_nodes=None)
    vals = _profile_values(f, s) * om * geometry.radial_volume_density(space, s)
    return float(vals @ w)


def spherical_transform(
    space: Space,
    f: RadialFunction,
    p: SpectralParameter,
    accuracy: specfun.Accuracy = specfun.DEFAULT_ACCURACY,
) -> float:
    """Spherical transform f_hat(p) = int_0^inf f(s) omega_p(s) vol'(s) ds.

    Raises NumericError (with the achieved tolerance) if two consecutive
    quadrature refinements fail to agree.
    """
    S = _auto_support(space, f)
    freq = p.value if p.is_principal else 0.0
    if space.is_euclidean:
        phase = 2.0 * math.pi * freq * S
    else:
        phase = freq * S
    n = _nodes_for_phase(phase, base=128)
    v1 = _transform_once(space, f, p, S, n)
    n2 = _next_nodes(n)
    v2 = _transform_once(space, f, p, S, n2)
    err = abs(v2 - v1)
    tol = max(accuracy.abs_tol, accuracy.rel_tol * abs(v2))
    if err > 200.0 * tol:
        n3 = _next_nodes(n2)
        v3 = _transform_once(space, f, p, S, n3)
        err = abs(v3 - v2)
        if err > 200.0 * tol:
            raise NumericError(
                f"spherical transform did not converge (support {S}, nodes {n3})",
                achieved_tol=err,
            )
        return v3
    return v2


def transform_on_grid(space: Space, f: RadialFunction, lams) -> np.ndarray:
    """Vectorized spherical transform over an array of principal parameters.

    Shares one profile grid across all frequencies; this is what the
    spectral integrators use internally.
    """
    lams = np.asarray(lams, dtype=float)
    if lams.size == 0:
        return np.zeros(0)
    if f.kind == "ball":
        if space.is_euclidean:
            return _euclid_ball_transform_grid(space.dim, f.param, lams)
        return _disk_ball_transform_grid(f.param, lams)
    S = _auto_support(space, f)
    lmax = float(np.max(lams))
    if space.is_euclidean:
        n_s = _nodes_for_phase(2.0 * math.pi * lmax * S, base=192)
        s, w = _gl(0.0, S, n_s)
        weight = _profile_values(f, s) * geometry.radial_volume_density(space, s) * w
        x = 2.0 * math.pi * np.outer(lams, s)
        d = space.dim
        if d == 1:
            om = np.cos(x)
        elif d == 2:
            om = specfun.bessel_jn_grid(0, x)
        elif d == 3:
            om = np.ones_like(x)
            nz = x != 0
            om[nz] = np.sin(x[nz]) / x[nz]
        else:
            om = np.ones_like(x)
            nz = x != 0
            om[nz] = 2.0 * specfun.bessel_jn_grid(1, x[nz]) / x[nz]
        return om @ weight
    n_s = _nodes_for_phase(lmax * S, base=192)
    s, w = _gl(0.0, S, n_s)
    weight = _profile_values(f, s) * geometry.radial_volume_density(space, s) * w
    out = np.zeros_like(lams)
    # accumulate over s-blocks, inner-node phase set by the largest frequency
    small = s <= _OMEGA_SPLIT_S
    for mask, rep in ((small, "legendre"), (~small, "md")):
        if not np.any(mask):
            continue
        sb_all = s[mask]
        wb_all = weight[mask]
        smax = float(np.max(sb_all))
        if rep == "legendre":
            n_t = _nodes_for_phase(2.0 * lmax * smax, base=128)
            t, wt = _gl(0.0, math.pi, n_t)
        else:
            n_t = _nodes_for_phase(lmax * smax, base=128)
            t, wt = _gl(0.0, 1.0, n_t)
        block = max(1, int(2.5e6 // max(n_t, 1)))
        for i in range(0, sb_all.size, block):
            sb = sb_all[i : i + block]
            wb = wb_all[i : i + block]
            if rep == "legendre":
                u = np.cosh(sb)[:, None] - np.sinh(sb)[:, None] * np.cos(t)[None, :]
                phase_grid = np.log(u)
                amp = u ** (-0.5) * wt[None, :] / math.pi
            else:
                s_col = sb[:, None]
                phase_grid = s_col * (1.0 - t * t)[None, :]
                den = np.sqrt(_cosh_diff(s_col * np.ones_like(phase_grid), phase_grid))
                amp = math.sqrt(2.0) / math.pi * 2.0 * s_col * t[None, :] / den * wt[None, :]
            for j, lam in enumerate(lams):
                om_block = (np.cos(lam * phase_grid) * amp).sum(axis=1)
                out[j] += float(om_block @ wb)
    return out


# ---------------------------------------------------------------------------
# Ball indicator transform (dedicated paths)

def _euclid_ball_transform_grid(d: int, r: float, zetas):
    zetas = np.asarray(zetas, dtype=float)
    out = np.empty_like(zetas)
    zero = zetas == 0.0
    out[zero] = geometry.ball_volume(geometry.euclidean(d), r)
    z = zetas[~zero]
    x = 2.0 * math.pi * r * z
    if d == 1:
        vals = np.sin(x) / (math.pi * z)
    elif d == 2:
        _, j1 = specfun.bessel_j01_grid(x)
        vals = r * j1 / z
    elif d == 3:
        vals = (np.sin(x) / x - np.cos(x)) * r / (math.pi * z**2)
    elif d == 4:
        vals = specfun.bessel_jn_grid(2, x) * r**2 / z**2
    else:
        raise ValidationError("euclidean dimension must be 1..4")
    out[~zero] = vals
    return out


@lru_cache(maxsize=128)
def _disk_ball_nodes(r: float, n: int):
    # substitution v = r - w^2 removes the sqrt endpoint singularity of
    # sqrt(cosh r - cosh v); the integrand becomes analytic in w
    w, wt = _gl(0.0, math.sqrt(r), n)
    v = r - w * w
    amp = np.sqrt(np.maximum(_cosh_diff(np.full_like(v, r), v), 0.0)) * 2.0 * w * wt
    return v, amp


def _disk_ball_transform_value(r: float, p: SpectralParameter, n: Optional[int] = None) -> float:
    lam, s0 = _disk_exponent(p)
    if n is None:
        n = _nodes_for_phase((lam or 0.0) * r, base=128)
    v, amp = _disk_ball_nodes(float(r), n)
    if s0 is None:
        osc = np.cos(lam * v)
    else:
        osc = np.cosh(s0 * v)
    return math.sqrt(2.0) / math.pi * float(amp @ osc)


def _disk_ball_transform_grid(r: float, lams, n: Optional[int] = None):
    lams = np.asarray(lams, dtype=float)
    if n is None:
        n = _nodes_for_phase(float(np.max(lams)) * r, base=128)
    v, amp = _disk_ball_nodes(float(r), n)
    out = np.empty_like(lams)
    block = max(1, int(4e6 // max(len(v), 1)))
    for i in range(0, lams.size, block):
        out[i : i + block] = np.cos(np.outer(lams[i : i + block], v)) @ amp
    return math.sqrt(2.0) / math.pi * out


def ball_indicator_transform(space: Space, r: float, p: SpectralParameter) -> float:
    """Spherical transform of the ball indicator chi_{B_r}.

    Closed Hankel/Fourier pairs on R^d; on the disk the transform reduces
    (by swapping the radial and spherical-function integrals) to the single
    cosine integral (sqrt 2 / pi) int_0^r sqrt(cosh r - cosh v) cos(lam v) dv,
    which is what this dedicated path evaluates.
    """
    if r <= 0:
        raise ValidationError("ball radius must be positive")
    if space.is_euclidean:
        if not p.is_principal:
            raise ValidationError("euclidean spaces have no complementary parameters")
        return float(_euclid_ball_transform_grid(space.dim, r, np.asarray([p.value]))[0])
    return _disk_ball_transform_value(float(r), p)


# ---------------------------------------------------------------------------
# Heat kernels

def heat_kernel_transform(space: Space, tau: HeatTime, p: SpectralParameter) -> float:
    """Spherical transform of the heat kernel: exp(-4 pi^2 tau zeta^2) on R^d,
    exp(-tau (1/4 + lam^2)) on the disk (lam = i s0 on the complementary
    segment, giving exp(-tau (1/4 - s0^2)))."""
    t = tau.tau
    if space.is_euclidean:
        if not p.is_principal:
            raise ValidationError("euclidean spaces have no complementary parameters")
        return math.exp(-4.0 * math.pi**2 * t * p.value**2)
    if p.is_principal:
        return math.exp(-t * (0.25 + p.value**2))
    return math.exp(-t * (0.25 - p.value**2))


def _disk_heat_lambda_cutoff(tau: float) -> float:
    return math.sqrt(42.0 / tau) + 1.0


@lru_cache(maxsize=32)
def _disk_heat_cosine_spline(tau: float, vmax: float):
    """Spline of G_tau(v) = int_0^inf exp(-tau(1/4+lam^2)) cos(lam v) rho(lam) dlam.

    Substituting the Mehler-Dirichlet form of omega into the inverse
    spectral integral and swapping the two integrals gives

        h_tau(s) = (sqrt 2/pi) int_0^s G_tau(v) (cosh s - cosh v)^(-1/2) dv,

    so the whole lam-dependence is captured by this s-independent cosine
    transform.  G is smooth on the v-scale sqrt(tau), which the node count
    below resolves to spline accuracy ~1e-9.
    """
    from scipy.interpolate import CubicSpline

    lam_max = _disk_heat_lambda_cutoff(tau)
    n_lam = _nodes_for_phase(lam_max * vmax, base=256)
    lams, wl = _gl(0.0, lam_max, n_lam)
    weight = np.exp(-tau * (0.25 + lams**2)) * 2.0 * lams * np.tanh(math.pi * lams) * wl
    nv = max(2048, int(8.0 * vmax / math.sqrt(min(tau, 1.0))))
    v = np.linspace(0.0, vmax, nv)
    G = np.cos(np.outer(v, lams)) @ weight
    return CubicSpline(v, G)


def heat_kernel_spatial(space: Space, tau: HeatTime, s) -> float:
    """Spatial heat kernel h_tau at geodesic radius s.

    Euclidean: closed Gaussian (4 pi tau)^(-d/2) exp(-s^2 / 4 tau).  Disk:
    inverse spectral integral of exp(-tau (1/4 + lam^2)) against the
    Plancherel density, evaluated through the swapped cosine-transform form
    (see _disk_heat_cosine_spline).
    """
    t = tau.tau
    scalar = np.isscalar(s)
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0):
        raise DomainError("radius must be >= 0")
    if space.is_euclidean:
        d = space.dim
        vals = (4.0 * math.pi * t) ** (-d / 2.0) * np.exp(-(s_arr**2) / (4.0 * t))
        return float(vals[0]) if scalar else vals
    smax = float(np.max(s_arr))
    vmax = 4.0 * math.ceil(max(smax, 4.0) / 4.0)  # bucketed for cache reuse
    G = _disk_heat_cosine_spline(t, vmax)
    out = np.empty_like(s_arr)
    ny = _nodes_for_phase(24.0 * smax / math.sqrt(min(t, 1.0)) / 3.4, base=192)
    y, wy = _gl(0.0, 1.0, ny)
    for i, si in enumerate(s_arr):
        if si == 0.0:
            out[i] = float(G(0.0))
            continue
        v = si * (1.0 - y * y)
        den = np.sqrt(_cosh_diff(np.full_like(v, si), v))
        out[i] = math.sqrt(2.0) / math.pi * float((2.0 * si * y / den * G(v)) @ wy)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Plancherel identity

def _ball_tail_correction(space: Space, r: float, cut: float) -> float:
    """Analytic integral of |chi_hat|^2 d sigma_P over (cut, infinity).

    From the large-frequency asymptotics of the ball transform the
    integrand oscillates around a 1/x^2 envelope; the DC term integrates
    to C/cut and the oscillatory remainder is resolved by two integrations
    by parts.
    """
    if space.is_euclidean:
        d = space.dim
        dc = _surface_area(d) * r ** (d - 1) / (2.0 * math.pi**2)
        a = 4.0 * math.pi * r
        phi = -(d + 1) * math.pi / 2.0
        osc = -math.sin(a * cut + phi) / (a * cut**2) + 2.0 * math.cos(a * cut + phi) / (a**2 * cut**3)
        return dc * (1.0 / cut + osc)
    # |f_hat|^2 rho ~ (sinh r / 2 pi) lam^-2 (1 - sin(2 r lam)) at large lam
    dc = math.sinh(r) / (2.0 * math.pi)
    a = 2.0 * r
    osc = -(math.cos(a * cut) / (a * cut**2) + 2.0 * math.sin(a * cut) / (a**2 * cut**3))
    return dc * (1.0 / cut + osc)


def _rhs_ball(space: Space, r: float) -> float:
    cut = 260.0
    phase = (2.0 * math.pi * r if space.is_euclidean else r) * cut * 2.0
    n = _nodes_for_phase(phase, base=256)
    lams, w = _gl(0.0, cut, n)
    if space.is_euclidean:
        fh = _euclid_ball_transform_grid(space.dim, r, lams)
    else:
        fh = _disk_ball_transform_grid(r, lams)
    body = float((fh**2 * _plancherel_density_grid(space, lams)) @ w)
    return body + _ball_tail_correction(space, r, cut)


def _decay_cutoff(space: Space, f: RadialFunction, scale: float) -> float:
    """Frequency beyond which |f_hat|^2 d sigma_P is negligible for a
    rapidly-decaying profile."""
    if f.suggested_cutoff is not None:
        return float(f.suggested_cutoff)
    tol = 1e-14 * max(scale, 1e-300)
    cut = 6.0
    while cut < 320.0:
        probes = np.array([cut, 1.15 * cut])
        fh = transform_on_grid(space, f, probes)
        dens = fh**2 * _plancherel_density_grid(space, probes)
        if np.all(dens * cut < tol):
            return 1.15 * cut
        cut *= 1.6
    raise NumericError(
        "spherical transform of the profile does not decay within the frequency cap",
        achieved_tol=float(dens.max()) * cut / max(scale, 1e-300),
    )


def _rhs_generic(space: Space, f: RadialFunction, lhs_scale: float) -> float:
    cut = _decay_cutoff(space, f, lhs_scale)
    if f.support_radius is None:
        # rapid decay -> smooth non-oscillatory transform
        n = _nodes_for_phase(cut, base=192)
    else:
        n = _nodes_for_phase(cut * f.support_radius * 0.7, base=384)
    lams, w = _gl(0.0, cut, n)
    fh = transform_on_grid(space, f, lams)
    return float((fh**2 * _plancherel_density_grid(space, lams)) @ w)


def plancherel_identity_residual(space: Space, f: RadialFunction) -> float:
    """Relative residual |  ||f||^2 - int |f_hat|^2 d sigma_P  | / ||f||^2.

    A small value certifies the transform and the Plancherel density
    jointly.  Ball indicators use the dedicated transform plus an analytic
    large-frequency tail; all other profiles must decay fast enough for the
    doubling quadrature to converge.
    """
    S = _auto_support(space, f)
    n = _nodes_for_phase(S * 8.0, base=768)
    s, w = _gl(0.0, S, n)
    vals = _profile_values(f, s)
    lhs = float((vals**2 * geometry.radial_volume_density(space, s)) @ w)
    if lhs == 0.0:
        return 0.0
    if f.kind == "ball":
        rhs = _rhs_ball(space, f.param)
    else:
        rhs = _rhs_generic(space, f, lhs)
    return abs(lhs - rhs) / max(lhs, 1e-300)


# ---------------------------------------------------------------------------
# Functional equation

def functional_equation_residual(lam: float, s: float, t: float) -> float:
    """Defect of the spherical averaging identity on the disk:

    | (1/2 pi) int_0^{2 pi} omega_lam(c(theta)) dtheta - omega_lam(s) omega_lam(t) |

    with cosh c = cosh s cosh t - sinh s sinh t cos theta.
    """
    if s < 0 or t < 0:
        raise DomainError("radii must be >= 0")
    space = geometry.hyperbolic_disk()
    p = principal(space, lam)
    n = _nodes_for_phase(lam * (s + t), base=256)
    th, wt = _gl(0.0, math.pi, n)
    arg = np.cosh(s) * np.cosh(t) - np.sinh(s) * np.sinh(t) * np.cos(th)
    c = np.arccosh(np.maximum(arg, 1.0))
    om = _omega_disk_s_array(p, c)
    avg = float(om @ wt) / math.pi  # symmetric in theta -> half-period integral
    target = spherical_function(space, p, s) * spherical_function(space, p, t)
    return abs(avg - target)
