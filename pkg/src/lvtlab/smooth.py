"""
Thomas-Fermi smooth densities, smooth Fermi energies, the oscillating
split and the interior mask.

    rho_TF = (4/D) / Gamma(D/2) (m / 2 pi hbar^2)^(D/2) [lam - V]_+^(D/2)
    tau_TF = (4/(D+2)) / Gamma(D/2) (m / 2 pi hbar^2)^(D/2) [lam - V]_+^(D/2+1)
    xi_TF  = tau_TF
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import integrate as sint
from scipy import ndimage
from scipy.optimize import brentq

from . import model

__all__ = [
    "SmoothSet",
    "OscillatingSet",
    "potential_on",
    "tf_densities",
    "tf_functional",
    "tf_particle_number",
    "find_lambda_tf",
    "weyl_lambda_disk",
    "oscillating_parts",
    "interior_mask",
    "local_average",
]


@dataclass
class SmoothSet:
    """Smooth densities on a grid plus the interior mask."""
    lambda_smooth: float
    rho_tf: np.ndarray
    tau_tf: np.ndarray
    xi_tf: np.ndarray
    interior_mask: np.ndarray
    mode: str = "TF"
    p_lambda: float = float("nan")
    xi_smooth: np.ndarray | None = None   # the xi used as "xi_ETF" surrogate

    def __post_init__(self):
        if self.xi_smooth is None:
            self.xi_smooth = self.xi_tf


@dataclass
class OscillatingSet:
    """Oscillating parts and their regular/irregular split."""
    delta_rho: np.ndarray
    delta_tau: np.ndarray
    delta_tau1: np.ndarray
    delta_xi: np.ndarray
    delta_r_tau: np.ndarray
    delta_r_tau1: np.ndarray
    delta_irr_tau: np.ndarray
    mode: str = "TF"
    meta: dict = field(default_factory=dict)


def _tf_prefactor(D, units):
    return (1.0 / math.gamma(D / 2.0)) * (units.mass / (2 * math.pi * units.hbar ** 2)) ** (D / 2.0)


def potential_on(spec, fld_or_grid):
    """Potential sampled on a DensityField or Grid."""
    coord = fld_or_grid.coord if hasattr(fld_or_grid, "coord") else fld_or_grid.points
    geometry = getattr(fld_or_grid, "geometry", None) or fld_or_grid.kind
    if geometry == "plane":
        X, Y = np.meshgrid(coord, coord, indexing="xy")
        V, _, inside = model.evaluate_potential(spec, np.stack([X, Y]))
        return np.where(inside, V, np.inf)
    if spec.kind in ("box", "disk"):
        return np.zeros_like(coord)
    if spec.kind == "linear":
        axis = getattr(fld_or_grid, "extras", {}).get("axis", 0)
        return spec.p["a"][axis] * coord
    return spec.v_radial(coord)


def tf_densities(spec, lam, grid, D=None, mask_c=4.0, mode="TF", field=None):
    """TF densities at Fermi energy ``lam`` and the default interior mask.

    ``grid`` may be a Grid or a DensityField. With ``mode="local"`` and an
    exact ``field`` given, the smooth xi used by the generalized theorems
    is the exact xi averaged over one oscillation wavelength instead of
    xi_TF.
    """
    D = D or spec.D
    V = potential_on(spec, grid)
    e = np.clip(lam - V, 0.0, None)
    pref = _tf_prefactor(D, spec.units)
    rho = (4.0 / D) * pref * e ** (D / 2.0)
    tau = (4.0 / (D + 2)) * pref * e ** (D / 2.0 + 1)
    vmin = float(np.min(V[np.isfinite(V)]))
    p_lam = math.sqrt(2 * spec.units.mass * max(lam - vmin, 0.0))
    s = SmoothSet(lambda_smooth=lam, rho_tf=rho, tau_tf=tau, xi_tf=tau.copy(),
                  interior_mask=np.ones_like(rho, dtype=bool), mode=mode, p_lambda=p_lam)
    s.interior_mask = interior_mask(spec, s, grid, c=mask_c)
    if mode == "local":
        if field is None:
            raise ValueError("local mode needs the exact field")
        s.xi_smooth = local_average(field.xi, grid, spec.units.hbar * math.pi / p_lam)
    elif mode != "TF":
        raise ValueError("mode must be TF or local")
    return s


def tf_functional(rho, D, units=None):
    """tau_TF[rho] = (hbar^2/2m)(4 pi D/(D+2)) [(D/4) Gamma(D/2)]^(2/D) rho^(1+2/D)."""
    units = units or model.Units()
    rho = np.clip(np.asarray(rho, dtype=float), 0.0, None)
    coef = units.hb2m * 4 * math.pi * D / (D + 2) * ((D / 4.0) * math.gamma(D / 2.0)) ** (2.0 / D)
    return coef * rho ** (1.0 + 2.0 / D)


def tf_particle_number(spec, lam, D=None):
    """Integral of rho_TF over space at Fermi energy lam."""
    D = D or spec.D
    pref = (4.0 / D) * _tf_prefactor(D, spec.units)
    if lam <= 0 and spec.kind not in ("linear",):
        return 0.0
    p = spec.p
    if spec.kind == "box":
        return p["L"] * pref * lam ** 0.5
    if spec.kind == "disk":
        return math.pi * p["R"] ** 2 * pref * lam
    if spec.spherical:
        rt = spec.turning_radius(lam)
        f = lambda r: r ** (D - 1) * (lam - spec.v_radial(r)) ** (D / 2.0)
        val, _ = sint.quad(f, 0.0, rt, epsabs=0.0, epsrel=1e-13, limit=200)
        return model.solid_angle(D) * pref * val
    if spec.kind == "coupled_quartic":
        kap = p["kappa"]
        g = lambda th: 0.5 * (math.cos(th) ** 4 + math.sin(th) ** 4) - kap * (math.cos(th) * math.sin(th)) ** 2
        # radial integral of (lam - r^4 g) r dr up to the turning radius
        ang, _ = sint.quad(lambda th: g(th) ** -0.5, 0.0, 2 * math.pi, epsrel=1e-13, limit=200)
        return pref * lam ** 1.5 / 3.0 * ang
    raise ValueError(f"{spec.kind}: particle number is infinite")


def find_lambda_tf(spec, N, D=None, tol=1e-8):
    """Solve int rho_TF(lam) d^D r = N by bracketing and Brent's method."""
    D = D or spec.D
    lo, hi = 0.0, 1.0
    while tf_particle_number(spec, hi, D) < N:
        lo, hi = hi, 2 * hi
        if hi > 1e12:
            raise ValueError("could not bracket the TF Fermi energy")
    lam = brentq(lambda x: tf_particle_number(spec, x, D) - N, lo, hi, xtol=1e-15, rtol=1e-15,
                 maxiter=500)
    if abs(tf_particle_number(spec, lam, D) - N) > tol * max(1.0, N):
        raise ValueError("TF particle number not converged")
    return lam


def weyl_lambda_disk(N, R=1.0, hb2m=1.0, curvature=True):
    """Smooth Fermi energy of the disk billiard from the Weyl expansion.

    Solves 2 [(kR)^2/4 - kR/2 + 1/6 + 1/(128 kR)] = N and returns
    hb2m * k^2. The last term is the leading curvature correction of the
    smooth counting function; ``curvature=False`` drops it.
    """
    if N % 2:
        raise ValueError("N must be even")
    c = 1.0 / 128.0 if curvature else 0.0
    f = lambda k: 2 * ((k * R) ** 2 / 4 - k * R / 2 + 1.0 / 6.0 + c / (k * R)) - N
    # counting function is increasing beyond its minimum near kR = 1
    k = brentq(f, 1.0 / R, (2 * math.sqrt(N) + 4) / R, xtol=1e-15, rtol=1e-15)
    return hb2m * k * k


def local_average(values, grid, width):
    """Gaussian average over a window of the given width (one wavelength)."""
    h = grid.h
    sigma = width / (2.0 * h)
    if np.ndim(values) == 2:
        return ndimage.gaussian_filter(values, sigma, mode="constant")
    mode = "mirror" if getattr(grid, "geometry", getattr(grid, "kind", "")) == "radial" else "nearest"
    return ndimage.gaussian_filter1d(values, sigma, mode=mode)


def oscillating_parts(fld, smooth):
    """delta X = X - X_smooth with the regular/irregular split of tau, tau1."""
    if np.shape(fld.rho) != np.shape(smooth.rho_tf):
        raise ValueError("field and smooth set live on different grids")
    drho = fld.rho - smooth.rho_tf
    dtau = fld.tau - smooth.tau_tf
    dtau1 = fld.tau1 - smooth.tau_tf
    dxi = fld.xi - smooth.xi_tf
    return OscillatingSet(delta_rho=drho, delta_tau=dtau, delta_tau1=dtau1, delta_xi=dxi,
                          delta_r_tau=dtau - dxi, delta_r_tau1=dtau1 - dxi, delta_irr_tau=dxi,
                          mode=smooth.mode, meta={"lambda": smooth.lambda_smooth})


def interior_mask(spec, smooth, grid, c=4.0, min_fraction=0.05):
    """Points farther than c*hbar/(2 p_lambda) from every turning point or wall.

    p_lambda is the Fermi momentum at the potential minimum. Points where
    lam - V < min_fraction * lam are dropped as well.
    """
    lam = smooth.lambda_smooth
    V = potential_on(spec, grid)
    geometry = getattr(grid, "geometry", None) or grid.kind
    allowed = (lam - V) > 0
    w = c * spec.units.hbar / (2.0 * smooth.p_lambda) if smooth.p_lambda > 0 else np.inf
    h = grid.h
    if geometry == "plane":
        dist = ndimage.distance_transform_edt(np.pad(allowed, 1)) [1:-1, 1:-1] * h
    else:
        if geometry == "radial":
            # the origin is a symmetry point, not a boundary; the far end is
            # a wall for billiards and forbidden otherwise
            padded = np.concatenate([allowed, [False]])
            dist = ndimage.distance_transform_edt(padded)[:-1] * h
        else:
            padded = np.concatenate([[False], allowed, [False]])
            dist = ndimage.distance_transform_edt(padded)[1:-1] * h
    mask = allowed & (dist > w) & ((lam - V) >= min_fraction * lam)
    if not mask.any():
        raise ValueError("interior mask is empty; increase N")
    return mask
