"""
Particle and kinetic-energy densities from orbitals.

    rho  = 2 sum |phi|^2
    tau  = -(hbar^2/2m) 2 sum phi lap(phi)  =  2 sum (E - V) |phi|^2
    tau1 =  (hbar^2/2m) 2 sum |grad phi|^2
    xi   = (tau + tau1) / 2

tau uses the Hamiltonian identity so no second derivatives of orbitals are
needed. For radial solutions the angular sums are done analytically:
sum_m |Y_lm|^2 = g_l / Omega_D and sum_m |grad_Omega Y_lm|^2 = l(l+D-2) g_l / Omega_D.
"""

from dataclasses import dataclass, field

import numpy as np

from . import model, quad

__all__ = [
    "DensityField",
    "DensityError",
    "compute_densities",
    "laplacian",
    "integrate_field",
    "total_kinetic",
]


class DensityError(ValueError):
    """Inconsistent inputs or a failed density identity."""


@dataclass
class DensityField:
    """Densities on a grid.

    ``geometry`` is ``line``, ``radial`` or ``plane``. Radial fields are
    functions of r only (closed shells); coordinates never include r=0.
    """
    coord: np.ndarray
    h: float
    D: int
    geometry: str
    rho: np.ndarray
    tau: np.ndarray
    tau1: np.ndarray
    xi: np.ndarray
    lap_rho: np.ndarray
    lambda_used: float
    spec: object = None
    N: float | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.xi is None:
            self.xi = 0.5 * (self.tau + self.tau1)

    @property
    def potential(self):
        """V on the grid (spherical kinds use V(r); line grids V(x))."""
        s = self.spec
        if self.geometry == "plane":
            X, Y = np.meshgrid(self.coord, self.coord, indexing="xy")
            return model.evaluate_potential(s, np.stack([X, Y]))[0]
        if s.kind in ("box", "disk"):
            return np.zeros_like(self.coord)
        if s.kind == "linear":
            return s.p["a"][self.extras.get("axis", 0)] * self.coord
        return s.v_radial(self.coord)

    @property
    def dpotential(self):
        s = self.spec
        if s.kind in ("box", "disk"):
            return np.zeros_like(self.coord)
        if s.kind == "linear":
            return np.full_like(self.coord, s.p["a"][self.extras.get("axis", 0)])
        return s.dv_radial(self.coord)


# --------------------------------------------------------------- laplacian

def laplacian(f, h, D=1, symmetry="line", r=None, order=8):
    """Laplacian of samples on a uniform grid.

    symmetry
        ``line``: d^2/dx^2 with one-sided stencils at the ends.
        ``radial``: d^2/dr^2 + (D-1)/r d/dr for an even function of r
        sampled at r = h, 2h, ...; the origin value is interpolated and
        the stencil reflected through it.
        ``plane``: 5-point stencil with zero Dirichlet walls.
    """
    f = np.asarray(f, dtype=float)
    if symmetry == "plane":
        if min(f.shape) < 5:
            raise DensityError("grid too small for a Laplacian")
        p = np.pad(f, 1)
        return (p[1:-1, 2:] + p[1:-1, :-2] + p[2:, 1:-1] + p[:-2, 1:-1] - 4 * f) / h ** 2
    if f.shape[-1] < 5:
        raise DensityError("grid too small for a Laplacian")
    if symmetry == "line":
        return quad.derivative(f, h, 2, order=order)
    if symmetry == "radial":
        if r is None:
            r = h * np.arange(1, f.shape[-1] + 1)
        full = quad.with_origin(f, r)
        d1 = quad.derivative(full, h, 1, order=order, parity=1)[..., 1:]
        d2 = quad.derivative(full, h, 2, order=order, parity=1)[..., 1:]
        return d2 + (D - 1) * d1 / r
    raise ValueError(f"unknown symmetry {symmetry!r}")


# ------------------------------------------------------------- assembly

def compute_densities(solution, occ, lap_order=8):
    """Assemble rho, tau, tau1, xi and lap(rho) for the occupied levels."""
    if len(occ.fillings) != len(solution.energies):
        raise DensityError("occupation does not match the solution's level list")
    g = solution.grid
    D = solution.D
    spec = solution.spec
    idx = occ.occupied
    E = solution.energies[idx]
    fill = occ.fillings[idx].astype(float)
    if g.kind == "line":
        V = np.zeros(g.n) if spec.kind == "box" else _line_potential(spec, g.points)
        phi, dphi = solution.phi[idx], solution.dphi[idx]
        w = 2.0 * fill[:, None]
        rho = np.sum(w * phi ** 2, axis=0)
        tau = np.sum(w * (E[:, None] - V) * phi ** 2, axis=0)
        tau1 = spec.hb2m * np.sum(w * dphi ** 2, axis=0)
        lap = laplacian(rho, g.h, 1, "line", order=lap_order)
        geometry = "line"
    elif g.kind == "radial":
        r = g.points
        V = np.zeros(g.n) if spec.kind == "disk" else spec.v_radial(r)
        ls = np.array([solution.quantum[i][1] for i in idx], dtype=float)
        R, dR = solution.phi[idx], solution.dphi[idx]
        # fillings carry the angular multiplicity; spread over the sphere
        w = 2.0 * fill[:, None] / model.solid_angle(D)
        rho = np.sum(w * R ** 2, axis=0)
        tau = np.sum(w * (E[:, None] - V) * R ** 2, axis=0)
        cent = (ls * (ls + D - 2))[:, None] / r ** 2 if D > 1 else 0.0
        tau1 = spec.hb2m * np.sum(w * (dR ** 2 + cent * R ** 2), axis=0)
        lap = laplacian(rho, g.h, D, "radial", r=r, order=lap_order)
        geometry = "radial"
    elif g.kind == "plane":
        X, Y = g.mesh()
        V = model.evaluate_potential(spec, np.stack([X, Y]))[0]
        phi = solution.phi[idx]
        w = 2.0 * fill[:, None, None]
        rho = np.sum(w * phi ** 2, axis=0)
        tau = np.sum(w * (E[:, None, None] - V) * phi ** 2, axis=0)
        # edge-averaged squared differences: makes tau1 - tau = (hb2m/2) lap_h rho
        # hold exactly on the grid
        p = np.pad(phi, ((0, 0), (1, 1), (1, 1)))
        h = g.h
        gx = (p[:, 1:-1, 2:] - phi) ** 2 + (phi - p[:, 1:-1, :-2]) ** 2
        gy = (p[:, 2:, 1:-1] - phi) ** 2 + (phi - p[:, :-2, 1:-1]) ** 2
        tau1 = spec.hb2m * np.sum(w * 0.5 * (gx + gy), axis=0) / h ** 2
        lap = laplacian(rho, h, 2, "plane")
        geometry = "plane"
    else:
        raise DensityError(f"unknown grid kind {g.kind}")
    return DensityField(coord=g.points, h=g.h, D=D, geometry=geometry, rho=rho, tau=tau,
                        tau1=tau1, xi=0.5 * (tau + tau1), lap_rho=lap, lambda_used=occ.lambda_qm,
                        spec=spec, N=occ.N, extras={"occupation": occ, "bounds": g.bounds})


def _line_potential(spec, x):
    if spec.spherical:
        return spec.v_radial(x)
    if spec.kind == "linear":
        return spec.p["a"][0] * x
    raise DensityError(f"{spec.kind} is not a line problem")


# ------------------------------------------------------------ integrals

def integrate_field(fld, values):
    """Integral of ``values`` over all space using the field's metric.

    Line grids are extended to their end points by polynomial
    extrapolation (walls); radial grids get their origin value from an
    even interpolation and the metric r^(D-1) Omega_D.
    """
    v = np.asarray(values, dtype=float)
    h = fld.h
    if fld.geometry == "plane":
        return float(v.sum() * h * h)
    if fld.geometry == "radial":
        r = fld.coord
        full = quad.with_origin(v, r)
        rr = np.concatenate([[0.0], r])
        g = full * (rr ** (fld.D - 1) if fld.D > 1 else 1.0)
        return float(quad.integrate(g, h, left_parity=(-1) ** (fld.D - 1)) * model.solid_angle(fld.D))
    if fld.geometry == "line":
        a, b = fld.extras.get("bounds", (fld.coord[0] - h, fld.coord[-1] + h))
        if abs((fld.coord[0] - h) - a) < 1e-9 * max(1, abs(a)) and \
                abs((fld.coord[-1] + h) - b) < 1e-9 * max(1, abs(b)):
            v = np.concatenate([[_extrapolate(v, left=True)], v, [_extrapolate(v, left=False)]])
        return float(quad.integrate(v, h))
    raise DensityError(f"unknown geometry {fld.geometry}")


def _extrapolate(v, left=True, npts=9):
    nodes = np.arange(1, npts + 1)
    w = quad.fornberg(0.0, nodes, 0)[0]
    return float(v[:npts] @ w) if left else float(v[::-1][:npts] @ w)


def total_kinetic(fld, rtol=1e-6):
    """Total kinetic energy from tau, tau1 and xi, which must agree.

    Returns the xi integral; raises DensityError listing all three
    integrals when they differ by more than ``rtol``.
    """
    T = [integrate_field(fld, fld.tau), integrate_field(fld, fld.tau1), integrate_field(fld, fld.xi)]
    scale = max(abs(t) for t in T)
    if max(T) - min(T) > rtol * scale:
        raise DensityError(f"kinetic integrals disagree: int tau={T[0]:.12g}, "
                           f"int tau1={T[1]:.12g}, int xi={T[2]:.12g}")
    return T[2]
