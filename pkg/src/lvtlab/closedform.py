"""
Analytic density backends.

* Isotropic oscillator: exact densities of M+1 filled shells, assembled
  from 1D oscillator functions along a Cartesian axis (the closed-shell
  densities are spherical, so the axis values are the radial profile).
* Linear potential V = a.r: Airy closed forms in D=1 and along an axis in
  D=3, their defining quadratures, asymptotic oscillating parts and the
  diagonal Bloch-density differential identity.
* 1D box: finite sums and their smooth/oscillating decomposition.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate as sint
from scipy import special as ssp

from . import model, qdens, specfun

__all__ = [
    "iho_densities",
    "LinearParams",
    "linear_rho_1d",
    "linear_rho_1d_quadrature",
    "linear_rho_convolution",
    "linear_xi_tau_1d",
    "linear_asymptotics_1d",
    "linear_axis_3d",
    "linear_axis_3d_asymptotics",
    "airy_smooth_products",
    "linear_axis_3d_split",
    "linear_field_1d",
    "bloch_density_1d",
    "bloch_identity_check_1d",
    "BoxParams",
    "box_densities",
]


# ------------------------------------------------------------------ IHO

def iho_densities(M, D, omega=1.0, grid=None, units=None, rmax=None, h=0.01):
    """Exact densities of an isotropic oscillator with shells 0..M filled.

    The field is sampled along the positive x axis (radial grid r = h,
    2h, ...). Besides rho, tau, tau1 and xi it carries exact values of
    rho', lap(rho) and d lap(rho)/dr in ``extras``.
    """
    if D not in (1, 2, 3):
        raise ValueError("D must be 1, 2 or 3")
    if not 0 <= M <= 200:
        raise ValueError("0 <= M <= 200 required")
    units = units or model.Units()
    hb, m = units.hbar, units.mass
    spec = model.iho(omega, D, units)
    lam = model.lambda_M(M, D, omega, hb)
    if grid is None:
        if rmax is None:
            rmax = spec.turning_radius(lam) + 8.0 * math.sqrt(hb / (m * omega))
        from .spectral import Grid
        grid = Grid.radial(rmax, h=h)
    r = np.asarray(grid.points, dtype=float)
    phi, dphi = specfun.ho_eigenfunctions(M + 1, r, omega, m, hb, derivatives=True)
    phi, dphi = phi[: M + 1], dphi[: M + 1]
    # transverse sums at the origin of the D-1 remaining coordinates
    p0, dp0 = specfun.ho_eigenfunctions(M + 1, 0.0, omega, m, hb, derivatives=True)
    p0, dp0 = p0[: M + 1] ** 2, dp0[: M + 1] ** 2
    if D == 1:
        c0 = np.zeros(M + 1)
        c0[0] = 1.0
        c1 = np.zeros(M + 1)
    elif D == 2:
        c0, c1 = p0.copy(), dp0.copy()
    else:
        c0 = np.array([np.dot(p0[: K + 1], p0[K::-1]) for K in range(M + 1)])
        c1 = np.array([2.0 * np.dot(dp0[: K + 1], p0[K::-1]) for K in range(M + 1)])
    K = np.arange(M + 1)
    # cumulative over transverse shells K <= M - n1
    A = np.cumsum(c0)
    B = np.cumsum(c0 * K)
    C1 = np.cumsum(c1)
    n1 = np.arange(M + 1)
    a_w = A[M - n1][:, None]
    b_w = B[M - n1][:, None]
    c_w = C1[M - n1][:, None]
    hw = hb * omega
    V = 0.5 * m * omega ** 2 * r ** 2
    e1 = hw * (n1 + 0.5)[:, None]
    # second and third derivatives from the oscillator equation
    k2 = 2.0 * m / hb ** 2
    d2 = k2 * (V - e1) * phi
    dV = m * omega ** 2 * r
    d3 = k2 * (dV * phi + (V - e1) * dphi)
    rho = 2.0 * np.sum(a_w * phi ** 2, axis=0)
    etot = hw * (n1[:, None] * a_w + b_w + (D / 2.0) * a_w)
    tau = 2.0 * np.sum((etot - V * a_w) * phi ** 2, axis=0)
    tau1 = units.hb2m * 2.0 * np.sum(a_w * dphi ** 2 + c_w * phi ** 2, axis=0)
    rp = 2.0 * np.sum(a_w * 2 * phi * dphi, axis=0)
    # derivatives along the axis; the transverse curvature is rho'/r by symmetry
    rpp = 2.0 * np.sum(a_w * 2 * (dphi ** 2 + phi * d2), axis=0)
    rppp = 2.0 * np.sum(a_w * (6 * dphi * d2 + 2 * phi * d3), axis=0)
    if D == 1:
        lap = rpp
        dlap = rppp
    else:
        lap = rpp + (D - 1) * rp / r
        dlap = rppp + (D - 1) * (rpp / r - rp / r ** 2)
    fld = qdens.DensityField(coord=r, h=grid.h, D=D, geometry="radial", rho=rho, tau=tau,
                             tau1=tau1, xi=0.5 * (tau + tau1), lap_rho=lap, lambda_used=lam,
                             spec=spec, N=model.iho_shell_count(M, D),
                             extras={"drho": rp, "dlap_rho": dlap, "M": M, "backend": "analytic",
                                     "bounds": grid.bounds})
    return fld


# --------------------------------------------------------------- linear

@dataclass(frozen=True)
class LinearParams:
    """Linear potential V = a x (or a.r) at continuous Fermi energy lam."""
    a: float
    lam: float
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("slope must be positive")

    @property
    def sigma(self):
        return (2.0 * self.mass / (self.hbar ** 2 * self.a ** 2)) ** (1.0 / 3.0)

    @property
    def rho0(self):
        return 2.0 * self.sigma * self.a

    @property
    def x_lambda(self):
        return self.lam / self.a

    @property
    def hb2m(self):
        return self.hbar ** 2 / (2.0 * self.mass)

    def z(self, x):
        return self.sigma * (self.a * np.asarray(x, dtype=float) - self.lam)


def linear_rho_1d(p, x):
    """rho = rho0 (Ai'^2 - z Ai^2) with z = sigma (a x - lam)."""
    z = p.z(x)
    ai, aip = specfun.airy(z)
    return p.rho0 * (aip ** 2 - z * ai ** 2)


def linear_rho_1d_quadrature(p, x):
    """rho = rho0 int_z^inf Ai^2(t) dt by adaptive quadrature (oracle form)."""
    out = []
    for zz in np.atleast_1d(p.z(x)):
        # split at 0: oscillatory left part, decaying right part
        right, _ = sint.quad(lambda t: specfun.airy_ai(t) ** 2, max(zz, 0.0), np.inf,
                             epsabs=1e-15, epsrel=1e-13, limit=200)
        left = 0.0
        if zz < 0:
            left, _ = sint.quad(lambda t: specfun.airy_ai(t) ** 2, zz, 0.0,
                                epsabs=1e-15, epsrel=1e-13, limit=400)
        out.append(p.rho0 * (left + right))
    out = np.array(out)
    return out if np.ndim(x) else float(out[0])


def _tf_density(D, hb, m, e):
    """rho_TF at kinetic energy e = lam - V (zero for e <= 0)."""
    e = np.maximum(e, 0.0)
    return (4.0 / D) / math.gamma(D / 2.0) * (m / (2 * math.pi * hb ** 2)) ** (D / 2.0) * e ** (D / 2.0)


def linear_rho_convolution(V, lam, a_norm, D, hbar=1.0, mass=1.0):
    """Density from the convolution of rho_TF with an Airy kernel.

    rho = 2^(2/3) sigma int_{-inf}^{lam} rho_TF(lam - E - V) Ai(-2^(2/3) sigma E) dE
    with sigma built from |a|. ``V`` is the potential value at the point.
    """
    sig = (2.0 * mass / (hbar ** 2 * a_norm ** 2)) ** (1.0 / 3.0)
    c = 2.0 ** (2.0 / 3.0) * sig
    out = []
    for v in np.atleast_1d(V):
        e_top = lam - v   # rho_TF vanishes for E > lam - V
        f = lambda E: _tf_density(D, hbar, mass, e_top - E) * specfun.airy_ai(-c * E)
        # the kernel decays for E < 0 (Ai(40) ~ 1e-74); above 0 it oscillates
        # with local period ~ pi / (c^1.5 sqrt(E)), so use about two panels
        # per period and let quad handle the square-root edge at e_top
        lo = -40.0 / c
        npan = int((e_top - lo) * c ** 1.5 * math.sqrt(max(e_top, 1.0)) / math.pi * 2) + 4
        pts = np.linspace(lo, e_top, npan + 1)
        total = 0.0
        for a_, b_ in zip(pts[:-1], pts[1:]):
            val, _ = sint.quad(f, a_, b_, epsabs=1e-15, epsrel=1e-12, limit=100)
            total += val
        out.append(c * total)
    out = np.array(out)
    return out if np.ndim(V) else float(out[0])


def linear_xi_tau_1d(p, x):
    """Closed forms (xi, tau, (hbar^2/8m) rho'') for the 1D linear potential."""
    z = p.z(x)
    ai, aip = specfun.airy(z)
    a = p.a
    xi = -(a / 3.0) * (ai * aip + 2 * z * aip ** 2 - 2 * z ** 2 * ai ** 2)
    lap_term = -a * ai * aip
    tau = xi - lap_term
    return xi, tau, lap_term


def linear_field_1d(p, grid):
    """DensityField for the 1D linear potential on a line grid."""
    x = grid.points
    rho = linear_rho_1d(p, x)
    xi, tau, lap_term = linear_xi_tau_1d(p, x)
    lap = lap_term * 8.0 * p.mass / p.hbar ** 2
    tau1 = 2 * xi - tau
    spec = model.linear([p.a], model.Units(p.hbar, p.mass))
    return qdens.DensityField(coord=x, h=grid.h, D=1, geometry="line", rho=rho, tau=tau, tau1=tau1,
                              xi=xi, lap_rho=lap, lambda_used=p.lam, spec=spec,
                              extras={"axis": 0, "backend": "analytic", "bounds": grid.bounds,
                                      "dlap_rho": _linear_dlap_1d(p, x)})


def _linear_dlap_1d(p, x):
    # d/dx of rho'' = -(8m/hbar^2) a d(Ai Ai')/dx = -(8m/hbar^2) a sigma a (Ai'^2 + z Ai^2)
    z = p.z(x)
    ai, aip = specfun.airy(z)
    return -(8.0 * p.mass / p.hbar ** 2) * p.a * p.sigma * p.a * (aip ** 2 + z * ai ** 2)


def linear_asymptotics_1d(p, x):
    """Leading oscillating parts (delta_rho_as, delta_tau_as, delta_xi) for x < x_lambda."""
    x = np.asarray(x, dtype=float)
    if np.any(x >= p.x_lambda):
        raise ValueError("asymptotic forms hold only inside the turning point (x < x_lambda)")
    z = p.z(x)
    zeta = 2.0 / 3.0 * np.abs(z) ** 1.5
    c2 = np.cos(2 * zeta)
    drho = c2 / (2 * math.pi * (x - p.x_lambda))
    dtau = -p.a * c2 / (2 * math.pi)
    dxi = -p.a / (12 * math.pi) * np.sin(2 * zeta) / zeta
    return drho, dtau, dxi


def linear_axis_3d(p, x):
    """Closed forms along an axis of the D=3 linear potential.

    ``p`` carries |a| as its slope (sigma and rho0 are built from the
    norm of the slope vector) and ``x`` is the potential-scaled
    coordinate V/|a|, i.e. V = |a| x. For a point on the x_i axis pass
    ``x = a_i x_i / |a|``.

    Returns (rho, xi, lap_term) with lap_term = (hbar^2/8m) lap(rho).
    """
    z = p.z(x)
    ai, aip = specfun.airy(z)
    r0 = p.rho0
    rho = -(r0 ** 3 / (48 * math.pi)) * (ai * aip + 2 * z * aip ** 2 - 2 * z ** 2 * ai ** 2)
    xi = (3 * p.a * r0 ** 2 / (80 * math.pi)) * ((0.5 - 4.0 / 3.0 * z ** 3) * ai ** 2
                                                  + 4.0 / 3.0 * z ** 2 * aip ** 2
                                                  + 2.0 / 3.0 * z * ai * aip)
    lap_term = p.a * r0 ** 2 / (32 * math.pi) * ai ** 2
    return rho, xi, lap_term


# coefficient of the leading delta-xi term along a D=3 axis from the Airy
# expansion; 3/(16 pi^2) is kept as an alternative for comparison
DXI3_COEFF = 3.0 / (64.0 * math.pi ** 2)
DXI3_COEFF_ALT = 3.0 / (16.0 * math.pi ** 2)


def linear_axis_3d_asymptotics(p, x, dxi_coeff=DXI3_COEFF):
    """Leading oscillating parts (delta_rho, delta_tau, delta_xi) along a D=3 axis."""
    x = np.asarray(x, dtype=float)
    if np.any(x >= p.x_lambda):
        raise ValueError("asymptotic forms hold only inside the turning point")
    e = p.lam - p.a * x
    zeta = 2.0 / 3.0 * np.abs(p.z(x)) ** 1.5
    drho = -math.sqrt(2 * p.mass / p.hbar ** 2) * p.a ** 2 / (16 * math.pi ** 2) * e ** -1.5 \
        * np.sin(2 * zeta)
    dtau = e * drho
    dxi = dxi_coeff * p.a ** 3 / e ** 2 * np.cos(2 * zeta)
    return drho, dtau, dxi


def airy_smooth_products(z):
    """Non-oscillating parts of Ai^2, Ai'^2 and Ai Ai'.

    With the modulus-phase forms Ai = M cos(theta), Bi = M sin(theta),
    Ai' = N cos(phi), Bi' = N sin(phi), the products split exactly into
    M^2/2, N^2/2, (MN/2) cos(theta - phi) plus terms in cos(2 theta),
    cos(2 phi) and cos(theta + phi), which oscillate for z < 0.
    Returns (aa, pp, ap).
    """
    ai, aip, bi, bip = ssp.airy(np.asarray(z, dtype=float))
    m2 = ai ** 2 + bi ** 2
    n2 = aip ** 2 + bip ** 2
    # (MN/2) cos(theta - phi) = (Ai Ai' + Bi Bi') / 2
    return 0.5 * m2, 0.5 * n2, 0.5 * (ai * aip + bi * bip)


def _axis3_from_products(p, z, aa, pp, ap):
    r0 = p.rho0
    rho = -(r0 ** 3 / (48 * math.pi)) * (ap + 2 * z * pp - 2 * z ** 2 * aa)
    xi = (3 * p.a * r0 ** 2 / (80 * math.pi)) * ((0.5 - 4.0 / 3.0 * z ** 3) * aa
                                                  + 4.0 / 3.0 * z ** 2 * pp + 2.0 / 3.0 * z * ap)
    lap_term = p.a * r0 ** 2 / (32 * math.pi) * aa
    return rho, xi, xi - lap_term


def linear_axis_3d_split(p, x):
    """Exact, smooth and oscillating rho, xi, tau along a D=3 axis.

    The smooth parts replace the Airy products by their non-oscillating
    modulus-phase parts, so they contain the gradient corrections that
    rho - rho_TF would leave behind. Same conventions as linear_axis_3d.
    """
    z = p.z(x)
    ai, aip = specfun.airy(z)
    exact = _axis3_from_products(p, z, ai ** 2, aip ** 2, ai * aip)
    smooth_ = _axis3_from_products(p, z, *airy_smooth_products(z))
    out = {}
    for k, ex, sm in zip(("rho", "xi", "tau"), exact, smooth_):
        out[k] = ex
        out[k + "_smooth"] = sm
        out["delta_" + k] = ex - sm
    return out


def bloch_density_1d(x, beta, a=1.0, hbar=1.0, mass=1.0):
    """Diagonal Bloch density C(x; beta) of the 1D linear potential."""
    return np.sqrt(mass / (2 * math.pi * hbar ** 2 * beta)) * \
        np.exp(-beta * a * x + hbar ** 2 * beta ** 3 * a ** 2 / (24 * mass))


def bloch_identity_check_1d(x, beta, a=1.0, hbar=1.0, mass=1.0, sign=+1, step=None):
    """Relative residual of the diagonal Bloch-density identity

        (hbar^2/8m) C_xxx - [d/dbeta + a x] C_x - (1/2) a C = 0.

    Derivatives are
    taken by 8th-order central finite differences of the closed form, so
    the check is independent of any hand differentiation. ``sign=-1``
    flips the last term. The residual is scaled by the largest of the
    individual terms.
    """
    from .quad import fornberg
    x = float(x)
    beta = float(beta)
    C = lambda xx, bb: bloch_density_1d(xx, bb, a, hbar, mass)
    # step sized to the x-scale 1/(beta a) of the exponential
    hx = step or 0.05 / max(beta * a, 1e-3)
    hb_ = step or 0.02 * beta
    nodes = np.arange(-5, 6)
    w1 = fornberg(0.0, nodes, 3)
    fx = np.array([C(x + k * hx, beta) for k in nodes])
    cx = w1[1] @ fx / hx
    cxxx = w1[3] @ fx / hx ** 3
    # mixed derivative d/dbeta d/dx
    cbx = 0.0
    for j, wb in zip(nodes, w1[1]):
        if wb == 0.0:
            continue
        f = np.array([C(x + k * hx, beta + j * hb_) for k in nodes])
        cbx += wb * (w1[1] @ f / hx) / hb_
    c0 = C(x, beta)
    t1 = hbar ** 2 / (8 * mass) * cxxx
    t2 = -(cbx + a * x * cx)
    t3 = -sign * 0.5 * a * c0
    scale = max(abs(t1), abs(t2), abs(t3), abs(c0) * a)
    return abs(t1 + t2 + t3) / scale


# ------------------------------------------------------------------ box

@dataclass(frozen=True)
class BoxParams:
    """1D box of length L with M doubly occupied levels."""
    L: float
    M: int
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M >= 1 required")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @property
    def E0(self):
        return self.hbar ** 2 * math.pi ** 2 / (2 * self.mass * self.L ** 2)

    @property
    def lambda_tf(self):
        return self.E0 * self.M ** 2

    @property
    def rho_tf(self):
        return 2.0 * self.M / self.L

    @property
    def tau_tf(self):
        return 2.0 * self.E0 / self.L * self.M ** 3 / 3.0

    @property
    def xi_const(self):
        M = self.M
        return 2.0 * self.E0 / self.L * M * (M + 1) * (2 * M + 1) / 6.0


def box_densities(p, x, guard=None):
    """Exact box densities and their smooth/oscillating parts.

    Returns a dict with rho, tau, tau1, xi, rho2 (rho''), and the
    oscillating parts delta_rho (rearranged closed form), delta_tau,
    delta_tau1, delta_tau_as. Closed forms with 1/sin(pi x/L) switch to
    the direct sums within ``guard`` of the walls.
    """
    x = np.asarray(x, dtype=float)
    L, M = p.L, p.M
    if np.any(x < -1e-12 * L) or np.any(x > L * (1 + 1e-12)):
        raise ValueError("x outside [0, L]")
    th = math.pi * x / L
    n = np.arange(1, M + 1)[:, None]
    s2 = np.sin(n * th) ** 2
    c2 = np.cos(n * th) ** 2
    rho_sum = 4.0 / L * s2.sum(axis=0)
    tau = 4.0 * p.E0 / L * (n ** 2 * s2).sum(axis=0)
    tau1 = 4.0 * p.E0 / L * (n ** 2 * c2).sum(axis=0)
    rho2 = 2.0 / L * ((2 * n * math.pi / L) ** 2 * np.cos(2 * n * th)).sum(axis=0)
    guard = guard if guard is not None else 1e-3 * L
    near = (x < guard) | (x > L - guard)
    sn = np.where(near, 1.0, np.sin(th))
    rho_cf = np.where(near, rho_sum, (2 * M + 1 - np.sin((2 * M + 1) * th) / sn) / L)
    cot = np.cos(th) / sn
    drho = np.where(near, rho_sum - p.rho_tf,
                    (2 * np.sin(M * th) ** 2 - np.sin(2 * M * th) * cot) / L)
    dtau_as = np.where(near, np.nan,
                       2 * p.E0 / L * M ** 2 * (-0.5 * np.sin(2 * M * th) * cot + np.sin(M * th) ** 2))
    xi = 0.5 * (tau + tau1)
    return {
        "rho": rho_cf,
        "rho_sum": rho_sum,
        "tau": tau,
        "tau1": tau1,
        "xi": xi,
        "rho2": rho2,
        "delta_rho": drho,
        "delta_tau": tau - p.xi_const,
        "delta_tau1": tau1 - p.xi_const,
        "delta_tau_as": dtau_as,
    }


def box_field(p, grid):
    """DensityField for the box on a line grid spanning [0, L]."""
    d = box_densities(p, grid.points)
    spec = model.box(p.L, model.Units(p.hbar, p.mass))
    return qdens.DensityField(coord=grid.points, h=grid.h, D=1, geometry="line", rho=d["rho"],
                              tau=d["tau"], tau1=d["tau1"], xi=d["xi"], lap_rho=d["rho2"],
                              lambda_used=p.lambda_tf, spec=spec, N=2 * p.M,
                              extras={"backend": "analytic", "bounds": grid.bounds, "box": d})
