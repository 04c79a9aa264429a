"""
Pointwise checks of local virial theorems.

Every check returns a VirialReport holding the two sides of a relation,
their difference and relative norms over three regions: the whole grid
(``full``), the classically allowed region (``allowed``) and the interior
mask (``interior``); ``surface`` is the complement of the interior mask.

Relative norms: L_inf = max|res| / max|lhs|, L2 = ||res|| / ||lhs||,
both taken over the region.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import integrate as sint
from scipy import ndimage

from . import model, qdens, quad, smooth, specfun

__all__ = [
    "VirialReport",
    "region_norms",
    "tail_integral_field",
    "check_lvt1",
    "check_lvt_basic",
    "check_differential_lvt",
    "check_slvt",
    "xi2_and_global_virial",
    "check_ide_3ode",
    "check_center_bessel",
    "radial_period",
    "check_tf_functional_on_exact",
    "check_tau_opposition",
    "check_global_kinetic",
    "sample_line",
    "restrict_to_line",
    "bessel_form",
]


@dataclass
class VirialReport:
    """Both sides of a relation, the residual and its norms."""
    theorem: str
    coord: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    residual: np.ndarray
    mask: np.ndarray
    norms: dict
    options: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    exact: bool = False

    def norm(self, region="interior", kind="linf"):
        return self.norms[region][kind]

    def summary(self):
        """Plain dict (JSON-serializable) without the grid arrays."""
        out = {"theorem": self.theorem, "exact": self.exact, "norms": self.norms,
               "options": dict(self.options)}
        out["meta"] = {k: v for k, v in self.meta.items()
                       if isinstance(v, (int, float, str, bool)) or v is None}
        return out


def _rel(lhs, res, sel):
    if not np.any(sel):
        return {"linf": float("nan"), "l2": float("nan")}
    a = np.abs(lhs[sel])
    r = np.abs(res[sel])
    s_inf = a.max()
    s_2 = math.sqrt(float(np.sum(a ** 2)))
    return {"linf": float(r.max() / s_inf) if s_inf > 0 else float(r.max()),
            "l2": float(math.sqrt(float(np.sum(r ** 2))) / s_2) if s_2 > 0 else float("nan")}


def region_norms(lhs, residual, interior, allowed=None):
    """Relative norms over full, allowed, interior and surface regions."""
    lhs = np.asarray(lhs, dtype=float)
    residual = np.asarray(residual, dtype=float)
    ok = np.isfinite(lhs) & np.isfinite(residual)
    interior = np.asarray(interior, dtype=bool) & ok
    allowed = ok if allowed is None else (np.asarray(allowed, dtype=bool) & ok)
    return {
        "full": _rel(lhs, residual, ok),
        "allowed": _rel(lhs, residual, allowed),
        "interior": _rel(lhs, residual, interior),
        "surface": _rel(lhs, residual, ok & ~interior),
    }


def _make(theorem, fld_coord, lhs, rhs, mask, allowed, options, meta, exact=False):
    res = lhs - rhs
    return VirialReport(theorem=theorem, coord=fld_coord, lhs=lhs, rhs=rhs, residual=res,
                        mask=np.asarray(mask, dtype=bool),
                        norms=region_norms(lhs, res, mask, allowed), options=options, meta=meta,
                        exact=exact)


def _lambda(fld, lam):
    return fld.lambda_used if lam is None else float(lam)


def _allowed(fld, lam):
    return (lam - fld.potential) > 0


def _default_mask(fld, lam, mask):
    if mask is not None:
        return np.asarray(mask, dtype=bool)
    return _allowed(fld, lam)


def _require_1d(fld):
    if fld.geometry == "plane":
        raise ValueError("this check needs a radial or line field")


# ------------------------------------------------------------ integrals

def tail_integral_field(fld, g):
    """int_r^inf g(q) dq on the field's grid (radial or line).

    For radial fields ``g`` must be odd in r (e.g. V'(r) rho(r)); the
    integral beyond the last grid point is neglected.
    """
    _require_1d(fld)
    g = np.asarray(g, dtype=float)
    h = fld.h
    if fld.geometry == "radial":
        full = np.concatenate([[0.0], g])
        return quad.tail_integral(full, h, left_parity=-1)[1:]
    return quad.tail_integral(g, h)


def _truncation_flag(fld):
    return bool(abs(fld.rho[-1]) > 1e-10)


def _d1(fld, f):
    """First radial/line derivative of an even (radial) function."""
    if fld.geometry == "radial":
        full = quad.with_origin(f, fld.coord)
        return quad.derivative(full, fld.h, 1, parity=1)[1:]
    return quad.derivative(f, fld.h, 1)


# ------------------------------------------------------------- theorems

def check_lvt1(fld, lam=None, mask=None):
    """xi = D/(D+2) {(hbar^2/8m) lap rho + rho (lam - V)}.

    Exact for closed-shell oscillators at lam = lambda_M and for linear
    potentials at any lam.
    """
    _require_1d(fld)
    lam = _lambda(fld, lam)
    D = fld.D
    V = fld.potential
    rhs = D / (D + 2.0) * (0.25 * fld.spec.hb2m * fld.lap_rho + fld.rho * (lam - V))
    return _make("lvt1", fld.coord, fld.xi, rhs, _default_mask(fld, lam, mask), _allowed(fld, lam),
                 {"lambda": lam}, {"N": fld.N, "D": D}, exact=True)


def check_lvt_basic(fld, lam=None, smooth_set=None, surface_correction=True, mask=None):
    """tau = (lam - V) rho - (2/D) xi, in its generalized form.

    With ``smooth_set`` given and ``surface_correction=False`` the xi on
    the right is the smooth one (xi_TF or its local-average surrogate).
    In D=1 the full xi is always used.
    """
    lam = _lambda(fld, lam) if smooth_set is None else smooth_set.lambda_smooth if lam is None else lam
    D = fld.D
    V = fld.potential
    use_full = surface_correction or smooth_set is None or D == 1
    xi = fld.xi if use_full else smooth_set.xi_smooth
    with np.errstate(invalid="ignore"):
        rhs = (lam - V) * fld.rho - (2.0 / D) * xi
    if mask is None:
        mask = smooth_set.interior_mask if smooth_set is not None else _allowed(fld, lam)
    opts = {"lambda": lam, "surface_correction": bool(use_full),
            "xi_mode": "full" if use_full else smooth_set.mode}
    return _make("lvt_basic", fld.coord, fld.tau, rhs, mask, _allowed(fld, lam), opts,
                 {"N": fld.N, "D": D}, exact=smooth_set is None)


def check_differential_lvt(osc, fld, lam, surface_correction=False, mask=None, D=None):
    """delta tau = (lam - V) delta rho {- (2/D) delta xi}."""
    D = D or fld.D
    V = fld.potential
    with np.errstate(invalid="ignore"):
        rhs = (lam - V) * osc.delta_rho
        if surface_correction:
            rhs = rhs - (2.0 / D) * osc.delta_xi
    mask = _default_mask(fld, lam, mask)
    return _make("differential_lvt", fld.coord, osc.delta_tau, rhs, mask, _allowed(fld, lam),
                 {"lambda": lam, "surface_correction": bool(surface_correction), "xi_mode": osc.mode},
                 {"N": fld.N, "D": D})


def check_slvt(fld, surface_correction=True, smooth_set=None, mask=None):
    """xi {or xi_smooth} = (D/2) int_r^inf V' rho."""
    _require_1d(fld)
    D = fld.D
    xi2 = 0.5 * D * tail_integral_field(fld, fld.dpotential * fld.rho)
    use_full = surface_correction or smooth_set is None
    lhs = fld.xi if use_full else smooth_set.xi_smooth
    lam = fld.lambda_used if smooth_set is None else smooth_set.lambda_smooth
    if mask is None:
        mask = _allowed(fld, lam) if smooth_set is None else smooth_set.interior_mask
    return _make("slvt", fld.coord, lhs, xi2, mask, _allowed(fld, lam),
                 {"surface_correction": bool(use_full),
                  "xi_mode": "full" if use_full else smooth_set.mode},
                 {"N": fld.N, "D": D, "tail_truncated": _truncation_flag(fld)},
                 exact=use_full)


def xi2_and_global_virial(fld, rtol=1e-6):
    """xi2 = (D/2) int_r^inf V' rho, R2 = xi - xi2 and the integrated virial theorem.

    meta holds int xi2, the total kinetic energy, (1/2) int r V' rho and
    int R2; ``meta["passed"]`` is True when int xi2 matches the kinetic
    energy to ``rtol`` and |int R2| <= rtol * E_kin.
    """
    _require_1d(fld)
    if fld.spec.kind in ("box", "disk"):
        raise ValueError("xi2 needs a differentiable potential")
    D = fld.D
    xi2 = 0.5 * D * tail_integral_field(fld, fld.dpotential * fld.rho)
    r2 = fld.xi - xi2
    ekin = qdens.integrate_field(fld, fld.xi)
    int_xi2 = qdens.integrate_field(fld, xi2)
    half_vir = 0.5 * qdens.integrate_field(fld, fld.coord * fld.dpotential * fld.rho)
    int_r2 = qdens.integrate_field(fld, r2)
    passed = abs(int_xi2 - ekin) <= rtol * abs(ekin) and abs(int_r2) <= rtol * abs(ekin)
    rep = _make("xi2", fld.coord, fld.xi, xi2, np.ones_like(xi2, dtype=bool), None, {},
                {"N": fld.N, "D": D, "E_kin": ekin, "int_xi2": int_xi2,
                 "half_r_dV_rho": half_vir, "int_R2": int_r2, "passed": bool(passed),
                 "tail_truncated": _truncation_flag(fld)})
    return xi2, rep


def check_ide_3ode(fld, lam=None, which="IDE", mask=None, smooth_set=None, surface_correction=True,
                   osc=None):
    """Integro-differential (IDE), third-order (3ODE) and generalized (rIDE) forms.

    IDE  : -(hbar^2/8m) lap rho + V rho + (D+2)/2 int_r^inf V' rho = lam rho
    3ODE : (hbar^2/8m) (lap rho)' + (lam - V) rho' + (D/2) V' rho = 0
           (lhs is the first term, rhs minus the other two)
    rIDE : IDE left side vs lam (rho_TF + delta_r rho) {+ lam delta_irr rho};
           delta_irr rho is estimated as delta xi / (lam - V) and reported only.
    """
    _require_1d(fld)
    lam = _lambda(fld, lam)
    D = fld.D
    V = fld.potential
    dV = fld.dpotential
    q = 0.25 * fld.spec.hb2m
    opts = {"lambda": lam}
    if which in ("IDE", "rIDE"):
        tail = tail_integral_field(fld, dV * fld.rho)
        lhs = -q * fld.lap_rho + V * fld.rho + 0.5 * (D + 2) * tail
        if which == "IDE":
            rhs = lam * fld.rho
        else:
            if smooth_set is None or osc is None:
                raise ValueError("rIDE needs the smooth set and oscillating parts")
            lam = smooth_set.lambda_smooth
            with np.errstate(divide="ignore", invalid="ignore"):
                irr = np.where(smooth_set.interior_mask, osc.delta_xi / (lam - V), 0.0)
            rhs = lam * (smooth_set.rho_tf + osc.delta_rho - irr)
            if surface_correction:
                rhs = lam * fld.rho
            opts = {"lambda": lam, "surface_correction": bool(surface_correction),
                    "delta_irr_rho": "delta_xi/(lam-V)"}
            if mask is None:
                mask = smooth_set.interior_mask
    elif which == "3ODE":
        if fld.geometry == "radial" and fld.coord.size < 7:
            raise ValueError("third-derivative stencil needs at least 7 points")
        drho = fld.extras.get("drho")
        dlap = fld.extras.get("dlap_rho")
        drho = _d1(fld, fld.rho) if drho is None else drho
        if dlap is None:
            if fld.geometry == "radial":
                full = quad.with_origin(fld.lap_rho, fld.coord)
                dlap = quad.derivative(full, fld.h, 1, parity=1)[1:]
            else:
                dlap = quad.derivative(fld.lap_rho, fld.h, 1)
        lhs = q * dlap
        rhs = -(lam - V) * drho - 0.5 * D * dV * fld.rho
    else:
        raise ValueError(f"unknown form {which!r}")
    return _make(which, fld.coord, lhs, rhs, _default_mask(fld, lam, mask), _allowed(fld, lam), opts,
                 {"N": fld.N, "D": D, "tail_truncated": _truncation_flag(fld)},
                 exact=which != "rIDE")


def radial_period(spec, lam):
    """Period of one full radial oscillation through the centre.

    T = 4 int_0^{r_t} dr / v(r), v = sqrt(2 (lam - V) / m), i.e. the time
    to cross the diameter twice (2 pi / omega for the oscillator).
    """
    m = spec.units.mass
    rt = spec.turning_radius(lam)
    if spec.kind == "disk":
        return 4.0 * rt / math.sqrt(2 * lam / m)
    # substitute r = rt sin(u) to remove the endpoint singularity
    f = lambda u: rt * math.cos(u) / math.sqrt(max(2.0 * (lam - spec.v_radial(rt * math.sin(u))) / m,
                                                  1e-300))
    val, _ = sint.quad(f, 0.0, 0.5 * math.pi, epsabs=0.0, epsrel=1e-12, limit=200)
    return 4.0 * val


def bessel_form(r, spec, lam, D, M=None, form="radial"):
    """Centre Bessel law delta_r rho(r) for the given smooth Fermi energy.

    form="radial": (m / hbar T) (p / 4 pi hbar r)^nu J_nu(2 r p / hbar)
    form="plain" : (m / hbar T) (p / 4 pi hbar)^nu J_nu(2 r p / hbar)
    The sign is (-1)^M when M is given, else +1.
    """
    hb, m = spec.units.hbar, spec.units.mass
    nu = D / 2.0 - 1.0
    p = math.sqrt(2 * m * lam)
    T = radial_period(spec, lam)
    z = 2 * r * p / hb
    J = np.array([specfun.bessel_j(nu, float(zz)) for zz in np.atleast_1d(z)])
    base = (p / (4 * math.pi * hb * r)) ** nu if form == "radial" else (p / (4 * math.pi * hb)) ** nu
    sign = (-1) ** M if M is not None else 1.0
    return sign * m / (hb * T) * base * J


def check_center_bessel(fld, osc, lam, M=None, lobes=3, form="radial"):
    """Compare delta rho near r=0 with the centre Bessel law.

    The window is 2 r p / hbar <= j_{nu, lobes}. Reports the correlation
    coefficient, the amplitude ratio from a one-parameter fit and the
    residual of -(hbar^2/2m) lap delta rho = 4 lam delta rho. Without a
    shell index M the sign is fitted and flagged.
    """
    if fld.geometry != "radial":
        raise ValueError("centre Bessel law needs a radial field")
    spec, D = fld.spec, fld.D
    nu = D / 2.0 - 1.0
    p = math.sqrt(2 * spec.units.mass * lam)
    zmax = specfun.bessel_j_zeros(nu, math.pi * (lobes + 1) + nu)[lobes - 1]
    r = fld.coord
    win = (2 * r * p / spec.units.hbar) <= zmax
    pred = bessel_form(r[win], spec, lam, D, M=M, form=form)
    d = osc.delta_rho[win]
    corr = float(np.corrcoef(d, pred)[0, 1])
    amp = float(np.dot(d, pred) / np.dot(pred, pred))
    flags = []
    if M is None:
        flags.append("phase fitted")
        if corr < 0:
            pred, corr, amp = -pred, -corr, -amp
    lap_d = qdens.laplacian(osc.delta_rho, fld.h, D, "radial", r=r)
    lhs = -spec.hb2m * lap_d
    rhs = 4 * lam * osc.delta_rho
    mask = np.zeros_like(r, dtype=bool)
    mask[win] = True
    rep = _make("center_bessel", r, lhs, rhs, mask, None, {"lambda": lam, "form": form, "M": M},
                {"N": fld.N, "D": D, "correlation": corr, "amplitude_ratio": amp,
                 "T_r1": radial_period(spec, lam), "z_max": float(zmax), "flags": ";".join(flags)})
    rep.meta["bessel"] = pred
    return rep


def check_tf_functional_on_exact(fld, mask=None, lam=None):
    """tau vs tau_TF[rho] applied to the exact density."""
    lam = _lambda(fld, lam)
    rhs = smooth.tf_functional(fld.rho, fld.D, fld.spec.units)
    return _make("tf_functional", fld.coord, fld.tau, rhs, _default_mask(fld, lam, mask),
                 _allowed(fld, lam), {"lambda": lam}, {"N": fld.N, "D": fld.D})


def check_tau_opposition(osc, coord, mask):
    """delta_r tau + delta_r tau1 and the size of delta xi relative to delta_r tau.

    After the split the sum is identically zero; the content is the ratio
    max|delta xi| / max|delta_r tau| in the interior (meta["xi_ratio"])
    and the pointwise identity delta tau + delta tau1 = 2 delta xi.
    """
    mask = np.asarray(mask, dtype=bool)
    lhs = osc.delta_tau + osc.delta_tau1
    rhs = 2.0 * osc.delta_xi
    m_r = np.max(np.abs(osc.delta_r_tau[mask]))
    ratio = float(np.max(np.abs(osc.delta_xi[mask])) / m_r) if m_r > 0 else float("inf")
    opp = osc.delta_r_tau + osc.delta_r_tau1
    return _make("tau_opposition", coord, lhs, rhs, mask, None, {},
                 {"xi_ratio": ratio, "split_sum_max": float(np.max(np.abs(opp)))})


def check_global_kinetic(fld, rtol=1e-6):
    """int tau, int tau1 and int xi (must agree to rtol)."""
    T = [qdens.integrate_field(fld, x) for x in (fld.tau, fld.tau1, fld.xi)]
    spread = (max(T) - min(T)) / max(abs(t) for t in T)
    return {"int_tau": T[0], "int_tau1": T[1], "int_xi": T[2], "spread": spread,
            "passed": bool(spread <= rtol)}


def sample_line(values, grid, slope, x):
    """Cubic-spline samples of a plane field along y = slope * x."""
    pts = grid.points
    h = grid.h
    ix = (np.asarray(x) - pts[0]) / h
    iy = (slope * np.asarray(x) - pts[0]) / h
    # plane arrays are indexed [iy, ix]
    return ndimage.map_coordinates(np.asarray(values, dtype=float), [iy, ix], order=3, mode="nearest")


def restrict_to_line(rep, grid, slope, x, interior=None):
    """A plane report resampled along y = slope * x.

    lhs and rhs are interpolated with cubic splines; the interior mask is
    taken from the nearest grid point (or ``interior`` if given).
    """
    lhs = sample_line(rep.lhs, grid, slope, x)
    rhs = sample_line(rep.rhs, grid, slope, x)
    if interior is None:
        interior = sample_line(rep.mask.astype(float), grid, slope, x) > 0.5
    allowed = None
    return _make(rep.theorem, np.asarray(x, dtype=float), lhs, rhs, interior, allowed,
                 dict(rep.options, line_slope=slope), dict(rep.meta), exact=rep.exact)
