"""
Scenario presets mirroring the figures, and their evaluation.

A scenario builds densities for one system, runs the relevant theorem
checks and collects assertions (named tolerances). Results are plain
arrays and dicts so the CLI can write them out.
"""

from dataclasses import dataclass, field
import math
import time

import numpy as np

from . import closedform, model, qdens, smooth, spectral, virial

__all__ = ["Scenario", "ScenarioResult", "PRESETS", "get_preset", "evaluate"]


@dataclass(frozen=True)
class Scenario:
    """Immutable preset: desk-scale and large-scale parameters plus options."""
    name: str
    description: str
    figure: str
    runner: str
    desk: tuple
    paper: tuple = ()
    options: tuple = ()
    notes: str = ""

    def params(self, paper_scale=False):
        p = dict(self.desk)
        if paper_scale:
            p.update(dict(self.paper))
        return p

    def default_options(self):
        return dict(self.options)


@dataclass
class ScenarioResult:
    """Tables (name -> ordered columns), reports, assertions and scalars."""
    name: str
    params: dict
    options: dict
    tables: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    plots: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def check(self, name, value, tol, op="<="):
        value = float(value)
        if op == "<=":
            ok = value <= tol
        elif op == ">=":
            ok = value >= tol
        elif op == "<":
            ok = value < tol
        else:
            raise ValueError(op)
        ok = bool(ok and math.isfinite(value))
        self.checks.append({"name": name, "value": value, "op": op, "tol": float(tol), "passed": ok})
        return ok

    def add_report(self, label, rep, table=None):
        self.reports.append((label, rep))
        if table is not None:
            cols = self.tables[table]
            cols[label + "_lhs"] = rep.lhs
            cols[label + "_rhs"] = rep.rhs
            cols[label + "_res"] = rep.residual
            cols[label + "_mask"] = rep.mask.astype(int)
        return rep


def _field_table(fld):
    return {"coord": fld.coord, "rho": fld.rho, "tau": fld.tau, "tau1": fld.tau1, "xi": fld.xi,
            "lap_rho": fld.lap_rho}


def _global(res, fld, label="global", xi2=True):
    g = virial.check_global_kinetic(fld)
    res.info[label + "_int_tau"] = g["int_tau"]
    res.info[label + "_int_tau1"] = g["int_tau1"]
    res.info[label + "_int_xi"] = g["int_xi"]
    res.check(label + ": int tau = int tau1 = int xi", g["spread"], 1e-6)
    if xi2:
        _, rep = virial.xi2_and_global_virial(fld)
        ek = rep.meta["E_kin"]
        res.info[label + "_int_xi2"] = rep.meta["int_xi2"]
        res.check(label + ": int xi2 = E_kin", abs(rep.meta["int_xi2"] - ek) / abs(ek), 1e-6)
        res.check(label + ": int R2 = 0", abs(rep.meta["int_R2"]) / abs(ek), 1e-6)
        return rep
    return None


def _radial_system(spec, N, h, pad):
    lt = smooth.find_lambda_tf(spec, N)
    g = spectral.Grid.radial(spec.turning_radius(lt) + pad, h=h)
    sol, occ = spectral.solve_radial_for_N(spec, N, g)
    return qdens.compute_densities(sol, occ), occ, lt, g


def _lambda_choice(opts, lam_default, occ=None, lam_m=None):
    c = str(opts.get("lambda_choice", "default")).lower()
    if c in ("qm", "homo-lumo") and occ is not None:
        return occ.lambda_qm
    if c == "m" and lam_m is not None:
        return lam_m
    return lam_default


# --------------------------------------------------------------- runners

def run_iho(p, opts):
    M, D = int(p["M"]), int(p.get("D", 3))
    res = ScenarioResult("", p, opts)
    fld = closedform.iho_densities(M, D, h=float(p["h"]))
    lam_m = fld.lambda_used
    lam = _lambda_choice(opts, lam_m, lam_m=lam_m)
    if str(opts.get("lambda_choice", "M")).lower() == "tf":
        lam = smooth.find_lambda_tf(fld.spec, fld.N)
    res.info.update(N=fld.N, lambda_M=lam_m, lambda_smooth=lam)
    res.tables["field"] = _field_table(fld)
    for label, rep in (("lvt1", virial.check_lvt1(fld)), ("lvt_basic", virial.check_lvt_basic(fld)),
                       ("slvt", virial.check_slvt(fld)),
                       ("ide", virial.check_ide_3ode(fld, which="IDE")),
                       ("ode3", virial.check_ide_3ode(fld, which="3ODE"))):
        res.add_report(label, rep, "field")
        res.check(f"{label} exact (allowed L_inf)", rep.norm("allowed"), 1e-6)
    sm = smooth.tf_densities(fld.spec, lam, fld, mask_c=float(opts.get("mask_c", 4.0)))
    osc = smooth.oscillating_parts(fld, sm)
    res.tables["field"].update(delta_rho=osc.delta_rho, delta_tau=osc.delta_tau, delta_xi=osc.delta_xi)
    a = res.add_report("dlvt", virial.check_differential_lvt(osc, fld, lam, False, sm.interior_mask), "field")
    b = res.add_report("dlvt_sc", virial.check_differential_lvt(osc, fld, lam, True, sm.interior_mask), "field")
    res.check("differential LVT interior L_inf", a.norm(), 0.05)
    res.info["dlvt_sc_interior_linf"] = b.norm()
    cb = virial.check_center_bessel(fld, osc, lam, M=M, form=opts.get("bessel_form", "radial"))
    res.add_report("center_bessel", cb)
    res.info["bessel_amplitude_ratio"] = cb.meta["amplitude_ratio"]
    res.info["T_r1"] = cb.meta["T_r1"]
    res.check("centre Bessel correlation", cb.meta["correlation"], 0.99, ">=")
    res.check("kinetic eigen relation interior L_inf", cb.norm(), 0.10)
    tf = res.add_report("tf_functional", virial.check_tf_functional_on_exact(fld, sm.interior_mask), "field")
    res.check("tau_TF[rho] interior L_inf", tf.norm(), 0.02)
    op = virial.check_tau_opposition(osc, fld.coord, sm.interior_mask)
    res.add_report("opposition", op)
    res.check("max|delta xi| / max|delta_r tau| interior", op.meta["xi_ratio"], 0.1)
    _global(res, fld)
    res.plots.append(("field", "coord", ["dlvt_lhs", "dlvt_rhs"], "delta tau vs (lam - V) delta rho"))
    return res


def run_chaos(p, opts):
    N, kap = int(p["N"]), float(p["kappa"])
    spec = model.coupled_quartic(kap)
    g = spectral.Grid.plane(float(p["X"]), int(p["n"]))
    sol = spectral.solve_2d_grid(spec, g, N // 2 + int(p.get("extra_levels", 12)))
    occ = model.fill_levels(sol.energies, sol.degeneracy, N)
    fld = qdens.compute_densities(sol, occ)
    lam = _lambda_choice(opts, smooth.find_lambda_tf(spec, N), occ)
    sm = smooth.tf_densities(spec, lam, g, mask_c=float(opts.get("mask_c", 4.0)))
    osc = smooth.oscillating_parts(fld, sm)
    res = ScenarioResult("", p, opts)
    res.info.update(N=N, lambda_smooth=lam, lambda_qm=occ.lambda_qm,
                    eigen_residual=sol.flags["residual"])
    slope = 1.0 / math.sqrt(3.0)
    xmax = min(g.points[-1], g.points[-1] / slope) * 0.99
    x = np.linspace(0.0, xmax, int(p.get("line_points", 400)))
    res.tables["line"] = {"coord": x, "delta_rho": virial.sample_line(osc.delta_rho, g, slope, x),
                          "delta_tau": virial.sample_line(osc.delta_tau, g, slope, x),
                          "delta_xi": virial.sample_line(osc.delta_xi, g, slope, x)}
    reps = {}
    for sc in (False, True):
        r2d = virial.check_differential_lvt(osc, fld, lam, sc, sm.interior_mask)
        lbl = "dlvt_sc" if sc else "dlvt"
        reps[sc] = res.add_report(lbl, virial.restrict_to_line(r2d, g, slope, x), "line")
        res.info[lbl + "_plane_interior_linf"] = r2d.norm()
    res.check("differential LVT interior L_inf (y = x/sqrt3)", reps[False].norm(), 0.10)
    res.check("surface norm improves with correction",
              reps[True].norm("surface") - reps[False].norm("surface"), 0.0, "<")
    res.check("interior norm does not improve with correction",
              reps[False].norm() - reps[True].norm(), 0.0, "<=")
    _global(res, fld, xi2=False)
    res.plots.append(("line", "coord", ["dlvt_lhs", "dlvt_rhs", "dlvt_sc_rhs"], "delta tau along y = x/sqrt3"))
    return res


def run_quartic1d(p, opts):
    N = int(p["N"])
    spec = model.quartic_1d(float(p.get("c", 0.5)))
    X = float(p["X"])
    g = spectral.Grid.line(-X, X, h=float(p["h"]))
    sol = spectral.solve_1d(spec, g, N // 2 + 8)
    occ = model.fill_levels(sol.energies, sol.degeneracy, N)
    fld = qdens.compute_densities(sol, occ)
    lam = _lambda_choice(opts, smooth.find_lambda_tf(spec, N), occ)
    sm = smooth.tf_densities(spec, lam, g, mask_c=float(opts.get("mask_c", 4.0)))
    res = ScenarioResult("", p, opts)
    res.info.update(N=N, lambda_smooth=lam, lambda_qm=occ.lambda_qm)
    res.tables["field"] = _field_table(fld)
    s = res.add_report("slvt", virial.check_slvt(fld), "field")
    res.check("SLVT exact (full L_inf)", s.norm("full"), 1e-6)
    b = res.add_report("lvt_basic", virial.check_lvt_basic(fld, lam=lam), "field")
    res.check("generalized LVT full L_inf", b.norm("full"), 0.02)
    res.add_report("lvt1", virial.check_lvt1(fld, lam=lam), "field")
    res.add_report("ide", virial.check_ide_3ode(fld, lam, "IDE", mask=sm.interior_mask), "field")
    o = res.add_report("ode3", virial.check_ide_3ode(fld, lam, "3ODE", mask=sm.interior_mask), "field")
    res.check("generalized 3ODE interior L_inf", o.norm(), 0.05)
    _global(res, fld)
    res.plots.append(("field", "coord", ["lvt_basic_lhs", "lvt_basic_rhs"], "tau vs generalized LVT"))
    return res


def run_r4_2d(p, opts):
    spec = model.radial_power(float(p["c"]), float(p["power"]), int(p.get("D", 2)))
    fld, occ, lt, g = _radial_system(spec, int(p["N"]), float(p["h"]), float(p["pad"]))
    lam = _lambda_choice(opts, lt, occ)
    mode = opts.get("xi_mode", "TF")
    sm = smooth.tf_densities(spec, lam, g, mask_c=float(opts.get("mask_c", 4.0)), mode=mode, field=fld)
    res = ScenarioResult("", p, opts)
    res.info.update(N=fld.N, lambda_smooth=lam, lambda_qm=occ.lambda_qm, xi_mode=mode)
    res.tables["field"] = _field_table(fld)
    res.tables["field"]["xi_smooth"] = sm.xi_smooth
    which = p.get("theorem", "lvt")
    if which == "lvt":
        a = res.add_report("lvt", virial.check_lvt_basic(fld, smooth_set=sm, surface_correction=False), "field")
        b = res.add_report("lvt_sc", virial.check_lvt_basic(fld, smooth_set=sm, surface_correction=True), "field")
        res.check("generalized LVT interior L_inf (no correction)", a.norm(), 0.05)
        plot = ["lvt_lhs", "lvt_rhs", "lvt_sc_rhs"]
        title = "tau vs generalized LVT"
    else:
        a = res.add_report("slvt", virial.check_slvt(fld, False, sm), "field")
        b = res.add_report("slvt_sc", virial.check_slvt(fld, True, sm), "field")
        res.check("generalized SLVT interior L_inf (no correction)", a.norm(), 0.05)
        plot = ["slvt_lhs", "slvt_sc_lhs", "slvt_rhs"]
        title = "xi_smooth, xi and (D/2) int V' rho"
    res.check("surface norm improves with correction", b.norm("surface") - a.norm("surface"), 0.0, "<")
    res.check("interior norm does not improve with correction", a.norm() - b.norm(), 0.0, "<=")
    _global(res, fld)
    res.plots.append(("field", "coord", plot, title))
    return res


def run_disk(p, opts):
    N = int(p["N"])
    spec = model.disk_billiard(1.0)
    sol = spectral.solve_disk_billiard(1.0, count=int(p["count"]))
    occ = model.fill_levels(sol.energies, sol.degeneracy, N)
    fld = qdens.compute_densities(sol, occ)
    lam = smooth.weyl_lambda_disk(N, curvature=bool(opts.get("weyl_curvature", True)))
    lam = _lambda_choice(opts, lam, occ)
    sm = smooth.tf_densities(spec, lam, sol.grid)
    res = ScenarioResult("", p, opts)
    res.info.update(N=N, lambda_smooth=lam, lambda_qm=occ.lambda_qm,
                    lambda_weyl_three_term=smooth.weyl_lambda_disk(N, curvature=False))
    res.check("Weyl lambda = 160.68303 +- 0.001", abs(lam - 160.68303), 0.001)
    res.tables["field"] = _field_table(fld)
    res.tables["field"]["lam_rho"] = lam * fld.rho
    win = fld.coord <= float(p.get("r_window", 0.8))
    rep = res.add_report("lvt", virial.check_lvt_basic(fld, smooth_set=sm, surface_correction=False,
                                                       mask=win), "field")
    res.check("generalized LVT interior L2 (r <= 0.8)", rep.norm("interior", "l2"), 0.07)
    bare = fld.tau - lam * fld.rho
    res.info["bare_lam_rho_interior_l2"] = float(np.sqrt(np.sum(bare[win] ** 2) / np.sum(fld.tau[win] ** 2)))
    _global(res, fld, xi2=False)
    res.plots.append(("field", "coord", ["tau", "lam_rho", "lvt_rhs"], "disk billiard tau and lam rho"))
    return res


def run_airy(p, opts):
    lam, a = float(p["lam"]), float(p["a"])
    lp = closedform.LinearParams(a, lam)
    g = spectral.Grid.line(float(p["xmin"]), lp.x_lambda + float(p["xmax_pad"]), h=float(p["h"]))
    fld = closedform.linear_field_1d(lp, g)
    res = ScenarioResult("", p, opts)
    res.info.update(lam=lam, x_lambda=lp.x_lambda)
    res.tables["field"] = _field_table(fld)
    x = g.points
    drho = fld.rho - (2 / math.pi) * np.sqrt(np.clip(2 * (lam - a * x), 0, None) * lp.mass) / lp.hbar
    inside = x < lp.x_lambda
    das = np.full_like(x, np.nan)
    das[inside] = closedform.linear_asymptotics_1d(lp, x[inside])[0]
    res.tables["field"].update(delta_rho=drho, delta_rho_as=das)
    for label, rep in (("lvt1", virial.check_lvt1(fld)), ("lvt_basic", virial.check_lvt_basic(fld)),
                       ("slvt", virial.check_slvt(fld)),
                       ("ide", virial.check_ide_3ode(fld, which="IDE")),
                       ("ode3", virial.check_ide_3ode(fld, which="3ODE"))):
        res.add_report(label, rep, "field")
        res.check(f"{label} exact (allowed L_inf)", rep.norm("allowed"), 1e-7)
    w = x <= lp.x_lambda - 1.0
    err = np.max(np.abs(drho[w] - das[w])) / np.max(np.abs(drho[w]))
    res.check("delta rho_as vs exact for x <= x_lambda - 1 (rel L_inf)", err, 0.05)
    res.plots.append(("field", "coord", ["delta_rho", "delta_rho_as"], "delta rho exact and asymptotic"))
    return res


def run_ide3d(p, opts):
    spec = model.radial_power(float(p["c"]), float(p["power"]), 3)
    fld, occ, lt, g = _radial_system(spec, int(p["N"]), float(p["h"]), float(p["pad"]))
    sm = smooth.tf_densities(spec, lt, g, mask_c=float(opts.get("mask_c", 4.0)))
    osc = smooth.oscillating_parts(fld, sm)
    res = ScenarioResult("", p, opts)
    res.info.update(N=fld.N, lambda_smooth=lt, lambda_qm=occ.lambda_qm)
    res.tables["field"] = _field_table(fld)
    for sc in (False, True):
        lbl = "ride_sc" if sc else "ride"
        rep = res.add_report(lbl, virial.check_ide_3ode(fld, which="rIDE", smooth_set=sm, osc=osc,
                                                        surface_correction=sc), "field")
        res.info[lbl + "_interior_linf"] = rep.norm()
        res.info[lbl + "_surface_linf"] = rep.norm("surface")
    _global(res, fld)
    res.plots.append(("field", "coord", ["ride_lhs", "ride_rhs", "ride_sc_rhs"], "generalized IDE"))
    return res


def run_box(p, opts):
    Ms = p["Ms"]
    Ms = [int(m) for m in (Ms if isinstance(Ms, (list, tuple)) else [Ms])]
    L = float(p["L"])
    g = spectral.Grid.line(0.0, L, n=int(p["n"]))
    x = g.points
    win = (x >= p["window"] * L) & (x <= (1 - p["window"]) * L)
    res = ScenarioResult("", p, opts)
    norms = {}
    for M in Ms:
        bp = closedform.BoxParams(L, M)
        d = closedform.box_densities(bp, x)
        fld = closedform.box_field(bp, g)
        tab = f"M{M}"
        res.tables[tab] = _field_table(fld)
        opp = np.max(np.abs(d["delta_tau"] + d["delta_tau1"])) / np.max(np.abs(d["delta_tau"]))
        res.check(f"M={M}: delta tau1 = -delta tau", opp, 1e-10)
        dtau = d["tau"] - bp.tau_tf
        drho = d["rho"] - bp.rho_tf
        lhs_rep = virial._make("differential_lvt", x, dtau, bp.lambda_tf * drho, win, None,
                               {"lambda": bp.lambda_tf}, {"M": M})
        res.add_report(f"dlvt_M{M}", lhs_rep, tab)
        tf = res.add_report(f"tf_M{M}", virial.check_tf_functional_on_exact(fld, mask=win), tab)
        eig = -fld.spec.hb2m * d["rho2"] - 4 * bp.lambda_tf * drho
        norms[M] = (lhs_rep.norm(), tf.norm())
        res.info[f"M{M}_dlvt_interior_linf"] = lhs_rep.norm()
        res.info[f"M{M}_tf_interior_linf"] = tf.norm()
        res.info[f"M{M}_eigen_interior_linf"] = float(np.max(np.abs(eig[win]))
                                                      / np.max(np.abs(fld.spec.hb2m * d["rho2"][win])))
        g_ = virial.check_global_kinetic(fld)
        res.check(f"M={M}: int tau = int tau1 = int xi", g_["spread"], 1e-6)
    for m1, m2 in zip(Ms[:-1], Ms[1:]):
        if m2 != 2 * m1:
            continue
        r1 = norms[m1][0] / norms[m2][0]
        r2 = norms[m1][1] / norms[m2][1]
        res.check(f"differential LVT ratio M={m1}->{m2} >= 1.6", r1, 1.6, ">=")
        res.check(f"differential LVT ratio M={m1}->{m2} <= 2.6", r1, 2.6)
        res.check(f"TF functional ratio M={m1}->{m2} >= 3.2", r2, 3.2, ">=")
        res.check(f"TF functional ratio M={m1}->{m2} <= 5.2", r2, 5.2)
    res.plots.append((f"M{Ms[-1]}", "coord", [f"dlvt_M{Ms[-1]}_lhs", f"dlvt_M{Ms[-1]}_rhs"],
                      "box delta tau vs lam_TF delta rho"))
    return res


def run_linear(p, opts):
    lam, a = float(p["lam"]), float(p["a"])
    lp = closedform.LinearParams(a, lam)
    res = ScenarioResult("", p, opts)
    xs = np.linspace(lp.x_lambda - 15.0, lp.x_lambda + 2.0, int(p["conv_points"]))
    cf = closedform.linear_rho_1d(lp, xs)
    cv = closedform.linear_rho_convolution(a * xs, lam, a, 1)
    res.check("D=1 closed-form rho vs convolution (rel)", np.max(np.abs(cf - cv)) / np.max(np.abs(cv)), 1e-8)
    g = spectral.Grid.line(lp.x_lambda - 30.0, lp.x_lambda + 8.0, h=0.005)
    fld = closedform.linear_field_1d(lp, g)
    s = virial.check_slvt(fld)
    res.check("D=1 SLVT (allowed L_inf)", s.norm("allowed"), 1e-7)
    bl = max(closedform.bloch_identity_check_1d(xx, bb, a)
             for xx in np.linspace(-2.0, 2.0, 10) for bb in np.linspace(0.2, 2.0, 10))
    res.check("Bloch identity on 10 x 10 (x, beta)", bl, 1e-8)
    # D=3 axis
    avec = np.array(p["a3"], dtype=float)
    an = float(np.linalg.norm(avec))
    p3 = closedform.LinearParams(an, lam)
    xi_ax = np.linspace((lam - 15.0) / avec[0], (lam + 2.0) / avec[0], int(p["conv_points"]))
    rho3 = closedform.linear_axis_3d(p3, avec[0] * xi_ax / an)[0]
    cv3 = closedform.linear_rho_convolution(avec[0] * xi_ax, lam, an, 3)
    res.check("D=3 axis rho vs convolution (rel)", np.max(np.abs(rho3 - cv3)) / np.max(np.abs(cv3)), 1e-6)
    x = np.linspace((lam - 40.0) / avec[0], (lam + 3.0) / avec[0], 8601)
    sp = closedform.linear_axis_3d_split(p3, avec[0] * x / an)
    z = p3.z(avec[0] * x / an)
    w = z <= float(p.get("z_window", -5.0))
    e = lam - avec[0] * x
    r = sp["delta_tau"] - e * sp["delta_rho"]
    res.check("D=3 delta tau = (lam - a_i x_i) delta rho (window)",
              np.max(np.abs(r[w])) / np.max(np.abs(sp["delta_tau"][w])), 0.05)
    res.tables["axis3"] = {"coord": x, "rho": sp["rho"], "tau": sp["tau"], "xi": sp["xi"],
                           "delta_rho": sp["delta_rho"], "delta_tau": sp["delta_tau"],
                           "lam_minus_V_delta_rho": e * sp["delta_rho"]}
    res.plots.append(("axis3", "coord", ["delta_tau", "lam_minus_V_delta_rho"], "D=3 axis"))
    return res


RUNNERS = {"iho": run_iho, "chaos": run_chaos, "quartic1d": run_quartic1d, "r4": run_r4_2d,
           "disk": run_disk, "airy": run_airy, "ide3d": run_ide3d, "box": run_box, "linear": run_linear}

_R4 = (("c", 0.5), ("power", 4.0), ("D", 2), ("N", 498), ("h", 0.01), ("pad", 2.5))

PRESETS = {s.name: s for s in (
    Scenario("fig1-iho3d", "3D oscillator: exact theorems, differential LVT, centre Bessel law",
             "Fig. 1", "iho", (("M", 10), ("D", 3), ("h", 0.01)), (("M", 60),),
             (("lambda_choice", "M"), ("mask_c", 4.0))),
    Scenario("fig2-chaos", "coupled quartic kappa=0.6: differential LVT along y = x/sqrt3",
             "Fig. 2", "chaos", (("N", 200), ("kappa", 0.6), ("X", 5.0), ("n", 251)),
             (("N", 632), ("X", 6.5), ("n", 401)), (("mask_c", 4.0),)),
    Scenario("fig3-quartic1d", "1D quartic x^4/2, N=40: generalized LVT, SLVT, x3ODE",
             "Fig. 3", "quartic1d", (("N", 40), ("c", 0.5), ("X", 6.0), ("h", 0.01))),
    Scenario("fig4-r4-2d", "2D r^4/2: generalized LVT without surface correction",
             "Fig. 4", "r4", _R4 + (("theorem", "lvt"),), (("N", 6956),), (("xi_mode", "TF"),),
             notes="large-scale alternatives: N=6956 with r^4/2, or N=16906 with c=0.25 (override N and c)"),
    Scenario("fig5-r4-2d", "2D r^4/2: generalized LVT with surface correction",
             "Fig. 5", "r4", _R4 + (("theorem", "lvt"),), (("N", 16906), ("c", 0.25)),
             (("xi_mode", "TF"),), notes="large-scale alternatives: N=16906 with c=0.25, or N=6956 with r^4/2"),
    Scenario("fig6-disk", "disk billiard N=68: tau vs lam rho with Weyl lam",
             "Fig. 6", "disk", (("N", 68), ("count", 80), ("r_window", 0.8))),
    Scenario("fig7-airy", "1D linear potential lam=20, a=1: exact and asymptotic delta rho",
             "Fig. 7", "airy", (("lam", 20.0), ("a", 1.0), ("xmin", -10.0), ("xmax_pad", 6.0),
                                 ("h", 0.005))),
    Scenario("fig8-slvt-2d", "2D r^4/2: generalized SLVT without surface correction",
             "Fig. 8", "r4", _R4 + (("theorem", "slvt"),), (("N", 6956),), (("xi_mode", "TF"),)),
    Scenario("fig9-slvt-2d", "2D r^4/2: generalized SLVT with surface correction",
             "Fig. 9", "r4", _R4 + (("theorem", "slvt"),), (("N", 6956),), (("xi_mode", "TF"),)),
    Scenario("figC-ide-3d", "3D r^4/4: generalized IDE with and without surface correction",
             "Fig. C", "ide3d", (("c", 0.25), ("power", 4.0), ("N", 1010), ("h", 0.01), ("pad", 2.5)),
             (("N", 91330),), notes="large-scale alternatives: N=91330 or N=42094"),
    Scenario("box-suite", "1D box: opposition, differential LVT and TF functional scaling",
             "suite", "box", (("Ms", (10, 20, 40)), ("L", 1.0), ("n", 4001), ("window", 0.1))),
    Scenario("linear-suite", "linear potential D=1 and D=3 axis closed forms and identities",
             "suite", "linear", (("lam", 20.0), ("a", 1.0), ("a3", (1.0, 0.5, 0.7)), ("conv_points", 5))),
)}


def get_preset(name):
    if name not in PRESETS:
        raise KeyError(name)
    return PRESETS[name]


def evaluate(scenario, params=None, options=None, paper_scale=False):
    """Run a scenario; returns a ScenarioResult with timing in info."""
    p = scenario.params(paper_scale)
    p.update(params or {})
    opts = scenario.default_options()
    opts.update(options or {})
    t0 = time.perf_counter()
    res = RUNNERS[scenario.runner](p, opts)
    res.name = scenario.name
    res.params = p
    res.options = opts
    res.info["runtime_s"] = time.perf_counter() - t0
    return res
