"""
Command line interface.

    lvtlab list
    lvtlab describe <preset>
    lvtlab run <preset | config.ini> [--paper-scale] [--grid-refine] [--out DIR]

Exit codes: 0 when every assertion passes, 1 on a tolerance failure,
2 on an unknown preset or a configuration error.
"""

import argparse
import configparser
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import scenarios
from .spectral import SolverError

__all__ = ["main", "load_config", "write_outputs"]

log = logging.getLogger("lvtlab")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
REFINE_DRIFT = 0.10


class ConfigError(ValueError):
    pass


def _parse_value(text):
    text = text.strip()
    if "," in text:
        return tuple(_parse_value(t) for t in text.split(",") if t.strip())
    low = text.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def load_config(path):
    """Read an INI file: [scenario] preset, [params] and [options] overrides."""
    cp = configparser.ConfigParser()
    cp.optionxform = str   # parameter names are case sensitive (N, M, Ms)
    try:
        ok = cp.read(path)
    except configparser.Error as e:
        raise ConfigError(str(e)) from e
    if not ok:
        raise ConfigError(f"cannot read {path}")
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section")
    name = cp["scenario"].get("preset") or cp["scenario"].get("name")
    if not name:
        raise ConfigError("[scenario] needs preset = <name>")
    try:
        sc = scenarios.get_preset(name)
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}") from None
    params = {k: _parse_value(v) for k, v in cp["params"].items()} if cp.has_section("params") else {}
    opts = {k: _parse_value(v) for k, v in cp["options"].items()} if cp.has_section("options") else {}
    unknown = set(params) - set(dict(sc.desk)) - set(dict(sc.paper))
    if unknown:
        raise ConfigError(f"unknown parameters for {name}: {sorted(unknown)}")
    paper = cp["scenario"].getboolean("paper_scale", fallback=False)
    return sc, params, opts, paper


def _fmt(v):
    return format(float(v), ".12g")


def _write_table(path, cols):
    names = list(cols)
    arrays = [np.asarray(cols[k]).ravel() for k in names]
    n = max(a.size for a in arrays)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for i in range(n):
            w.writerow([_fmt(a[i]) if i < a.size else "" for a in arrays])


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return None if x.size > 16 else x.tolist()
    if isinstance(x, (np.floating, float)):
        return float(x) if np.isfinite(x) else str(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


_PLOT = '''"""Plot the columns written by lvtlab run."""
import csv
import sys
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
PLOTS = {plots!r}

for i, (table, xcol, ycols, title) in enumerate(PLOTS):
    with open(here / (table + ".csv")) as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r[xcol]) for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    for c in ycols:
        ax.plot(x, [float(r[c]) if r[c] else float("nan") for r in rows], label=c)
    ax.set_xlabel(xcol)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(here / f"plot_{{i}}.png", dpi=120)
'''


def write_outputs(res, out, extra=None):
    """CSV tables, summary.json and a matplotlib script in directory ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, cols in res.tables.items():
        _write_table(out / f"{name}.csv", cols)
    summary = {
        "scenario": res.name,
        "params": _jsonable(res.params),
        "options": _jsonable(res.options),
        "passed": res.passed,
        "checks": _jsonable(res.checks),
        "info": _jsonable(res.info),
        "reports": {label: _jsonable(rep.summary()) for label, rep in res.reports},
    }
    if extra:
        summary.update(_jsonable(extra))
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    (out / "plot.py").write_text(_PLOT.format(plots=[tuple(p) for p in res.plots]))
    return summary


def _refine_params(sc, params, paper):
    p = sc.params(paper)
    p.update(params)
    if "h" in p:
        return {"h": p["h"] / 2}
    if "n" in p:
        return {"n": 2 * int(p["n"]) + 1}
    return None


def _refine(sc, res, params, opts, paper):
    """Rerun at half the step and compare the non-exact report norms."""
    fine_p = _refine_params(sc, params, paper)
    if fine_p is None:
        return {"refine": "no grid parameter"}, True
    fine = scenarios.evaluate(sc, {**params, **fine_p}, opts, paper)
    coarse_n = {lbl: rep for lbl, rep in res.reports}
    drift, ok = {}, True
    for lbl, rep in fine.reports:
        c = coarse_n.get(lbl)
        if c is None or rep.exact:
            continue
        a, b = c.norm(), rep.norm()
        d = abs(a - b) / max(abs(b), 1e-300)
        drift[lbl] = {"coarse": a, "fine": b, "drift": d}
        # norms at round-off level carry no drift information
        if max(a, b) > 1e-8 and d > REFINE_DRIFT:
            ok = False
    return {"refine": {"params": fine_p, "drift": drift, "passed": ok}}, ok


def _cmd_list(args):
    for name, sc in scenarios.PRESETS.items():
        print(f"{name:16s} {sc.figure:11s} {sc.description}")
    return EXIT_OK


def _cmd_describe(args):
    try:
        sc = scenarios.get_preset(args.preset)
    except KeyError:
        print(f"unknown preset {args.preset!r}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{sc.name}: {sc.description} ({sc.figure})")
    print("desk parameters:  " + ", ".join(f"{k}={v}" for k, v in sc.desk))
    if sc.paper:
        print("large scale:      " + ", ".join(f"{k}={v}" for k, v in sc.paper))
    if sc.options:
        print("options:          " + ", ".join(f"{k}={v}" for k, v in sc.options))
    if sc.notes:
        print("notes:            " + sc.notes)
    return EXIT_OK


def _cmd_run(args):
    target = args.target
    try:
        if target.endswith(".ini") or os.path.isfile(target):
            sc, params, opts, paper = load_config(target)
        else:
            sc, params, opts, paper = scenarios.get_preset(target), {}, {}, False
    except KeyError:
        print(f"unknown preset {target!r}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    paper = paper or args.paper_scale
    try:
        res = scenarios.evaluate(sc, params, opts, paper)
    except (ValueError, KeyError, TypeError, SolverError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    extra, ok = None, True
    if args.grid_refine:
        extra, ok = _refine(sc, res, params, opts, paper)
    out = Path(args.out or f"lvtlab-{sc.name}")
    write_outputs(res, out, extra)
    for c in res.checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['value']:.4g} {c['op']} {c['tol']:g}")
    if args.grid_refine:
        print(f"{'PASS' if ok else 'FAIL'}  grid refinement drift <= {REFINE_DRIFT:g}")
    print(f"wrote {out} ({res.info['runtime_s']:.1f} s)")
    return EXIT_OK if (res.passed and ok) else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="lvtlab", description="local virial theorem scenarios")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sub.add_parser("list", help="list presets")
    d = sub.add_parser("describe", help="show a preset")
    d.add_argument("preset")
    r = sub.add_parser("run", help="run a preset or an INI config")
    r.add_argument("target")
    r.add_argument("--paper-scale", action="store_true", help="use the large published system sizes")
    r.add_argument("--grid-refine", action="store_true", help="rerun at half the step and report drift")
    r.add_argument("--out", help="output directory")
    return ap


def main(argv=None):
    threads = os.environ.get("LVTLAB_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return {"list": _cmd_list, "describe": _cmd_describe, "run": _cmd_run}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
