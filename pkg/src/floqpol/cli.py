"""Command-line front end: ``floqpol <subcommand> ...``.

Exit codes: 0 success, 1 runtime error (or a failed ``compare``), 2 usage error.
Floats are written with 17 significant digits so outputs round-trip exactly
and repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analytic, oracle
from .errors import FloqpolError
from .floquet import fold_to_zone, solve_floquet
from .initcond import expansion_for
from .model import FieldConfig, TruncationConfig, load_model
from .polarization import beat_terms, fourier_components, polarization_time_series, susceptibility
from .scan import ScanSpec, default_workers, fit_susceptibilities, run_scan

SUBCOMMANDS = ("solve", "fourier", "timeseries", "propagate", "scan", "fit", "analytic", "compare")

# Every numeric default the CLI uses, overridable by the flag named in the key.
DEFAULTS = {
    "nmax": 8,
    "tol": 1e-8,             # auto-convergence tolerance on P_1
    "compare_tol": 1e-5,     # max |P_floquet - P_oracle| for compare PASS
    "cycles": 10,
    "samples_per_cycle": 200,
    "steps_per_cycle": 200,  # oracle RK4 steps per field period
    "nreport": None,         # None -> 2*nmax
    "k": 1,
}


@dataclass
class RunConfig:
    subcommand: str
    model: str | None = None
    omega: float | None = None
    amplitude: float | None = None
    truncation: TruncationConfig = field(default_factory=TruncationConfig)
    k: int = 1
    out: str | None = None
    format: str = "csv"
    eigensolver: str = "auto"
    workers: int = 1
    options: dict = field(default_factory=dict)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else None
    return x


def to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def _add_common(p: argparse.ArgumentParser, needs_field: bool = True):
    p.add_argument("--model", required=True, help="model JSON file or builtin name "
                   "(two_level, three_level, lih_like)")
    if needs_field:
        p.add_argument("--omega", type=float, required=True, help="field angular frequency (hartree)")
        p.add_argument("--field", type=float, required=True, help="field amplitude F (a.u.)")
    p.add_argument("--k", type=int, default=DEFAULTS["k"], help="initial stationary state (1-based)")


def _add_trunc(p: argparse.ArgumentParser):
    p.add_argument("--nmax", type=int, default=DEFAULTS["nmax"], help="photon blocks -N..N")
    p.add_argument("--auto-converge", action="store_true",
                   help="double N until P_1 changes by less than --tol")
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"], help="auto-convergence tolerance on P_1")
    p.add_argument("--eigensolver", choices=("auto", "jacobi", "lapack"), default="auto")


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floqpol",
        description="Floquet analysis of strong-field polarization "
                    "in few-level molecular models.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("solve", help="quasi-energies with the switch-on coefficients A")
    _add_common(p); _add_trunc(p); _add_output(p)

    p = sub.add_parser("fourier", help="Fourier components P_n and chi")
    _add_common(p); _add_trunc(p); _add_output(p)
    p.add_argument("--nreport", type=int, default=DEFAULTS["nreport"], help="highest harmonic (default 2N)")

    p = sub.add_parser("timeseries", help="P(t) from the Floquet expansion")
    _add_common(p); _add_trunc(p); _add_output(p)
    p.add_argument("--cycles", type=float, default=DEFAULTS["cycles"])
    p.add_argument("--samples-per-cycle", type=int, default=DEFAULTS["samples_per_cycle"])
    p.add_argument("--oracle", action="store_true", help="add the RK4 oracle column P_oracle")

    p = sub.add_parser("propagate", help="direct RK4 propagation (oracle)")
    _add_common(p); _add_output(p)
    p.add_argument("--cycles", type=float, default=DEFAULTS["cycles"])
    p.add_argument("--dt", type=float, help="time step (default period/200)")
    p.add_argument("--allow-coarse", action="store_true", help="permit dt > period/200 (warns)")

    p = sub.add_parser("scan", help="amplitude or frequency sweep")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, default=DEFAULTS["k"])
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--variable", choices=("amplitude", "frequency"))
    which.add_argument("--omega-scan", action="store_true", help="same as --variable frequency")
    which.add_argument("--field-scan", action="store_true", help="same as --variable amplitude")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p.add_argument("--omega", type=float, help="fixed frequency (amplitude scan)")
    p.add_argument("--field", type=float, help="fixed amplitude (frequency scan)")
    p.add_argument("--observables", default="P,chi,quasienergies",
                   help="comma-separated subset of P,chi,quasienergies")
    p.add_argument("--nreport", type=int, default=3)
    p.add_argument("--workers", type=int, default=None, help="parallel workers (env FLOQPOL_WORKERS)")
    _add_trunc(p); _add_output(p)

    p = sub.add_parser("fit", help="fit P_1(F) ~ alpha F + gamma F^3")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="CSV with columns 'amplitude' and 'P_1' (e.g. scan output)")
    src.add_argument("--model", help="run an amplitude scan of this model instead")
    p.add_argument("--k", type=int, default=DEFAULTS["k"])
    p.add_argument("--omega", type=float)
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int, default=8)
    p.add_argument("--include-even", action="store_true", help="add an F^2 term")
    p.add_argument("--radius", type=float, help="reject amplitudes at or beyond this radius")
    p.add_argument("--workers", type=int, default=None)
    _add_trunc(p); _add_output(p)

    p = sub.add_parser("analytic", help="two-level estimate, convergence radius, SOS polarizability")
    p.add_argument("--d12", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--omega12", type=float, required=True)
    p.add_argument("--field", type=float, default=0.0)
    _add_output(p)

    p = sub.add_parser("compare", help="Floquet vs RK4 oracle P(t) over a time window")
    _add_common(p); _add_trunc(p); _add_output(p)
    p.add_argument("--cycles", type=float, default=DEFAULTS["cycles"])
    p.add_argument("--steps-per-cycle", type=int, default=DEFAULTS["steps_per_cycle"])
    p.add_argument("--compare-tol", type=float, default=DEFAULTS["compare_tol"],
                   help="PASS threshold on max |P_floquet - P_oracle|")
    return parser


def parse_args(argv=None) -> RunConfig:
    """Parse and validate; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    sc = ns.subcommand
    opts = {k: v for k, v in vars(ns).items()}

    def bad(msg):
        parser.error(f"{sc}: {msg}")

    if getattr(ns, "k", 1) < 1:
        bad("--k must be >= 1")
    trunc = TruncationConfig()
    if hasattr(ns, "nmax"):
        if ns.nmax < 1:
            bad("--nmax must be >= 1")
        if not ns.tol > 0:
            bad("--tol must be > 0")
        trunc = TruncationConfig(ns.nmax, ns.auto_converge, ns.tol)
    if getattr(ns, "omega", None) is not None and not ns.omega > 0:
        bad("--omega must be > 0")
    if getattr(ns, "field", None) is not None and ns.field < 0:
        bad("--field must be >= 0")

    if sc == "scan":
        variable = ns.variable or ("frequency" if ns.omega_scan else "amplitude")
        opts["variable"] = variable
        if variable == "frequency" and ns.field is None:
            bad("frequency scan needs --field")
        if variable == "amplitude" and ns.omega is None:
            bad("amplitude scan needs --omega")
        if variable == "frequency" and ns.omega is not None:
            bad("--omega conflicts with a frequency scan")
        if variable == "amplitude" and ns.field is not None:
            bad("--field conflicts with an amplitude scan")
        obs = tuple(o.strip() for o in ns.observables.split(",") if o.strip())
        opts["observables"] = obs
    if sc == "fit" and ns.model is not None:
        missing = [f for f in ("omega", "start", "stop") if getattr(ns, f) is None]
        if missing:
            bad("pipeline fit needs " + ", ".join("--" + m for m in missing))
    if sc == "fit" and ns.data is not None:
        extra = [f for f in ("omega", "start", "stop") if getattr(ns, f) is not None]
        if extra:
            bad("--data conflicts with " + ", ".join("--" + m for m in extra))

    workers = getattr(ns, "workers", None)
    return RunConfig(
        subcommand=sc,
        model=getattr(ns, "model", None),
        omega=getattr(ns, "omega", None),
        amplitude=getattr(ns, "field", None),
        truncation=trunc,
        k=getattr(ns, "k", 1),
        out=ns.out,
        format=ns.format,
        eigensolver=getattr(ns, "eigensolver", "auto"),
        workers=default_workers() if workers is None else workers,
        options=opts,
    )


def _pipeline(cfg: RunConfig):
    model = load_model(cfg.model)
    fld = FieldConfig(cfg.amplitude, cfg.omega)
    sol = solve_floquet(model, fld, cfg.truncation, method=cfg.eigensolver)
    init = expansion_for(sol, cfg.k)
    return model, fld, sol, init


def cmd_solve(cfg: RunConfig) -> str:
    model, fld, sol, init = _pipeline(cfg)
    reps = set(sol.representatives)
    central = sol.central_weights()
    dominant = sol.dominant_states()
    rows = [
        {
            "j": j,
            "E_j": float(e),
            "folded_E_j": fold_to_zone(float(e), fld.omega),
            "dominant_state": int(dominant[j]) + 1,
            "central_weight": float(central[j]),
            "is_representative": j in reps,
        }
        for j, e in enumerate(sol.quasienergies)
    ]
    cols = ["j", "E_j", "folded_E_j", "dominant_state", "central_weight", "is_representative"]
    if cfg.format == "csv":
        return to_csv(cols, rows)
    return to_json({
        "model": model.name,
        "omega": fld.omega,
        "amplitude": fld.amplitude,
        "n_max": sol.n_max,
        "k": cfg.k,
        "quasienergies": rows,
        "representatives": list(sol.representatives),
        "ambiguous_assignment": sol.ambiguous,
        "A": init.A,
        "b_condition": init.b_condition,
        "reconstruction_error": init.reconstruction_error,
        "degenerate": init.degenerate,
    })


def cmd_fourier(cfg: RunConfig) -> str:
    model, fld, sol, init = _pipeline(cfg)
    n_report = cfg.options.get("nreport")
    comps = fourier_components(sol, init, model, n_report)
    if cfg.format == "csv":
        return to_csv(["n", "P_n"], [{"n": n, "P_n": v} for n, v in comps.items()])
    beats = [vars(b) for b in beat_terms(sol, init)]
    return to_json({
        "n_max": sol.n_max,
        "fourier": comps,
        "chi": susceptibility(comps.get(1, 0.0), fld.amplitude),
        "beats": beats,
        "reconstruction_error": init.reconstruction_error,
    })


def _window(fld: FieldConfig, cycles: float, per_cycle: int) -> np.ndarray:
    n = max(1, int(round(cycles * per_cycle)))
    return np.arange(n + 1) * (fld.period / per_cycle)


def cmd_timeseries(cfg: RunConfig) -> str:
    model, fld, sol, init = _pipeline(cfg)
    o = cfg.options
    t = _window(fld, o["cycles"], o["samples_per_cycle"])
    p = polarization_time_series(sol, init, model, t)
    cols = ["t", "P_floquet"]
    rows = [{"t": ti, "P_floquet": pi} for ti, pi in zip(t, p)]
    if o["oracle"]:
        res = oracle.propagate(model, fld, cfg.k, float(t[-1]), dt=fld.period / o["samples_per_cycle"],
                               allow_coarse=True)
        po = oracle.dipole_of(res, model)
        cols.append("P_oracle")
        for r, v in zip(rows, po):
            r["P_oracle"] = v
    if cfg.format == "csv":
        return to_csv(cols, rows)
    return to_json({c: [r[c] for r in rows] for c in cols})


def cmd_propagate(cfg: RunConfig) -> str:
    model = load_model(cfg.model)
    fld = FieldConfig(cfg.amplitude, cfg.omega)
    o = cfg.options
    res = oracle.propagate(model, fld, cfg.k, o["cycles"] * fld.period, dt=o["dt"],
                           allow_coarse=o["allow_coarse"])
    p = oracle.dipole_of(res, model)
    s = model.n_levels
    cols = ["t"] + [f"{part}(c_{i + 1})" for i in range(s) for part in ("Re", "Im")] + ["P"]
    ri = res.real_imag
    rows = []
    for n, t in enumerate(res.times):
        row = {"t": t, "P": p[n]}
        for i in range(s):
            row[f"Re(c_{i + 1})"] = ri[n, 2 * i]
            row[f"Im(c_{i + 1})"] = ri[n, 2 * i + 1]
        rows.append(row)
    if cfg.format == "csv":
        return to_csv(cols, rows)
    return to_json({"norm_drift": res.norm_drift, "rows": rows})


def cmd_scan(cfg: RunConfig) -> str:
    o = cfg.options
    fixed = cfg.amplitude if o["variable"] == "frequency" else cfg.omega
    spec = ScanSpec(
        variable=o["variable"], start=o["start"], stop=o["stop"], points=o["points"],
        fixed=fixed, model=load_model(cfg.model), k=cfg.k, spacing=o["spacing"],
        truncation=cfg.truncation, observables=o["observables"], n_report=o["nreport"],
        method=cfg.eigensolver,
    )
    rows = run_scan(spec, workers=cfg.workers)
    if cfg.format == "csv":
        return to_csv(spec.columns(), rows)
    return to_json({"variable": spec.variable, "fixed": spec.fixed, "rows": rows})


def _read_fit_data(path: str):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or not {"amplitude", "P_1"} <= set(reader.fieldnames):
            raise FloqpolError(f"{path}: need columns 'amplitude' and 'P_1'")
        f, p = [], []
        for row in reader:
            if row.get("status", "ok") != "ok" or row["P_1"] == "":
                continue
            f.append(float(row["amplitude"]))
            p.append(float(row["P_1"]))
    return f, p


def cmd_fit(cfg: RunConfig) -> str:
    o = cfg.options
    if o["data"] is not None:
        amps, p1 = _read_fit_data(o["data"])
    else:
        spec = ScanSpec("amplitude", o["start"], o["stop"], o["points"], cfg.omega,
                        load_model(cfg.model), k=cfg.k, truncation=cfg.truncation,
                        observables=("P",), n_report=1, method=cfg.eigensolver)
        rows = [r for r in run_scan(spec, workers=cfg.workers) if r["status"] == "ok"]
        amps = [r["amplitude"] for r in rows]
        p1 = [r["P_1"] for r in rows]
    res = fit_susceptibilities(amps, p1, include_even=o["include_even"], radius=o["radius"])
    if cfg.format == "csv":
        cols = ["alpha", "beta", "gamma", "residual", "points"]
        return to_csv(cols, [{"alpha": res.alpha, "beta": res.beta, "gamma": res.gamma,
                              "residual": res.residual, "points": len(res.amplitudes_used)}])
    return to_json(vars(res))


def cmd_analytic(cfg: RunConfig) -> str:
    o = cfg.options
    params = analytic.TwoLevelParams(o["d12"], o["omega"], o["omega12"], o["field"])
    radius = analytic.convergence_radius(params)
    try:
        p1, note = analytic.two_level_p1(params), ""
    except analytic.PoleError as exc:
        p1, note = None, str(exc)
    row = {
        "d12": params.d12, "omega": params.omega, "omega12": params.omega12,
        "amplitude": params.amplitude, "p1_two_level": p1,
        "convergence_radius": radius if math.isfinite(radius) else "inf",
        "inside_radius": params.amplitude < radius, "note": note,
    }
    if cfg.format == "csv":
        return to_csv(list(row), [row])
    return to_json(row)


def run_compare(cfg: RunConfig) -> dict:
    """Max-abs and RMS deviation between Floquet and oracle P(t), with PASS/FAIL."""
    model, fld, sol, init = _pipeline(cfg)
    o = cfg.options
    per_cycle = o["steps_per_cycle"]
    res = oracle.propagate(model, fld, cfg.k, o["cycles"] * fld.period,
                           dt=fld.period / per_cycle, allow_coarse=True)
    po = oracle.dipole_of(res, model)
    pf = polarization_time_series(sol, init, model, res.times)
    dev = np.abs(pf - po)
    max_abs = float(np.max(dev))
    return {
        "n_max": sol.n_max,
        "cycles": o["cycles"],
        "steps_per_cycle": per_cycle,
        "max_abs_deviation": max_abs,
        "rms_deviation": float(np.sqrt(np.mean(dev ** 2))),
        "norm_drift": res.norm_drift,
        "tolerance": o["compare_tol"],
        "status": "PASS" if max_abs <= o["compare_tol"] else "FAIL",
    }


def cmd_compare(cfg: RunConfig) -> str:
    rep = run_compare(cfg)
    cfg.options["_status"] = rep["status"]
    if cfg.format == "csv":
        return to_csv(list(rep), [rep])
    return to_json(rep)


COMMANDS = {
    "solve": cmd_solve, "fourier": cmd_fourier, "timeseries": cmd_timeseries,
    "propagate": cmd_propagate, "scan": cmd_scan, "fit": cmd_fit,
    "analytic": cmd_analytic, "compare": cmd_compare,
}


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        text = COMMANDS[cfg.subcommand](cfg)
    except (FloqpolError, ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"floqpol {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.options.get("_status") == "FAIL":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
