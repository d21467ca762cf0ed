"""Batch command-line front end.

Every subcommand reads its parameters from an optional JSON config file
(``--config``) and from flags; flags win over the file, the file wins over
built-in defaults.  Data goes to ``--output`` (plus sibling files where
noted) and a ``<output>.meta.json`` sidecar records the inputs hash, the
seed and the package version.  Errors are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calculus import dlog_lambda, gibbs_derivative, gram_matrix, variance_metric
from .equilibria import ConstraintProblem, combine, constrained_equilibrium, entropy_surface, prescribe
from .errors import ThermoformError
from .flow import flow_trace
from .geometry2 import QUANTITIES, grid_scan, grid_scan_csv
from .gibbs import MarkovMeasure, entropy, gibbs_measure, pressure
from .sft import FnTable
from .transfer import normalize
from .wasserstein import roughness_scan, roughness_scan_csv

DEFAULTS = {
    "seed": 0,
    "pairwise": False,
    "t_start": 0.0,
    "t_stop": 10.0,
    "t_step": 0.1,
    "quantity": "K",
    "region": [0.1, 0.9, 0.1, 0.9],
    "step": 0.1,
    "level": 10,
    "topology": "interval",
    "t_values": [1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
}

# parameters naming input files; their contents enter the inputs hash
PATH_KEYS = ("potential", "measure", "observables", "direction", "observable",
             "problem", "initial", "target")


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def csv_text(header, rows) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _table(path) -> FnTable:
    return FnTable.from_dict(_load_json(path))


def _require(params, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise ValueError(f"missing required parameter(s): {', '.join(missing)}")


# subcommands: each returns {suffix: text}; "" is the main output


def cmd_normalize(p):
    _require(p, "potential")
    return {"": _dump(normalize(_table(p["potential"])).to_dict())}


def cmd_gibbs(p):
    _require(p, "potential")
    return {"": _dump(gibbs_measure(_table(p["potential"])).to_dict())}


def cmd_entropy(p):
    if p.get("measure") is not None:
        mu = MarkovMeasure.from_dict(_load_json(p["measure"]))
    else:
        _require(p, "potential")
        mu = gibbs_measure(_table(p["potential"]))
    return {"": _dump({"entropy": entropy(mu)})}


def cmd_pressure(p):
    _require(p, "potential")
    return {"": _dump({"pressure": pressure(_table(p["potential"]))})}


def cmd_metric(p):
    _require(p, "potential", "observables")
    A = _table(p["potential"])
    Phi = [_table(f) for f in p["observables"]]
    if p.get("pairwise"):
        if len(Phi) != 2:
            raise ValueError("pairwise mode needs exactly two observables")
        return {"": _dump({"value": variance_metric(A, Phi[0], Phi[1])})}
    G = gram_matrix(A, Phi)
    return {"": _dump({"gram": G.matrix.tolist(), "min_eigenvalue": G.min_eigenvalue})}


def cmd_derivative(p):
    _require(p, "potential", "direction")
    A = _table(p["potential"])
    zeta = _table(p["direction"])
    out = {"dlog_lambda": dlog_lambda(A, zeta)}
    if p.get("observable") is not None:
        out["gibbs_derivative"] = gibbs_derivative(A, zeta, _table(p["observable"]))
    return {"": _dump(out)}


def _problem(p) -> ConstraintProblem:
    _require(p, "problem")
    return ConstraintProblem.from_dict(_load_json(p["problem"]))


def _coef_csv(a):
    return csv_text(["k", "a_k"], [(k, float(v)) for k, v in enumerate(a)])


def cmd_prescribe(p):
    prob = _problem(p)
    a = prescribe(prob.B, prob.Phi, prob.target)
    mu = gibbs_measure(combine(prob.B, prob.Phi, a))
    return {"": _coef_csv(a), ".measure.json": _dump(mu.to_dict())}


def cmd_equilibrium(p):
    prob = _problem(p)
    # constraints int phi_k dmu = target_k
    Phi = [phi - float(t) for phi, t in zip(prob.Phi, prob.target)]
    eq = constrained_equilibrium(prob.B, Phi)
    summary = {"value": eq.value, "B0": eq.B0.to_dict(), "a": eq.a.tolist()}
    return {
        "": _coef_csv(eq.a),
        ".measure.json": _dump(eq.measure.to_dict()),
        ".summary.json": _dump(summary),
    }


def _t_grid(p):
    start, stop, step = float(p["t_start"]), float(p["t_stop"]), float(p["t_step"])
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def cmd_flow(p):
    _require(p, "initial", "target")
    rows = flow_trace(_table(p["initial"]), _table(p["target"]), _t_grid(p))
    return {"": csv_text(["t", "pressure", "entropy", "metric_norm"],
                         [(r.t, r.pressure, r.entropy, r.metric_norm) for r in rows])}


def cmd_surface(p):
    prob = _problem(p)
    grid = p.get("grid")
    if grid is None:
        _require(p, "w_start", "w_stop", "w_step")
        n = int(np.floor((p["w_stop"] - p["w_start"]) / p["w_step"] + 1e-9)) + 1
        grid = [[p["w_start"] + p["w_step"] * i] for i in range(n)]
    K = len(prob.Phi)
    rows = entropy_surface(prob.B, prob.Phi, grid)
    header = [f"w_{k}" for k in range(K)] + ["H"] + [f"a_{k}" for k in range(K)] + ["ok"]
    body = []
    for r in rows:
        a = r.a if r.ok else (float("nan"),) * K
        body.append((*r.w, r.H, *a, r.ok))
    return {"": csv_text(header, body)}


def cmd_geom2(p):
    rows = grid_scan(tuple(p["region"]), float(p["step"]), p["quantity"])
    return {"": grid_scan_csv(rows)}


def cmd_w2scan(p):
    _require(p, "potential", "direction")
    rows = roughness_scan(_table(p["potential"]), _table(p["direction"]),
                          p["t_values"], int(p["level"]), p["topology"])
    return {"": roughness_scan_csv(rows)}


COMMANDS = {
    "normalize": cmd_normalize,
    "gibbs": cmd_gibbs,
    "entropy": cmd_entropy,
    "pressure": cmd_pressure,
    "metric": cmd_metric,
    "derivative": cmd_derivative,
    "prescribe": cmd_prescribe,
    "equilibrium": cmd_equilibrium,
    "flow": cmd_flow,
    "surface": cmd_surface,
    "geom2": cmd_geom2,
    "w2scan": cmd_w2scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thermoform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        sp = sub.add_parser(name, help=help, argument_default=argparse.SUPPRESS)
        sp.add_argument("--config", help="JSON file with parameters")
        sp.add_argument("--output", "-o", help="output path")
        sp.add_argument("--seed", type=int)
        return sp

    add("normalize", "normalize a potential").add_argument("--potential")
    add("gibbs", "Gibbs measure of a potential").add_argument("--potential")
    sp = add("entropy", "entropy of a Gibbs or Markov measure")
    sp.add_argument("--potential")
    sp.add_argument("--measure")
    add("pressure", "pressure of a potential").add_argument("--potential")
    sp = add("metric", "variance-metric Gram matrix or pairing")
    sp.add_argument("--potential")
    sp.add_argument("--observables", nargs="+")
    sp.add_argument("--pairwise", action="store_true")
    sp = add("derivative", "derivatives of log lambda and of the Gibbs map")
    sp.add_argument("--potential")
    sp.add_argument("--direction")
    sp.add_argument("--observable")
    add("prescribe", "prescribe integrals").add_argument("--problem")
    add("equilibrium", "constrained equilibrium state").add_argument("--problem")
    sp = add("flow", "pressure gradient flow trace")
    sp.add_argument("--initial")
    sp.add_argument("--target")
    sp.add_argument("--t-start", dest="t_start", type=float)
    sp.add_argument("--t-stop", dest="t_stop", type=float)
    sp.add_argument("--t-step", dest="t_step", type=float)
    sp = add("surface", "entropy surface over prescribed rotation vectors")
    sp.add_argument("--problem")
    sp.add_argument("--w-start", dest="w_start", type=float)
    sp.add_argument("--w-stop", dest="w_stop", type=float)
    sp.add_argument("--w-step", dest="w_step", type=float)
    sp = add("geom2", "grid scan of the two-symbol model")
    sp.add_argument("--quantity", choices=QUANTITIES)
    sp.add_argument("--region", type=float, nargs=4, metavar=("X0", "X1", "Y0", "Y1"))
    sp.add_argument("--step", type=float)
    sp = add("w2scan", "Wasserstein scan along a direction")
    sp.add_argument("--potential")
    sp.add_argument("--direction")
    sp.add_argument("--t-values", dest="t_values", type=float, nargs="+")
    sp.add_argument("--level", type=int)
    sp.add_argument("--topology", choices=("interval", "circle"))
    return parser


def resolve_params(args: argparse.Namespace) -> dict:
    """Merge defaults, config file and flags (in increasing precedence)."""
    params = dict(DEFAULTS)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    config = getattr(args, "config", None)
    if config is not None:
        base = Path(config).parent
        for k, v in _load_json(config).items():
            if k in PATH_KEYS and v is not None:
                # paths in a config file are relative to the file
                v = [str(base / x) for x in v] if isinstance(v, list) else str(base / v)
            params[k] = v
    params.update(flags)
    return params


def _inputs_hash(command: str, params: dict) -> str:
    h = hashlib.sha256()
    shown = {k: v for k, v in params.items() if k != "output"}
    h.update(json.dumps([command, shown], sort_keys=True).encode())
    for key in PATH_KEYS:
        v = params.get(key)
        for path in ([v] if isinstance(v, str) else v or []):
            h.update(Path(path).read_bytes())
    return h.hexdigest()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = resolve_params(args)
        _require(params, "output")
        np.random.seed(int(params["seed"]))
        outputs = COMMANDS[args.command](params)
        out = Path(params["output"])
        for suffix, text in outputs.items():
            _write(Path(str(out) + suffix), text)
        meta = {
            "command": args.command,
            "inputs_sha256": _inputs_hash(args.command, params),
            "seed": int(params["seed"]),
            "version": __version__,
            "artifacts": sorted(str(out) + s for s in outputs),
        }
        _write(Path(str(out) + ".meta.json"), _dump(meta))
    except (ThermoformError, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
