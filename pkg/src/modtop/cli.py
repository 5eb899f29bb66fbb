"""Batch front end: parse configs, dispatch, emit JSON/CSV reports.

Exit codes: 0 when every check passes, 1 when any check fails or a scenario
errors, 2 on configuration problems.  Reports are byte-identical for the
same (config, seed) pair apart from the single timestamp field; infinities
are encoded as the string "inf" with the certificate object alongside.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import DEFAULT_CONFIG, EvalConfig
from .diagnostics import check_delta2, classify_convergence
from .dirichlet import assemble_energy, minimize_energy, residual_check
from .errors import ConfigError, InvalidExponentError, ModtopError
from .exponents import parse_exponent as _parse_exponent_raw
from .functions import PiecewiseConstFunction, catalog_v, catalog_v_beyond
from .luxemburg import luxemburg_norm
from .modular import eval_fun_modular, eval_seq_modular, scaled_modular
from .scenarios import PROPERTY_SUITES, REGISTRY, run_counterexample
from .sequences import SequenceVec

_KNOWN_KEYS = {"command", "params", "tol", "seed", "out", "parallel"}

PHI_CATALOG = {
    "x": lambda x: x,
    "bump": lambda x: x * (1.0 - x),
    "zero": lambda x: 0.0,
}


def parse_exponent(text: str):
    try:
        return _parse_exponent_raw(text)
    except InvalidExponentError as exc:
        raise ConfigError(str(exc))


def parse_sequence(text: str) -> SequenceVec:
    """Grammar: ``runs=[(1..2,0.5),(3..3,1)];tail=zero|const:c``."""
    text = text.strip()
    m = re.fullmatch(r"runs=\[(.*)\];tail=(zero|const:[-+0-9.eE]+)", text)
    if not m:
        raise ConfigError(f"bad sequence grammar: {text!r}")
    runs = []
    body = m.group(1).strip()
    if body:
        for part in re.findall(r"\(([^)]*)\)", body):
            rm = re.fullmatch(r"\s*(\d+)\.\.(\d+)\s*,\s*([-+0-9.eE]+)\s*", part)
            if not rm:
                raise ConfigError(f"bad run: ({part})")
            runs.append((int(rm.group(1)), int(rm.group(2)), float(rm.group(3))))
    tail = 0.0
    if m.group(2) != "zero":
        tail = float(m.group(2).split(":", 1)[1])
    return SequenceVec(runs, tail)


def parse_function(text: str):
    """Grammar: ``const:VALUE:A,B`` | ``catalog:SCALE`` | ``catalog-tail:SCALE:K``."""
    kind, _, rest = text.strip().partition(":")
    if kind == "const":
        value, _, dom = rest.partition(":")
        a, b = (float(t) for t in dom.split(","))
        return PiecewiseConstFunction.const(float(value), (a, b))
    if kind == "catalog":
        return catalog_v(float(rest))
    if kind == "catalog-tail":
        scale, _, k = rest.partition(":")
        return catalog_v_beyond(int(k), float(scale))
    raise ConfigError(f"bad function grammar: {text!r}")


def _report_skeleton(command: str, params: dict, seed: int) -> dict:
    return {"command": command, "params": params, "seed": seed,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S")}


def _cmd_modular(params, tol, seed, cfg):
    scale = float(params.get("scale", 1.0))
    p = parse_exponent(params["exp"])
    if "seq" in params:
        x = parse_sequence(params["seq"])
    elif "fun" in params:
        x = parse_function(params["fun"])
    else:
        raise ConfigError("modular needs 'seq' or 'fun'")
    mv = scaled_modular(x, p, scale, cfg) if scale != 1.0 else (
        eval_seq_modular(x, p, cfg) if isinstance(x, SequenceVec)
        else eval_fun_modular(x, p, cfg))
    return {"modular": mv.to_json()}, not mv.is_indeterminate


def _cmd_norm(params, tol, seed, cfg):
    p = parse_exponent(params["exp"])
    x = parse_sequence(params["seq"]) if "seq" in params else parse_function(params["fun"])
    res = luxemburg_norm(x, p, tol=tol or 1e-10, cfg=cfg)
    return {"norm": res.to_json()}, True


def _cmd_delta2(params, tol, seed, cfg):
    p = parse_exponent(params["exp"])
    verdict = check_delta2(p, cfg=cfg)
    return {"delta2": verdict.to_json()}, True


_FAMILIES = {
    # prefixes of (1/2)*ones under p_n = n against their limit
    "half-ones-prefixes": lambda terms: (
        [SequenceVec.constant(0.5).prefix(n) for n in range(1, terms + 1)],
        SequenceVec.constant(0.5), parse_exponent("identity")),
    # vanishing basis perturbations e_j / j in a fixed finite-dimensional table
    "basis-decay": lambda terms: (
        [SequenceVec.sparse({min(j, 8): 1.0 / j}) for j in range(1, terms + 1)],
        SequenceVec.zero(), parse_exponent("table:2,2,2,2,2,2,2,2")),
}


def _cmd_converge(params, tol, seed, cfg):
    name = params.get("family", "half-ones-prefixes")
    if name not in _FAMILIES:
        raise ConfigError(f"unknown family {name!r}; known: {sorted(_FAMILIES)}")
    terms = int(params.get("terms", 24))
    family, limit, p = _FAMILIES[name](terms)
    if "exp" in params:
        p = parse_exponent(params["exp"])
    rep = classify_convergence(family, limit, p, tol=tol or 1e-6, cfg=cfg)
    payload = {"convergence": rep.to_json(), "family": name}
    return payload, True


def _cmd_counterexample(params, tol, seed, cfg):
    rep = run_counterexample(params["name"], seed=seed, cfg=cfg)
    return {"scenario": rep.to_json()}, rep.passed


def _cmd_dirichlet(params, tol, seed, cfg):
    n = int(params.get("n", 64))
    exp = params.get("exp", "const:2")
    p = parse_exponent(exp) if ":" in exp or exp == "identity" else float(exp)
    phi = params.get("phi", "x")
    if isinstance(phi, list):
        phi_fn = [float(v) for v in phi]
    elif phi in PHI_CATALOG:
        phi_fn = PHI_CATALOG[phi]
    else:
        raise ConfigError(f"unknown phi {phi!r}; known: {sorted(PHI_CATALOG)} or node list")
    prob = assemble_energy(n, p, phi_fn)
    solve_tol = tol or 1e-8
    trace = minimize_energy(prob, tol=solve_tol)
    res = residual_check(prob, trace.final, max(solve_tol / prob.h, 1e-12) * 10)
    payload = {"dirichlet": {"n": n, "solve": trace.to_json(), "residual": res,
                             "u": [float(v) for v in trace.final]}}
    return payload, trace.converged and res["pass"]


def _cmd_suite(params, tol, seed, cfg, parallel=1):
    names = params.get("names")
    if not names:
        names = sorted(REGISTRY) + sorted(PROPERTY_SUITES)
    if isinstance(names, str):
        names = [t for t in names.split(",") if t]

    def one(name):
        try:
            rep = run_counterexample(name, seed=seed, cfg=cfg)
            return name, rep.to_json(), rep.passed
        except ModtopError as exc:
            return name, {"name": name, "error": str(exc)}, False

    if parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(one, names))
    else:
        results = [one(n) for n in names]
    results.sort(key=lambda r: names.index(r[0]))  # deterministic aggregation
    payload = {"suite": [r[1] for r in results],
               "passed": all(r[2] for r in results)}
    return payload, payload["passed"]


_COMMANDS = {
    "modular": _cmd_modular,
    "norm": _cmd_norm,
    "delta2": _cmd_delta2,
    "converge": _cmd_converge,
    "counterexample": _cmd_counterexample,
    "dirichlet": _cmd_dirichlet,
    "suite": _cmd_suite,
}


def _write_reports(report: dict, out_dir, command: str):
    if out_dir is None:
        return
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{command}-report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    conv = report.get("convergence")
    if conv:
        with (out / f"{command}-rates.csv").open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            lams = sorted(conv["per_lambda"])
            writer.writerow(["index", "rho_distance"]
                            + [f"converges_lam_{l}" for l in lams] + ["norm_distance"])
            flags = [conv["per_lambda"][l] for l in lams]
            norm_by_idx = dict((i, d) for i, d in conv["norm_rates"])
            for idx, dist in conv["rates"]:
                writer.writerow([idx, dist] + flags + [norm_by_idx.get(idx, "")])


def run(config: dict) -> int:
    """Execute one validated config; returns the exit status."""
    unknown = set(config) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    command = config.get("command")
    if command not in _COMMANDS:
        raise ConfigError(f"unknown command {command!r}; known: {sorted(_COMMANDS)}")
    params = config.get("params") or {}
    if not isinstance(params, dict):
        raise ConfigError("params must be a table")
    tol = config.get("tol")
    seed = int(config.get("seed", 0))
    cfg = DEFAULT_CONFIG
    report = _report_skeleton(command, params, seed)
    try:
        if command == "suite":
            payload, ok = _cmd_suite(params, tol, seed, cfg,
                                     parallel=int(config.get("parallel", 1)))
        else:
            payload, ok = _COMMANDS[command](params, tol, seed, cfg)
    except ConfigError:
        raise
    except ModtopError as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["passed"] = False
        _write_reports(report, config.get("out"), command)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 1
    report.update(payload)
    report["passed"] = bool(ok)
    _write_reports(report, config.get("out"), command)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if ok else 1


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="modtop",
        description="certified modular evaluation and diagnostics for "
                    "variable-exponent spaces")
    ap.add_argument("command", nargs="?",
                    choices=sorted(_COMMANDS), help="subcommand to run")
    ap.add_argument("--config", type=Path, help="JSON config file")
    ap.add_argument("--name", help="scenario name (counterexample) or suite names")
    ap.add_argument("--seq", help="sequence vector, e.g. \"runs=[(1..2,0.5)];tail=zero\"")
    ap.add_argument("--fun", help="function, e.g. const:1:0,0.5 or catalog:0.5")
    ap.add_argument("--exp", help="exponent, e.g. identity, table:2,3, reciprocal:0,0.5")
    ap.add_argument("--scale", type=float, help="evaluate the modular at scale*x")
    ap.add_argument("--family", help="named family for converge")
    ap.add_argument("--phi", help="boundary datum name for dirichlet")
    ap.add_argument("--n", type=int, help="grid cells for dirichlet")
    ap.add_argument("--tol", type=float)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="directory for JSON/CSV reports")
    ap.add_argument("--parallel", type=int, default=1)
    return ap


def _config_from_args(args) -> dict:
    if args.config is not None:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}")
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        return cfg
    if args.command is None:
        raise ConfigError("need a command or --config")
    params = {}
    for key in ("seq", "fun", "exp", "scale", "family", "phi", "n"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.name:
        if args.command == "suite":
            params["names"] = args.name
        else:
            params["name"] = args.name
    config = {"command": args.command, "params": params, "seed": args.seed,
              "parallel": args.parallel}
    if args.tol is not None:
        config["tol"] = args.tol
    if args.out is not None:
        config["out"] = args.out
    return config


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
