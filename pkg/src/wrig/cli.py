"""Command-line front end.

Every subcommand takes its parameters from flags and, optionally, from a JSON
``--config`` file whose keys (flag names without dashes, ``-`` as ``_``)
take precedence over the flags.  Exit status: 0 success, 1 failed
validation check, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from . import io as wio
from .calibrate import feasibility_check, solve_params
from .exact import conditional_triangle_exact, edge_prob_exact, triple_probs_exact
from .graphgen import ModelParams, generate, membership_prob
from .limits import (FIGURE_BETAGAMMAS, FIGURE_LAMBDAS, Regime, clustering_limit,
                     expected_degree_limit, figure1_curves, limiting_degree_law)
from .stats import CHECKS, DEFAULT_TOLERANCES, validate
from .weights import Degenerate, Pareto, from_config

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(p, model=True, seed=True):
    p.add_argument("--config", help="JSON file; its keys override the flags")
    if model:
        p.add_argument("--n", type=int)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=1.0)
        p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--dist", default="degenerate",
                   help="degenerate, pareto, or a JSON object such as "
                        "'{\"family\":\"pareto\",\"lambda\":2.5}'")
    p.add_argument("--lambda", dest="lam", type=float, help="Pareto exponent")
    if seed:
        p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="worker threads (default: all cores); results do not depend on it")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wrig", description="Weighted random intersection graphs")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a graph and write it to files")
    _common(g)
    g.add_argument("--binary", action="store_true", help="write weights as .npy")

    p = sub.add_parser("predict", help="limiting laws and exact finite-n probabilities")
    _common(p, seed=False)
    p.add_argument("--weights", type=float, nargs=3, metavar=("WI", "WJ", "WK"),
                   help="also print exact probabilities for a triple with these weights")

    c = sub.add_parser("calibrate", help="choose beta and gamma for target c and d")
    _common(c, model=False, seed=False)
    c.add_argument("--clustering", type=float, required=False)
    c.add_argument("--degree", type=float, required=False)
    c.add_argument("--n", type=int, help="check feasibility at this size")
    c.add_argument("--tolerance", type=float, default=1e-10)

    v = sub.add_parser("validate", help="compare simulation against theory")
    _common(v)
    v.add_argument("--reps", type=int, default=100_000)
    v.add_argument("--checks", help="comma-separated subset of " + ",".join(CHECKS))
    v.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                   help="override a tolerance; names: " + ",".join(DEFAULT_TOLERANCES))

    f = sub.add_parser("figure1", help="clustering curves for Pareto weights as CSV")
    f.add_argument("--config")
    f.add_argument("--out", default=".")
    return ap


def _merge_config(args):
    cfg = vars(args).copy()
    if args.config:
        try:
            extra = wio.read_json(args.config)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(extra, dict):
            raise UsageError("config must be a JSON object")
        extra = {k.replace("-", "_"): v for k, v in extra.items()}
        if "lambda" in extra:
            extra["lam"] = extra.pop("lambda")
        unknown = set(extra) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(extra)
    return cfg


def _dist(cfg):
    d = cfg.get("dist")
    if isinstance(d, str) and d.strip().startswith("{"):
        d = json.loads(d)
    if isinstance(d, dict):
        return from_config(d)
    if d == "pareto":
        if cfg.get("lam") is None:
            raise UsageError("--dist pareto needs --lambda")
        return Pareto(cfg["lam"])
    if d in (None, "degenerate"):
        return Degenerate()
    raise UsageError(f"unknown distribution {d!r}")


def _params(cfg):
    if cfg.get("n") is None:
        raise UsageError("--n is required")
    return ModelParams(n=cfg["n"], alpha=cfg["alpha"], beta=cfg["beta"], gamma=cfg["gamma"])


def _param_dict(p):
    return {"n": p.n, "alpha": p.alpha, "beta": p.beta, "gamma": p.gamma, "m": p.m}


def _emit(obj):
    print(json.dumps(obj, indent=2, sort_keys=True, default=float))


def cmd_generate(cfg):
    params, dist = _params(cfg), _dist(cfg)
    seed = cfg.get("seed")
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (1 << 63))
    out = wio.ensure_dir(cfg.get("out") or ".")
    w, b, g = generate(params, dist, seed, workers=cfg.get("threads"))
    files = {"edges": "edges.tsv", "memberships": "memberships.txt",
             "weights": "weights.npy" if cfg.get("binary") else "weights.txt"}
    wio.write_edge_list(os.path.join(out, files["edges"]), g)
    wio.write_memberships(os.path.join(out, files["memberships"]), b)
    wio.write_weights(os.path.join(out, files["weights"]), w)
    man = wio.manifest("generate", _param_dict(params), seed, files,
                       distribution=dist.to_config(), edges=g.edge_count,
                       incidences=b.incidence_count)
    wio.write_json(os.path.join(out, "manifest.json"), man)
    _emit(man)
    return EXIT_OK


def cmd_predict(cfg):
    dist = _dist(cfg)
    alpha, beta, gamma = cfg["alpha"], cfg["beta"], cfg["gamma"]
    if not (alpha > 0 and beta > 0 and gamma > 0):
        raise UsageError("alpha, beta and gamma must be positive")
    regime = Regime.of(alpha)
    out = {"regime": regime.value, "distribution": dist.to_config(),
           "mean_degree": expected_degree_limit(beta, gamma, dist.mean())}
    if isinstance(dist, Degenerate):
        law = limiting_degree_law(alpha, beta, gamma, dist.value)
        out["degree_law"] = law.describe()
        out["degree_law_parameters"] = asdict(law)
    else:
        law = limiting_degree_law(alpha, beta, gamma, 1.0)
        out["degree_law"] = "mixture over the weight W of the law given W = w"
        out["degree_law_given_unit_weight"] = law.describe()
        out["degree_law_parameters_given_unit_weight"] = asdict(law)
    if regime is Regime.CRITICAL:
        pred = clustering_limit(dist, beta * gamma)
        out["clustering"] = {"value": pred.value, "method": pred.method,
                             "error_bound": pred.error_bound}
    else:
        out["clustering"] = {"value": 1.0 if regime is Regime.SUBCRITICAL else 0.0,
                             "method": "regime limit", "error_bound": 0.0}
    if cfg.get("n") is not None:
        params = _params(cfg)
        wts = cfg.get("weights") or [1.0, 1.0, 1.0]
        p = [membership_prob(params, x) for x in wts]
        t = triple_probs_exact(*p, params.m)
        exact = {"n": params.n, "m": params.m, "weights": list(wts),
                 "membership_probs": p,
                 "edge_prob_ij": edge_prob_exact(p[0], p[1], params.m),
                 "triple": t.as_dict()}
        if t.p_wedge > 0:
            exact["conditional_triangle"] = conditional_triangle_exact(*p, params.m)
        out["exact"] = exact
    _emit(out)
    return EXIT_OK


def cmd_calibrate(cfg):
    dist = _dist(cfg)
    c, d = cfg.get("clustering"), cfg.get("degree")
    if c is None or d is None:
        raise UsageError("calibrate needs --clustering and --degree")
    try:
        r = solve_params(dist, c, d, tol=cfg.get("tolerance") or 1e-10)
    except ArithmeticError as e:
        print(f"calibration failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    warnings = list(r.warnings)
    if cfg.get("n") is not None:
        warnings += feasibility_check(r, cfg["n"], dist)
    report = {"beta": r.beta, "gamma": r.gamma, "betagamma": r.betagamma,
              "achieved_clustering": r.achieved_clustering,
              "achieved_mean_degree": r.achieved_mean_degree,
              "iterations": r.iterations, "warnings": warnings,
              "target_clustering": c, "target_mean_degree": d}
    _emit(report)
    if cfg.get("out"):
        params = {"alpha": 1.0, "beta": r.beta, "gamma": r.gamma, "dist": dist.to_config()}
        if cfg.get("n") is not None:
            params["n"] = cfg["n"]
        wio.write_json(cfg["out"], params)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def _tolerances(items):
    out = {}
    for it in items or []:
        if isinstance(it, dict):
            out.update(it)
            continue
        name, sep, val = str(it).partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise UsageError(f"bad tolerance {it!r}; expected NAME=VALUE with NAME in "
                             f"{sorted(DEFAULT_TOLERANCES)}")
        out[name] = float(val)
    return out


def cmd_validate(cfg):
    params, dist = _params(cfg), _dist(cfg)
    if cfg.get("seed") is None:
        raise UsageError("validate needs an explicit --seed")
    checks = cfg.get("checks")
    if isinstance(checks, str):
        checks = [s for s in checks.split(",") if s]
    tol = cfg.get("tolerance")
    tol = _tolerances(tol if isinstance(tol, list) else [tol] if tol else [])
    try:
        report = validate(params, dist, cfg["reps"], cfg["seed"], checks=checks,
                          tolerances=tol, workers=cfg.get("threads"))
    except ValueError as e:
        raise UsageError(str(e)) from e
    print(report.to_text())
    if cfg.get("out"):
        out = wio.ensure_dir(cfg["out"])
        wio.write_json(os.path.join(out, "report.json"), report.to_dict())
        wio.write_table(os.path.join(out, "checks.csv"),
                        ["name", "value", "reference", "tolerance", "passed"],
                        [[c.name, c.value, c.reference, c.tolerance, c.passed]
                         for c in report.checks])
    for chk in report.checks:
        if chk.passed is False:
            print(f"FAILED {chk.name}: value {chk.value} reference {chk.reference} "
                  f"tolerance {chk.tolerance}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_figure1(cfg):
    out = wio.ensure_dir(cfg.get("out") or ".")
    curves = figure1_curves()
    wio.write_table(os.path.join(out, "clustering_vs_lambda.csv"), ["betagamma", "x", "c"],
                    curves["vs_lambda"])
    wio.write_table(os.path.join(out, "clustering_vs_betagamma.csv"), ["lambda", "x", "c"],
                    curves["vs_betagamma"])
    _emit({"files": ["clustering_vs_lambda.csv", "clustering_vs_betagamma.csv"],
           "betagammas": list(FIGURE_BETAGAMMAS), "lambdas": list(FIGURE_LAMBDAS),
           "points": {k: len(v) for k, v in curves.items()}})
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "predict": cmd_predict, "calibrate": cmd_calibrate,
            "validate": cmd_validate, "figure1": cmd_figure1}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        cfg = _merge_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, ValueError, TypeError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
