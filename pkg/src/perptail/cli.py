"""Command-line experiment runner.

    perptail predict  --family weibull_at_one --c 1 --alpha 2 --q 1 --xs 5,10,20
    perptail simulate --config run.json --out run.csv
    perptail bounds   --config run.json
    perptail verify
    perptail report   a.csv b.csv --out merged.csv

A run writes one CSV (stdout unless ``--out``); with ``--out`` a JSON sidecar
next to it records the resolved config and the package version.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import subprocess
import sys
from pathlib import Path
from typing import Optional

from . import __version__, asymptotics, backend, bounds, simulate, verify
from .config import ExperimentConfig, config_from_dict, law_spec_from_dict, load_config
from .errors import CertificateError, ConfigError, DomainError
from .regvar import ATOM_AT_ONE
from .report import TailReport, merge_reports
from .tail_models import law_from_json

# inline flag -> config key
FLAG_KEYS = {
    "family": "family", "c": "c", "alpha": "alpha", "p": "p", "beta": "beta", "eta": "eta",
    "base": "base", "q": "q", "xs": "xs", "samples": "n_samples", "seed": "seed",
    "workers": "workers", "eps": "eps_trunc", "out": "out",
}


# -- pipelines ---------------------------------------------------------------

def _add_predictions(rep: TailReport, cfg: ExperimentConfig):
    law = cfg.law
    for x in cfg.xs:
        rep.row(x)
        if x < cfg.q:
            continue
        pred = asymptotics.predict_log_tail(law, cfg.q, x)
        if pred.bracket is not None:
            rep.set(x, ln_bracket_lo=pred.bracket[0], ln_bracket_hi=pred.bracket[1])
        else:
            rep.set(x, ln_predicted=pred.value)


def cmd_predict(cfg: ExperimentConfig) -> TailReport:
    """Analytic columns only; consumes no randomness."""
    rep = TailReport()
    _add_predictions(rep, cfg)
    return rep


def cmd_simulate(cfg: ExperimentConfig, backend_name: Optional[str] = None) -> TailReport:
    """Predictions plus Monte Carlo estimates from one shared set of draws."""
    law = cfg.law
    rep = cmd_predict(cfg)
    ests = simulate.estimate_tail(law, cfg.q, cfg.xs, cfg.n_samples, cfg.seed, cfg.workers,
                                  cfg.eps_trunc, backend=backend_name)
    for est in ests:
        ratio = None
        if est.ln_p_hat is not None:
            ratio = est.ln_p_hat / asymptotics.normalizer_value(law, cfg.q, est.x)
        rep.set(est.x, p_hat=est.p_hat, ci99_lo=est.ci99[0], ci99_hi=est.ci99[1],
                ln_p_hat=est.ln_p_hat, ratio_to_normalizer=ratio)
    rep.meta["n_exhausted"] = ests[0].n_exhausted
    return rep


def cmd_bounds(cfg: ExperimentConfig) -> TailReport:
    """Predictions plus the path certificate, sandwich and atom columns."""
    law = cfg.law
    rep = cmd_predict(cfg)
    atom_p = bounds.atom_mass_at_one(law)
    caveats = []
    for x in cfg.xs:
        if x > cfg.q:
            try:
                rep.set(x, ln_path_cert=bounds.path_certificate(law, cfg.q, x).ln_lower)
            except CertificateError:
                pass
        if x > 2 * cfg.q:
            s = bounds.hitczenko_sandwich(law, cfg.q, x)
            rep.set(x, ln_sandwich_lo=s.ln_lower, ln_sandwich_hi=s.ln_upper)
            if s.caveat:
                caveats.append(x)
        if law.tail_class.kind == ATOM_AT_ONE and 0 < atom_p < 1:
            rep.set(x, ln_atom_lower=bounds.atom_bounds(atom_p, cfg.q, x))
    rep.meta["sandwich_caveat_xs"] = caveats
    return rep


def cmd_verify(extra_laws=(), out=None) -> int:
    """Run every invariant suite; returns the exit status (0 when all pass)."""
    out = out or sys.stdout
    checks = verify.run_suites(extra_laws)
    for c in checks:
        tail = f"  ({c.detail})" if c.detail else ""
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.suite}: {c.name}{tail}", file=out)
    failed = 0
    for suite, (passed, total) in verify.summarize(checks).items():
        print(f"{suite}: {passed}/{total} passed", file=out)
        failed += total - passed
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=out)
    return 1 if failed else 0


def cmd_report(paths) -> TailReport:
    reports = []
    for p in paths:
        with open(p, encoding="utf-8", newline="") as fh:
            reports.append(TailReport.from_csv(fh.read()))
    return merge_reports(reports)


# -- output ------------------------------------------------------------------

def version_string() -> str:
    """Package version, extended with ``git describe`` when run from a checkout."""
    here = Path(__file__).resolve().parent
    try:
        desc = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here,
                              capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return __version__
    tag = desc.stdout.strip()
    return f"{__version__}+g{tag}" if desc.returncode == 0 and tag else __version__


def sidecar_path(out: str) -> Path:
    return Path(out).with_suffix(".json")


def write_outputs(rep: TailReport, command: str, out: Optional[str], meta: dict):
    text = rep.to_csv()
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    side = {"command": command, "version": version_string(), **meta}
    with open(sidecar_path(out), "w", encoding="utf-8") as fh:
        json.dump(side, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _json_safe(v):
    return None if isinstance(v, float) and not math.isfinite(v) else v


# -- argument parsing --------------------------------------------------------

def _csv_floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _json_object(text: str) -> dict:
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"not valid JSON: {exc}")
    if not isinstance(v, dict):
        raise argparse.ArgumentTypeError("expected a JSON object")
    return v


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; inline flags override its keys")
    g = p.add_argument_group("law")
    g.add_argument("--family")
    for name in ("c", "alpha", "p", "beta", "eta"):
        g.add_argument(f"--{name}", type=float)
    g.add_argument("--base", type=_json_object,
                   help='base law of atom_at_one as JSON, e.g. \'{"family": "power_uniform", "alpha": 1}\'')
    r = p.add_argument_group("run")
    r.add_argument("--q", type=float)
    r.add_argument("--xs", type=_csv_floats, help="comma-separated x values")
    r.add_argument("--samples", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--workers", type=int)
    r.add_argument("--eps", type=float)
    r.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perptail",
                                     description="Log-tail asymptotics of perpetuities with M in [0, 1].")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("predict", "theorem predictions"),
                       ("simulate", "predictions plus Monte Carlo estimates"),
                       ("bounds", "predictions plus rigorous finite-x bounds")):
        p = sub.add_parser(name, help=text)
        _add_run_flags(p)
        if name == "simulate":
            p.add_argument("--backend", choices=backend.available_backends(),
                           help=f"simulation kernel (default {backend.BACKEND})")
    p = sub.add_parser("verify", help="run the invariant suites; nonzero exit on failure")
    _add_run_flags(p)
    p = sub.add_parser("report", help="merge report CSVs by x")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out")
    return parser


def raw_config(args) -> dict:
    raw = load_config(args.config) if args.config else {}
    if not isinstance(raw, dict):
        raise ConfigError("config", "must be a JSON object")
    for flag, key in FLAG_KEYS.items():
        v = getattr(args, flag, None)
        if v is not None:
            raw[key] = v
    return raw


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            rep = cmd_report(args.inputs)
            write_outputs(rep, "report", args.out, {"inputs": [os.fspath(p) for p in args.inputs]})
            return 0
        raw = raw_config(args)
        if args.command == "verify":
            extra = [law_from_json(law_spec_from_dict(raw))] if "family" in raw else []
            return cmd_verify(extra)
        cfg = config_from_dict(raw)
        if args.command == "predict":
            rep, meta = cmd_predict(cfg), {}
        elif args.command == "simulate":
            name = args.backend or backend.BACKEND
            rep = cmd_simulate(cfg, name)
            meta = {"backend": name, **rep.meta}
        else:
            rep = cmd_bounds(cfg)
            meta = dict(rep.meta)
        meta["config"] = {k: _json_safe(v) for k, v in cfg.resolved().items()}
        write_outputs(rep, args.command, cfg.out, meta)
        return 0
    except ConfigError as exc:
        print(f"perptail: config error in {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError, OSError) as exc:
        print(f"perptail: {exc}", file=sys.stderr)
        return 2
