"""Command-line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 usage, config or
refusal error. Messages go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .approximation import ExperimentConfig, check_vector, sample_driver, simulate
from .errors import AdmissibilityFailure, ConfigError, KacStroockError
from .hypotheses import hypothesis_scan
from .levy import LevyTriplet, admissible_vector, classify_theta, levy_exponent, triplet_from_dict
from .verify import SUMMARY_COLUMNS, StatReport, ladder_study, verify_limit

OUT_ENV = "KACSTROOCK_OUT"
DEFAULT_OUT = "kacstroock-out"


class UsageError(Exception):
    pass


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


# -- artifact writing ----------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: NaN/inf become null, numpy scalars become Python ones."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _json_bytes(doc) -> bytes:
    return (json.dumps(_clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n").encode()


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for v in row])
    return buf.getvalue().encode()


def _write_files(files: dict, out_dir, force: bool) -> dict:
    """Write ``{name: bytes}`` plus manifest.json; refuses to overwrite without force."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = sorted(files) + ["manifest.json"]
    if not force:
        clash = [n for n in names if (out / n).exists()]
        if clash:
            raise FileExistsError(f"{out}: refusing to overwrite {', '.join(clash)} (use --force)")
    manifest = {"files": [{"name": n, "bytes": len(files[n]), "sha256": hashlib.sha256(files[n]).hexdigest()}
                          for n in sorted(files)]}
    for n in sorted(files):
        (out / n).write_bytes(files[n])
    (out / "manifest.json").write_bytes(_json_bytes(manifest))
    return manifest


def write_report(report: StatReport, out_dir, force: bool = False, ladder=None) -> dict:
    """report.json and summary.csv, plus plot-ready CSVs when there is data for them."""
    doc = report.to_dict()
    if ladder is not None:
        doc["ladder"] = ladder.rows()
    files = {
        "report.json": _json_bytes(doc),
        "summary.csv": _csv_bytes(SUMMARY_COLUMNS, [[r[c] for c in SUMMARY_COLUMNS] for r in report.summary_rows()]),
    }
    if report.variance_profile:
        files["variance_profile.csv"] = _csv_bytes(("t", "var_re", "var_im"), report.variance_profile)
    ks_rows = list(report.ks_records)
    if ladder is not None:
        ks_rows = [(r["epsilon"], r["master_seed"], r["ks_stat"], r["p_value"]) for r in ladder.rows()]
        files["ks_vs_epsilon.csv"] = _csv_bytes(("epsilon", "master_seed", "ks_stat", "p_value"), ks_rows)
    elif ks_rows:
        files["ks_vs_epsilon.csv"] = _csv_bytes(("epsilon", "ks_stat", "p_value"), ks_rows)
    return _write_files(files, out_dir, force)


# -- triplet and config resolution -----------------------------------------------------


def _add_triplet_args(p):
    g = p.add_argument_group("driver")
    g.add_argument("--family", choices=["poisson", "compound_poisson", "jump_diffusion", "brownian",
                                        "symmetric_stable"])
    g.add_argument("--rate", type=float)
    g.add_argument("--jumps", type=_floats)
    g.add_argument("--probs", type=_floats)
    g.add_argument("--mu", type=float, default=0.0)
    g.add_argument("--sigma", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--triplet-json", help="triplet document (file path or inline JSON)")


def _add_config_args(p):
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--preset", help=f"bundled config: {', '.join(cfgmod.preset_names())}")
    p.add_argument("--theta", type=_floats, help="comma-separated frequencies")
    p.add_argument("--epsilon", type=float)


def _triplet(args) -> LevyTriplet | None:
    if args.triplet_json:
        text = args.triplet_json
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        return triplet_from_dict(cfgmod.parse_config_text(text, "--triplet-json"))
    fam = args.family
    if fam is None:
        return None
    rate = 1.0 if args.rate is None else args.rate
    if fam == "poisson":
        return LevyTriplet.poisson(rate)
    if fam == "compound_poisson":
        if not args.jumps:
            raise UsageError("compound_poisson needs --jumps")
        return LevyTriplet.compound_poisson(rate, args.jumps, args.probs)
    if fam == "jump_diffusion":
        return LevyTriplet.jump_diffusion(args.mu, args.sigma or 0.0, 0.0 if args.rate is None else args.rate,
                                          args.jumps or (), args.probs)
    if fam == "brownian":
        return LevyTriplet.brownian(1.0 if args.sigma is None else args.sigma, args.mu)
    if args.alpha is None:
        raise UsageError("symmetric_stable needs --alpha")
    return LevyTriplet.symmetric_stable(args.alpha, args.scale)


def _experiment(args) -> ExperimentConfig:
    if args.config and args.preset:
        raise UsageError("give at most one of --config and --preset")
    if args.config:
        cfg = cfgmod.load_config(args.config)
    elif args.preset:
        cfg = cfgmod.load_preset(args.preset)
    else:
        trip = _triplet(args)
        if trip is None or not args.theta or args.epsilon is None:
            raise UsageError("need --config, --preset, or a driver with --theta and --epsilon")
        cfg = ExperimentConfig(trip, tuple(args.theta), args.epsilon)
    cfg = cfgmod.apply_overrides(cfg, epsilon=args.epsilon, thetas=args.theta, replicas=args.replicas,
                                 seed=args.seed, T=args.T)
    for w in cfg.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return cfg


def _driver_from(args):
    """Triplet and thetas for the query subcommands (flags, or a config / preset)."""
    if args.config or args.preset:
        cfg = cfgmod.load_config(args.config) if args.config else cfgmod.load_preset(args.preset)
        return cfg.triplet, list(args.theta or cfg.thetas), args.epsilon or cfg.epsilon
    trip = _triplet(args)
    if trip is None:
        raise UsageError("need a driver (--family ... or --triplet-json) or --config / --preset")
    return trip, list(args.theta or ()), args.epsilon


def _out_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def _precheck_out(args):
    """Fail before simulating when a previous run's results would be overwritten."""
    marker = _out_dir(args) / "manifest.json"
    if marker.exists() and not args.force:
        raise FileExistsError(f"{marker.parent}: results exist, refusing to overwrite (use --force)")


# -- subcommands -----------------------------------------------------------------------


def cmd_exponent(args) -> int:
    trip, _, _ = _driver_from(args)
    if args.u:
        us = args.u
    else:
        us = list(np.linspace(args.u_min, args.u_max, args.n))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["u", "a", "b", "c"])
    for u in us:
        ev = levy_exponent(float(u), trip)
        try:
            c = ev.normalization(trip.default_tolerance)
        except KacStroockError:
            c = float("nan")
        w.writerow([repr(float(u)), repr(ev.a_part), repr(ev.b_part), repr(c)])
    return 0


def cmd_classify(args) -> int:
    trip, thetas, _ = _driver_from(args)
    if not thetas:
        raise UsageError("classify needs --theta")
    for th in thetas:
        cls = classify_theta(th, trip)
        print(cls.kind.value if not args.verbose else str(cls))
    if len(thetas) > 1:
        rep = admissible_vector(thetas, trip)
        if not rep.passed:
            print("; ".join(rep.failures), file=sys.stderr)
            return 2
    return 0


def cmd_hypothesis(args) -> int:
    trip, thetas, _ = _driver_from(args)
    if not thetas:
        raise UsageError("hypothesis needs --theta")
    rows = hypothesis_scan(thetas, trip, args.epsilons, args.s, args.t, args.mode)
    sys.stdout.write(_json_bytes([r.to_row() for r in rows]).decode())
    return 0


def cmd_simulate(args) -> int:
    cfg = _experiment(args)
    _precheck_out(args)
    ens = simulate(cfg, workers=args.workers)
    files = {}
    n_paths = min(args.paths, ens.n_replicas)
    for j in range(cfg.m):
        p = ens.plans[j]
        for r in range(n_paths):
            vals = ens.values[r, j]
            files[f"path_r{r:05d}_c{j}.csv"] = _csv_bytes(
                ("t", "re", "im", "component"),
                [(t, v.real, v.imag, j) for t, v in zip(ens.times, vals)])
        files[f"component_{j}.json"] = _json_bytes({
            "theta": p.theta, "c_theta": p.c_theta, "classification": str(p.classification),
            "epsilon": cfg.epsilon, "driver_exactness": None if ens.exactness is None else ens.exactness.value,
            "component": j})
    files["endpoints.csv"] = _csv_bytes(
        ("replica", "component", "re", "im"),
        [(r, j, ens.values[r, j, -1].real, ens.values[r, j, -1].imag)
         for r in range(ens.n_replicas) for j in range(cfg.m)])
    files["config.json"] = _json_bytes(cfg.to_dict())
    for r in range(min(args.dump_driver, ens.n_replicas)):
        path = sample_driver(cfg, r)
        files[f"driver_r{r:05d}.csv"] = _csv_bytes(("t", "X"), zip(path.breakpoints, path.values))
    _write_files(files, _out_dir(args), args.force)
    print(f"wrote {len(files) + 1} files to {_out_dir(args)}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    cfg = _experiment(args)
    check_vector(cfg)  # refuse before any simulation
    _precheck_out(args)
    report = verify_limit(cfg, workers=args.workers)
    ladder = None
    if args.ladder:
        ladder = ladder_study(cfg, epsilons=args.ladder, replicas=min(cfg.replicas, 5000), workers=args.workers)
    write_report(report, _out_dir(args), args.force, ladder)
    for c in report.checks:
        if not c.verdict:
            print(f"FAIL {c.name}: {c.estimate!r} vs {c.target!r} (tol {c.tolerance!r})", file=sys.stderr)
    print("pass" if report.passed else "fail")
    return 0 if report.passed else 1


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kacstroock", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("exponent", help="a(u), b(u), c(u) on a u-grid as CSV")
    _add_triplet_args(e)
    _add_config_args(e)
    e.add_argument("--u", type=_floats, help="explicit u values")
    e.add_argument("--u-min", type=float, default=0.1)
    e.add_argument("--u-max", type=float, default=3.0)
    e.add_argument("--n", type=int, default=30)

    c = sub.add_parser("classify", help="print the ThetaClass of each theta")
    _add_triplet_args(c)
    _add_config_args(c)

    h = sub.add_parser("hypothesis", help="hypothesis reports over an eps ladder (JSON)")
    _add_triplet_args(h)
    _add_config_args(h)
    h.add_argument("--epsilons", type=_floats, default=[0.4, 0.2, 0.1, 0.05])
    h.add_argument("--s", type=float, default=0.0)
    h.add_argument("--t", type=float, default=1.0)
    h.add_argument("--mode", choices=["closed", "quadrature", "both"], default="closed")

    for name, fn, helptext in (("simulate", cmd_simulate, "write approximation paths as CSV"),
                               ("verify", cmd_verify, "check the limit law; writes report.json and CSVs")):
        s = sub.add_parser(name, help=helptext)
        _add_triplet_args(s)
        _add_config_args(s)
        s.add_argument("--replicas", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--T", type=float)
        s.add_argument("--out-dir")
        s.add_argument("--force", action="store_true", help="overwrite existing result files")
        s.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        s.set_defaults(func=fn)
    sim = sub.choices["simulate"]
    sim.add_argument("--paths", type=int, default=16, help="replicas written as full path CSVs")
    sim.add_argument("--dump-driver", type=int, default=0, metavar="N", help="also write the first N driver paths")
    sub.choices["verify"].add_argument("--ladder", type=_floats, metavar="EPS",
                                       help="also run a KS / tightness study over these eps values")

    e.set_defaults(func=cmd_exponent)
    c.set_defaults(func=cmd_classify)
    h.set_defaults(func=cmd_hypothesis)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except AdmissibilityFailure as exc:
        print(f"error: inadmissible theta vector: {exc}", file=sys.stderr)
    except (ConfigError, KacStroockError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
