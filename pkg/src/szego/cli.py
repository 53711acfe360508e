"""Command line entry point: ``szego <subcommand> --config PATH``.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 a comparison
or oracle check failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import diagnostics, ensembles, limitlaw, spectral
from .experiment import (ConfigError, _write_csv, _write_json, empirical_moments, load_config,
                         oracle_mismatches, parse_config, run_experiment)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ACCEPT = 0, 2, 3, 4

log = logging.getLogger("szego")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.replace(" ", "").split(",") if v]


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="YAML or JSON experiment config")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--out", type=Path, help="override the output directory")
    common.add_argument("--n-grid", type=_int_list, help="comma separated dimensions, e.g. 256,1024")
    common.add_argument("--max-moment", type=int, help="report every (r, s) with r + s <= this")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="szego", description="Szego-type limit experiments for structured matrices")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="write each A_n as a dense CSV")
    sub.add_parser("vmv", parents=[common], help="per-diagonal variation profile")
    sub.add_parser("spectrum", parents=[common], help="eigenvalues and empirical CDF")
    sub.add_parser("moments", parents=[common], help="trace moments by both methods plus predictions")
    sub.add_parser("compare", parents=[common], help="full pipeline")
    sub.add_parser("density", parents=[common], help="tabulate the spectral density of a density-model law")
    return parser


def _build(cfg):
    out = cfg.output_dir
    for n in cfg.n_grid:
        ensembles.write_dense_csv(ensembles.build(cfg.spec, n, cfg.seed), out / f"matrix_n{n}.csv")
    return []


def _vmv(cfg):
    grid = cfg.n_grid
    rep = diagnostics.vmv_profile(cfg.spec, grid, cfg.seed) if len(grid) >= 3 else None
    if rep is None:
        # short grids still get raw values, just no trend verdict
        rep = diagnostics.VmvReport(grid)
        mats = [ensembles.build(cfg.spec, n, cfg.seed) for n in grid]
        for k in sorted(set().union(*(A.offsets for A in mats))):
            rep.variation[k] = [diagnostics.vmv_variation(A, k) if abs(k) < A.n else 0.0 for A in mats]
        _write_json(cfg.output_dir / "vmv.json", {"n_grid": grid, "variation": {str(k): v for k, v in rep.variation.items()}})
    else:
        _write_json(cfg.output_dir / "vmv.json", rep.to_dict())
    rep.to_csv(cfg.output_dir / "vmv.csv")
    return []


def _spectrum(cfg):
    rows, cdf_rows = [], []
    for n in cfg.n_grid:
        A = ensembles.build(cfg.spec, n, cfg.seed)
        sample = spectral.eigenvalues(A)
        rows.extend((n, float(z.real), float(z.imag)) for z in np.asarray(sample.eigenvalues, dtype=complex))
        if A.hermitian and cfg.cdf_grid is not None:
            cdf_rows.extend((n, float(x), float(v)) for x, v in zip(cfg.cdf_grid, spectral.empirical_cdf(sample, cfg.cdf_grid)))
    _write_csv(cfg.output_dir / "eigenvalues.csv", ["n", "re", "im"], rows)
    if cdf_rows:
        _write_csv(cfg.output_dir / "cdf.csv", ["n", "x", "value"], cdf_rows)
    return []


def _moments(cfg):
    cfg.moment_methods = ("dense", "diagonal")
    reports, fails = [], []
    for n in cfg.n_grid:
        A = ensembles.build(cfg.spec, n, cfg.seed)
        emp = empirical_moments(A, cfg.moments, cfg.moment_methods, cfg.max_moment)
        fails.extend(oracle_mismatches(A, emp))
        law = cfg.law.to_law() if isinstance(cfg.law, limitlaw.DensityModel) else cfg.law
        for method, tag in (("dense", "dense-power"), ("diagonal", "diagonal-sum")):
            rep = spectral.MomentReport(n, tag)
            for r, s in cfg.moments:
                rep.rows.append(spectral.MomentRow(r, s, emp[method][(r, s)], limitlaw.predicted_moment(law, r, s)))
            reports.append(rep.to_dict())
    if fails:
        # refuse to write moments that the two methods disagree on
        return fails
    _write_json(cfg.output_dir / "moments.json", reports)
    return []


def _density(cfg):
    model = cfg.law
    if not isinstance(model, limitlaw.DensityModel):
        raise ConfigError(["law: the density subcommand needs a law of kind 'density'"])
    lo, hi = model.support
    grid = cfg.cdf_grid if cfg.cdf_grid is not None else np.linspace(lo, hi, 801)
    _write_csv(cfg.output_dir / "density.csv", ["x", "value"],
               [(float(x), float(model.density(x))) for x in grid])
    _write_csv(cfg.output_dir / "predicted_cdf.csv", ["x", "value"],
               [(float(x), float(v)) for x, v in zip(grid, limitlaw.predicted_cdf(model, grid))])
    return []


def _compare(cfg):
    if not cfg.spec.hermitian and cfg.cdf_grid is not None:
        log.warning("CDF comparison skipped: the matrix sequence is not hermitian")
        cfg.cdf_grid = None
    return run_experiment(cfg).failures


COMMANDS = {"build": _build, "vmv": _vmv, "spectrum": _spectrum, "moments": _moments,
            "compare": _compare, "density": _density}


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        raw = load_config(args.config)
        cfg = parse_config(raw, seed=args.seed, out=args.out, n_grid=args.n_grid, max_moment=args.max_moment)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        failures = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (spectral.SolverError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if failures:
        for f in failures:
            print(f"check failed: {f}", file=sys.stderr)
        return EXIT_ACCEPT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
