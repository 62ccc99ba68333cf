"""Command-line scenario runner.

``attrition run CONFIG`` builds and verifies a price-signaling candidate and
writes ``prices.csv``, ``values.csv``, ``beliefs.csv``, ``expected_type.csv``
and ``certificate.txt``.  Labor and bargaining scenarios run the assumption
suite and write ``assumptions.txt``.

Exit status: 0 verified, 1 verification (or assumption) failure, 2 bad
configuration, 3 no candidate exists (pooling indifference has no root).
A sweep exits with the largest status of its entries.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import assumptions as assume
from .apps import (
    BargainingParams,
    LaborParams,
    PriceSignalingParams,
    make_bargaining_model,
    make_labor_model,
    make_price_model,
)
from .config import ConfigError, ScenarioConfig, load_config
from .constructor import AttritionCandidate, build_attrition, separating_action
from .core import Belief, TypeSpace, bliss_action, expected_type
from .errors import AttritionError, NoSolutionError
from .verifier import Certificate, certificate_report, verify_candidate

log = logging.getLogger("attrition")

EXIT_OK, EXIT_UNVERIFIED, EXIT_CONFIG, EXIT_NO_SOLUTION = 0, 1, 2, 3
TAIL_ROWS = 20
OUTPUT_FILES = ("prices.csv", "values.csv", "beliefs.csv", "expected_type.csv", "certificate.txt")


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def emit_figure_series(c: AttritionCandidate, cert: Certificate, out_dir) -> list[Path]:
    """Write the four figure series: one row per period from 0 to t_bar,
    then ``TAIL_ROWS`` rows at the frozen tail values."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from exc
    m = c.model
    types = m.types.values
    labels = [f"theta_{k + 1}" for k in range(len(types))]
    T = c.steps
    n_rows = T + 1 + TAIL_ROWS
    times = np.arange(n_rows) * c.dt
    idx = np.minimum(np.arange(n_rows), T)
    beliefs = [c.belief_path[i] for i in idx]

    prices = [
        [t, c.pooling_actions[i]] + [bliss_action(m, q, th) for th in types]
        for t, i, q in zip(times, idx, beliefs)
    ]
    values = [
        [t] + list(cert.v_pool[i]) + list(cert.v_dev) for t, i in zip(times, idx)
    ]
    belief_rows = [[t] + list(q.weights) for t, q in zip(times, beliefs)]
    etype = [[t, expected_type(q)] for t, q in zip(times, beliefs)]

    files = {
        "prices.csv": (["t", "pooling_price"] + [f"bliss_price_{s}" for s in labels], prices),
        "values.csv": (["t"] + [f"V_pool_{s}" for s in labels] + [f"V_dev_{s}" for s in labels], values),
        "beliefs.csv": (["t"] + [f"p_{s}" for s in labels], belief_rows),
        "expected_type.csv": (["t", "expected_type"], etype),
    }
    written = []
    for name, (header, rows) in files.items():
        path = out / name
        try:
            _write_csv(path, header, rows)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
        written.append(path)
    return written


def build_model(cfg: ScenarioConfig):
    types = TypeSpace(cfg.theta_space)
    p = cfg.model_params
    if cfg.model == "price":
        return make_price_model(PriceSignalingParams(lam=p["lam"], F=p["F"], theta_space=types))
    if cfg.model == "labor":
        return make_labor_model(LaborParams(r=p["r"], theta_space=types, max_effort=p["max_effort"]))
    return make_bargaining_model(BargainingParams(chi=p["chi"], theta_space=types, max_price=p["max_price"]))


def _run_assumptions(cfg: ScenarioConfig, model, out: Path) -> int:
    sep = separating_action(model)
    lo, hi = model.action_domain
    pool = 0.5 * hi if hi > 0 else 0.5 * (lo + hi)
    family = assume.generic_family(model, pool, sep, periods=max(cfg.steps, 1), sigma=cfg.sigma[0], dt=cfg.dt)
    reports = assume.run_all(model, family, cfg.dt, cfg.r)
    out.mkdir(parents=True, exist_ok=True)
    text = "".join(f"{name}: {rep.summary()}\n" for name, rep in reports.items())
    (out / "assumptions.txt").write_text(text)
    weak_ok = all(
        rep.holds or (name == "mon_direct" and rep.parts.get("weak") is assume.Verdict.HOLDS)
        for name, rep in reports.items()
    )
    return EXIT_OK if weak_ok else EXIT_UNVERIFIED


def run_scenario(cfg: ScenarioConfig, out_dir, quiet: bool = True) -> int:
    """Build, verify and write one scenario into ``out_dir``; return the exit status."""
    out = Path(out_dir)
    try:
        model = build_model(cfg)
        p_terminal = Belief.normalized(model.types, cfg.p_terminal)
    except (ValueError, AttritionError) as exc:
        log.error("invalid scenario: %s", exc)
        return EXIT_CONFIG
    if cfg.model != "price":
        status = _run_assumptions(cfg, model, out)
        if not quiet:
            print((out / "assumptions.txt").read_text(), end="")
        return status
    try:
        cand = build_attrition(model, p_terminal, cfg.sigma_value(), cfg.dt, cfg.r, cfg.t_bar)
    except NoSolutionError as exc:
        log.error("no attrition candidate: %s", exc)
        if not quiet:
            print(f"no solution at period {exc.period}: {exc}")
        return EXIT_NO_SOLUTION
    except AttritionError as exc:
        log.error("invalid scenario: %s", exc)
        return EXIT_CONFIG
    cert = verify_candidate(cand, cfg.tol)
    emit_figure_series(cand, cert, out)
    (out / "certificate.txt").write_text(certificate_report(cert))
    if not quiet:
        print(f"{out}: {cert.verdict.value} (max residual {cert.max_residual:.3g}, min IC margin {cert.min_margin:.6g})")
    return EXIT_OK if cert.verified else EXIT_UNVERIFIED


def sweep_dirname(sigma: float, dt: float) -> str:
    return f"sigma={sigma:g}_dt={dt:g}"


def run_sweep(cfg: ScenarioConfig, out_dir, sigmas, dts, quiet: bool = True) -> int:
    """Run every (sigma, dt) pair into its own subdirectory."""
    status = EXIT_OK
    for s, d in itertools.product(sigmas or cfg.sigma[:1], dts or (cfg.dt,)):
        steps = cfg.t_bar / d
        if abs(round(steps) - steps) > 1e-9:
            log.error("t_bar=%g is not a multiple of dt=%g; skipped", cfg.t_bar, d)
            status = max(status, EXIT_CONFIG)
            continue
        entry = cfg.with_overrides(sigma=(s,), dt=d)
        status = max(status, run_scenario(entry, Path(out_dir) / sweep_dirname(s, d), quiet))
    return status


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="attrition", description="Construct and verify attrition equilibria.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario config")
    run.add_argument("config", help="path to the scenario config")
    run.add_argument("--out", help="output directory (default: config output_dir, $ATTRITION_OUT, ./attrition_out)")
    run.add_argument("--tol", type=float, help="verification tolerance (overrides the config)")
    run.add_argument("--sweep-sigma", type=_float_list, default=None, help="comma-separated intensities")
    run.add_argument("--sweep-dt", type=_float_list, default=None, help="comma-separated time steps")
    run.add_argument("--quiet", action="store_true", help="print nothing on success")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.tol is not None:
        if not args.tol > 0:
            print("error: --tol must be positive", file=sys.stderr)
            return EXIT_CONFIG
        cfg = cfg.with_overrides(tol=args.tol)
    out = args.out or cfg.output_dir or os.environ.get("ATTRITION_OUT") or "attrition_out"
    sigmas = args.sweep_sigma if args.sweep_sigma is not None else cfg.sweep_sigma
    dts = args.sweep_dt if args.sweep_dt is not None else cfg.sweep_dt
    if sigmas or dts:
        return run_sweep(cfg, out, sigmas, dts, quiet=args.quiet)
    return run_scenario(cfg, out, quiet=args.quiet)


if __name__ == "__main__":
    raise SystemExit(main())
