"""Configuration-driven command-line driver.

Subcommands
-----------
classify
    Family of the leading Regge trajectory (type I bound-correlated or
    type II metastable-correlated) with its E0 and gamma.
trajectory
    Trace the leading trajectory across the energy grid; one CSV row
    per grid energy with the pole, its residue, and the centrifugal
    estimate of the pole position.
decompose
    Mulholland decomposition of the integral cross section per grid
    energy: sigma_total, the background/resonance/axis pieces, their
    modified rearrangement, and reference columns.
poles
    Argument-principle scan of the configured lambda rectangle at every
    grid energy.
verify
    Run the oracle battery (high-precision cylinder values, radial ODE,
    contour residues, deformed background contour) and report PASS/FAIL.

Conventions
-----------
Output is CSV with a header row, ',' delimiter, '.' decimal separator,
'\\n' line endings and 15 significant digits: identical configs produce
byte-identical files regardless of --threads, which only schedules the
per-energy work.  Exit codes: 0 success, 1 configuration or validation
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import (
    PRESETS,
    RunConfig,
    load_config,
    preset_config,
)
from .errors import (
    AccuracyLossError,
    AtPoleError,
    BoundaryZeroError,
    ClassificationError,
    ConfigError,
    ContinuationLostError,
    DegeneratePoleError,
    DetourOverlapError,
    DivergentPoleError,
    DomainError,
    EnclosureError,
    NonIntegralWindingError,
    NotAPoleError,
    QuadratureError,
    SolverError,
    ZeroDenominatorError,
)
from .model import kinematics
from .poles import (
    classify_trajectory,
    find_regge_pole,
    lambda_estimate,
    region_winding,
    scan_poles,
    trace_regge_trajectory,
)
from .verify import verification_battery, write_report
from .xsec import modified_decomposition, relevant_poles, sigma_hard_sphere

#: closure target of the Mulholland identity; a defect beyond 100x this
#: flags poles missed by the scan and turns the run into a failure
CLOSURE_RTOL = 1e-5
#: outward growth (lambda units) per automatic re-try when a pole sits
#: on the requested scan boundary
POLES_NUDGE = 5e-3

#: everything that signals a numerical (exit 2) rather than a
#: configuration (exit 1) failure
NUMERICAL_ERRORS = (
    AccuracyLossError,
    AtPoleError,
    BoundaryZeroError,
    ClassificationError,
    DegeneratePoleError,
    DetourOverlapError,
    DivergentPoleError,
    EnclosureError,
    NonIntegralWindingError,
    NotAPoleError,
    QuadratureError,
    SolverError,
    ZeroDenominatorError,
)

TRAJECTORY_HEADER = ("E", "Re_lambda", "Im_lambda", "Re_rho", "Im_rho",
                     "est_Re_lambda", "est_Im_lambda")
DECOMPOSE_HEADER = ("E", "sigma_total", "sigma1", "sigma_res", "sigma2",
                    "sigma1_mod", "sigma_res_mod", "sigma_res_n0",
                    "sigma_res_n1", "sigma_res_n2", "closure_defect",
                    "direct_orig", "direct_mod", "sigma_hard_R")
POLES_HEADER = ("E", "Re_lambda", "Im_lambda", "Re_rho", "Im_rho",
                "winding_checksum")


# ----------------------------------------------------------------------
# Output plumbing
# ----------------------------------------------------------------------

def _fmt(value) -> str:
    return f"{value:.15g}"


def _emit_csv(header, rows, destination) -> None:
    """Write rows as deterministic CSV to a path, or stdout when None."""
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if destination is None:
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _say(message: str) -> None:
    print(message, file=sys.stderr)


# ----------------------------------------------------------------------
# Worker functions (top level so process pools can pickle them)
# ----------------------------------------------------------------------

def _decompose_row(task) -> tuple:
    model, E, poles = task
    dec = modified_decomposition(model, E, poles)
    per = dict(dec.per_n)
    hard = sigma_hard_sphere(kinematics(model, E).k.real, model.R)
    return (E, dec.sigma_total, dec.sigma1, dec.sigma_res, dec.sigma2,
            dec.sigma1_mod, dec.sigma_res_mod, per[0], per[1], per[2],
            dec.closure_defect, dec.sigma_total - dec.sigma_res,
            dec.sigma_total - dec.sigma_res_mod, hard)


def _poles_block(task) -> list:
    """Scan one energy, nudging the rectangle outward on boundary zeros."""
    model, E, region = task
    last = None
    for attempt in range(4):
        grow = attempt * POLES_NUDGE
        nudged = (region[0] - grow, region[1] + grow,
                  region[2] - grow, region[3] + grow)
        try:
            found = scan_poles(model, E, nudged)
            winding = region_winding(model, E, nudged)
            return [(E, p.lam.real, p.lam.imag, p.residue.real,
                     p.residue.imag, winding) for p in found]
        except BoundaryZeroError as exc:
            last = exc
    raise BoundaryZeroError(
        f"pole pinned to the scan boundary at E={E} after 3 nudges: {last}")


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_classify(cfg: RunConfig, out: str | None, threads: int) -> int:
    cls = classify_trajectory(cfg.model)
    print(f"type={cls.type_label} {cls.kind} "
          f"E0={cls.E0:.15g} gamma={cls.gamma:.15g}")
    return 0


def _anchor(cfg: RunConfig) -> complex:
    """E~(1/2) = E0 - i*gamma, the energy the trajectory emanates from."""
    if cfg.seeds_energy:
        return complex(cfg.seeds_energy[0])
    cls = classify_trajectory(cfg.model)
    return complex(cls.E0, -cls.gamma)


def _trace_branch(model, energies, seed: complex, anchor: complex,
                  rows: list) -> None:
    """Continue a pole along one monotone branch, appending CSV rows.

    Energies are walked pairwise through :func:`trace_regge_trajectory`
    so its interval-halving recovers from jump-guard trips; rows
    accumulate even when a later step loses the continuation, which
    propagates as ContinuationLostError after the good rows are kept.
    """
    E_prev, lam = None, None
    for E in energies:
        E = float(E)
        if lam is None:
            pole = find_regge_pole(model, E, seed)
            lam, rho = pole.lam, pole.residue
        else:
            traj = trace_regge_trajectory(model, [E_prev, E], lam)
            _, lam, rho = traj.samples[-1]
        est = lambda_estimate(model, E, anchor)
        rows.append((E, lam.real, lam.imag, rho.real, rho.imag,
                     est.real, est.imag))
        E_prev = E


def _reject_threshold(grid) -> None:
    if np.any(grid == 0.0):
        raise ConfigError(
            "grid contains E = 0 exactly (k = 0 threshold, where the "
            "exterior Hankel functions degenerate); offset the grid")


def cmd_trajectory(cfg: RunConfig, out: str | None, threads: int) -> int:
    model = cfg.model
    anchor = _anchor(cfg)
    grid = cfg.energies()
    _reject_threshold(grid)
    above = grid[grid >= anchor.real]
    below = grid[grid < anchor.real][::-1]
    rows: list = []
    lost = None
    for branch, default_seed_idx in ((above, 0), (below, 1)):
        if len(branch) == 0:
            continue
        if len(cfg.seeds_lambda) > default_seed_idx:
            seed = cfg.seeds_lambda[default_seed_idx]
        else:
            seed = lambda_estimate(model, float(branch[0]), anchor)
        try:
            _trace_branch(model, branch, seed, anchor, rows)
        except ContinuationLostError as exc:
            lost = exc
    rows.sort(key=lambda row: row[0])
    _emit_csv(TRAJECTORY_HEADER, rows, out)
    if lost is not None:
        _say(f"trajectory continuation lost after {len(rows)} good rows: {lost}")
        return 2
    return 0


def cmd_decompose(cfg: RunConfig, out: str | None, threads: int) -> int:
    if cfg.grid.e_min <= 0.0:
        raise ConfigError(
            f"decompose needs e_min > 0, got {cfg.grid.e_min}")
    model = cfg.model
    energies = [float(E) for E in cfg.energies()]
    # The pole sets are continued energy-to-energy (cheap, and the
    # winding check inside relevant_poles rescans on any miscount), so
    # this stage stays sequential; the quadrature-heavy rows below are
    # what --threads parallelizes.
    tasks = []
    warm: tuple = ()
    for E in energies:
        found = relevant_poles(model, E, im_cutoff=cfg.tolerances.pole_im_cutoff,
                               warm_start=warm)
        warm = tuple(found)
        tasks.append((model, E, warm))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_decompose_row, tasks))
    else:
        rows = [_decompose_row(task) for task in tasks]
    _emit_csv(DECOMPOSE_HEADER, rows, out)
    worst = max(abs(row[10]) / max(abs(row[1]), 1e-300) for row in rows)
    if worst > 100.0 * CLOSURE_RTOL:
        _say(f"closure defect {worst:.3g} exceeds {100.0 * CLOSURE_RTOL:.0e}: "
             f"the scan likely missed a pole")
        return 2
    return 0


def cmd_poles(cfg: RunConfig, out: str | None, threads: int) -> int:
    grid = cfg.energies()
    _reject_threshold(grid)
    tasks = [(cfg.model, float(E), cfg.scan_region) for E in grid]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(_poles_block, tasks))
    else:
        blocks = [_poles_block(task) for task in tasks]
    rows = [row for block in blocks for row in block]
    _emit_csv(POLES_HEADER, rows, out)
    return 0


def cmd_verify(cfg: RunConfig, out: str | None, threads: int) -> int:
    reports = verification_battery()
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.quantity}: rel={r.rel_error:.3g} tol={r.tolerance:g}")
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} oracle comparisons passed")
    if out is not None:
        write_report(reports, out)
    return 0 if failed == 0 else 2


COMMANDS = {
    "classify": cmd_classify,
    "trajectory": cmd_trajectory,
    "decompose": cmd_decompose,
    "poles": cmd_poles,
    "verify": cmd_verify,
}


# ----------------------------------------------------------------------
# Argument parsing and dispatch
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; remap to the config exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="camscat", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} command")
        source = p.add_mutually_exclusive_group()
        source.add_argument("--config", metavar="PATH",
                            help="flat key-value config file")
        source.add_argument("--preset", choices=PRESETS,
                            help="bundled configuration preset")
        p.add_argument("--out", metavar="PATH",
                       help="output destination (default: config output.path, "
                            "else stdout)")
        p.add_argument("--threads", type=int, default=1, metavar="N",
                       help="process pool size for per-energy work "
                            "(default 1; never changes the output bytes)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
        if args.config:
            cfg = load_config(args.config)
        elif args.preset:
            cfg = preset_config(args.preset)
        else:
            cfg = RunConfig()
        out = args.out if args.out is not None else cfg.output_path
        return COMMANDS[args.command](cfg, out, args.threads)
    except (ConfigError, DomainError) as exc:
        _say(f"camscat: configuration error: {exc}")
        return 1
    except NUMERICAL_ERRORS as exc:
        _say(f"camscat: numerical failure: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
