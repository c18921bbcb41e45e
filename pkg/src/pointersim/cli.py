"""Command-line interface.

Subcommands: run, sweep, lg-check, entangle, appendix-a, validate.
Exit codes: 0 success, 1 validation/runtime failure, 2 config error.
All file outputs land under --out (default ./out) and are byte-exact
deterministic; wall-clock timing goes to stdout only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .entanglement import (
    TwoModeGaussianParams,
    WeakProbeConfig,
    c_matrix_direct,
    c_matrix_from_shifts,
    is_entangled,
    two_mode_gaussian,
)
from .errors import ConfigError, PointersimError
from .fouriercorr import appendix_a_check
from .pointer import Grid, auto_grid, lg_mode, moments
from .quantum import PAULI_Z, Observable, make_state
from .scenarios import (
    load_config,
    report_json_text,
    reports_csv_text,
    run_scenario,
    run_sweep,
    sweep_json_text,
)
from .shifts import lg_compatibility
from . import validation


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cmd_run(args) -> int:
    cfg = load_config(args.scenario)
    report = run_scenario(cfg)
    csv_path = _write(args.out, f"{cfg.scenario_id}.csv", reports_csv_text([report]))
    json_path = _write(args.out, f"{cfg.scenario_id}.json", report_json_text(report))
    print(f"scenario {cfg.scenario_id}: prob={report.probability:.6f} "
          f"wall={report.wall_time_seconds:.3f}s")
    for axis in range(len(report.shift_q)):
        print(f"  axis {axis + 1}: dq={report.shift_q[axis]:+.6e} "
              f"(pred {report.predicted_dq[axis]:+.6e})  "
              f"dp={report.shift_p[axis]:+.6e} (pred {report.predicted_dp[axis]:+.6e})")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.scenario)
    multipliers = args.multipliers if args.multipliers else cfg.sweep
    if not multipliers:
        raise ConfigError("no --multipliers given and the scenario has no sweep list",
                          "sweep")
    reports, summary = run_sweep(cfg, multipliers)
    _write(args.out, f"{cfg.scenario_id}_sweep.csv", reports_csv_text(reports))
    _write(args.out, f"{cfg.scenario_id}_sweep.json", sweep_json_text(reports, summary))
    slope = summary["slope"]
    print(f"scenario {cfg.scenario_id}: multipliers {summary['multipliers']}")
    print(f"residual norms: {['%.3e' % n for n in summary['residual_norms']]}")
    print(f"log-log residual slope: {'n/a' if slope is None else f'{slope:.3f}'}")
    return 0


def _cmd_lg_check(args) -> int:
    l, sigma = args.l, args.sigma
    ext = 8.0 * sigma * np.sqrt(1.0 + abs(l))
    grid = Grid(points_per_axis=(args.points, args.points), extent=(ext, ext))
    m = moments(lg_mode(grid, l, sigma))
    residual = lg_compatibility(m, l)
    obj = {
        "l": l,
        "sigma": sigma,
        "corr_x_py": float(m.cov_qp[0, 1]),
        "corr_y_px": float(m.cov_qp[1, 0]),
        "corr_x_y": float(m.cov_qq[0, 1]),
        "expected_corr_x_py": 0.5 * l,
        "expected_corr_y_px": -0.5 * l,
        "residual": float(residual),
    }
    _write(args.out, f"lg_check_l{l}.json", _dump(obj))
    print(f"l={l}: corr(x,p_y)={obj['corr_x_py']:+.6f} (target {0.5 * l:+.2f}), "
          f"corr(y,p_x)={obj['corr_y_px']:+.6f} (target {-0.5 * l:+.2f}), "
          f"corr(x,y)={obj['corr_x_y']:+.2e}, residual={residual:.2e}")
    return 0


def _cmd_entangle(args) -> int:
    params = TwoModeGaussianParams(args.alpha, args.beta, args.gamma)
    grid = auto_grid(2, np.sqrt(np.diag(params.position_covariance())))
    phi = two_mode_gaussian(grid, params)
    probe = WeakProbeConfig(
        observable=Observable(PAULI_Z),
        pre=make_state([1, 1]),
        post=make_state([1, 1j]),
        strength=args.strength,
    )
    direct = c_matrix_direct(phi)
    recon = c_matrix_from_shifts(phi, probe)
    obj = {
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": args.gamma,
        "probe_strength": args.strength,
        "c_direct": [[float(v) for v in row] for row in direct.entries],
        "c_from_shifts": [[float(v) for v in row] for row in recon.entries],
        "det_direct": direct.det,
        "det_from_shifts": recon.det,
        "entangled_direct": is_entangled(direct),
        "entangled_from_shifts": is_entangled(recon),
    }
    name = f"entangle_a{args.alpha:g}_b{args.beta:g}_g{args.gamma:g}.json"
    _write(args.out, name, _dump(obj))
    print(f"det(C) direct = {direct.det:+.6e}, from shifts = {recon.det:+.6e}")
    print(f"entangled: direct={obj['entangled_direct']} "
          f"from_shifts={obj['entangled_from_shifts']}")
    return 0


def _cmd_appendix_a(args) -> int:
    numeric, analytic, residual = appendix_a_check(args.sigma1, args.sigma2, args.c12)
    obj = {
        "sigma1": args.sigma1,
        "sigma2": args.sigma2,
        "c12": args.c12,
        "numeric": [numeric.real, numeric.imag],
        "analytic": [analytic.real, analytic.imag],
        "residual": residual,
    }
    name = f"appendix_a_s{args.sigma1:g}_{args.sigma2:g}_c{args.c12:g}.json"
    _write(args.out, name, _dump(obj))
    print(f"numeric = {numeric.real:+.6e}{numeric.imag:+.6e}i, "
          f"analytic = {analytic.real:+.6e}{analytic.imag:+.6e}i, residual = {residual:.2e}")
    return 0


def _cmd_validate(args) -> int:
    results = validation.run_all()
    _write(args.out, "validate_summary.json", validation.summary_json_text(results))
    _write(args.out, "validate_summary.csv", validation.summary_csv_text(results))
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"FAILED criteria: {failed}")
        return 1
    print("all criteria passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointersim",
        description="Weak-measurement simulations with correlated pointer states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario file")
    p.add_argument("scenario", help="path to a scenario JSON document")
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sweep", help="run a scenario over strength multipliers")
    p.add_argument("scenario")
    p.add_argument("--multipliers", type=float, nargs="+",
                   help="defaults to the scenario's own sweep list")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("lg-check", help="measure the vortex-mode correlation law")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--points", type=int, default=256)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_lg_check)

    p = sub.add_parser("entangle", help="direct vs shift-reconstructed C matrix")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--strength", type=float, default=0.05)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_entangle)

    p = sub.add_parser("appendix-a", help="partial-transform correlation identity")
    p.add_argument("--sigma1", type=float, required=True)
    p.add_argument("--sigma2", type=float, required=True)
    p.add_argument("--c12", type=float, required=True)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_appendix_a)

    p = sub.add_parser("validate", help="run the full verification suite")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PointersimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
