"""The full verification suite: one function per acceptance criterion.

Each criterion returns a :class:`CriterionResult`; ``run_all`` executes all
ten (the determinism criterion reruns the other nine and the bundled corpus
and byte-compares the serialized outputs).  Results carry only deterministic
values; wall-clock limits affect the pass flag but are never serialized.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .entanglement import (
    TwoModeGaussianParams,
    WeakProbeConfig,
    c_matrix_direct,
    c_matrix_from_shifts,
    two_mode_gaussian,
)
from .fouriercorr import appendix_a_check
from .pointer import Grid, auto_grid, displace_momentum, gaussian_pointer, lg_mode, moments
from .quantum import PAULI_Z, Observable, make_state
from .scenarios import (
    bundled_scenario_names,
    build_coupling_specs,
    build_pointer,
    load_bundled,
    report_json_text,
    reports_csv_text,
    resolve_system,
    run_scenario,
    run_sweep,
    simulate_pipeline,
)
from .shifts import lg_compatibility
from .dynamics import first_order_pointer


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} {self.name}: "
                f"{self.value:.3e} vs {self.threshold:.3e} ({self.detail})")


def criterion_1_lg_correlation_law() -> CriterionResult:
    """corr(x,p_y) = +l/2, corr(y,p_x) = -l/2, corr(x,y) = 0 for l in {0,1,2}."""
    t0 = time.perf_counter()
    worst = 0.0
    for l in (0, 1, 2):
        ext = 8.0 * np.sqrt(1.0 + l)
        grid = Grid(points_per_axis=(256, 256), extent=(ext, ext))
        m = moments(lg_mode(grid, l, 1.0))
        worst = max(worst, lg_compatibility(m, l))
    elapsed = time.perf_counter() - t0
    passed = worst <= 1e-3 and elapsed < 5.0
    return CriterionResult(1, "lg_correlation_law", passed, worst, 1e-3,
                           "max law residual over l in {0,1,2}, 256^2 grid")


def criterion_2_single_wm_shifts() -> CriterionResult:
    """Single weak coupling on a correlated Gaussian: residuals <= 3*lambda^2
    per component and quadratic residual decay over the strength sweep."""
    t0 = time.perf_counter()
    cfg = load_bundled("single_wm_correlated")
    reports, summary = run_sweep(cfg, cfg.sweep)
    lam = cfg.couplings[0].strength
    base = reports[cfg.sweep.index(1.0)]
    worst = float(max(np.max(base.residual_q), np.max(base.residual_p)))
    slope = summary["slope"]
    elapsed = time.perf_counter() - t0
    slope_ok = slope is not None and abs(slope - 2.0) <= 0.3
    passed = worst <= 3 * lam**2 and slope_ok and elapsed < 10.0
    return CriterionResult(2, "single_wm_shifts", passed, worst, 3 * lam**2,
                           f"worst residual at lambda={lam:g}; sweep slope {slope:.3f}")


def criterion_3_sequential_shifts() -> CriterionResult:
    """Two sequential couplings on a correlated 3-axis Gaussian: all six
    components within 3*(l1+l2)^2; readout offset exact at zero coupling."""
    t0 = time.perf_counter()
    cfg = load_bundled("seq_corr_full")
    report = run_scenario(cfg)
    lam_tot = sum(abs(c.strength) for c in cfg.couplings)
    bound = 3.0 * lam_tot**2
    worst = float(max(np.max(report.residual_q), np.max(report.residual_p)))
    zero = run_scenario(cfg, 0.0)
    offset_residual = float(zero.residual_p[2])
    elapsed = time.perf_counter() - t0
    passed = worst <= bound and offset_residual <= 1e-9 and elapsed < 60.0
    return CriterionResult(3, "sequential_shifts", passed, worst, bound,
                           f"offset residual at lambda=0: {offset_residual:.2e}")


def criterion_4_jozsa_reduction() -> CriterionResult:
    """Uncorrelated 3-axis pointer: the cross-axis shifts vanish."""
    cfg = load_bundled("jozsa_reduction_3d")
    report = run_scenario(cfg)
    lam = cfg.couplings[0].strength
    tol = max(1e-6, 3 * lam**2)
    vals = (abs(float(report.shift_q[1])), abs(float(report.shift_q[2])),
            float(report.residual_p[2]))
    worst = max(vals)
    return CriterionResult(4, "jozsa_reduction", worst <= tol, worst, tol,
                           "max of |dq2|, |dq3|, |dp3 - readout offset|")


def criterion_5_real_weak_value_null() -> CriterionResult:
    """Real weak value on a fully correlated pointer: no correlation-driven shifts."""
    cfg = load_bundled("real_weak_value")
    report = run_scenario(cfg)
    lam = cfg.couplings[0].strength
    tol = max(1e-6, 3 * lam**2)
    vals = [abs(float(report.shift_q[j])) for j in range(3)]
    vals.append(abs(float(report.shift_p[1])))
    vals.append(float(report.residual_p[2]))
    worst = max(vals)
    return CriterionResult(5, "real_weak_value_null", worst <= tol, worst, tol,
                           "max correlation-driven component")


def criterion_6_displacement_invariance() -> CriterionResult:
    """All covariance blocks invariant under on-grid momentum displacement."""
    worst = 0.0
    grid3 = Grid(points_per_axis=(64, 64, 64), extent=(8.0, 8.0, 8.0))
    sigma = np.array([[1.0, 0.5, 0.3], [0.5, 1.0, 0.2], [0.3, 0.2, 1.0]])
    theta = np.array([[0.0, 0.2, 0.1], [0.2, 0.0, 0.15], [0.1, 0.15, 0.0]])
    phi = gaussian_pointer(grid3, sigma, theta=theta)
    shifts = np.array([3 * grid3.dp(0), -2 * grid3.dp(1), 5 * grid3.dp(2)])
    before, after = moments(phi), moments(displace_momentum(phi, shifts))
    for blk in ("cov_qq", "cov_qp", "cov_pp"):
        worst = max(worst, float(np.max(np.abs(getattr(after, blk) - getattr(before, blk)))))
    grid2 = Grid(points_per_axis=(256, 256), extent=(12.0, 12.0))
    phi = lg_mode(grid2, 1, 1.0)
    shifts = np.array([2 * grid2.dp(0), 3 * grid2.dp(1)])
    before, after = moments(phi), moments(displace_momentum(phi, shifts))
    for blk in ("cov_qq", "cov_qp", "cov_pp"):
        worst = max(worst, float(np.max(np.abs(getattr(after, blk) - getattr(before, blk)))))
    return CriterionResult(6, "displacement_invariance", worst <= 1e-9, worst, 1e-9,
                           "max covariance-entry change, Gaussian and vortex states")


def criterion_7_entanglement_protocol() -> CriterionResult:
    """Shift-reconstructed C agrees with the direct C and the det sign matches."""
    t0 = time.perf_counter()
    probe = WeakProbeConfig(
        observable=Observable(PAULI_Z),
        pre=make_state([1, 1]),
        post=make_state([1, 1j]),
        strength=0.05,
    )
    worst_rel = 0.0
    dets_ok = True
    worst_zero_det = 0.0
    for gamma in (0.0, 0.05, -0.05, 0.1, -0.1):
        params = TwoModeGaussianParams(0.25, 0.25, gamma)
        grid = auto_grid(2, np.sqrt(np.diag(params.position_covariance())))
        phi = two_mode_gaussian(grid, params)
        direct = c_matrix_direct(phi)
        recon = c_matrix_from_shifts(phi, probe)
        for i in range(2):
            for j in range(2):
                ref = direct.entries[i, j]
                if abs(ref) > 1e-3:
                    worst_rel = max(worst_rel, abs(recon.entries[i, j] - ref) / abs(ref))
        if gamma == 0.0:
            worst_zero_det = max(abs(direct.det), abs(recon.det))
        else:
            dets_ok = dets_ok and (direct.det < 0) and (np.sign(recon.det) == np.sign(direct.det))
    elapsed = time.perf_counter() - t0
    passed = worst_rel <= 0.05 and dets_ok and worst_zero_det <= 1e-6 and elapsed < 20.0
    return CriterionResult(7, "entanglement_protocol", passed, worst_rel, 0.05,
                           f"|det| at gamma=0: {worst_zero_det:.2e}; det signs agree: {dets_ok}")


def criterion_8_appendix_a_identity() -> CriterionResult:
    """Partial-transform correlation identity over a 3x3 parameter sweep."""
    worst = 0.0
    for s in (0.8, 1.0, 1.25):
        for c in (0.05, 0.1, 0.2):
            _num, _ana, residual = appendix_a_check(s, s, c)
            worst = max(worst, residual)
    return CriterionResult(8, "appendix_a_identity", worst <= 1e-6, worst, 1e-6,
                           "max residual over sigma x c12 sweep (equal sigmas)")


def criterion_9_oracle_crosscheck() -> CriterionResult:
    """First-order weak-value construction vs the exact pipeline, every bundled
    scenario: mean vectors agree within max(3*lambda_tot^2, 1e-9)."""
    worst_margin = -np.inf
    worst_name = ""
    all_ok = True
    for name in bundled_scenario_names():
        cfg = load_bundled(name)
        _grid, phi = build_pointer(cfg)
        pre, post, _obs, a_l = resolve_system(cfg)
        specs = build_coupling_specs(cfg)
        exact_pointer, _prob = simulate_pipeline(cfg)
        fo_pointer = first_order_pointer(
            pre, post, specs, phi,
            readout_axis=cfg.readout_axis0,
            readout_eigenvalue=a_l if not cfg.readout_direct else 0.0,
        )
        m_exact = moments(exact_pointer)
        m_fo = moments(fo_pointer)
        dist = float(max(np.max(np.abs(m_exact.mean_q - m_fo.mean_q)),
                         np.max(np.abs(m_exact.mean_p - m_fo.mean_p))))
        lam_tot = sum(abs(c.strength) for c in cfg.couplings)
        tol = max(3.0 * lam_tot**2, 1e-9)
        ok = dist <= tol
        all_ok = all_ok and ok
        if dist / tol > worst_margin:
            worst_margin = dist / tol
            worst_name = name
    return CriterionResult(9, "oracle_crosscheck", all_ok, worst_margin, 1.0,
                           f"worst distance/tolerance ratio at scenario {worst_name}")


def _deterministic_pass_bytes() -> bytes:
    """Everything the suite serializes: criteria summary plus corpus reports."""
    results = [fn() for fn in _CRITERIA_1_9]
    parts = [summary_json_text(results).encode()]
    for name in bundled_scenario_names():
        report = run_scenario(load_bundled(name))
        parts.append(report_json_text(report).encode())
        parts.append(reports_csv_text([report]).encode())
    return b"".join(parts)


def criterion_10_determinism() -> CriterionResult:
    """Two back-to-back full passes serialize to byte-identical reports."""
    first = _deterministic_pass_bytes()
    second = _deterministic_pass_bytes()
    identical = first == second
    return CriterionResult(10, "determinism", identical, 0.0 if identical else 1.0, 0.0,
                           f"{len(first)} bytes compared across two passes")


_CRITERIA_1_9 = (
    criterion_1_lg_correlation_law,
    criterion_2_single_wm_shifts,
    criterion_3_sequential_shifts,
    criterion_4_jozsa_reduction,
    criterion_5_real_weak_value_null,
    criterion_6_displacement_invariance,
    criterion_7_entanglement_protocol,
    criterion_8_appendix_a_identity,
    criterion_9_oracle_crosscheck,
)


def run_criterion(number: int) -> CriterionResult:
    if number == 10:
        return criterion_10_determinism()
    if not 1 <= number <= 9:
        raise ValueError(f"no criterion number {number}")
    return _CRITERIA_1_9[number - 1]()


def run_all() -> list[CriterionResult]:
    results = [fn() for fn in _CRITERIA_1_9]
    results.append(criterion_10_determinism())
    return results


def summary_json_text(results: list[CriterionResult]) -> str:
    import json

    obj = {
        "all_passed": all(r.passed for r in results),
        "criteria": [
            {
                "number": r.number,
                "name": r.name,
                "passed": r.passed,
                "value": float(r.value),
                "threshold": float(r.threshold),
                "detail": r.detail,
            }
            for r in results
        ],
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def summary_csv_text(results: list[CriterionResult]) -> str:
    lines = ["number,name,passed,value,threshold"]
    for r in results:
        lines.append(
            f"{r.number},{r.name},{str(r.passed).lower()},"
            f"{format(float(r.value), '.17g')},{format(float(r.threshold), '.17g')}"
        )
    return "\n".join(lines) + "\n"
