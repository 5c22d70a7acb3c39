"""
One-shot reproduction of the headline results: normalization and invariance
of the hyperdeterminant, the Kempf-Ness premise, the maximum 3^-9 and its
maximizer, LU equivalence of L and L', the exact case analysis and the n = 7
improvement over the polygon configuration.
"""

import itertools
import logging
import math
from typing import Dict, List

import numpy as np
from colorama import Fore, Style

from analysis.casework import VerificationResult, run_casework
from cli.state_io import write_json
from core.hyperdet import calibration_constant, det4, det_A
from core.luequiv import (
    MaximizerParams,
    as_permutation,
    canonicalize_maximizer,
    generated_permutations,
    known_lu_witness,
    lu_search,
    maximizer,
    permutation_unitary,
    u_basis_action,
)
from core.orbit import apply_local, is_generic, kempf_ness_residual, norm_min_probe, random_sl_operator
from core.qstate import AVector, QuartState, embed_A, product_state, random_avector, random_state, square_map, state_L, state_Lprime
from optimize.critpoint import criticality_residual
from optimize.vmax import maximize_det_a, maximize_vn
from utils.constants import MAX_ABS_DET
from utils.helpers import derived_rng, json_float, relative_gap

logger = logging.getLogger(__name__)

# Sample sizes
RESTRICTION_SAMPLES = 1000
INVARIANCE_SAMPLES = 100
KEMPF_NESS_SAMPLES = 1000
NORM_PROBE_POINTS = 20
NORM_PROBE_SAMPLES = 500
GENERIC_SAMPLES = 200
FAMILY_SAMPLES = 100

# Stream offsets so suites never share random draws
_RESTRICTION_STREAM = 1_000_000
_INVARIANCE_STREAM = 2_000_000
_KEMPF_NESS_STREAM = 3_000_000
_FAMILY_STREAM = 4_000_000
_GENERIC_STREAM = 5_000_000


def _result(name: str, ok: bool, **details) -> VerificationResult:
    return VerificationResult(name, "pass" if ok else "fail", None, details)


def _permute_qubits(psi: QuartState, perm) -> QuartState:
    return QuartState.from_tensor(np.transpose(psi.tensor(), perm))


def hyperdet_suite(seed: int) -> List[VerificationResult]:
    results = []
    kappa = calibration_constant()
    results.append(_result("calibration", kappa != 0, kappa=[kappa.real, kappa.imag]))

    worst = 0.0
    for i in range(RESTRICTION_SAMPLES):
        z = random_avector(derived_rng(seed, _RESTRICTION_STREAM + i))
        z = z.scaled(1.0 / z.norm())
        worst = max(worst, relative_gap(det4(embed_A(z)), det_A(z)))
    results.append(_result("det4_matches_det_A", worst < 1e-9, max_relative_gap=worst))

    sl_worst = perm_worst = homog_worst = 0.0
    for i in range(INVARIANCE_SAMPLES):
        rng = derived_rng(seed, _INVARIANCE_STREAM + i)
        psi = random_state(rng).scaled(2.0)
        d = det4(psi)
        g = random_sl_operator(rng, scale=0.2)
        sl_worst = max(sl_worst, abs(det4(apply_local(g, psi)) - d) / (1.0 + abs(d)))
        perm = tuple(rng.permutation(4))
        perm_worst = max(perm_worst, abs(det4(_permute_qubits(psi, perm)) - d) / (1.0 + abs(d)))
        c = complex(rng.normal(), rng.normal())
        c /= abs(c) ** 0.5
        homog_worst = max(homog_worst, relative_gap(det4(psi.scaled(c)), c**24 * d))
    results.append(_result("sl_invariance", sl_worst < 1e-8, max_gap=sl_worst))
    results.append(_result("permutation_invariance", perm_worst < 1e-8, max_gap=perm_worst))
    results.append(_result("homogeneity", homog_worst < 1e-8, max_relative_gap=homog_worst))

    psi = random_state(derived_rng(seed, _INVARIANCE_STREAM - 1)).scaled(2.0)
    d = det4(psi)
    all_perm = max(abs(det4(_permute_qubits(psi, p)) - d) / (1.0 + abs(d)) for p in itertools.permutations(range(4)))
    results.append(_result("all_24_permutations", all_perm < 1e-8, max_gap=all_perm))

    named = det_A(state_L())
    results.append(_result("det_A_of_L", abs(named + MAX_ABS_DET) < 1e-14, det=[named.real, named.imag]))
    return results


def kempf_ness_suite(seed: int) -> List[VerificationResult]:
    results = []
    worst = 0.0
    for i in range(KEMPF_NESS_SAMPLES):
        z = random_avector(derived_rng(seed, _KEMPF_NESS_STREAM + i))
        worst = max(worst, kempf_ness_residual(z) / z.norm() ** 2)
    results.append(_result("kempf_ness_orthogonality", worst < 1e-12, max_relative_residual=worst))

    lowest = math.inf
    for i in range(NORM_PROBE_POINTS):
        z = random_avector(derived_rng(seed, _KEMPF_NESS_STREAM - 1 - i))
        lowest = min(lowest, norm_min_probe(z, NORM_PROBE_SAMPLES, seed + i))
    results.append(_result("norm_minimality", lowest >= 1 - 1e-9, min_ratio=lowest))

    unitary = norm_min_probe(state_L(), NORM_PROBE_SAMPLES, seed, unitary=True)
    results.append(_result("unitary_norm_probe", abs(unitary - 1.0) < 1e-12, min_ratio=unitary))

    agree = 0
    for i in range(GENERIC_SAMPLES):
        psi = random_state(derived_rng(seed, _GENERIC_STREAM + i))
        generic = is_generic(psi)
        agree += int(generic == (abs(det4(psi)) > 1e-12 * psi.norm() ** 24))
    product = product_state([[1, 0], [1, 0], [1, 0], [1, 0]])
    ok = agree == GENERIC_SAMPLES and not is_generic(product) and is_generic(embed_A(state_L()))
    results.append(_result("rank_det_equivalence", ok, agreeing=agree, samples=GENERIC_SAMPLES))
    return results


def maximum_suite(config) -> Dict:
    """The maximizer search on A, its criticality and its canonical form."""
    z, abs_det, report = maximize_det_a(config.restarts, config.seed, config.tol, config.threads)
    results = []
    gap = relative_gap(abs_det, MAX_ABS_DET)
    results.append(_result("max_abs_det", gap < 1e-6, estimate=abs_det, relative_gap=gap))
    v4_gap = relative_gap(report.best_value, 3.0 ** -4.5)
    results.append(_result("v4_reaches_bound", v4_gap < 1e-6, best_value=report.best_value, relative_gap=v4_gap))

    crit = criticality_residual(square_map(z))
    results.append(_result("optimizer_criticality", crit.worst() < 1e-5, **crit.to_dict()))
    exact = criticality_residual(square_map(state_L()))
    results.append(_result("L_criticality", exact.worst() < 1e-9, **exact.to_dict()))

    try:
        _, transcript = canonicalize_maximizer(z, tolerance=1e-6)
        results.append(_result("optimizer_canonical_form", True, target=transcript.target, moves=len(transcript)))
    except ValueError as e:
        results.append(_result("optimizer_canonical_form", False, error=str(e)))

    failures = []
    for i, found in enumerate(report.restart_configs):
        try:
            canonicalize_maximizer(AVector(np.sqrt(found.points)), tolerance=1e-6)
        except ValueError as e:
            failures.append(f"{i}: {e}")
    results.append(_result(
        "every_maximizer_canonical", bool(report.restart_configs) and not failures,
        maximizers=len(report.restart_configs), failures=len(failures), errors=failures[:5],
    ))
    return {"results": results, "max_abs_det_estimate": abs_det}


def lu_suite(config) -> List[VerificationResult]:
    results = []
    worst = 0.0
    ok = True
    for i in range(3):
        action = u_basis_action(permutation_unitary(i))
        perm = as_permutation(action, tol=1e-14)
        expected = list(range(4))
        expected[i], expected[i + 1] = expected[i + 1], expected[i]
        ok = ok and perm == tuple(expected)
        worst = max(worst, float(np.max(np.abs(np.abs(action) - np.abs(np.eye(4)[expected])))))
    results.append(_result("transposition_actions", ok and worst < 1e-14, max_gap=worst))

    words = generated_permutations()
    results.append(_result("permutation_closure", len(words) == 24, reached=len(words)))

    failures = 0
    rng = derived_rng(config.seed, _FAMILY_STREAM)
    for _ in range(FAMILY_SAMPLES):
        params = MaximizerParams(int(rng.integers(4)), float(rng.uniform(0, 2 * np.pi)), int(rng.choice([1, -1])))
        try:
            canonicalize_maximizer(maximizer(params))
        except ValueError:
            failures += 1
    results.append(_result("family_canonicalization", failures == 0, samples=FAMILY_SAMPLES, failures=failures))

    psi, phi = embed_A(state_L()), embed_A(state_Lprime())
    exact = abs(phi.inner(apply_local(known_lu_witness(), psi)))
    results.append(_result("exact_lu_witness", abs(exact - 1.0) < 1e-12, fidelity=exact))

    fidelity, _ = lu_search(psi, phi, config.lu_restarts, config.seed, config.threads)
    results.append(_result("lu_search_L_Lprime", fidelity > 1 - 1e-6, fidelity=fidelity))
    return results


def vmax_suite(config, archive=None) -> Dict:
    report = maximize_vn(7, config.n7_restarts, config.seed, config.tol, config.threads)
    if archive is not None:
        archive.save_report(report)
    ok = report.ratio > 1 + 1e-6
    result = _result("n7_improvement", ok, best_value=report.best_value, lambda_n=report.lambda_n, ratio=report.ratio)
    return {"results": [result], "ratio_n7": report.ratio}


def _print_pretty(summary: Dict):
    print(f"{Style.BRIGHT}Verification summary{Style.RESET_ALL}")
    print("=" * 60)
    for check in summary["checks"]:
        colour = Fore.GREEN if check["status"] == "pass" else Fore.RED
        print(f"{colour}{check['status'].upper():>5}{Style.RESET_ALL}  {check['suite']:<10} {check['name']}")
    print("=" * 60)
    print(f"max |Det| estimate: {summary['max_abs_det_estimate']:.10e}  (3^-9 = {MAX_ABS_DET:.10e})")
    print(f"ratio_n7: {summary['ratio_n7']:.12f}")
    colour = Fore.GREEN if summary["passed"] else Fore.RED
    print(f"{colour}{'ALL CHECKS PASSED' if summary['passed'] else 'VERIFICATION FAILED'}{Style.RESET_ALL}")


def cmd_verify_all(config, archive=None) -> int:
    """
    Run every suite in order and emit a JSON summary.

    Returns:
        0 when every check passes, 1 otherwise.
    """
    checks = []

    def collect(suite: str, results: List[VerificationResult]):
        for r in results:
            entry = r.to_dict()
            entry["suite"] = suite
            checks.append(entry)
            if not r.passed:
                logger.error(f"Check failed: {suite}/{r.name}")

    logger.info("Suite 1/6: hyperdeterminant normalization and invariance")
    collect("hyperdet", hyperdet_suite(config.seed))
    logger.info("Suite 2/6: Kempf-Ness premise and norm minimality")
    collect("orbit", kempf_ness_suite(config.seed))
    logger.info("Suite 3/6: maximum of |Det| on A")
    maximum = maximum_suite(config)
    collect("maximum", maximum["results"])
    logger.info("Suite 4/6: local-unitary equivalence")
    collect("luequiv", lu_suite(config))
    logger.info("Suite 5/6: exact case analysis")
    collect("casework", run_casework())
    logger.info("Suite 6/6: n = 7 Vandermonde improvement")
    vmax = vmax_suite(config, archive)
    collect("vmax", vmax["results"])

    passed = all(c["status"] == "pass" for c in checks)
    summary = {
        "checks": checks,
        "max_abs_det_estimate": json_float(maximum["max_abs_det_estimate"]),
        "ratio_n7": json_float(vmax["ratio_n7"]),
        "passed": passed,
    }
    text = write_json(summary, config.output_path)
    if config.pretty:
        _print_pretty(summary)
    else:
        print(text)
    return 0 if passed else 1
