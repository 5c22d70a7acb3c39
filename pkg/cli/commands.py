"""
Command-line surface.

    det eval|certify|generic|kempfness|lueq
    vmax [sweep]
    verify all|casework

JSON goes to stdout (sorted keys), logs to stderr. Exit codes: 0 success,
1 failed verification, 2 usage or input error.
"""

import argparse
import logging
import sys
from typing import Optional

from colorama import Fore, Style
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from analysis.casework import run_casework
from cli.state_io import load_avector, load_state, write_json
from cli.verify_suite import cmd_verify_all
from core.hyperdet import det4, det_A
from core.luequiv import lu_search
from core.orbit import kempf_ness_residual, norm_min_probe, tangent_map
from core.qstate import embed_A, random_avector
from database.run_archive import RunArchive
from optimize.critpoint import criticality_residual
from optimize.vmax import maximize_vn, sweep
from utils.errors import DomainError, StateFileError
from utils.helpers import complex_to_pair, derived_rng
from utils.setup import setup

logger = logging.getLogger(__name__)

KEMPF_NESS_LIMIT = 1e-12
NORM_PROBE_LIMIT = 1e-9


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: str
    action: Optional[str] = None
    seed: int = Field(0, ge=0, lt=2**64)
    restarts: int = Field(50, ge=1)
    tol: float = Field(1e-12, gt=0)
    threads: int = Field(1, ge=1)
    pretty: bool = False
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    a_path: Optional[str] = None
    b_path: Optional[str] = None
    subspace_a: bool = False
    samples: int = Field(500, ge=1)
    n: Optional[int] = Field(None, ge=2)
    n_min: Optional[int] = Field(None, ge=2)
    n_max: Optional[int] = Field(None, ge=2)
    archive_path: Optional[str] = None
    n7_restarts: int = Field(200, ge=1)
    lu_restarts: int = Field(64, ge=1)

    @model_validator(mode="after")
    def _check_flags(self):
        if self.command == "det" and self.action in ("eval", "certify", "generic") and not self.input_path:
            raise ValueError(f"det {self.action} needs --in")
        if self.command == "det" and self.action == "certify" and self.subspace_a:
            raise ValueError("--subspace-a does not apply to det certify")
        if self.command == "det" and self.action == "lueq" and not (self.a_path and self.b_path):
            raise ValueError("det lueq needs --a and --b")
        if self.command == "vmax":
            if self.action == "sweep":
                if self.n is not None:
                    raise ValueError("--n conflicts with vmax sweep, use --n-min/--n-max")
                if self.n_min is None or self.n_max is None:
                    raise ValueError("vmax sweep needs --n-min and --n-max")
                if self.n_max < self.n_min:
                    raise ValueError("--n-max must not be below --n-min")
            else:
                if self.n_min is not None or self.n_max is not None:
                    raise ValueError("--n-min/--n-max only apply to vmax sweep")
                if self.n is None:
                    raise ValueError("vmax needs --n")
        return self


def _emit(payload, config: RunConfig):
    text = write_json(payload, config.output_path)
    if config.pretty:
        _print_table(payload)
    else:
        print(text)


def _print_table(payload, indent: int = 0):
    pad = " " * indent
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            print(f"{pad}{Style.BRIGHT}{key}{Style.RESET_ALL}")
            _print_table(value, indent + 2)
        elif isinstance(value, bool):
            colour = Fore.GREEN if value else Fore.RED
            print(f"{pad}{key:<24} {colour}{value}{Style.RESET_ALL}")
        else:
            print(f"{pad}{key:<24} {value}")


# ===== det =====

def cmd_det(config: RunConfig) -> int:
    if config.subspace_a:
        d = det_A(load_avector(config.input_path))
        method = "restriction"
    else:
        d = det4(load_state(config.input_path))
        method = "schlafli"
    _emit({"det": complex_to_pair(d), "abs": abs(d), "method": method}, config)
    return 0


def cmd_certify(config: RunConfig) -> int:
    report = criticality_residual(load_avector(config.input_path))
    _emit(report.to_dict(), config)
    return 0


def cmd_generic(config: RunConfig) -> int:
    psi = embed_A(load_avector(config.input_path)) if config.subspace_a else load_state(config.input_path)
    tm = tangent_map(psi)
    _emit({"generic": tm.rank == 12, "rank": tm.rank, "abs_det": abs(det4(psi))}, config)
    return 0


def cmd_kempfness(config: RunConfig) -> int:
    """Kempf-Ness residuals and norm probes over random points of A (or the --in point)."""
    if config.input_path:
        points = [load_avector(config.input_path)]
    else:
        points = [random_avector(derived_rng(config.seed, i)) for i in range(config.samples)]

    worst = max(kempf_ness_residual(z) / z.norm() ** 2 for z in points)
    probe = norm_min_probe(points[0], config.samples, config.seed)
    passed = worst < KEMPF_NESS_LIMIT and probe >= 1 - NORM_PROBE_LIMIT
    _emit({
        "points": len(points),
        "samples": config.samples,
        "seed": config.seed,
        "max_relative_residual": worst,
        "min_norm_ratio": probe,
        "passed": passed,
    }, config)
    return 0 if passed else 1


def cmd_lueq(config: RunConfig) -> int:
    if config.subspace_a:
        psi, phi = embed_A(load_avector(config.a_path)), embed_A(load_avector(config.b_path))
    else:
        psi, phi = load_state(config.a_path), load_state(config.b_path)
    fidelity, g = lu_search(psi.normalize(), phi.normalize(), config.restarts, config.seed, config.threads)
    witness = [[[complex_to_pair(x) for x in row] for row in m] for m in g.m]
    _emit({"fidelity": fidelity, "witness": witness}, config)
    return 0


# ===== vmax =====

def _archive(config: RunConfig) -> Optional[RunArchive]:
    return RunArchive(config.archive_path) if config.archive_path else None


def cmd_vmax(config: RunConfig) -> int:
    report = maximize_vn(config.n, config.restarts, config.seed, config.tol, config.threads)
    archive = _archive(config)
    if archive is not None:
        archive.save_report(report)
    _emit(report.to_dict(), config)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    table = sweep(config.n_min, config.n_max, config.restarts, config.seed, config.tol, config.threads)
    if config.output_path:
        table.to_csv(config.output_path, index=False)
        logger.info(f"Sweep written to {config.output_path}")
    if config.pretty:
        print(table.to_string(index=False))
    elif not config.output_path:
        print(table.to_csv(index=False), end="")
    return 0


# ===== verify =====

def cmd_casework(config: RunConfig) -> int:
    results = run_casework()
    passed = all(r.passed for r in results)
    payload = {"results": [r.to_dict() for r in results], "passed": passed}
    if config.pretty:
        print(f"{Style.BRIGHT}Case analysis{Style.RESET_ALL}")
        print("=" * 60)
        for r in results:
            colour = Fore.GREEN if r.passed else Fore.RED
            level = " (evidence)" if r.evidence else ""
            print(f"{colour}{r.status.upper():>5}{Style.RESET_ALL}  {r.name}{level}")
        print("=" * 60)
        write_json(payload, config.output_path)
    else:
        _emit(payload, config)
    return 0 if passed else 1


def _dispatch(config: RunConfig) -> int:
    if config.command == "det":
        return {
            "eval": cmd_det,
            "certify": cmd_certify,
            "generic": cmd_generic,
            "kempfness": cmd_kempfness,
            "lueq": cmd_lueq,
        }[config.action](config)
    if config.command == "vmax":
        return cmd_sweep(config) if config.action == "sweep" else cmd_vmax(config)
    if config.action == "casework":
        return cmd_casework(config)
    return cmd_verify_all(config, _archive(config))


def build_parser(defaults: dict) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=defaults["seed"],
                        help=f'Master seed (default: {defaults["seed"]})')
    common.add_argument('--restarts', type=int, default=defaults["restarts"],
                        help=f'Optimizer restarts (default: {defaults["restarts"]})')
    common.add_argument('--tol', type=float, default=defaults["tol"],
                        help=f'Optimizer tolerance (default: {defaults["tol"]})')
    common.add_argument('--threads', type=int, default=defaults["threads"],
                        help=f'Worker threads (default: {defaults["threads"]})')
    common.add_argument('--pretty', action='store_true', help='Human-readable table instead of JSON')
    common.add_argument('--out', dest='output_path', help='Also write the result to this file')

    parser = argparse.ArgumentParser(
        description='Four-qubit hyperdeterminant and Vandermonde maximization toolkit',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s det eval --in L.json
  %(prog)s det eval --in z.json --subspace-a
  %(prog)s det lueq --a a.json --b b.json --restarts 64 --seed 1
  %(prog)s vmax --n 7 --restarts 200 --seed 42 --out report.json
  %(prog)s vmax sweep --n-min 2 --n-max 8 --out sweep.csv
  %(prog)s verify all
        """
    )
    commands = parser.add_subparsers(dest='command', required=True)

    det = commands.add_parser('det', help='Hyperdeterminant and orbit tools')
    det_actions = det.add_subparsers(dest='action', required=True)

    p = det_actions.add_parser('eval', parents=[common], help='Evaluate Det of a state file')
    p.add_argument('--in', dest='input_path', required=True, help='State JSON (amplitudes, or z with --subspace-a)')
    p.add_argument('--subspace-a', action='store_true', help='Input holds u-basis coordinates z')

    p = det_actions.add_parser('certify', parents=[common], help='First-order criticality residuals of a point')
    p.add_argument('--in', dest='input_path', required=True, help='JSON with z, sum of |z_j| equal to 1')

    p = det_actions.add_parser('generic', parents=[common], help='Tangent rank genericity test')
    p.add_argument('--in', dest='input_path', required=True, help='State JSON')
    p.add_argument('--subspace-a', action='store_true', help='Input holds u-basis coordinates z')

    p = det_actions.add_parser('kempfness', parents=[common], help='Kempf-Ness residual and norm probes')
    p.add_argument('--samples', type=int, default=500, help='Random points and probes (default: 500)')
    p.add_argument('--in', dest='input_path', help='Probe this z instead of random points')

    p = det_actions.add_parser('lueq', parents=[common], help='Local-unitary equivalence search')
    p.add_argument('--a', dest='a_path', required=True, help='First state JSON')
    p.add_argument('--b', dest='b_path', required=True, help='Second state JSON')
    p.add_argument('--subspace-a', action='store_true', help='Inputs hold u-basis coordinates z')
    p.set_defaults(restarts=defaults["lu_restarts"])

    vmax = commands.add_parser('vmax', parents=[common], help='Constrained Vandermonde maximization')
    vmax.add_argument('action', nargs='?', choices=['sweep'], help='Sweep a range of n into CSV')
    vmax.add_argument('--n', type=int, help='Number of points')
    vmax.add_argument('--n-min', type=int, help='Sweep start')
    vmax.add_argument('--n-max', type=int, help='Sweep end')
    vmax.add_argument('--archive', dest='archive_path', default=defaults["archive_path"],
                      help='SQLite run archive (default: MAXENT_ARCHIVE_PATH)')

    verify = commands.add_parser('verify', parents=[common], help='Reproduce the headline results')
    verify.add_argument('action', choices=['all', 'casework'])
    verify.add_argument('--archive', dest='archive_path', default=defaults["archive_path"],
                        help='SQLite run archive for the n = 7 witness')
    verify.add_argument('--n7-restarts', type=int, default=defaults["n7_restarts"],
                        help=f'Restarts of the n = 7 run (default: {defaults["n7_restarts"]})')
    verify.add_argument('--lu-restarts', type=int, default=defaults["lu_restarts"],
                        help=f'Restarts of the LU search (default: {defaults["lu_restarts"]})')

    return parser


def main(argv=None) -> int:
    try:
        defaults = setup()
    except ValueError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2

    args = build_parser(defaults).parse_args(argv)
    try:
        config = RunConfig(**vars(args))
        return _dispatch(config)
    except ValidationError as e:
        for err in e.errors():
            print(f"❌ {err['msg']}", file=sys.stderr)
        return 2
    except StateFileError as e:
        print(f"❌ {e}", file=sys.stderr)
        for line in e.diagnostics:
            print(f"   • {line}", file=sys.stderr)
        return 2
    except (FileNotFoundError, DomainError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2
