"""Command line interface.

Exit codes: 0 success, 1 bad input (files, flags, parameters), 2 solver
failure (relaxation or exact-search budget), 3 registration failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bench import (
    ALGORITHM_NAMES,
    DEFAULT_EXACT_BUDGET,
    SweepConfig,
    bench_dimacs,
    bench_synthetic,
    run_algorithm,
    write_records,
)
from .dimacs import load_dimacs
from .errors import (
    BudgetExceeded,
    InputError,
    RegistrationError,
    SolverFailure,
)
from .registration import (
    Association,
    PointCloud,
    load_scenario,
    register_clouds,
    registration_errors,
    save_scenario,
    synthetic_scene,
)
from .relaxation import SolverParams


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; bad usage is an input
    # problem here, so route it through InputError -> exit 1 instead.
    def error(self, message):
        raise InputError(message)


def _load_params(path: str | None) -> SolverParams | None:
    if path is None:
        return None
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read parameter file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"parameter file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise InputError("parameter file must hold a JSON object")
    allowed = {"sigma", "beta", "tol", "d0", "d_max"}
    unknown = set(payload) - allowed
    if unknown:
        raise InputError(f"unknown solver parameters: {sorted(unknown)}")
    try:
        return SolverParams(**payload)
    except TypeError as exc:
        raise InputError(f"bad solver parameters: {exc}") from exc


def _load_cloud(path: str) -> PointCloud:
    rows = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read cloud file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"{path}:{lineno}: expected 'x y z', got {line!r}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise InputError(
                f"{path}:{lineno}: non-numeric coordinate in {line!r}"
            ) from None
    if not rows:
        raise InputError(f"{path}: no points")
    return PointCloud(np.array(rows))


def _load_associations(path: str) -> list[Association]:
    out = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read association file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected 'i j', got {line!r}")
        try:
            out.append(Association(int(parts[0]), int(parts[1])))
        except ValueError:
            raise InputError(
                f"{path}:{lineno}: non-integer index in {line!r}"
            ) from None
    if not out:
        raise InputError(f"{path}: no associations")
    return out


def _cmd_solve(args) -> int:
    g = load_dimacs(args.graph)
    params = _load_params(args.params)
    run = run_algorithm(
        args.algo, g, params=params, exact_budget=args.budget
    )
    vertices = " ".join(str(v + 1) for v in run.clique.members)
    print(f"graph: {args.graph}")
    print(f"algorithm: {args.algo}")
    print(f"clique size: {run.clique.size}")
    print(f"clique (1-based): {vertices}")
    print(f"solve time: {run.runtime_ms:.3f} ms")
    if run.early_terminated is not None:
        print(f"early termination: {'yes' if run.early_terminated else 'no'}")
    if run.degraded:
        print("note: relaxation failed; result comes from the greedy stage")
    return 0


def _cmd_bench_dimacs(args) -> int:
    table = None
    if args.omega_gt:
        try:
            payload = json.loads(Path(args.omega_gt).read_text())
        except OSError as exc:
            raise InputError(f"cannot read omega table: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"omega table is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise InputError("omega table must be a JSON object")
        table = {str(k): int(v) for k, v in payload.items()}
    records = bench_dimacs(
        args.graphs,
        args.algo,
        table,
        params=_load_params(args.params),
        exact_budget=args.budget,
    )
    write_records(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_bench_synthetic(args) -> int:
    config = SweepConfig(
        outlier_start=args.outlier_start,
        outlier_stop=args.outlier_stop,
        outlier_step=args.outlier_step,
        trials=args.trials,
        algorithms=tuple(args.algo) if args.algo else ("greedy", "clipper+"),
        n_points=args.points,
        cube_size=args.cube_size,
        n_outlier_points=args.clutter,
        outlier_sphere_radius=args.sphere_radius,
        n_associations=args.associations,
        base_seed=args.seed,
        oracle_budget=args.budget,
        params=_load_params(args.params),
    )
    records, aggregates = bench_synthetic(config)
    write_records(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    print("outlier%  algo      mean_r   mean_sparsity  trials")
    for agg in aggregates:
        mean_r = "-" if agg.mean_r is None else f"{agg.mean_r:.4f}"
        print(
            f"{agg.outlier_pct:7d}  {agg.algo:<8s}  {mean_r:>6s}   "
            f"{agg.mean_sparsity:13.4f}  {agg.trials_counted:6d}"
        )
    return 0


def _cmd_register(args) -> int:
    params = _load_params(args.params)
    gt = None
    if args.scenario:
        if args.cloud_a or args.cloud_b or args.associations:
            raise InputError("--scenario cannot be combined with cloud files")
        scene = load_scenario(args.scenario)
        cloud_a, cloud_b = scene.cloud_a, scene.cloud_b
        associations = list(scene.associations)
        epsilon = args.epsilon if args.epsilon is not None else scene.epsilon
        gt = scene.gt_transform
    else:
        if not (args.cloud_a and args.cloud_b and args.associations):
            raise InputError(
                "need --scenario, or all of --cloud-a, --cloud-b, "
                "--associations"
            )
        if args.epsilon is None:
            raise InputError("--epsilon is required with raw cloud files")
        cloud_a = _load_cloud(args.cloud_a)
        cloud_b = _load_cloud(args.cloud_b)
        associations = _load_associations(args.associations)
        epsilon = args.epsilon

    result = register_clouds(cloud_a, cloud_b, associations, epsilon, params)
    np.set_printoptions(precision=9, suppress=True)
    print(f"associations: {len(associations)}")
    print(f"inliers found: {len(result.inlier_indices)}")
    print(f"inlier association indices: {list(result.inlier_indices)}")
    print("rotation:")
    print(result.transform.rotation)
    print(f"translation: {result.transform.translation}")
    if gt is not None:
        errs = registration_errors(result.transform, gt)
        print(f"rotation error: {errs.rotation_error_deg:.6f} deg")
        print(f"translation error: {errs.translation_error:.6g}")
    if args.out:
        payload = {
            "rotation": result.transform.rotation.tolist(),
            "translation": result.transform.translation.tolist(),
            "inlier_indices": list(result.inlier_indices),
        }
        if gt is not None:
            errs = registration_errors(result.transform, gt)
            payload["rotation_error_deg"] = errs.rotation_error_deg
            payload["translation_error"] = errs.translation_error
        Path(args.out).write_text(json.dumps(payload, indent=1))
        print(f"wrote result to {args.out}")
    return 0


def _cmd_gen_scene(args) -> int:
    scene = synthetic_scene(
        n_points=args.points,
        cube_size=args.cube_size,
        n_outlier_points=args.clutter,
        outlier_sphere_radius=args.sphere_radius,
        n_associations=args.associations,
        outlier_ratio=args.outlier_ratio,
        seed=args.seed,
    )
    save_scenario(scene, args.out)
    inliers = sum(scene.inlier_mask)
    print(f"wrote scenario to {args.out}")
    print(
        f"points: {len(scene.cloud_a)} + {len(scene.cloud_b)}, "
        f"associations: {len(scene.associations)} ({inliers} inliers), "
        f"epsilon: {scene.epsilon:.6g}"
    )
    if scene.epsilon_inflation != 1.0:
        print(
            f"note: threshold inflated by {scene.epsilon_inflation:.6g} to "
            "keep the planted inliers mutually consistent"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cliquereg",
        description=(
            "Maximal-clique estimation and clique-based point cloud "
            "registration"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one DIMACS graph")
    solve.add_argument("graph", help="DIMACS file")
    solve.add_argument(
        "--algo", choices=ALGORITHM_NAMES, default="clipper+",
        help="algorithm to run",
    )
    solve.add_argument("--params", help="JSON file with solver parameters")
    solve.add_argument(
        "--budget", type=int, default=DEFAULT_EXACT_BUDGET,
        help="node budget for the exact solver",
    )
    solve.set_defaults(func=_cmd_solve)

    bd = sub.add_parser("bench-dimacs", help="benchmark DIMACS files")
    bd.add_argument("graphs", nargs="+", help="DIMACS files")
    bd.add_argument(
        "--algo", action="append", choices=ALGORITHM_NAMES, required=True,
        help="algorithm to run (repeatable)",
    )
    bd.add_argument("--out", required=True, help="output CSV/JSON path")
    bd.add_argument(
        "--omega-gt",
        help="JSON file mapping graph ids to true maximum clique sizes",
    )
    bd.add_argument("--params", help="JSON file with solver parameters")
    bd.add_argument("--budget", type=int, default=DEFAULT_EXACT_BUDGET)
    bd.set_defaults(func=_cmd_bench_dimacs)

    bs = sub.add_parser(
        "bench-synthetic", help="outlier sweep over synthetic scenes"
    )
    bs.add_argument("--outlier-start", type=int, default=0)
    bs.add_argument("--outlier-stop", type=int, default=90)
    bs.add_argument("--outlier-step", type=int, default=10)
    bs.add_argument("--trials", type=int, default=20)
    bs.add_argument(
        "--algo", action="append", choices=ALGORITHM_NAMES,
        help="algorithm to run (repeatable; default greedy and clipper+)",
    )
    bs.add_argument("--points", type=int, default=200)
    bs.add_argument("--cube-size", type=float, default=0.2)
    bs.add_argument("--clutter", type=int, default=200)
    bs.add_argument("--sphere-radius", type=float, default=1.0)
    bs.add_argument("--associations", type=int, default=100)
    bs.add_argument("--seed", type=int, default=0)
    bs.add_argument("--budget", type=int, default=DEFAULT_EXACT_BUDGET)
    bs.add_argument("--params", help="JSON file with solver parameters")
    bs.add_argument("--out", required=True, help="output CSV/JSON path")
    bs.set_defaults(func=_cmd_bench_synthetic)

    reg = sub.add_parser("register", help="register two point clouds")
    reg.add_argument("--scenario", help="scenario JSON from gen-scene")
    reg.add_argument("--cloud-a", help="text file, one 'x y z' per line")
    reg.add_argument("--cloud-b", help="text file, one 'x y z' per line")
    reg.add_argument(
        "--associations",
        help="text file, one 0-based 'i j' index pair per line",
    )
    reg.add_argument(
        "--epsilon", type=float,
        help="consistency threshold (defaults to the scenario's)",
    )
    reg.add_argument("--params", help="JSON file with solver parameters")
    reg.add_argument("--out", help="optional JSON result path")
    reg.set_defaults(func=_cmd_register)

    gen = sub.add_parser("gen-scene", help="generate a synthetic scenario")
    gen.add_argument("--points", type=int, default=200)
    gen.add_argument("--cube-size", type=float, default=0.2)
    gen.add_argument("--clutter", type=int, default=200)
    gen.add_argument("--sphere-radius", type=float, default=1.0)
    gen.add_argument("--associations", type=int, default=100)
    gen.add_argument("--outlier-ratio", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="scenario JSON path")
    gen.set_defaults(func=_cmd_gen_scene)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SolverFailure, BudgetExceeded) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except RegistrationError as exc:
        print(f"registration failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
