"""Command-line interface: embed, batch, eval, selftest.

Exit codes: 0 full success, 1 any processing failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .eigen import SolveSettings
from .evaluation import (
    classification_results_csv,
    eigensolver_selftest,
    leave_one_out_accuracy,
    make_synthetic_set,
)
from .image_io import ImageWriteSettings, write_csv, write_pgm
from .mesh_io import load_off
from .pipeline import PipelineConfig, embed_grid, embed_mesh
from .voxelizer import load_voxel_text

INPUT_SUFFIXES = (".off", ".vox", ".txt")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--resolution", type=_positive_int, default=32,
                        help="voxel grid resolution for mesh inputs (default 32)")
    parser.add_argument("--connectivity", type=int, choices=(6, 18, 26), default=6,
                        help="voxel neighborhood (default 6)")
    parser.add_argument("--dim", type=_positive_int, default=144,
                        help="output image dimension (default 144)")
    parser.add_argument("--fill", action="store_true",
                        help="flood-fill interior cavities after voxelization")
    parser.add_argument("--tol", type=_positive_float, default=1e-8,
                        help="eigensolver residual tolerance (default 1e-8)")
    parser.add_argument("--max-iter", type=_positive_int, default=5000,
                        help="eigensolver iteration cap (default 5000)")
    parser.add_argument("--seed", type=int, default=42,
                        help="eigensolver start-vector seed (default 42)")
    parser.add_argument("--scale", choices=("linear", "log1p"), default="linear",
                        help="PGM intensity scaling (default linear)")
    parser.add_argument("--max-gray", type=_positive_int, default=255,
                        help="PGM maximum gray level (default 255)")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory (default current directory)")


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        resolution=args.resolution,
        connectivity=args.connectivity,
        dim=args.dim,
        fill=args.fill,
        solve=SolveSettings(tol=args.tol, max_iter=args.max_iter, seed=args.seed),
        write=ImageWriteSettings(scaling=args.scale, max_gray=args.max_gray),
    )


def _embed_file(input_path: Path, out_dir: Path, config: PipelineConfig) -> list[Path]:
    """Process one input file; returns the paths written."""
    if input_path.suffix.lower() == ".off":
        image, report = embed_mesh(load_off(input_path), config)
    else:
        image, report = embed_grid(load_voxel_text(input_path), config)

    out_dir.mkdir(parents=True, exist_ok=True)
    stem = input_path.stem
    pgm_path = out_dir / f"{stem}.pgm"
    csv_path = out_dir / f"{stem}.csv"
    report_path = out_dir / f"{stem}.report.json"
    pgm_path.write_bytes(write_pgm(image, config.write))
    csv_path.write_text(write_csv(image), encoding="ascii")
    report_path.write_text(report.to_json(), encoding="ascii")
    return [pgm_path, csv_path, report_path]


def _cmd_embed(args: argparse.Namespace) -> int:
    input_path = Path(args.input)
    try:
        config = _config_from_args(args)
        written = _embed_file(input_path, args.out, config)
    except Exception as exc:  # per-file failure: report and exit 1
        print(f"error: {input_path}: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


def _batch_worker(task: tuple[str, str, PipelineConfig]) -> tuple[str, str | None]:
    input_path, out_dir, config = task
    try:
        _embed_file(Path(input_path), Path(out_dir), config)
        return input_path, None
    except Exception as exc:
        return input_path, str(exc)


def _cmd_batch(args: argparse.Namespace) -> int:
    root = Path(args.input_dir)
    if not root.is_dir():
        print(f"error: {root}: not a directory", file=sys.stderr)
        return 1
    config = _config_from_args(args)
    inputs = sorted(
        p for p in root.rglob("*")
        if p.is_file() and p.suffix.lower() in INPUT_SUFFIXES
    )
    if not inputs:
        print(f"error: {root}: no {'/'.join(INPUT_SUFFIXES)} files found", file=sys.stderr)
        return 1

    tasks = [
        (str(p), str(args.out / p.parent.relative_to(root)), config)
        for p in inputs
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_batch_worker, tasks))
    else:
        outcomes = [_batch_worker(task) for task in tasks]

    failures = [(path, err) for path, err in outcomes if err is not None]
    for path, err in failures:
        print(f"error: {path}: {err}", file=sys.stderr)
    print(f"processed {len(outcomes) - len(failures)} of {len(outcomes)} files, "
          f"{len(failures)} failed")
    return 1 if failures else 0


def _cmd_eval(args: argparse.Namespace) -> int:
    try:
        image_set = make_synthetic_set(
            per_kind=args.per_kind,
            resolution=args.resolution,
            dim=args.dim,
            seed=args.seed,
            solve=SolveSettings(tol=args.tol, max_iter=args.max_iter, seed=args.seed),
        )
        accuracy = leave_one_out_accuracy(image_set)
        args.out.mkdir(parents=True, exist_ok=True)
        results_path = args.out / "eval_results.csv"
        results_path.write_text(classification_results_csv(image_set), encoding="ascii")
    except Exception as exc:
        print(f"error: eval failed: {exc}", file=sys.stderr)
        return 1
    print(f"leave-one-out 1-NN accuracy: {accuracy:.4f} "
          f"({len(image_set)} images, results in {results_path})")
    if args.min_accuracy is not None and accuracy < args.min_accuracy:
        print(f"error: accuracy {accuracy:.4f} below required {args.min_accuracy}",
              file=sys.stderr)
        return 1
    return 0


def _cmd_selftest(args: argparse.Namespace) -> int:
    results = eigensolver_selftest(n_graphs=args.graphs)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} seed={r.seed:3d} n={r.node_count:3d} "
              f"dlam2={r.lambda2_error:.2e} dlam3={r.lambda3_error:.2e} "
              f"align={r.min_alignment:.9f}")
    failed = sum(not r.passed for r in results)
    print(f"selftest: {len(results) - failed}/{len(results)} graphs passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectravox",
        description="Embed 3D objects into 2D grayscale images via spectral "
                    "layout of voxel adjacency graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_embed = sub.add_parser("embed", help="embed one OFF or voxel-text file")
    p_embed.add_argument("input", help="path to a .off mesh or voxel text file")
    _add_config_flags(p_embed)
    p_embed.set_defaults(func=_cmd_embed)

    p_batch = sub.add_parser("batch", help="embed every OFF/voxel file under a directory")
    p_batch.add_argument("input_dir", help="directory walked recursively")
    _add_config_flags(p_batch)
    p_batch.add_argument("--jobs", type=_positive_int, default=1,
                         help="parallel workers (default 1)")
    p_batch.set_defaults(func=_cmd_batch)

    p_eval = sub.add_parser("eval", help="synthetic-shape classification harness")
    p_eval.add_argument("--per-kind", type=_positive_int, default=30,
                        help="instances per shape kind (default 30)")
    p_eval.add_argument("--resolution", type=_positive_int, default=32)
    p_eval.add_argument("--dim", type=_positive_int, default=32)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--tol", type=_positive_float, default=1e-8)
    p_eval.add_argument("--max-iter", type=_positive_int, default=5000)
    p_eval.add_argument("--min-accuracy", type=float, default=None,
                        help="exit 1 if accuracy falls below this")
    p_eval.add_argument("--out", type=Path, default=Path("."))
    p_eval.set_defaults(func=_cmd_eval)

    p_self = sub.add_parser("selftest", help="sparse eigensolver vs dense reference")
    p_self.add_argument("--graphs", type=_positive_int, default=100,
                        help="number of random graphs (default 100)")
    p_self.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
