"""Command-line entry point: build mixtures, evaluate, export diagnostics.

Exit codes: 0 success, 1 configuration or parse error, 2 completed with
warnings (skipped folds). The WCV_THREADS environment variable overrides
--threads.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import otaf as _otaf
from . import pipeline as _pipeline
from .classifier import ClassifierConfig
from .distributions import mixture_from_dict, mixture_to_dict, LabeledSample
from .errors import InvalidInput, WcvError
from .otaf import OtafConfig
from .pipeline import GmmBuildConfig

INDEX_FORMAT = "wcv-gmm-index/1"


def _bool_flag(value: str) -> bool:
    if value not in ("true", "false"):
        raise argparse.ArgumentTypeError("expected true or false")
    return value == "true"


def _add_input_args(p, multiple_gmm=False):
    p.add_argument("--manifest", help="manifest CSV (id,path,label) of per-instance point files")
    p.add_argument("--long-csv", help="single long-format CSV (id,label,features...)")
    if multiple_gmm:
        p.add_argument(
            "--gmm-index",
            action="append",
            default=[],
            help="prebuilt GMM index JSON; repeat for cross-representation evaluation",
        )
    else:
        p.add_argument("--gmm-index", help="prebuilt GMM index JSON")


def _add_build_args(p):
    p.add_argument("--scheme", choices=["combined", "separate"], default="separate")
    p.add_argument("--components", type=int, default=3)
    p.add_argument("--small-sample-threshold", type=int, default=10)
    p.add_argument("--perturbation-sd", type=float, default=0.1)
    p.add_argument("--top-features", type=int, default=None,
                   help="keep only the k most variable coordinates")


def _add_otaf_args(p):
    p.add_argument("--dims", type=int, default=1, help="number of canonical variates")
    p.add_argument("--alpha", type=float, default=1.0 / 3.0)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--min-iters", type=int, default=2)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--orthonormal", type=_bool_flag, default=True, metavar="{true,false}")
    p.add_argument("--ridge-scale", type=float, default=1e-8)


def _add_classifier_args(p):
    p.add_argument("--shape", type=float, default=None, help="kernel shape s (default: d')")
    p.add_argument("--scale", type=float, default=None,
                   help="kernel scale b (default: median pairwise squared distance)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcv",
        description="Dimension reduction and classification for distribution-valued data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build per-instance GMM files plus an index")
    _add_input_args(p_build)
    _add_build_args(p_build)
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--out", required=True)

    p_eval = sub.add_parser("evaluate", help="leave-one-out evaluation")
    _add_input_args(p_eval, multiple_gmm=True)
    _add_build_args(p_eval)
    _add_otaf_args(p_eval)
    _add_classifier_args(p_eval)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--threads", type=int, default=None)
    p_eval.add_argument("--out", required=True)

    p_diag = sub.add_parser("diagnose", help="fit once and export convergence traces")
    _add_input_args(p_diag)
    _add_build_args(p_diag)
    _add_otaf_args(p_diag)
    p_diag.add_argument("--seed", type=int, default=0)
    p_diag.add_argument("--threads", type=int, default=None)
    p_diag.add_argument("--out", required=True)

    return parser


def _resolve_threads(args) -> int:
    env = os.environ.get("WCV_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidInput(f"WCV_THREADS={env!r} is not an integer") from None
    if getattr(args, "threads", None):
        if args.threads < 1:
            raise InvalidInput("--threads must be >= 1")
        return args.threads
    return os.cpu_count() or 1


def _gmm_cfg(args) -> GmmBuildConfig:
    return GmmBuildConfig(
        scheme=args.scheme,
        components=args.components,
        small_sample_threshold=args.small_sample_threshold,
        perturbation_sd=args.perturbation_sd,
        rng_seed=args.seed,
    )


def _otaf_cfg(args) -> OtafConfig:
    return OtafConfig(
        reduced_dim=args.dims,
        alpha=args.alpha,
        min_iters=args.min_iters,
        max_iters=args.max_iters,
        epsilon=args.epsilon,
        orthonormal=args.orthonormal,
        ridge_scale=args.ridge_scale,
    )


def _load_clouds(args):
    if args.manifest and args.long_csv:
        raise InvalidInput("give either --manifest or --long-csv, not both")
    if args.manifest:
        clouds = _pipeline.load_manifest(args.manifest)
    elif args.long_csv:
        clouds = _pipeline.load_long_csv(args.long_csv)
    else:
        return None
    if args.top_features is not None:
        clouds = _pipeline.select_top_variable_features(clouds, args.top_features)
    return clouds


def _load_gmm_index(path) -> list:
    path = Path(path)
    with open(path) as fh:
        index = json.load(fh)
    if index.get("format") != INDEX_FORMAT:
        raise InvalidInput(f"{path}: unsupported index format {index.get('format')!r}")
    samples = []
    for entry in index["samples"]:
        with open(path.parent / entry["file"]) as fh:
            g = mixture_from_dict(json.load(fh))
        samples.append(LabeledSample(entry["id"], g, entry["label"]))
    return samples


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _echo_config(args, keys) -> dict:
    raw = vars(args)
    return {k: raw[k] for k in keys if k in raw}


def cmd_build(args) -> int:
    clouds = _load_clouds(args)
    if clouds is None:
        raise InvalidInput("build requires --manifest or --long-csv")
    cfg = _gmm_cfg(args)
    samples = _pipeline.build_gmms(clouds, cfg)
    out = Path(args.out)
    entries = []
    for s in samples:
        rel = Path("gmms") / f"{s.id}.json"
        _write_json(out / rel, mixture_to_dict(s.distribution))
        entries.append({"id": s.id, "label": s.label, "file": str(rel)})
    index = {
        "format": INDEX_FORMAT,
        "seed": args.seed,
        "dim": samples[0].distribution.dim,
        "config": _echo_config(
            args,
            ["scheme", "components", "small_sample_threshold", "perturbation_sd",
             "top_features", "seed"],
        ),
        "samples": entries,
    }
    _write_json(out / "index.json", index)
    print(f"wrote {len(entries)} GMM files and index to {out}")
    return 0


def _write_loo_traces(path: Path, report) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# config={json.dumps(report.config, sort_keys=True)}\n")
        fh.write("fold,iteration,fisher_ratio,grassmann_distance\n")
        for record in report.per_fold:
            fid = record.id
            if fid not in report.fisher_traces:
                continue
            rows = _pipeline.trace_rows(
                report.fisher_traces[fid], report.grassmann_traces.get(fid, [])
            )
            for t, rho, g in rows:
                g_str = "" if g is None else repr(g)
                fh.write(f"{fid},{t},{rho!r},{g_str}\n")


def cmd_evaluate(args) -> int:
    indexes = args.gmm_index or []
    clouds = _load_clouds(args)
    if indexes and clouds is not None:
        raise InvalidInput("give GMM indexes or raw clouds, not both")
    if not indexes and clouds is None:
        raise InvalidInput("evaluate requires --gmm-index or --manifest/--long-csv")
    threads = _resolve_threads(args)
    otaf_cfg = _otaf_cfg(args)
    classifier_cfg = ClassifierConfig(shape=args.shape, scale=args.scale)
    echo = _echo_config(
        args,
        ["manifest", "long_csv", "gmm_index", "scheme", "components",
         "small_sample_threshold", "perturbation_sd", "top_features", "dims",
         "alpha", "epsilon", "min_iters", "max_iters", "orthonormal",
         "ridge_scale", "shape", "scale", "seed"],
    )
    echo["threads"] = threads
    out = Path(args.out)

    if len(indexes) > 1:
        reps = [_load_gmm_index(p) for p in indexes]
        grid = _pipeline.cross_representation_eval(
            reps, otaf_cfg, classifier_cfg, threads=threads
        )
        doc = {
            "format": "wcv-crossrep/1",
            "class_labels": grid.class_labels,
            "accuracy": grid.accuracy,
            "auc": grid.auc,
            "skipped": [{"id": i, "reason": r} for i, r in grid.skipped],
            "config": echo,
        }
        _write_json(out / "report.json", doc)
        print(f"wrote cross-representation report to {out}")
        return 2 if grid.skipped else 0

    if indexes:
        samples = _load_gmm_index(indexes[0])
        report = _pipeline.leave_one_out(
            samples, otaf_cfg, classifier_cfg, threads=threads, config_echo=echo
        )
    else:
        report = _pipeline.leave_one_out_clouds(
            clouds, _gmm_cfg(args), otaf_cfg, classifier_cfg,
            threads=threads, config_echo=echo,
        )
    _write_json(out / "report.json", report.to_dict())
    _write_loo_traces(out / "traces.csv", report)
    acc = "n/a" if report.accuracy is None else f"{report.accuracy:.4f}"
    auc = "n/a" if report.auc is None else f"{report.auc:.4f}"
    print(f"accuracy={acc} auc={auc} folds={len(report.per_fold)} skipped={len(report.skipped)}")
    return 2 if report.skipped else 0


def cmd_diagnose(args) -> int:
    indexes = [args.gmm_index] if args.gmm_index else []
    clouds = _load_clouds(args)
    if indexes:
        samples = _load_gmm_index(indexes[0])
    elif clouds is not None:
        samples = _pipeline.build_gmms(clouds, _gmm_cfg(args))
    else:
        raise InvalidInput("diagnose requires --gmm-index or --manifest/--long-csv")
    threads = _resolve_threads(args)
    otaf_cfg = _otaf_cfg(args)
    result = _otaf.fit(samples, otaf_cfg, threads=threads)
    echo = _echo_config(
        args,
        ["manifest", "long_csv", "gmm_index", "scheme", "components", "dims",
         "alpha", "epsilon", "min_iters", "max_iters", "orthonormal",
         "ridge_scale", "seed"],
    )
    echo["threads"] = threads
    out = Path(args.out)
    mode = "orthonormal" if args.orthonormal else "non-orthonormal"
    trace_path = out / f"trace-{mode}.csv"
    trace_path.parent.mkdir(parents=True, exist_ok=True)
    with open(trace_path, "w") as fh:
        fh.write(f"# orthonormal={'true' if args.orthonormal else 'false'}\n")
        fh.write(f"# config={json.dumps(echo, sort_keys=True)}\n")
        fh.write("iteration,fisher_ratio,grassmann_distance\n")
        for t, rho, g in _pipeline.trace_rows(result.fisher_trace, result.grassmann_trace):
            g_str = "" if g is None else repr(g)
            fh.write(f"{t},{rho!r},{g_str}\n")
    print(
        f"iterations={result.iterations} converged={result.converged} "
        f"trace written to {trace_path}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "evaluate":
            return cmd_evaluate(args)
        if args.command == "diagnose":
            return cmd_diagnose(args)
        raise InvalidInput(f"unknown command {args.command!r}")
    except (WcvError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
