"""
Command-line front end: decompose a tensor file, run the spectrogram ->
TFB -> decomposition -> segmentation pipeline, evaluate boundary files,
or benchmark iteration timings.

Every command writes a manifest.json into the output directory recording
the full configuration, so a run is reproducible from its manifest alone.
Exit codes: 0 success, 2 argument error, 3 parse error, 4 numerical
domain error.
"""

import argparse
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import segmentation as seg
from . import tfb as tfb_mod
from .divergence import objective
from .errors import NumericalDomainError, ParseError
from .reference import naive_iterate
from .solver import FactorSet, SolverConfig, init_factors, iterate, solve
from .tensor_ops import read_matrix, read_tensor, write_matrix, write_tensor

EXIT_OK = 0
EXIT_ARGUMENT = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4

# Kronecker materialization guard for the naive benchmark path
NAIVE_MAX_ELEMENTS = 4096


def _version():
    try:
        return version("beta-ntd")
    except PackageNotFoundError:
        return "unknown"


def _parse_triple(text, flag):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"{flag} expects three comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"{flag}: non-integer in {text!r}") from None


def _solver_config(args):
    return SolverConfig(
        beta=args.beta,
        epsilon=args.epsilon,
        core_dims=_parse_triple(args.core_dims, "--core-dims"),
        max_iters=args.max_iters,
        rel_tol=args.rel_tol,
        seed=args.seed,
    )


def _add_solver_flags(p):
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--core-dims", default="8,8,8", metavar="J,K,L")
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--rel-tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)


def _write_manifest(out_dir, command, inputs, cfg, extra, elapsed):
    manifest = {
        "command": command,
        "inputs": inputs,
        "config": {
            "beta": cfg.beta,
            "epsilon": cfg.epsilon,
            "core_dims": list(cfg.core_dims),
            "max_iters": cfg.max_iters,
            "rel_tol": cfg.rel_tol,
            "seed": cfg.seed,
        }
        if cfg is not None
        else None,
        "wall_seconds": elapsed,
        "version": _version(),
    }
    manifest.update(extra)
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _write_factors(out_dir, f):
    write_matrix(out_dir / "factor_w.txt", f.w)
    write_matrix(out_dir / "factor_h.txt", f.h)
    write_matrix(out_dir / "factor_q.txt", f.q)
    write_tensor(out_dir / "core.txt", f.core)


def _read_init(init_dir):
    init_dir = Path(init_dir)
    return FactorSet(
        w=read_matrix(init_dir / "factor_w.txt"),
        h=read_matrix(init_dir / "factor_h.txt"),
        q=read_matrix(init_dir / "factor_q.txt"),
        core=read_tensor(init_dir / "core.txt"),
    )


def _write_loss_trace(path, trace):
    with open(path, "w") as fh:
        for i, loss in enumerate(trace.losses):
            fh.write(f"{i} {loss:.17g}\n")


def cmd_decompose(args):
    t0 = time.perf_counter()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    x = read_tensor(args.tensor)
    cfg = _solver_config(args)
    init = _read_init(args.init) if args.init else None
    clamp = {"auto": None, "yes": True, "no": False}[args.clamp_data]
    factors, trace = solve(x, cfg, init=init, clamp_data=clamp)
    _write_factors(out_dir, factors)
    _write_loss_trace(out_dir / "loss_trace.txt", trace)
    _write_manifest(
        out_dir,
        "decompose",
        {"tensor": str(args.tensor), "init": str(args.init) if args.init else None},
        cfg,
        {
            "clamp_data": args.clamp_data,
            "final_loss": trace.losses[-1],
            "iterations": len(trace.iter_times),
            "converged_at": trace.converged_at,
        },
        time.perf_counter() - t0,
    )
    return EXIT_OK


def cmd_pipeline(args):
    t0 = time.perf_counter()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = tfb_mod.read_spectrogram(args.spectrogram)
    bars = tfb_mod.read_bars(args.bars)
    if args.feature == "nnlms":
        spec = tfb_mod.nnlms(spec)
    tensor = tfb_mod.build_tfb(spec, bars, frames_per_bar=args.frames_per_bar)
    if tensor.max() == 0:
        raise ValueError(
            "input spectrogram is all-zero over the bar grid; a constant-"
            "epsilon tensor gives a degenerate fit (especially for beta <= 1)"
        )
    cfg = _solver_config(args)
    factors, trace = solve(tensor, cfg)
    write_tensor(out_dir / "tfb.txt", tensor)
    _write_factors(out_dir, factors)
    _write_loss_trace(out_dir / "loss_trace.txt", trace)
    sim = seg.bar_autosimilarity(factors.q)
    cuts = seg.segment_bars(
        sim,
        kernel_half_width=args.kernel_half_width,
        peak_threshold=args.peak_threshold,
    )
    boundaries = seg.bars_to_seconds(cuts, bars)
    seg.write_boundaries(out_dir / "boundaries.txt", boundaries)
    _write_manifest(
        out_dir,
        "pipeline",
        {"spectrogram": str(args.spectrogram), "bars": str(args.bars)},
        cfg,
        {
            "feature": args.feature,
            "frames_per_bar": args.frames_per_bar,
            "kernel_half_width": args.kernel_half_width,
            "peak_threshold": args.peak_threshold,
            "final_loss": trace.losses[-1],
            "boundary_count": int(boundaries.times.size),
        },
        time.perf_counter() - t0,
    )
    return EXIT_OK


def cmd_eval(args):
    t0 = time.perf_counter()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    est = seg.read_boundaries(args.est)
    ref = seg.read_boundaries(args.ref)
    tolerances = [float(t) for t in args.tolerances.split(",")]
    if any(t <= 0 for t in tolerances):
        raise ValueError(f"--tolerances must be positive, got {args.tolerances}")
    reports = {}
    for tol in tolerances:
        report = seg.evaluate_boundaries(
            est, ref, tol, exclude_endpoints=not args.include_endpoints
        )
        seg.write_report(
            out_dir / f"report_{tol:g}.txt", out_dir / f"report_{tol:g}.json", report
        )
        reports[f"{tol:g}"] = report.as_dict()
    _write_manifest(
        out_dir,
        "eval",
        {"est": str(args.est), "ref": str(args.ref)},
        None,
        {
            "tolerances": tolerances,
            "include_endpoints": args.include_endpoints,
            "reports": reports,
        },
        time.perf_counter() - t0,
    )
    return EXIT_OK


def cmd_bench(args):
    t0 = time.perf_counter()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    dims = _parse_triple(args.dims, "--dims")
    betas = [float(b) for b in args.betas.split(",")]
    if args.allow_naive and int(np.prod(dims)) > NAIVE_MAX_ELEMENTS:
        raise ValueError(
            f"refusing the naive Kronecker path on dims {dims}: "
            f"J*K*L={int(np.prod(dims))} exceeds {NAIVE_MAX_ELEMENTS}; "
            "drop --allow-naive or shrink the problem"
        )
    rng = np.random.default_rng(args.seed)
    x = rng.uniform(0.1, 1.0, dims)
    rows = []
    for beta in betas:
        cfg = SolverConfig(
            beta=beta,
            epsilon=args.epsilon,
            core_dims=_parse_triple(args.core_dims, "--core-dims"),
            max_iters=args.iters,
            seed=args.seed,
        )
        f = init_factors(dims, cfg)
        times = []
        losses = []
        for _ in range(args.iters):
            start = time.perf_counter()
            f = iterate(x, f, cfg)
            times.append(time.perf_counter() - start)
            losses.append(objective(x, f.approximation(), beta))
        row = {
            "beta": beta,
            "mean_seconds": float(np.mean(times)),
            "min_seconds": float(np.min(times)),
        }
        if args.allow_naive:
            fn = init_factors(dims, cfg)
            naive_times = []
            naive_losses = []
            for _ in range(args.iters):
                start = time.perf_counter()
                fn = naive_iterate(x, fn, cfg)
                naive_times.append(time.perf_counter() - start)
                naive_losses.append(objective(x, fn.approximation(), beta))
            reldiff = max(
                abs(a - b) / max(abs(a), 1e-300)
                for a, b in zip(losses, naive_losses)
            )
            row["naive_mean_seconds"] = float(np.mean(naive_times))
            row["naive_min_seconds"] = float(np.min(naive_times))
            row["naive_max_loss_reldiff"] = float(reldiff)
        rows.append(row)
    with open(out_dir / "bench.txt", "w") as fh:
        keys = ["beta", "mean_seconds", "min_seconds"]
        if args.allow_naive:
            keys += ["naive_mean_seconds", "naive_min_seconds", "naive_max_loss_reldiff"]
        fh.write(" ".join(keys) + "\n")
        for row in rows:
            fh.write(" ".join(f"{row[k]:.17g}" for k in keys) + "\n")
    cfg = SolverConfig(
        beta=betas[0],
        epsilon=args.epsilon,
        core_dims=_parse_triple(args.core_dims, "--core-dims"),
        max_iters=args.iters,
        seed=args.seed,
    )
    _write_manifest(
        out_dir,
        "bench",
        {"dims": list(dims)},
        cfg,
        {"betas": betas, "iters": args.iters, "allow_naive": args.allow_naive,
         "results": rows},
        time.perf_counter() - t0,
    )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="beta-ntd",
        description="Nonnegative Tucker decomposition under the beta-divergence",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose an NTD-T3 tensor file")
    p.add_argument("tensor")
    _add_solver_flags(p)
    p.add_argument("--init", default=None, metavar="DIR",
                   help="directory with factor_w/h/q.txt and core.txt to start from")
    p.add_argument("--clamp-data", choices=["auto", "yes", "no"], default="auto")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pipeline", help="spectrogram + bars -> TFB -> NTD -> boundaries")
    p.add_argument("spectrogram")
    p.add_argument("bars")
    p.add_argument("--feature", choices=["mel", "nnlms"], default="nnlms")
    p.add_argument("--frames-per-bar", type=int, default=96)
    p.add_argument("--kernel-half-width", type=int, default=4)
    p.add_argument("--peak-threshold", type=float, default=1.0)
    _add_solver_flags(p)
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("eval", help="score estimated against reference boundaries")
    p.add_argument("est")
    p.add_argument("ref")
    p.add_argument("--tolerances", default="0.5,3.0")
    p.add_argument("--include-endpoints", action="store_true")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time solver iterations on seeded random data")
    p.add_argument("--dims", required=True, metavar="J,K,L")
    p.add_argument("--core-dims", default="8,8,8", metavar="J,K,L")
    p.add_argument("--betas", default="1")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-naive", action="store_true")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT


def entry_point():
    sys.exit(main())
