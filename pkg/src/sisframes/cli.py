"""Batch front end: config-driven experiments with JSON/CSV reports.

Configs are TOML (JSON accepted); each invocation runs one task and
writes report.json plus task-specific CSV traces into the output
directory. Reports are reproducible byte for byte for a fixed config and
seed, except for the timestamp field. Files are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import counterexample, frames, generator, sets, spectral

TASKS = (
    "analyze",
    "spectrum",
    "stability",
    "sampling",
    "gabor",
    "vanisher",
    "verify-examples",
)


class ConfigError(ValueError):
    pass


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"{path}: config file not found")
    text = p.read_text()
    if p.suffix == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{e.lineno}: {e.msg}") from e
    try:
        import tomllib  # Python >= 3.11
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e


def _jsonable(obj):
    """Recursively convert report values into JSON-encodable data."""
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.complexfloating,)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    return obj


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_csv(path: Path, header: list[str], rows) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _generator_summary(g: generator.Generator) -> dict:
    return {
        "class": g.family,
        "alpha": g.alpha,
        "k": g.k if g.k is not None else "unbounded",
        "q": g.q,
        "sym_const": g.sym_const,
        "P": g.r.num.to_json(),
        "Q": g.r.den.to_json(),
        "poles": [{"location": w, "order": m} for w, m in g.r.poles],
        "strip_poles": list(g.strip_poles),
        "decay": g.decay,
    }


def _need(cfg: dict, key: str) -> dict:
    if key not in cfg:
        raise ConfigError(f"config is missing the [{key}] block required by this task")
    return cfg[key]


def _task_params(cfg: dict) -> dict:
    return cfg.get("task", {})


# ---------------------------------------------------------------------------
# task runners: each returns (results dict, list of (csv name, header, rows))


def run_analyze(cfg, rng):
    g = generator.generator_from_config(_need(cfg, "generator"))
    stab = spectral.stability_check(g, _task_params(cfg).get("grid_size", 256))
    xi = spectral.xi_check(g)
    results = {
        "generator": _generator_summary(g),
        "wiener_norm": spectral.wiener_norm(g),
        "stability": stab,
        "xi": xi,
        "tolerances": {"eps_stab": spectral.EPS_STAB},
    }
    return results, []


def run_spectrum(cfg, rng):
    g = generator.generator_from_config(_need(cfg, "generator"))
    p = _task_params(cfg)
    t0, t1, count = p.get("t_min", -3.0), p.get("t_max", 3.0), int(p.get("count", 121))
    ts = np.linspace(t0, t1, count)
    rows = []
    for t in ts:
        s = spectral.fourier_transform(g, float(t))
        rows.append([f"{s.t:.12g}", f"{s.value.real:.16e}", f"{s.value.imag:.16e}", s.method, f"{s.err_est:.3e}"])
    results = {
        "generator": _generator_summary(g),
        "t_range": [t0, t1],
        "count": count,
        "methods": sorted({r[3] for r in rows}),
    }
    return results, [("spectrum.csv", ["t", "re", "im", "method", "err_est"], rows)]


def run_stability(cfg, rng):
    g = generator.generator_from_config(_need(cfg, "generator"))
    grid_size = int(_task_params(cfg).get("grid_size", 256))
    bs, floors = spectral.stability_profile(g, grid_size)
    idx = int(np.argmin(floors))
    verdict = spectral.StabilityVerdict(
        stable=bool(floors[idx] > spectral.EPS_STAB),
        margin=float(floors[idx]),
        witness_b=float(bs[idx]),
        grid_size=grid_size,
    )
    results = {
        "generator": _generator_summary(g),
        "stability": verdict,
        "xi": spectral.xi_check(g),
        "tolerances": {"eps_stab": spectral.EPS_STAB, "grid_size": grid_size},
    }
    rows = [[f"{b:.8f}", f"{fl:.16e}"] for b, fl in zip(bs, floors)]
    return results, [("stability.csv", ["b", "fiber_floor"], rows)]


def run_sampling(cfg, rng):
    g = generator.generator_from_config(_need(cfg, "generator"))
    lam = sets.set_from_config(_need(cfg, "lambda"))
    gam = sets.set_from_config(cfg.get("gamma", {"lattice": {"step": 1.0}}))
    p = _task_params(cfg)
    schedule = p.get("windows")
    margin = p.get("interior_margin")
    rep = frames.sampling_verdict(g, lam, gam, window_schedule=schedule, interior_margin=margin)
    results = {
        "generator": _generator_summary(g),
        "frame_report": rep,
        "tolerances": {
            "eps_frame": frames.EPS_FRAME,
            "convergence_slack": frames.CONVERGENCE_SLACK,
        },
    }
    rows = [
        [f"{w:g}", f"{lo:.16e}", f"{hi:.16e}"]
        for w, lo, hi in zip(rep.windows, rep.lower_bounds, rep.upper_bounds)
    ]
    return results, [("sampling.csv", ["W", "A_est", "B_est"], rows)]


def run_gabor(cfg, rng):
    g = generator.generator_from_config(_need(cfg, "generator"))
    lam = sets.set_from_config(_need(cfg, "lambda"))
    p = _task_params(cfg)
    rep = frames.gabor_frame_sweep(
        g,
        lam,
        x_grid_size=int(p.get("x_grid", frames.GABOR_X_GRID)),
        window_schedule=p.get("windows"),
    )
    results = {
        "generator": _generator_summary(g),
        "gabor_report": {
            "verdict": rep.verdict,
            "inf_lower": rep.inf_lower,
            "x_grid": len(rep.xs),
            "caveat": rep.caveat,
        },
        "tolerances": {"eps_frame": frames.EPS_FRAME},
    }
    rows = [[f"{x:.8f}", f"{lo:.16e}"] for x, lo in zip(rep.xs, rep.lower_bounds)]
    return results, [("gabor.csv", ["x", "A_est"], rows)]


def run_vanisher(cfg, rng):
    p = _task_params(cfg)
    case = p.get("case", "case1_even")
    n = int(p.get("N", 2))
    b = p.get("b", [0.3, 0.8])
    alpha = float(p.get("alpha", 1.0))
    v = counterexample.build_vanisher(case, n, b, alpha)
    results = {
        "case": v.case_tag,
        "N": n,
        "alpha": alpha,
        "generator": _generator_summary(v.g),
        "nodes": list(v.nodes),
        "coeffs": list(v.coeffs),
        "signed_periodization": v.signed,
        "period": v.period,
        "zeros": list(v.zero_set.offsets),
        "zero_density": len(v.zero_set.offsets) / v.zero_set.period,
        "max_residual": v.max_residual,
        "extrapolated": v.extrapolated,
    }
    if p.get("verify", False):
        results["nonuniqueness"] = counterexample.verify_nonuniqueness(
            v, densify_to=p.get("densify_to")
        )
    f = v.vanisher(eval_window=(0.0, v.period))
    xs = np.linspace(0.0, v.period, int(p.get("trace_points", 1024)), endpoint=False)
    vals = np.real(f(xs))
    rows = [[f"{x:.10f}", f"{val:.16e}"] for x, val in zip(xs, vals)]
    return results, [("vanisher_trace.csv", ["x", "f"], rows)]


def run_verify_examples(cfg, rng):
    hdef = counterexample.verify_hdef_example()
    exg = counterexample.verify_exg_example()
    results = {
        "gaussian_two_pole": {
            "offset_const": hdef.offset_const,
            "fiber_values": {str(k): v for k, v in hdef.fiber_values.items()},
            "stability": hdef.stability,
            "xi": hdef.xi,
            "consistent": hdef.consistent,
        },
        "secant_difference": {
            "telescope_max": exg.telescope_max,
            "fiber_values": {str(k): v for k, v in exg.fiber_values.items()},
            "stability": exg.stability,
            "xi": exg.xi,
            "consistent": exg.consistent,
        },
        "consistent": hdef.consistent and exg.consistent,
    }
    return results, []


RUNNERS = {
    "analyze": run_analyze,
    "spectrum": run_spectrum,
    "stability": run_stability,
    "sampling": run_sampling,
    "gabor": run_gabor,
    "vanisher": run_vanisher,
    "verify-examples": run_verify_examples,
}


def run(task: str, cfg: dict, out_dir: Path, seed: int, threads: int | None) -> int:
    rng = np.random.default_rng(seed)
    results, csvs = RUNNERS[task](cfg, rng)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "task": task,
        "seed": seed,
        "threads": threads,
        "config": _jsonable(cfg),
        "results": _jsonable(results),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    _atomic_write(out_dir / "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    for name, header, rows in csvs:
        _write_csv(out_dir / name, header, rows)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sisframes",
        description="Generator analysis, sampling and Gabor frame experiments",
    )
    parser.add_argument("--config", help="TOML or JSON experiment config")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None, help="advisory; recorded in the report")
    sub = parser.add_subparsers(dest="task", required=True)
    for name in TASKS:
        sub.add_parser(name, help=f"run the {name} task")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    try:
        return run(args.task, cfg, Path(args.out), args.seed, args.threads)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (
        generator.GeneratorError,
        counterexample.ConstructionError,
        frames.FrameComputationError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
