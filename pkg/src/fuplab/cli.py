"""Deterministic experiment runner: every figure-style dataset is a
subcommand emitting CSV (tables) or JSON (single reports).

Output contract: identical configuration produces byte-identical files
regardless of worker-thread count.  Every CSV starts with a single
provenance comment line carrying the tool version and a hash of the
resolved configuration; errors surface as machine-readable JSON on
stderr with exit codes 2 (input), 3 (non-convergence), 4 (budget).
Partial results only ever land in <output>.partial.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, cantor1d, cantor2d, covers, energy, fractalmeasure, schottky
from .errors import BudgetError, FuplabError, InputError

PHI = (1.0 + math.sqrt(5.0)) / 2.0
_NAMED_ALPHA = {"phi": PHI, "sqrt2": math.sqrt(2.0)}


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _provenance_line(config: dict, extra: dict | None = None) -> str:
    parts = [f"# fuplab {__version__} config={_config_hash(config)}"]
    for key, val in sorted((extra or {}).items()):
        parts.append(f"{key}={_fmt(val)}")
    return " ".join(parts)


def _write_atomic(path: str, text: str) -> None:
    partial = path + ".partial"
    with open(partial, "w") as fh:
        fh.write(text)
    os.replace(partial, path)


def write_csv(path: str, config: dict, columns, rows, extra_header: dict | None = None):
    lines = [_provenance_line(config, extra_header), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    _write_atomic(path, "\n".join(lines) + "\n")


def write_json(path: str, config: dict, payload: dict):
    doc = {
        "provenance": {"tool": f"fuplab {__version__}", "config": _config_hash(config)},
        **payload,
    }
    _write_atomic(path, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def read_table_csv(path: str, with_meta: bool = False):
    """Read a fuplab CSV back into {column: array}; # comment lines are
    parsed for key=value metadata when with_meta is set."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    meta = {}
    for ln in lines:
        if not ln.startswith("#"):
            break
        for tok in ln[1:].strip().split():
            if "=" in tok:
                key, _, val = tok.partition("=")
                meta[key] = val
    body = [ln for ln in lines if not ln.startswith("#")]
    header = body[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]])
    table = {name: data[:, i] for i, name in enumerate(header)}
    if with_meta:
        return table, meta
    return table


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------

def _parse_alpha(text: str) -> float:
    if text.lower() in _NAMED_ALPHA:
        return _NAMED_ALPHA[text.lower()]
    return float(text)


def _parse_alphabet(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t != "")
    except ValueError as exc:
        raise InputError(f"bad alphabet {text!r}: {exc}") from exc


def _parse_alphabet2(text: str) -> tuple[tuple[int, int], ...]:
    pts = []
    try:
        for part in text.split(";"):
            if not part:
                continue
            x, y = part.split(",")
            pts.append((int(x), int(y)))
    except ValueError as exc:
        raise InputError(f"bad 2D alphabet {text!r}: {exc}") from exc
    return tuple(pts)


def _load_schottky(args) -> schottky.SchottkyData:
    if args.builtin:
        return schottky.builtin_schottky(args.builtin)
    if args.data:
        with open(args.data) as fh:
            return schottky.SchottkyData.from_json(fh.read())
    raise InputError("need --builtin or --data")


def _thread_count(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("FUPLAB_THREADS")
    return max(1, int(env)) if env else 1


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _rows_with_partial(fn, items, threads, output, config, columns, extra=None):
    """Map fn over items; on a module error, save the finished prefix to
    <output>.partial and re-raise so the target path is never written."""
    results = _parallel_map(lambda it: _capture(fn, it), items, threads)
    rows = []
    for res in results:
        if isinstance(res, FuplabError):
            lines = [_provenance_line(config, extra), ",".join(columns)]
            for row in rows:
                lines.append(",".join(_fmt(row[c]) for c in columns))
            with open(output + ".partial", "w") as fh:
                fh.write("\n".join(lines) + "\n")
            raise res
        rows.append(res)
    return rows


def _capture(fn, item):
    try:
        return fn(item)
    except FuplabError as exc:
        return exc


# ---------------------------------------------------------------------------
# cantor subcommands
# ---------------------------------------------------------------------------

def cmd_cantor_scan(args) -> None:
    config = {
        "cmd": "cantor.scan",
        "m_max": args.m_max,
        "k": args.k,
        "alpha": args.alpha,
        "include_trivial": args.include_trivial,
        "tol": args.tol,
        "seed": args.seed,
    }
    pairs = cantor1d.enumerate_alphabets(args.m_max, include_trivial=args.include_trivial)

    def one(pair):
        M, alph = pair
        if len(alph) ** args.k > 8192:
            raise BudgetError(
                f"scan row M={M} A={alph} needs |C_k|={len(alph) ** args.k}; "
                "lower k"
            )
        rep = cantor1d.fup_norm(
            cantor1d.CantorSpec1D(M, alph, args.k),
            alpha=args.alpha,
            tol=args.tol,
            restart_seed=args.seed,
        )
        return {
            "M": M,
            "alphabet_mask": cantor1d.alphabet_mask(alph),
            "delta": cantor1d.dimension(M, alph),
            "k": args.k,
            "r_k": rep.r_k,
            "beta_k": rep.beta_k,
        }

    columns = ["M", "alphabet_mask", "delta", "k", "r_k", "beta_k"]
    rows = _rows_with_partial(
        one, pairs, _thread_count(args), args.output, config, columns,
        extra={"alpha": args.alpha},
    )
    rows.sort(key=lambda r: (r["M"], r["alphabet_mask"]))
    write_csv(args.output, config, columns, rows, extra_header={"alpha": args.alpha})


def cmd_cantor_norm(args) -> None:
    config = {
        "cmd": "cantor.norm",
        "M": args.base,
        "alphabet": list(args.alphabet),
        "k": args.k,
        "alpha": args.alpha,
        "tol": args.tol,
        "seed": args.seed,
    }
    spec = cantor1d.CantorSpec1D(args.base, args.alphabet, args.k)
    rep = cantor1d.fup_norm(
        spec, alpha=args.alpha, tol=args.tol, restart_seed=args.seed
    )
    write_json(
        args.output,
        config,
        {
            "M": args.base,
            "alphabet": list(spec.alphabet),
            "k": args.k,
            "N": spec.N,
            "delta": spec.delta,
            "alpha": args.alpha,
            "r_k": rep.r_k,
            "beta_k": rep.beta_k,
            "method": rep.method,
            "iterations": rep.iterations,
            "residual": rep.residual,
            "schur_bound": rep.schur_bound,
        },
    )


def cmd_cantor_exponent(args) -> None:
    config = {
        "cmd": "cantor.exponent",
        "M": args.base,
        "alphabet": list(args.alphabet),
        "k_max": args.k_max,
        "tol": args.tol,
        "seed": args.seed,
    }
    result = cantor1d.fup_exponent(args.base, args.alphabet, args.k_max, tol=args.tol)
    write_json(
        args.output,
        config,
        {
            "M": result["M"],
            "alphabet": list(result["alphabet"]),
            "delta": result["delta"],
            "rows": [{"k": k, "r_k": r, "beta_k": b} for (k, r, b) in result["rows"]],
            "best_beta": result["best"],
            "truncated": result["truncated"],
        },
    )


def cmd_cantor_witness(args) -> None:
    config = {
        "cmd": "cantor.witness",
        "M": args.base,
        "alphabet": list(args.alphabet),
        "k_cap": args.k_cap,
        "seed": args.seed,
    }
    k = cantor1d.strictness_witness(args.base, args.alphabet, args.k_cap)
    write_json(
        args.output,
        config,
        {
            "M": args.base,
            "alphabet": list(args.alphabet),
            "k_cap": args.k_cap,
            "witness_k": k,
            "found": k is not None,
        },
    )


def cmd_cantor_dilated_curve(args) -> None:
    config = {
        "cmd": "cantor.dilated-curve",
        "M": args.base,
        "alphabet": list(args.alphabet),
        "k": args.k,
        "alpha_min": args.alpha_min,
        "alpha_max": args.alpha_max,
        "alpha_step": args.alpha_step,
        "seed": args.seed,
    }
    n_steps = int(round((args.alpha_max - args.alpha_min) / args.alpha_step))
    grid = args.alpha_min + args.alpha_step * np.arange(n_steps + 1)

    def one(alpha):
        rt = cantor1d.schur_dilated_bound(args.base, args.alphabet, args.k, float(alpha))
        return {
            "alpha": float(alpha),
            "schur_bound": rt,
            "beta_tilde": -math.log(max(rt, 1e-300)) / math.log(args.base ** args.k),
        }

    rows = _parallel_map(one, grid, _thread_count(args))
    rows.sort(key=lambda r: r["alpha"])
    write_csv(
        args.output,
        config,
        ["alpha", "schur_bound", "beta_tilde"],
        rows,
        extra_header={"M": args.base, "k": args.k},
    )


# ---------------------------------------------------------------------------
# cantor2 subcommands
# ---------------------------------------------------------------------------

def cmd_cantor2_norm(args) -> None:
    config = {
        "cmd": "cantor2.norm",
        "M": args.base,
        "alphabet_a": [list(p) for p in args.alphabet_a],
        "alphabet_b": [list(p) for p in args.alphabet_b],
        "k": args.k,
        "tol": args.tol,
        "seed": args.seed,
    }
    spec = cantor2d.CantorSpec2D(args.base, args.alphabet_a, args.alphabet_b, args.k)
    rep = cantor2d.fup_norm2(spec, tol=args.tol)
    write_json(
        args.output,
        config,
        {
            "M": args.base,
            "k": args.k,
            "N": spec.N,
            "delta_a": spec.delta_a,
            "delta_b": spec.delta_b,
            "norm": rep.r_k,
            "beta_k": rep.beta_k,
            "method": rep.method,
            "easy_exponent": max(0.0, 1.0 - (spec.delta_a + spec.delta_b) / 2.0),
        },
    )


def cmd_cantor2_classify(args) -> None:
    config = {
        "cmd": "cantor2.classify",
        "M": args.base,
        "alphabet_a": [list(p) for p in args.alphabet_a],
        "alphabet_b": [list(p) for p in args.alphabet_b],
        "k": args.k,
        "seed": args.seed,
    }
    spec = cantor2d.CantorSpec2D(args.base, args.alphabet_a, args.alphabet_b, args.k)
    cls = cantor2d.classify_exceptional(spec)
    pairing, pair_witness = cantor2d.check_nondegenerate_pairing(
        args.alphabet_a, args.alphabet_b, M=args.base
    )
    col_ok, col_detail = cantor2d.check_column_criterion(
        args.base, args.alphabet_a, args.alphabet_b
    )
    cross_ok, cross_detail = cantor2d.check_cross_criterion(
        args.base, args.alphabet_a, args.alphabet_b
    )
    write_json(
        args.output,
        config,
        {
            "M": args.base,
            "k": args.k,
            "classification": cls,
            "nondegenerate_pairing": pairing,
            "pairing_witness": list(map(list, pair_witness)) if pair_witness else None,
            "column_criterion": {"holds": col_ok, **col_detail},
            "cross_criterion": {"holds": cross_ok, **cross_detail},
        },
    )


# ---------------------------------------------------------------------------
# schottky subcommands
# ---------------------------------------------------------------------------

def cmd_schottky_validate(args) -> None:
    config = {"cmd": "schottky.validate", "builtin": args.builtin, "data": bool(args.data)}
    data = _load_schottky(args)
    report = schottky.validate_schottky(data)
    write_json(
        args.output,
        config,
        {"ok": report["ok"], "violations": report["violations"], "r": data.r},
    )


def cmd_schottky_refine(args) -> None:
    config = {
        "cmd": "schottky.refine",
        "builtin": args.builtin,
        "data": bool(args.data),
        "depth": args.depth,
    }
    data = _load_schottky(args)
    tree = schottky.refine(data, args.depth)
    rows = [
        {
            "word": "".join(str(int(l)) for l in tree.words[i]),
            "left": float(tree.intervals[i, 0]),
            "right": float(tree.intervals[i, 1]),
            "length": float(tree.lengths[i]),
        }
        for i in range(len(tree.lengths))
    ]
    write_csv(
        args.output,
        config,
        ["word", "left", "right", "length"],
        rows,
        extra_header={"depth": args.depth, "r": data.r},
    )


def cmd_schottky_dimension(args) -> None:
    config = {
        "cmd": "schottky.dimension",
        "builtin": args.builtin,
        "data": bool(args.data),
        "n_max": args.n_max,
        "tol": args.tol,
    }
    data = _load_schottky(args)
    result = schottky.estimate_dimension(data, n_max=args.n_max, tol=args.tol)
    write_json(args.output, config, result)


# ---------------------------------------------------------------------------
# measure subcommands
# ---------------------------------------------------------------------------

def _measure_cover(source: str, depth: int) -> fractalmeasure.WeightedCover:
    if source == "middle-third":
        return fractalmeasure.cantor_measure_cover(depth)
    data = schottky.builtin_schottky(source)
    dim = schottky.estimate_dimension(data)
    tree = schottky.refine(data, depth)
    return fractalmeasure.ps_weights(tree, dim["delta"])


def cmd_measure_fourier(args) -> None:
    config = {
        "cmd": "measure.fourier",
        "source": args.source,
        "depth": args.depth,
        "xi_min": args.xi_min,
        "xi_max": args.xi_max,
        "samples": args.samples,
        "grid": args.grid,
    }
    wc = _measure_cover(args.source, args.depth)
    if args.grid == "log":
        if args.xi_min <= 0:
            raise InputError("log grid needs --xi-min > 0")
        xi = np.geomspace(args.xi_min, args.xi_max, args.samples)
    else:
        xi = np.linspace(args.xi_min, args.xi_max, args.samples)
    samples = fractalmeasure.fourier_transform_measure(wc, xi)
    rows = [
        {
            "xi": float(samples.xi[i]),
            "re": float(samples.values[i].real),
            "im": float(samples.values[i].imag),
            "abs": float(abs(samples.values[i])),
        }
        for i in range(len(xi))
    ]
    extra = {"delta": wc.delta, "depth": args.depth}
    if samples.truncation_warning:
        extra["truncated"] = 1
    write_csv(args.output, config, ["xi", "re", "im", "abs"], rows, extra_header=extra)


def cmd_measure_envelope(args) -> None:
    config = {"cmd": "measure.envelope", "input": os.path.basename(args.input), "window": args.window}
    table, meta = read_table_csv(args.input, with_meta=True)
    col = table["abs"] if "abs" in table else table["envelope"]
    samples = fractalmeasure.FourierSamples(xi=table["xi"], values=col)
    env = fractalmeasure.envelope(samples, args.window)
    rows = [
        {"xi": float(env.xi[i]), "envelope": float(env.values[i].real)}
        for i in range(len(env.xi))
    ]
    extra = {"window": args.window}
    if "delta" in meta:
        extra["delta"] = float(meta["delta"])
    write_csv(args.output, config, ["xi", "envelope"], rows, extra_header=extra)


def cmd_measure_slope(args) -> None:
    config = {
        "cmd": "measure.slope",
        "input": os.path.basename(args.input),
        "fit_min": args.fit_min,
        "fit_max": args.fit_max,
    }
    table, meta = read_table_csv(args.input, with_meta=True)
    col = table["envelope"] if "envelope" in table else table["abs"]
    samples = fractalmeasure.FourierSamples(xi=table["xi"], values=col)
    fit = fractalmeasure.decay_slope(samples, (args.fit_min, args.fit_max))
    payload = {
        "exponent": fit.exponent,
        "fit_min": fit.fit_range[0],
        "fit_max": fit.fit_range[1],
        "residual": fit.residual,
        "n_points": fit.n_points,
    }
    if "delta" in meta:
        # treating the fitted exponent as a beta_F/2 candidate gives the
        # uncertainty exponent 1/2 - delta + beta_F/4
        delta = float(meta["delta"])
        payload["delta"] = delta
        payload["fup_exponent_from_decay"] = fractalmeasure.fourier_fup_exponent(
            delta, 2.0 * fit.exponent
        )
    write_json(args.output, config, payload)


def cmd_measure_schur_bound(args) -> None:
    config = {
        "cmd": "measure.schur-bound",
        "levels": args.levels,
        "step_divisor": args.step_divisor,
    }
    rows = []
    for level in args.levels:
        h = 3.0 ** -level
        # the h/2-neighborhood of the piece cover, merged where pieces touch
        fat = covers.neighborhood(
            covers.middle_third_cover(level, style="pieces"), h / 2.0
        )
        res = fractalmeasure.schur_fup_bound(
            fat, fractalmeasure.LOG3_2, fat, h, h / args.step_divisor
        )
        rows.append(
            {
                "level": level,
                "h": h,
                "bound": res["bound"],
                "baseline": res["baseline"],
                "nodes": res["nodes"],
            }
        )
    write_csv(
        args.output,
        config,
        ["level", "h", "bound", "baseline", "nodes"],
        rows,
        extra_header={"delta": fractalmeasure.LOG3_2},
    )


# ---------------------------------------------------------------------------
# energy subcommands
# ---------------------------------------------------------------------------

def cmd_energy_discrete(args) -> None:
    config = {
        "cmd": "energy.discrete",
        "set": list(args.set) if args.set else None,
        "M": args.base,
        "alphabet": list(args.alphabet) if args.alphabet else None,
        "k": args.k,
    }
    if args.set:
        s = np.asarray(args.set, dtype=np.int64)
    else:
        if args.base is None or args.alphabet is None or args.k is None:
            raise InputError("need --set or all of --base/--alphabet/--k")
        s = cantor1d.build_cantor(cantor1d.CantorSpec1D(args.base, args.alphabet, args.k))
    e = energy.additive_energy_discrete(s)
    write_json(args.output, config, {"size": int(len(s)), "energy": e})


def cmd_energy_exponent(args) -> None:
    config = {
        "cmd": "energy.exponent",
        "M": args.base,
        "alphabet": list(args.alphabet),
        "k_min": args.k_min,
        "k_max": args.k_max,
    }
    rep = energy.energy_exponent(args.base, args.alphabet, range(args.k_min, args.k_max + 1))
    write_json(
        args.output,
        config,
        {
            "beta_a": rep.beta_a,
            "slope": rep.slope,
            "delta": rep.delta,
            "residual": rep.residual,
            "table": [{"k": k, "N": n, "E": e} for (k, n, e) in rep.table],
            "fup_exponent": energy.ae_fup_exponent(rep.delta, rep.beta_a),
        },
    )


def cmd_energy_schottky(args) -> None:
    config = {
        "cmd": "energy.schottky",
        "builtin": args.builtin,
        "data": bool(args.data),
        "depth": args.depth,
        "h_min": args.h_min,
        "h_max": args.h_max,
        "h_count": args.h_count,
    }
    data = _load_schottky(args)
    dim = schottky.estimate_dimension(data)
    delta = dim["delta"]
    tree = schottky.refine(data, args.depth)
    wc = fractalmeasure.ps_weights(tree, delta)
    leftmost = int(np.argmin(tree.intervals[:, 0]))
    y = float(tree.midpoints[leftmost])
    w = int(tree.first_letters[leftmost])
    hs = np.geomspace(args.h_min, args.h_max, args.h_count)
    masses = energy.ps_additive_energy(wc, y, w, hs)
    rows = [
        {
            "h": float(hs[i]),
            "mass": float(masses[i]),
            "ref_h_delta": float(hs[i] ** delta),
            "ref_h_2delta": float(hs[i] ** (2.0 * delta)),
        }
        for i in range(len(hs))
    ]
    write_csv(
        args.output,
        config,
        ["h", "mass", "ref_h_delta", "ref_h_2delta"],
        rows,
        extra_header={"delta": delta, "depth": args.depth, "y": y, "w": w},
    )


# ---------------------------------------------------------------------------
# covers subcommand
# ---------------------------------------------------------------------------

def _load_cover(args):
    if args.middle_third_level:
        return covers.middle_third_cover(args.middle_third_level, style=args.style), None
    if args.input:
        with open(args.input) as fh:
            return covers.IntervalCover.from_json(fh.read())
    raise InputError("need --input or --middle-third-level")


def cmd_covers_check(args) -> None:
    config = {
        "cmd": "covers.check",
        "check": args.check,
        "input": os.path.basename(args.input) if args.input else None,
        "middle_third_level": args.middle_third_level,
        "style": args.style,
        "nu": args.nu,
        "delta": args.delta,
        "c_reg": args.c_reg,
        "alpha_min": args.alpha_min,
        "alpha_max": args.alpha_max,
        "density": args.density,
        "mode": args.mode,
    }
    cover, weights = _load_cover(args)
    if args.check == "porosity":
        if args.nu is None:
            raise InputError("porosity check needs --nu")
        ok, witness = covers.check_porosity(
            cover,
            covers.PorosityParams(args.nu, args.alpha_min, args.alpha_max),
            scale_grid_density=args.density,
        )
        payload = {"check": "porosity", "ok": ok, "witness": witness, "nu": args.nu}
    else:
        if args.delta is None or args.c_reg is None:
            raise InputError("regularity check needs --delta and --c-reg")
        if weights is None:
            n = len(cover)
            weights = [1.0 / n] * n
        ok, witness = covers.check_regularity(
            cover.intervals,
            weights,
            covers.RegularityParams(args.delta, args.c_reg, args.alpha_min, args.alpha_max),
            grid_density=args.density,
            mode=args.mode,
        )
        payload = {
            "check": "regularity",
            "ok": ok,
            "witness": witness,
            "delta": args.delta,
            "c_reg": args.c_reg,
        }
    write_json(args.output, config, payload)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", required=True, help="output file path")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: FUPLAB_THREADS or 1)")
    p.add_argument("--seed", type=int, default=12345,
                   help="seed for randomized solver fallbacks")


def _add_schottky_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", choices=schottky.BUILTIN_NAMES, default=None)
    p.add_argument("--data", default=None, help="path to Schottky JSON")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuplab", description=__doc__)
    sub = ap.add_subparsers(dest="group", required=True)

    # cantor ---------------------------------------------------------------
    cantor = sub.add_parser("cantor", help="1D discrete Cantor experiments")
    csub = cantor.add_subparsers(dest="cmd", required=True)

    p = csub.add_parser("scan", help="exponents for all alphabets up to M-max")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=_parse_alpha, default=1.0)
    p.add_argument("--include-trivial", action="store_true")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_cantor_scan)

    p = csub.add_parser("norm", help="restricted-transform norm of one spec")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=_parse_alpha, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_cantor_norm)

    p = csub.add_parser("exponent", help="per-order exponent table")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_cantor_exponent)

    p = csub.add_parser("witness", help="smallest order certifying strictness")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, required=True)
    p.add_argument("--k-cap", type=int, default=6)
    _add_common(p)
    p.set_defaults(func=cmd_cantor_witness)

    p = csub.add_parser("dilated-curve", help="Schur bound vs dilation factor")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha-min", type=float, default=1.0)
    p.add_argument("--alpha-max", type=float, default=None)
    p.add_argument("--alpha-step", type=float, default=0.01)
    _add_common(p)
    p.set_defaults(func=cmd_cantor_dilated_curve)

    # cantor2 ----------------------------------------------------------------
    cantor2 = sub.add_parser("cantor2", help="2D discrete Cantor experiments")
    c2sub = cantor2.add_subparsers(dest="cmd", required=True)

    p = c2sub.add_parser("norm", help="2D restricted-transform norm")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet-a", type=_parse_alphabet2, required=True,
                   help='digit pairs like "0,0;1,2"')
    p.add_argument("--alphabet-b", type=_parse_alphabet2, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    _add_common(p)
    p.set_defaults(func=cmd_cantor2_norm)

    p = c2sub.add_parser("classify", help="structural classifiers of a 2D pair")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet-a", type=_parse_alphabet2, required=True)
    p.add_argument("--alphabet-b", type=_parse_alphabet2, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_cantor2_classify)

    # schottky ---------------------------------------------------------------
    sch = sub.add_parser("schottky", help="Schottky data experiments")
    ssub = sch.add_subparsers(dest="cmd", required=True)

    p = ssub.add_parser("validate", help="check Schottky invariants")
    _add_schottky_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_schottky_validate)

    p = ssub.add_parser("refine", help="interval refinement at a depth")
    _add_schottky_source(p)
    p.add_argument("--depth", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_schottky_refine)

    p = ssub.add_parser("dimension", help="limit-set dimension estimate")
    _add_schottky_source(p)
    p.add_argument("--n-max", type=int, default=14)
    p.add_argument("--tol", type=float, default=5e-4)
    _add_common(p)
    p.set_defaults(func=cmd_schottky_dimension)

    # measure ----------------------------------------------------------------
    meas = sub.add_parser("measure", help="fractal measure Fourier statistics")
    msub = meas.add_subparsers(dest="cmd", required=True)

    p = msub.add_parser("fourier", help="measure Fourier transform samples")
    p.add_argument("--source", required=True,
                   choices=("middle-third",) + schottky.BUILTIN_NAMES)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=1e4)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--grid", choices=("linear", "log"), default="linear")
    _add_common(p)
    p.set_defaults(func=cmd_measure_fourier)

    p = msub.add_parser("envelope", help="block-max envelope of a fourier CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--window", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_measure_envelope)

    p = msub.add_parser("slope", help="log-log decay fit of a fourier/envelope CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--fit-min", type=float, required=True)
    p.add_argument("--fit-max", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_measure_slope)

    p = msub.add_parser("schur-bound", help="localized-transform Schur bounds")
    p.add_argument("--levels", type=lambda s: [int(t) for t in s.split(",")],
                   default=[4, 5, 6])
    p.add_argument("--step-divisor", type=int, default=16)
    _add_common(p)
    p.set_defaults(func=cmd_measure_schur_bound)

    # energy -----------------------------------------------------------------
    en = sub.add_parser("energy", help="additive energy experiments")
    esub = en.add_subparsers(dest="cmd", required=True)

    p = esub.add_parser("discrete", help="exact additive energy of a set")
    p.add_argument("--set", type=_parse_alphabet, default=None)
    p.add_argument("--base", "--M", dest="base", type=int, default=None)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, default=None)
    p.add_argument("--k", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_energy_discrete)

    p = esub.add_parser("exponent", help="additive-energy improvement fit")
    p.add_argument("--base", "--M", dest="base", type=int, required=True)
    p.add_argument("--alphabet", "--A", dest="alphabet", type=_parse_alphabet, required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_energy_exponent)

    p = esub.add_parser("schottky", help="projected-measure energy vs h")
    _add_schottky_source(p)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--h-min", type=float, default=1e-4)
    p.add_argument("--h-max", type=float, default=1e-1)
    p.add_argument("--h-count", type=int, default=13)
    _add_common(p)
    p.set_defaults(func=cmd_energy_schottky)

    # covers -----------------------------------------------------------------
    cov = sub.add_parser("covers", help="regularity / porosity verdicts")
    vsub = cov.add_subparsers(dest="cmd", required=True)

    p = vsub.add_parser("check", help="run a checker on a cover")
    p.add_argument("--check", choices=("porosity", "regularity"), required=True)
    p.add_argument("--input", default=None, help="cover JSON path")
    p.add_argument("--middle-third-level", type=int, default=None)
    p.add_argument("--style", choices=("points", "pieces"), default="points")
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--c-reg", type=float, default=None)
    p.add_argument("--alpha-min", type=float, required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--density", type=int, default=8)
    p.add_argument("--mode", choices=("atoms", "density"), default="atoms")
    _add_common(p)
    p.set_defaults(func=cmd_covers_check)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "cmd", None) == "dilated-curve" and args.alpha_max is None:
        args.alpha_max = float(args.base)
    try:
        args.func(args)
    except FuplabError as exc:
        sys.stderr.write(
            json.dumps(
                {"error": type(exc).__name__, "message": str(exc)}, sort_keys=True
            )
            + "\n"
        )
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(
            json.dumps({"error": "OSError", "message": str(exc)}, sort_keys=True) + "\n"
        )
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
