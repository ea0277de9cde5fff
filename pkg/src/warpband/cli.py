"""Command-line front end: generate, warp, truncate, classify, gram, project, dbr.

Every run writes its artifacts plus a manifest recording the resolved
configuration, input hashes, output hashes, and library version.  With a
fixed seed the whole output tree is byte-identical across runs.

Exit codes: 0 success, 1 usage, 2 validation, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels, io
from .debranges import (
    affine_boundedness_test,
    dbr_kernel,
    dbr_measure_bound_check,
    exponential_structure,
)
from .errors import (
    DivergingIntegralError,
    ExponentOverflowError,
    FactorizationError,
    FormatError,
    MeasureGateError,
    NonFiniteError,
    UsageError,
    WarpbandError,
    WindowTooShortError,
)
from .paley_wiener import (
    BandlimitedSignal,
    BandSpec,
    iid_spectrum_signal,
    pw_kernel,
    sinc_signal,
    synthesize,
)
from .range_rkhs import WarpedKernel, build_gram, orthonormality_defect, project_onto_kernels
from .truncation import error_curve, warp_signal
from .warps import classify, weighted_target_band

NUMERICAL_ERRORS = (
    FactorizationError,
    DivergingIntegralError,
    ExponentOverflowError,
    NonFiniteError,
    WindowTooShortError,
    MeasureGateError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: _Parser) -> None:
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--config", default=None, help="warpband-config/1 JSON file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"{flag}: expected comma-separated numbers, got {text!r}") from exc
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="warpband", description=__doc__)
    parser.add_argument("--version", action="version", version=f"warpband {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a signal file")
    p_gen.add_argument("kind", choices=["sinc", "random-spectrum"])
    p_gen.add_argument("--band", type=float, required=True)
    p_gen.add_argument("--nodes", type=int, default=None)
    _add_common(p_gen)

    p_warp = sub.add_parser("warp", help="compose a signal with a warp")
    p_warp.add_argument("--signal", required=True)
    p_warp.add_argument("--warp", required=True)
    p_warp.add_argument("--t-max", type=float, default=None)
    p_warp.add_argument("--t-step", type=float, default=None)
    _add_common(p_warp)

    p_tr = sub.add_parser("truncate", help="re-bandlimit a warped signal over a cutoff sweep")
    p_tr.add_argument("--signal", required=True, help="time-samples signal file")
    p_tr.add_argument("--A", required=True, help="comma-separated ascending cutoffs")
    p_tr.add_argument("--freq-halfwidth", type=float, default=None)
    _add_common(p_tr)

    p_cl = sub.add_parser("classify", help="classify a warp map")
    p_cl.add_argument("--warp", required=True)
    p_cl.add_argument("--band", type=float, default=None)
    p_cl.add_argument("--support", default=None, help="multiplier spectrum support r,s")
    _add_common(p_cl)

    p_gr = sub.add_parser("gram", help="build the warped-kernel Gram matrix on integer nodes")
    p_gr.add_argument("--warp", required=True)
    p_gr.add_argument("--band", type=float, required=True)
    p_gr.add_argument("--N", type=int, required=True)
    p_gr.add_argument("--ridge", type=float, default=None)
    _add_common(p_gr)

    p_pr = sub.add_parser("project", help="project node samples onto the kernel basis")
    p_pr.add_argument("--gram", required=True)
    p_pr.add_argument("--signal", required=True, help="spectrum signal file")
    p_pr.add_argument("--warp", default=None)
    _add_common(p_pr)

    p_dbr = sub.add_parser("dbr", help="structure-function space checks")
    dbr_sub = p_dbr.add_subparsers(dest="dbr_command", required=True)

    p_kc = dbr_sub.add_parser("kernel-check", help="kernel reduction error for exponential g")
    p_kc.add_argument("--structure", default=None)
    p_kc.add_argument("--exp-rate", type=float, default=None)
    p_kc.add_argument("--pairs", type=int, default=500)
    _add_common(p_kc)

    p_ab = dbr_sub.add_parser("affine-bound", help="sup |g(at+b)/g(t)| boundedness test")
    p_ab.add_argument("--structure", default=None)
    p_ab.add_argument("--exp-rate", type=float, default=None)
    p_ab.add_argument("--a", required=True)
    p_ab.add_argument("--b", default="0")
    _add_common(p_ab)

    p_mc = dbr_sub.add_parser("measure-check", help="weighted-measure pull-back ratios")
    p_mc.add_argument("--structure", required=True)
    p_mc.add_argument("--warp", required=True)
    p_mc.add_argument("--count", type=int, default=50)
    p_mc.add_argument("--window", default="-3,3")
    p_mc.add_argument("--cap", type=float, default=None)
    _add_common(p_mc)

    return parser


def _resolve_config(args) -> io.RunConfig:
    cfg = io.RunConfig()
    path = args.config or os.environ.get("WARPBAND_CONFIG")
    if path:
        cfg = io.load_config(path)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "t_max", None) is not None:
        overrides["t_max"] = args.t_max
    if getattr(args, "t_step", None) is not None:
        overrides["t_step"] = args.t_step
    if getattr(args, "ridge", None) is not None:
        overrides["ridge"] = args.ridge
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


_PATH_ARGS = {"signal", "warp", "gram", "structure"}


def _args_doc(args) -> dict:
    # paths are recorded by basename: the manifest's input hashes identify the
    # content, and absolute paths would break byte-identical reruns
    skip = {"command", "dbr_command", "out", "config", "seed"}
    doc = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        if key in _PATH_ARGS:
            val = Path(val).name
        doc[key.replace("_", "-")] = val
    return doc


def _structure_from_args(args, inputs: dict):
    if args.structure is not None and args.exp_rate is not None:
        raise UsageError("give either --structure or --exp-rate, not both")
    if args.structure is not None:
        inputs["structure"] = args.structure
        return io.load_structure(args.structure)
    if args.exp_rate is not None:
        return exponential_structure(args.exp_rate)
    raise UsageError("one of --structure or --exp-rate is required")


def _emit(args, cfg: io.RunConfig, command: str, inputs: dict, artifacts: dict) -> None:
    """Write the artifact texts plus the run manifest, all atomically."""
    out_dir = Path(args.out)
    hashed_inputs = {
        name: {"name": Path(path).name, "sha256": io.sha256_file(path)}
        for name, path in sorted(inputs.items())
    }
    for name, text in artifacts.items():
        io.write_text_atomic(out_dir / name, text)
    manifest = {
        "format": io.MANIFEST_FORMAT,
        "version": __version__,
        "backend": _kernels.backend(),
        "command": command,
        "args": _args_doc(args),
        "config": cfg.to_doc(),
        "inputs": hashed_inputs,
        "outputs": {
            name: hashlib.sha256(text.encode()).hexdigest()
            for name, text in sorted(artifacts.items())
        },
    }
    io.write_json(out_dir / "manifest.json", manifest)


def _json_text(doc) -> str:
    return io.dumps(doc) + "\n"


def _cmd_gen(args, cfg) -> int:
    if args.band <= 0:
        raise ValueError(f"band must be positive, got {args.band}")
    if args.kind == "sinc":
        signal = sinc_signal(args.band, n_nodes=args.nodes or 2049)
    else:
        signal = iid_spectrum_signal(args.band, seed=cfg.seed, n_nodes=args.nodes or 257)
    doc = io.spectrum_doc(signal.spectrum, meta={"generator": args.kind, "seed": cfg.seed})
    _emit(args, cfg, "gen", {}, {"signal.json": _json_text(doc)})
    print(f"wrote signal.json (kind=spectrum, band={args.band:g}, nodes={signal.spectrum.n_nodes})")
    return 0


def _cmd_warp(args, cfg) -> int:
    loaded = io.load_signal(args.signal)
    if loaded.kind != io.KIND_SPECTRUM:
        raise FormatError(f"{args.signal}: warping needs a spectrum signal file")
    warp = io.load_warp(args.warp)
    f = BandlimitedSignal(loaded.spectrum)
    warped = warp_signal(f, warp, cfg.grid())
    meta = {
        "warp": io.warp_doc(warp),
        "source_band": loaded.band,
        "measure_report": {
            "monotone": warped.measure_report.monotone,
            "inf_derivative": warped.measure_report.inf_derivative,
            "bound_c": warped.measure_report.bound_c,
            "mutual_abs_continuity": warped.measure_report.mutual_abs_continuity,
        },
        "hypothesis_ok": warped.hypothesis_ok,
    }
    doc = io.time_samples_doc(warped.samples, band=loaded.band, meta=meta)
    inputs = {"signal": args.signal, "warp": args.warp}
    _emit(args, cfg, "warp", inputs, {"warped.json": _json_text(doc)})
    print(
        f"wrote warped.json (monotone={warped.measure_report.monotone}, "
        f"bound_c={warped.measure_report.bound_c}, hypothesis_ok={warped.hypothesis_ok})"
    )
    return 0


def _cmd_truncate(args, cfg) -> int:
    cutoffs = _parse_floats(args.A, "--A")
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise UsageError("--A values must be sorted ascending")
    loaded = io.load_signal(args.signal)
    if loaded.kind != io.KIND_TIME_SAMPLES:
        raise FormatError(f"{args.signal}: truncation needs a time-samples signal file")
    results = error_curve(
        loaded.samples,
        cutoffs,
        freq_halfwidth=args.freq_halfwidth,
        oversample=cfg.freq_oversample,
        band_hint=loaded.band,
    )
    artifacts = {}
    rows = [(r.cutoff, r.l2_error, r.tail_mass) for r in results]
    lines = ["A,l2_error,tail_mass"]
    for row in rows:
        lines.append(",".join(io.format_float(v) for v in row))
    artifacts["error_curve.csv"] = "\n".join(lines) + "\n"
    for r in results:
        doc = io.time_samples_doc(r.h, band=r.cutoff, meta={"cutoff": r.cutoff})
        artifacts[f"h_A{r.cutoff:g}.json"] = _json_text(doc)
    _emit(args, cfg, "truncate", {"signal": args.signal}, artifacts)
    for r in results:
        print(f"A={r.cutoff:g}: l2_error={r.l2_error:.6e} tail_mass={r.tail_mass:.6e}")
    return 0


def _cmd_classify(args, cfg) -> int:
    warp = io.load_warp(args.warp)
    cl = classify(warp)
    print(f"preserves: {str(cl.preserves_pw).lower()}")
    print(f"reason: {cl.reason}")
    factor = "none" if cl.target_band_factor is None else f"{cl.target_band_factor:g}"
    print(f"target_band_factor: {factor}")
    doc = {
        "warp": io.warp_doc(warp),
        "preserves_pw": cl.preserves_pw,
        "reason": cl.reason,
        "target_band_factor": cl.target_band_factor,
    }
    if args.band is not None and cl.target_band_factor is not None:
        doc["target_band"] = cl.target_band_factor * args.band
        print(f"target_band: {doc['target_band']:g}")
    if args.support is not None:
        if args.band is None or warp.degree != 1:
            raise UsageError("--support needs --band and an affine warp")
        r, s = _parse_floats(args.support, "--support")
        res = weighted_target_band(args.band, warp.coefficients[1], (r, s))
        doc["weighted_band"] = res.band.a
        doc["weighted_support"] = list(res.support)
        print(f"weighted_band: {res.band.a:g}")
    _emit(args, cfg, "classify", {"warp": args.warp}, {"classification.json": _json_text(doc)})
    return 0


def _cmd_gram(args, cfg) -> int:
    warp = io.load_warp(args.warp)
    if args.band <= 0:
        raise ValueError("band must be positive")
    ridge = cfg.ridge
    gram = build_gram(WarpedKernel(band=BandSpec(args.band), warp=warp), args.N, ridge=ridge)
    doc = io.gram_doc(gram)
    _emit(args, cfg, "gram", {"warp": args.warp}, {"gram.json": _json_text(doc)})
    print(
        f"wrote gram.json (nodes={gram.size}, ridge={ridge:g}, "
        f"orthonormality_defect={orthonormality_defect(gram):.6e})"
    )
    return 0


def _cmd_project(args, cfg) -> int:
    gram = io.load_gram(args.gram)
    loaded = io.load_signal(args.signal)
    if loaded.kind != io.KIND_SPECTRUM:
        raise FormatError(f"{args.signal}: projection needs a spectrum signal file")
    f = BandlimitedSignal(loaded.spectrum)
    inputs = {"gram": args.gram, "signal": args.signal}
    nodes = gram.nodes
    if args.warp is not None:
        warp = io.load_warp(args.warp)
        inputs["warp"] = args.warp
        nodes = np.asarray(warp(nodes), dtype=float)
    target = synthesize(f, nodes.astype(complex))
    coeffs = project_onto_kernels(gram, target)
    _emit(args, cfg, "project", inputs, {"coeffs.json": _json_text(io.coeffs_doc(coeffs))})
    print(f"wrote coeffs.json (residual={coeffs.residual:.6e})")
    return 0


def _cmd_dbr_kernel_check(args, cfg) -> int:
    inputs: dict = {}
    s = _structure_from_args(args, inputs)
    if s.descriptor.kind != "exponential":
        raise ValueError("kernel-check compares against the sinc kernel: exponential g only")
    rate = s.descriptor.exp_rate
    rng = np.random.default_rng(cfg.seed)
    z = rng.standard_normal(args.pairs) + 1j * rng.standard_normal(args.pairs)
    w = rng.standard_normal(args.pairs) + 1j * rng.standard_normal(args.pairs)
    got = dbr_kernel(s, z, w)
    want = pw_kernel(rate, z, w)
    rel = float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-30)))
    doc = {"structure": io.structure_doc(s), "pairs": args.pairs, "max_relative_error": rel}
    _emit(args, cfg, "dbr kernel-check", inputs, {"dbr_kernel_check.json": _json_text(doc)})
    print(f"max relative reduction error over {args.pairs} pairs: {rel:.3e}")
    return 0


def _cmd_dbr_affine_bound(args, cfg) -> int:
    inputs: dict = {}
    s = _structure_from_args(args, inputs)
    try:
        a = float(args.a)
        b = complex(args.b)
    except ValueError as exc:
        raise UsageError(f"bad affine parameters a={args.a!r} b={args.b!r}") from exc
    rep = affine_boundedness_test(s, a, b)
    doc = {
        "structure": io.structure_doc(s),
        "a": a,
        "b": [b.real, b.imag],
        "bounded": rep.bounded,
        "c_estimate": rep.c_estimate,
        "window_sups": list(rep.window_sups),
        "asymptotic_ok": rep.asymptotic_ok,
    }
    _emit(args, cfg, "dbr affine-bound", inputs, {"dbr_affine_bound.json": _json_text(doc)})
    print(f"bounded: {str(rep.bounded).lower()} c_estimate: {rep.c_estimate:.12g}")
    return 0


def _cmd_dbr_measure_check(args, cfg) -> int:
    inputs = {"structure": args.structure, "warp": args.warp}
    s = io.load_structure(args.structure)
    warp = io.load_warp(args.warp)
    lo, hi = _parse_floats(args.window, "--window")
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    rng = np.random.default_rng(cfg.seed)
    intervals = []
    while len(intervals) < args.count:
        x, y = np.sort(rng.uniform(lo, hi, 2))
        if y - x > 1e-3 * (hi - lo):
            intervals.append((float(x), float(y)))
    check = dbr_measure_bound_check(s, warp, intervals, cap=args.cap)
    doc = {
        "structure": io.structure_doc(s),
        "warp": io.warp_doc(warp),
        "count": args.count,
        "window": [lo, hi],
        "cap": args.cap,
        "c_estimate": check.c_estimate,
        "violations": check.violations,
    }
    _emit(args, cfg, "dbr measure-check", inputs, {"dbr_measure_check.json": _json_text(doc)})
    print(f"c_estimate: {check.c_estimate:.12g} violations: {check.violations}")
    return 0


_DISPATCH = {
    "gen": _cmd_gen,
    "warp": _cmd_warp,
    "truncate": _cmd_truncate,
    "classify": _cmd_classify,
    "gram": _cmd_gram,
    "project": _cmd_project,
}

_DBR_DISPATCH = {
    "kernel-check": _cmd_dbr_kernel_check,
    "affine-bound": _cmd_dbr_affine_bound,
    "measure-check": _cmd_dbr_measure_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _resolve_config(args)
        if args.command == "dbr":
            return _DBR_DISPATCH[args.dbr_command](args, cfg)
        return _DISPATCH[args.command](args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse --version/--help exit through here
        return int(exc.code or 0)
    except NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (WarpbandError, ValueError, OSError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
