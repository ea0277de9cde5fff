"""Versioned JSON/CSV interchange formats and the run configuration.

All floating-point output is rendered with 17 significant digits, which
round-trips IEEE-754 doubles losslessly; writes go through a temp file and an
atomic rename so consumers never observe partial files.  Complex values are
stored as [re, im] pairs.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .debranges import (
    KIND_EXPONENTIAL,
    KIND_POLY_EXP,
    StructureFunction,
    exponential_structure,
    poly_exp_structure,
)
from .errors import FormatError
from .paley_wiener import BandSpec, RealGrid, Spectrum, TimeSamples
from .range_rkhs import ExpansionCoefficients, GramSystem
from .warps import Warp

SIGNAL_FORMAT = "warpband-signal/1"
WARP_FORMAT = "warpband-warp/1"
GRAM_FORMAT = "warpband-gram/1"
COEFFS_FORMAT = "warpband-coeffs/1"
STRUCTURE_FORMAT = "warpband-structure/1"
CONFIG_FORMAT = "warpband-config/1"
MANIFEST_FORMAT = "warpband-manifest/1"

KIND_SPECTRUM = "spectrum"
KIND_TIME_SAMPLES = "time-samples"


# ---------------------------------------------------------------------------
# deterministic JSON rendering (floats at 17 significant digits)
# ---------------------------------------------------------------------------


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise FormatError(f"non-finite value {x!r} cannot be serialized")
    return format(float(x), ".17g")


def _render(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if i:
                out.append(",")
            if not isinstance(key, str):
                raise FormatError(f"JSON keys must be strings, got {key!r}")
            out.append(json.dumps(key))
            out.append(":")
            _render(val, out)
        out.append("}")
    else:
        raise FormatError(f"cannot serialize {type(obj)!r}")


def dumps(obj) -> str:
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    write_text_atomic(path, dumps(obj) + "\n")


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON: {exc}") from exc


def require_format(doc, expected: str, path="") -> None:
    if not isinstance(doc, dict) or doc.get("format") != expected:
        got = doc.get("format") if isinstance(doc, dict) else type(doc).__name__
        raise FormatError(f"{path}: expected format {expected!r}, got {got!r}")


def write_csv(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) for v in row))
    write_text_atomic(path, "\n".join(lines) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _unpairs(pairs, path="") -> np.ndarray:
    try:
        arr = np.asarray([complex(p[0], p[1]) for p in pairs], dtype=complex)
    except (TypeError, IndexError) as exc:
        raise FormatError(f"{path}: values must be [re, im] pairs") from exc
    return arr


# ---------------------------------------------------------------------------
# signal files
# ---------------------------------------------------------------------------


def spectrum_doc(spec: Spectrum, meta: dict | None = None) -> dict:
    doc = {
        "format": SIGNAL_FORMAT,
        "kind": KIND_SPECTRUM,
        "band": float(spec.band.a),
        "grid": {
            "start": -float(spec.band.a),
            "step": float(spec.step),
            "count": int(spec.n_nodes),
        },
        "values": _pairs(spec.values),
    }
    if meta:
        doc["meta"] = meta
    return doc


def time_samples_doc(samples: TimeSamples, band: float, meta: dict | None = None) -> dict:
    doc = {
        "format": SIGNAL_FORMAT,
        "kind": KIND_TIME_SAMPLES,
        "band": float(band),
        "grid": {
            "start": float(samples.grid.start),
            "step": float(samples.grid.step),
            "count": int(samples.grid.count),
        },
        "values": _pairs(samples.values),
    }
    if meta:
        doc["meta"] = meta
    return doc


@dataclass(eq=False)
class LoadedSignal:
    kind: str
    band: float
    spectrum: Spectrum | None = None
    samples: TimeSamples | None = None
    meta: dict | None = None


def load_signal(path) -> LoadedSignal:
    doc = read_json(path)
    require_format(doc, SIGNAL_FORMAT, path)
    try:
        kind = doc["kind"]
        band = float(doc["band"])
        grid = doc["grid"]
        start, step, count = float(grid["start"]), float(grid["step"]), int(grid["count"])
        values = _unpairs(doc["values"], path)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed signal document: {exc}") from exc
    if values.size != count:
        raise FormatError(f"{path}: grid count {count} != {values.size} values")
    meta = doc.get("meta")
    if kind == KIND_SPECTRUM:
        stop = start + step * (count - 1)
        if abs(start + band) > 1e-9 * band or abs(stop - band) > 1e-9 * band:
            raise FormatError(f"{path}: spectrum grid does not cover [-band, band]")
        return LoadedSignal(
            kind=kind, band=band, spectrum=Spectrum(BandSpec(band), values), meta=meta
        )
    if kind == KIND_TIME_SAMPLES:
        samples = TimeSamples(RealGrid(start, step, count), values)
        return LoadedSignal(kind=kind, band=band, samples=samples, meta=meta)
    raise FormatError(f"{path}: unknown signal kind {kind!r}")


# ---------------------------------------------------------------------------
# warp / gram / coefficients / structure files
# ---------------------------------------------------------------------------


def warp_doc(w: Warp) -> dict:
    return {
        "format": WARP_FORMAT,
        "kind": w.kind,
        "coefficients": [float(c) for c in w.coefficients],
    }


def load_warp(path) -> Warp:
    doc = read_json(path)
    require_format(doc, WARP_FORMAT, path)
    try:
        return Warp(kind=doc["kind"], coefficients=tuple(doc["coefficients"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed warp document: {exc}") from exc


def gram_doc(g: GramSystem) -> dict:
    return {
        "format": GRAM_FORMAT,
        "nodes": [float(x) for x in g.nodes],
        "ridge": float(g.ridge),
        "matrix": [_pairs(row) for row in g.matrix],
    }


def load_gram(path) -> GramSystem:
    doc = read_json(path)
    require_format(doc, GRAM_FORMAT, path)
    try:
        nodes = np.asarray(doc["nodes"], dtype=float)
        matrix = np.asarray([_unpairs(row, path) for row in doc["matrix"]])
        return GramSystem(nodes=nodes, matrix=matrix, ridge=float(doc["ridge"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed gram document: {exc}") from exc


def coeffs_doc(c: ExpansionCoefficients) -> dict:
    return {
        "format": COEFFS_FORMAT,
        "nodes": [float(x) for x in c.nodes],
        "coeffs": _pairs(c.coeffs),
    }


def load_coeffs(path) -> ExpansionCoefficients:
    doc = read_json(path)
    require_format(doc, COEFFS_FORMAT, path)
    try:
        return ExpansionCoefficients(
            nodes=np.asarray(doc["nodes"], dtype=float),
            coeffs=_unpairs(doc["coeffs"], path),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed coefficients document: {exc}") from exc


def structure_doc(s: StructureFunction) -> dict:
    kind = s.descriptor.kind
    doc = {"format": STRUCTURE_FORMAT, "kind": kind}
    if s.descriptor.exp_rate is not None:
        doc["a"] = float(s.descriptor.exp_rate)
    if s.descriptor.poly is not None:
        doc["poly"] = _pairs(np.asarray(s.descriptor.poly))
    return doc


def load_structure(path) -> StructureFunction:
    doc = read_json(path)
    require_format(doc, STRUCTURE_FORMAT, path)
    kind = doc.get("kind")
    if kind == KIND_EXPONENTIAL:
        return exponential_structure(float(doc["a"]))
    if kind == KIND_POLY_EXP:
        poly = _unpairs(doc.get("poly", []), path)
        return poly_exp_structure(tuple(poly), rate=float(doc.get("a", 0.0)))
    if kind == "custom-unsupported":
        raise FormatError(f"{path}: custom structure evaluators are in-process only")
    raise FormatError(f"{path}: unknown structure kind {kind!r}")


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Grid, tolerance, and seeding defaults shared by the CLI commands."""

    t_max: float = 200.0
    t_step: float = 0.05
    freq_oversample: float = 4.0
    ridge: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.t_max <= 0 or self.t_step <= 0:
            raise ValueError("time window and step must be positive")
        if self.freq_oversample <= 0:
            raise ValueError("freq_oversample must be positive")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")

    def grid(self) -> RealGrid:
        count = int(round(2 * self.t_max / self.t_step)) + 1
        return RealGrid(start=-self.t_max, step=self.t_step, count=count)

    def to_doc(self) -> dict:
        return {
            "format": CONFIG_FORMAT,
            "t_max": self.t_max,
            "t_step": self.t_step,
            "freq_oversample": self.freq_oversample,
            "ridge": self.ridge,
            "seed": self.seed,
        }


def load_config(path) -> RunConfig:
    doc = read_json(path)
    require_format(doc, CONFIG_FORMAT, path)
    try:
        kwargs = {
            f.name: type(f.default)(doc[f.name]) for f in fields(RunConfig) if f.name in doc
        }
        return RunConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad config: {exc}") from exc
