"""CSV / JSON encodings of traces, hulls and run manifests."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .loewner import GridSpec, HullGrid, TraceCurve


def fmt(x: float) -> str:
    """17 significant digits; ``inf``/``nan`` spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _json_float(x: float):
    x = float(x)
    if math.isfinite(x):
        return float(fmt(x))
    return fmt(x)


def trace_to_csv(trace: TraceCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "re", "im"])
    for t, p in zip(trace.t, trace.points):
        w.writerow([fmt(t), fmt(p.real), fmt(p.imag)])
    return buf.getvalue()


def trace_to_json(trace: TraceCurve) -> str:
    return json.dumps({
        "t": [_json_float(t) for t in trace.t],
        "re": [_json_float(p.real) for p in trace.points],
        "im": [_json_float(p.imag) for p in trace.points],
    })


def trace_from_csv(text: str) -> TraceCurve:
    rows = list(csv.DictReader(io.StringIO(text)))
    return TraceCurve(np.array([float(r["t"]) for r in rows]),
                      np.array([complex(float(r["re"]), float(r["im"])) for r in rows]))


def trace_from_json(text: str) -> TraceCurve:
    d = json.loads(text)
    return TraceCurve(np.array(d["t"], dtype=float),
                      np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float))


def hull_to_csv(hull: HullGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "tau"])
    for p, tau in zip(hull.points, hull.tau):
        w.writerow([fmt(p.real), fmt(p.imag), fmt(tau)])
    return buf.getvalue()


def hull_to_json(hull: HullGrid) -> str:
    g = hull.grid
    return json.dumps({
        "t": _json_float(hull.t),
        "grid": [g.re_min, g.re_max, g.im_min, g.im_max, g.nx, g.ny],
        "re": [_json_float(p.real) for p in hull.points],
        "im": [_json_float(p.imag) for p in hull.points],
        "tau": [_json_float(x) for x in hull.tau],
    })


def hull_from_csv(text: str, grid: GridSpec, t: float) -> HullGrid:
    rows = list(csv.DictReader(io.StringIO(text)))
    pts = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    tau = np.array([float(r["tau"]) for r in rows])
    return HullGrid(grid, pts, tau, t)


def hull_from_json(text: str) -> HullGrid:
    d = json.loads(text)
    grid = GridSpec(*d["grid"][:4], int(d["grid"][4]), int(d["grid"][5]))
    pts = np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)
    tau = np.array([float(x) for x in d["tau"]])
    return HullGrid(grid, pts, tau, float(d["t"]))


def manifest(subcommand: str, flags: dict, outputs: list, seed=None) -> dict:
    return {
        "subcommand": subcommand,
        "flags": {k: (str(v) if not isinstance(v, (int, float, bool, type(None), list)) else v)
                  for k, v in sorted(flags.items())},
        "seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }


def write_with_manifest(path: str | Path, text: str, subcommand: str, flags: dict, seed=None) -> Path:
    """Write ``text`` to ``path`` and the run manifest next to it."""
    path = Path(path)
    path.write_text(text)
    mpath = path.with_name(path.name + ".manifest.json")
    mpath.write_text(json.dumps(manifest(subcommand, flags, [path], seed), indent=2, sort_keys=True) + "\n")
    return mpath
