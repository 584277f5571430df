"""``btps`` command line: run an experiment, write CSV/JSON artifacts atomically."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .errors import BTPSError, NumericalFailure, OrderUnbounded, SchemaError, UnknownPreset
from .fits import fit
from .presets import PRESETS, get_preset, matrix_family, preset_registry
from .pseudomodes import boundary_exponent, optimal_pseudomode, part0_check
from .spectral import (convex_hull, hausdorff, numerical_range, pseudospectrum_grid,
                       sigma_min, szego_trace)
from .symbols import image_samples, symbol_from_json

COMMANDS = ("build", "pseudospec", "pseudomode", "numrange", "szego", "scaling", "part0",
            "presets")
FIELDS = ("command", "symbol", "levels", "window", "grid", "lambda", "mode", "width",
          "output_dir", "seed", "poly")
NUMRANGE_ANGLES = 256
HULL_RESOLUTION = 256


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    symbol: object            # preset name or symbol document
    levels: tuple
    window: tuple
    grid: tuple
    lam: tuple
    mode: str
    width: float
    output_dir: str
    seed: int = 0
    poly: tuple = (0.0, 0.0, 1.0)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise SchemaError("config must be an object")
        extra = sorted(set(d) - set(FIELDS))
        if extra:
            raise SchemaError(f"unknown field {extra[0]!r}", f"/{extra[0]}")
        for key in FIELDS:
            if key not in d and key not in ("seed", "poly"):
                raise SchemaError("missing field", f"/{key}")
        if d["command"] not in COMMANDS:
            raise SchemaError(f"command must be one of {', '.join(COMMANDS)}", "/command")
        sym = d["symbol"]
        if isinstance(sym, str):
            if sym not in PRESETS:
                raise UnknownPreset(sym)
        else:
            symbol_from_json(sym)
        levels = d["levels"]
        if not isinstance(levels, list) or not all(_is_int(n) and n >= 1 for n in levels):
            raise SchemaError("levels must be a list of positive integers", "/levels")
        if not levels and d["command"] not in ("presets",):
            raise SchemaError("levels must be nonempty", "/levels")
        w = d["window"]
        if not (isinstance(w, list) and len(w) == 4 and all(_is_num(v) for v in w)):
            raise SchemaError("window must be [re_min, re_max, im_min, im_max]", "/window")
        if not (w[0] < w[1] and w[2] < w[3]):
            raise SchemaError("window must be well ordered", "/window")
        g = d["grid"]
        if not (isinstance(g, list) and len(g) == 2 and all(_is_int(v) and v >= 2 for v in g)):
            raise SchemaError("grid must be [nx, ny] with nx, ny >= 2", "/grid")
        lam = d["lambda"]
        if not (isinstance(lam, list) and len(lam) == 2 and all(_is_num(v) for v in lam)):
            raise SchemaError("lambda must be [re, im]", "/lambda")
        if d["mode"] not in ("exact", "leading"):
            raise SchemaError("mode must be exact or leading", "/mode")
        if not (_is_num(d["width"]) and d["width"] > 0):
            raise SchemaError("width must be a positive number", "/width")
        if not isinstance(d["output_dir"], str) or not d["output_dir"]:
            raise SchemaError("output_dir must be a nonempty string", "/output_dir")
        seed = d.get("seed", 0)
        if not _is_int(seed):
            raise SchemaError("seed must be an integer", "/seed")
        poly = d.get("poly", [0.0, 0.0, 1.0])
        if not (isinstance(poly, list) and 1 <= len(poly) <= 7 and all(_is_num(v) for v in poly)):
            raise SchemaError("poly must list 1 to 7 real coefficients", "/poly")
        return cls(d["command"], sym, tuple(levels), tuple(float(v) for v in w), tuple(g),
                   tuple(float(v) for v in lam), d["mode"], float(d["width"]),
                   d["output_dir"], seed, tuple(float(v) for v in poly))

    def to_dict(self):
        return {"command": self.command, "symbol": self.symbol, "levels": list(self.levels),
                "window": list(self.window), "grid": list(self.grid),
                "lambda": list(self.lam), "mode": self.mode, "width": self.width,
                "output_dir": self.output_dir, "seed": self.seed, "poly": list(self.poly)}

    def symbol_value(self):
        doc = PRESETS[self.symbol]["symbol"] if isinstance(self.symbol, str) else self.symbol
        return symbol_from_json(doc)

    @property
    def lambda_(self):
        return complex(*self.lam)


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=True) + "\n"


def atomic_write(path, text):
    """Write via a temp file in the same directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _complex_cell(z):
    return f"{float(z.real)!r}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{abs(float(z.imag))!r}j"


def matrix_csv(A):
    return "".join(",".join(_complex_cell(z) for z in row) + "\n" for row in A)


def run(config: ExperimentConfig):
    """Execute ``config``; returns ``(files, summary)`` with files as name -> text."""
    cmd = config.command
    files = {}
    summary = {"v": 1, "command": cmd}
    if cmd == "presets":
        summary["presets"] = sorted(PRESETS)
        return files, summary
    f = config.symbol_value()
    family = matrix_family(f, config.mode)
    lam = config.lambda_
    files["config.json"] = dumps({"v": 1, **config.to_dict()})
    if cmd == "build":
        ids = []
        for N in config.levels:
            T = family(N)
            files[f"build_N{N}.csv"] = matrix_csv(T.entries)
            ids.append(T.matrix_id)
        summary.update(matrix_ids=ids, shapes=[family(N).n for N in config.levels])
    elif cmd == "pseudospec":
        mins = {}
        for N in config.levels:
            grid = pseudospectrum_grid(family(N), config.window, *config.grid)
            files[f"pseudospec_N{N}.csv"] = grid.to_csv()
            files[f"pseudospec_N{N}.json"] = dumps(grid.to_json())
            mins[str(N)] = float(grid.sigma_min.min())
        summary["grid_min"] = mins
    elif cmd == "pseudomode":
        res = {}
        for N in config.levels:
            m = optimal_pseudomode(family(N), lam)
            files[f"pseudomode_N{N}.json"] = dumps(m.to_json())
            res[str(N)] = m.residual
        summary["residuals"] = res
    elif cmd == "numrange":
        hull = convex_hull(image_samples(f, HULL_RESOLUTION))
        dist = {}
        for N in config.levels:
            nr = numerical_range(family(N), NUMRANGE_ANGLES)
            files[f"numrange_N{N}.csv"] = nr.to_csv()
            dist[str(N)] = hausdorff(nr.boundary_points, hull)
        files["numrange.json"] = dumps({"v": 1, "hausdorff": dist})
        summary["hausdorff"] = dist
    elif cmd == "szego":
        rep = szego_trace(family, list(config.poly), f, list(config.levels))
        files["szego.json"] = dumps(rep.to_json())
        summary.update(slope=rep.slope, r2=rep.r2)
    elif cmd == "scaling":
        levels = list(config.levels)
        try:
            rep = boundary_exponent(family, f, lam, levels)
        except (OrderUnbounded, ValueError) as exc:
            values = [sigma_min(family(N), lam) for N in levels]
            rep = fit(levels, values, "loglog", flags={"note": str(exc)})
        files["scaling.json"] = dumps(rep.to_json())
        summary.update(slope=rep.slope, r2=rep.r2)
    elif cmd == "part0":
        rep = part0_check(family, f, lam, list(config.levels))
        files["part0.json"] = dumps(rep.to_json())
        summary.update(slope=rep.slope, r2=rep.r2)
    return files, summary


def _parse_list(text, typ, name):
    try:
        return [typ(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise SchemaError(f"cannot parse {text!r}", f"/{name}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="btps", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset")
    src.add_argument("--symbol", help="symbol JSON file")
    p.add_argument("--config", help="full config JSON file")
    p.add_argument("--levels")
    p.add_argument("--window")
    p.add_argument("--grid")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mode", choices=("exact", "leading"))
    p.add_argument("--width", type=float)
    p.add_argument("--poly")
    p.add_argument("--out")
    return p


def config_from_args(args):
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            d = json.load(fh)
        d["command"] = args.command
    elif args.preset:
        d = get_preset(args.preset)
        d["symbol"] = args.preset
        d["command"] = args.command
    elif args.symbol:
        with open(args.symbol, encoding="utf-8") as fh:
            d = {"symbol": json.load(fh), "command": args.command, "mode": "exact",
                 "width": 1.0, "window": [-1.0, 1.0, -1.0, 1.0], "grid": [21, 21],
                 "lambda": [0.0, 0.0], "seed": 0}
    else:
        raise SchemaError("one of --preset, --symbol or --config is required", "/symbol")
    d["output_dir"] = args.out or d.get("output_dir") or "btps-out"
    if args.levels:
        d["levels"] = _parse_list(args.levels, int, "levels")
    if args.window:
        d["window"] = _parse_list(args.window, float, "window")
    if args.grid:
        d["grid"] = _parse_list(args.grid, int, "grid")
    if args.lam:
        d["lambda"] = _parse_list(args.lam, float, "lambda")
    if args.mode:
        d["mode"] = args.mode
    if args.width is not None:
        d["width"] = args.width
    if args.poly:
        d["poly"] = _parse_list(args.poly, float, "poly")
    d.setdefault("levels", [])
    return ExperimentConfig.from_dict(d)


def _error(kind, exc, **extra):
    doc = {"v": 1, "error": kind, "message": str(exc), **extra}
    sys.stderr.write(dumps(doc))


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        sys.stdout.write(dumps({"v": 1, "command": "presets", "presets": preset_registry()}))
        return 0
    try:
        config = config_from_args(args)
        files, summary = run(config)
    except UnknownPreset as exc:
        _error("unknown-preset", exc, pointer="/symbol")
        return 2
    except SchemaError as exc:
        _error("schema", exc, pointer=exc.pointer)
        return 2
    except NumericalFailure as exc:
        _error("numerical", exc, context={k: repr(v) for k, v in exc.context.items()})
        return 3
    except (BTPSError, ValueError, OSError) as exc:
        _error("config", exc)
        return 2
    written = []
    for name in sorted(files):
        atomic_write(os.path.join(config.output_dir, name), files[name])
        written.append(name)
    summary["outputs"] = written
    sys.stdout.write(dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
