"""Scaling-law fits shared by the spectral and pseudomode code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import linregress

FLOOR = 1e-13


@dataclass(frozen=True)
class ScalingReport:
    levels: tuple
    values: tuple
    slope: float
    intercept: float
    r2: float
    model: str = "loglog"
    verdict: str | None = None
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in ("loglog", "semilog"):
            raise ValueError(f"unknown model {self.model!r}")
        lv = list(self.levels)
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be strictly increasing")
        if len(lv) != len(self.values):
            raise ValueError("levels and values differ in length")
        object.__setattr__(self, "levels", tuple(int(n) for n in lv))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def to_json(self):
        d = {"v": 1, "levels": list(self.levels), "values": list(self.values),
             "slope": self.slope, "intercept": self.intercept, "r2": self.r2,
             "model": self.model, "flags": dict(self.flags)}
        if self.verdict is not None:
            d["verdict"] = self.verdict
        return d

    @classmethod
    def from_json(cls, d):
        return cls(tuple(d["levels"]), tuple(d["values"]), d["slope"], d["intercept"],
                   d["r2"], d["model"], d.get("verdict"), dict(d.get("flags", {})))


def fit(levels, values, model="loglog", floor=FLOOR, **extra) -> ScalingReport:
    """Least-squares line through ``log v`` against ``log N`` or ``N``.

    Values below ``floor`` are excluded and listed under ``flags["floored"]``.
    """
    levels = np.asarray(levels, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values >= floor
    flags = dict(extra.pop("flags", {}))
    floored = [int(n) for n in levels[~keep]]
    if floored:
        flags["floored"] = floored
    x = levels[keep]
    if model == "loglog":
        x = np.log(x)
    y = np.log(values[keep])
    if x.size >= 2 and np.ptp(x) > 0:
        res = linregress(x, y)
        slope, intercept = float(res.slope), float(res.intercept)
        r2 = float(res.rvalue ** 2) if np.isfinite(res.rvalue) else 1.0
    else:
        slope = intercept = float("nan")
        r2 = 0.0
    return ScalingReport(tuple(levels.astype(int)), tuple(values), slope, intercept,
                         min(max(r2, 0.0), 1.0), model, flags=flags, **extra)
