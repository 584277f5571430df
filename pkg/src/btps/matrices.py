from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPACES = ("torus", "sphere", "plane-disk")
MODES = ("exact", "leading")


@dataclass(frozen=True, eq=False)
class BTMatrix:
    """Dense matrix of one member of a Berezin-Toeplitz family.

    ``level`` is the quantization parameter ``N``; the dimension ``n`` is
    ``N`` on the torus and ``N + 1`` on the sphere and the cut-off disk.
    ``entries`` is stored read-only.
    """

    entries: np.ndarray
    space: str
    level: int
    symbol_id: str | None = None
    mode: str = "exact"

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"BTMatrix needs a non-empty square array, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("BTMatrix entries must be finite")
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def n(self):
        return self.entries.shape[0]

    @property
    def matrix_id(self):
        return f"{self.space}:{self.symbol_id}:{self.mode}:N={self.level}"

    def scaled(self, c):
        return BTMatrix(self.entries * c, self.space, self.level, self.symbol_id, self.mode)

    def __array__(self, dtype=None, copy=None):
        a = self.entries
        return a.astype(dtype) if dtype is not None else a
