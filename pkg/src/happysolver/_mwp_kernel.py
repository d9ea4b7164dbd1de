"""Compiled inner loop for the layered submask maximization.

Kept in its own module so numba can cache the compiled kernel on disk;
everything degrades to the pure python path when numba is absent.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


if njit is None:  # pragma: no cover
    submask_layers = None
else:

    @njit(cache=True)
    def submask_layers(tables: np.ndarray, neg: np.int64) -> np.ndarray:
        """Rows g[j][S] = best value of covering S with parts 1..j."""
        d = tables.shape[0]
        size = tables.shape[1]
        g = np.empty((d + 1, size), np.int64)
        for s in range(size):
            g[0, s] = neg
        g[0, 0] = 0
        for j in range(1, d + 1):
            for s in range(size):
                best = neg
                t = s
                while True:
                    v = g[j - 1, s ^ t] + tables[j - 1, t]
                    if v > best:
                        best = v
                    if t == 0:
                        break
                    t = (t - 1) & s
                g[j, s] = best
        return g
