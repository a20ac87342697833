"""Length-independent accurate summation for long piecewise accumulations."""

from __future__ import annotations

import math

import numpy as np

_BLOCK = 4096


def compensated_sum(values) -> float:
    """Sum an array of floats with error that does not grow with length.

    Blocks are reduced with numpy's pairwise summation and the block totals
    are combined with ``math.fsum`` (exactly rounded).  Piece counts here can
    reach ~10^6, where naive left-to-right accumulation loses ~3 digits.
    """
    v = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        return 0.0
    if v.size <= _BLOCK:
        return math.fsum(v.tolist())
    nfull = (v.size // _BLOCK) * _BLOCK
    blocks = v[:nfull].reshape(-1, _BLOCK).sum(axis=1)
    parts = blocks.tolist()
    if nfull < v.size:
        parts.append(math.fsum(v[nfull:].tolist()))
    return math.fsum(parts)
