"""Probability measures on the unit circle represented by exact piecewise CDFs.

A measure on [0, 1) is stored through its right-continuous CDF, given as an
ordered cover of [0, 1) by pieces on which the CDF is either constant or of
the exponential form ``A * base**t + B``.  Differences of two such CDFs stay
in the same family (with signed leading coefficient), which is what makes the
transport integrals in :mod:`circletransport.transport` exactly computable.

All containers are immutable after construction (the backing arrays are
marked read-only) and every operation is a pure function, so values can be
shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ATOM_MERGE_TOL",
    "CircleEmpirical",
    "CdfSegment",
    "PiecewiseCdf",
    "DeltaProfile",
    "build_empirical",
    "cdf_of_empirical",
    "cdf_wrapped_exponential",
    "eval_cdf",
    "rotate_cdf",
    "delta_profile",
]

# Atom positions closer than this are treated as one atom with multiplicity.
# Mantissa collisions of the log sequences are exact in theory and within one
# ulp in practice, so this only has to absorb rounding noise.
ATOM_MERGE_TOL = 1e-15

_EDGE_TOL = 1e-12  # slack for CDF sanity checks (monotone, total mass)


def _frozen(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CircleEmpirical:
    """Equal-weight atom set on [0, 1): N atoms, each of weight 1/N.

    ``positions`` is sorted non-decreasing; duplicates encode multiplicity.
    """

    base: int
    positions: np.ndarray

    @property
    def count(self) -> int:
        return int(self.positions.size)

    @property
    def weight(self) -> float:
        """Weight carried by each atom."""
        return 1.0 / self.count


@dataclass(frozen=True)
class CdfSegment:
    """One piece of a piecewise CDF: ``coef * base**t + offset`` on [t_lo, t_hi).

    ``coef == 0`` encodes a constant piece at level ``offset``.
    """

    t_lo: float
    t_hi: float
    coef: float
    offset: float
    base: int

    @property
    def kind(self) -> str:
        return "constant" if self.coef == 0.0 else "exponential"

    def value(self, t: float) -> float:
        return self.coef * self.base ** t + self.offset


class _PiecewiseBase:
    """Shared piece bookkeeping for CDFs and CDF differences."""

    base: int
    bounds: np.ndarray  # shape (P+1,): bounds[0] == 0.0, bounds[-1] == 1.0
    coef: np.ndarray  # shape (P,)
    offset: np.ndarray  # shape (P,)

    @property
    def piece_count(self) -> int:
        return int(self.coef.size)

    @property
    def segments(self) -> list[CdfSegment]:
        """Materialize pieces as segment objects (intended for small CDFs)."""
        b = self.bounds
        return [
            CdfSegment(float(b[i]), float(b[i + 1]), float(self.coef[i]),
                       float(self.offset[i]), self.base)
            for i in range(self.piece_count)
        ]

    def _values_at(self, t: np.ndarray, idx: np.ndarray) -> np.ndarray:
        return self.coef[idx] * np.power(float(self.base), t) + self.offset[idx]

    def _piece_start_values(self) -> np.ndarray:
        return self.coef * np.power(float(self.base), self.bounds[:-1]) + self.offset

    def _piece_end_values(self) -> np.ndarray:
        """Left limits at the right ends of the pieces."""
        return self.coef * np.power(float(self.base), self.bounds[1:]) + self.offset


def _check_piece_arrays(bounds: np.ndarray, coef: np.ndarray, offset: np.ndarray) -> None:
    if bounds.ndim != 1 or coef.shape != offset.shape or coef.size != bounds.size - 1:
        raise ValueError("inconsistent piece array shapes")
    if bounds.size < 2 or bounds[0] != 0.0 or bounds[-1] != 1.0:
        raise ValueError("pieces must cover [0, 1)")
    if np.any(np.diff(bounds) <= 0.0):
        raise ValueError("piece bounds must be strictly increasing")


@dataclass(frozen=True)
class PiecewiseCdf(_PiecewiseBase):
    """Right-continuous non-decreasing CDF on [0, 1) built from pieces.

    Invariants enforced at construction: pieces cover [0, 1) without gaps,
    each piece is non-decreasing, jumps at piece boundaries are >= 0, and the
    left limit at 1 equals 1.  ``F(0-) = 0`` by convention.
    """

    base: int
    bounds: np.ndarray
    coef: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        bounds = _frozen(self.bounds)
        coef = _frozen(self.coef)
        offset = _frozen(self.offset)
        _check_piece_arrays(bounds, coef, offset)
        if self.base < 2 or int(self.base) != self.base:
            raise ValueError(f"base must be an integer >= 2, got {self.base}")
        starts = coef * np.power(float(self.base), bounds[:-1]) + offset
        ends = coef * np.power(float(self.base), bounds[1:]) + offset
        if np.any(coef < 0.0):
            raise ValueError("CDF pieces must be non-decreasing (coef >= 0)")
        if np.any(starts[1:] - ends[:-1] < -_EDGE_TOL):
            raise ValueError("negative jump at a piece boundary")
        if starts[0] < -_EDGE_TOL or abs(ends[-1] - 1.0) > _EDGE_TOL:
            raise ValueError("CDF must rise from 0 to a left limit of 1 at t=1")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "offset", offset)

    def __call__(self, t, side: str = "right"):
        return eval_cdf(self, t, side)


@dataclass(frozen=True)
class DeltaProfile(_PiecewiseBase):
    """Pointwise difference of two CDFs over their joint piece refinement.

    Each piece carries ``coef * base**t + offset`` with ``coef`` of either
    sign (0 encodes a constant); values stay within [-1, 1].
    """

    base: int
    bounds: np.ndarray
    coef: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        bounds = _frozen(self.bounds)
        coef = _frozen(self.coef)
        offset = _frozen(self.offset)
        _check_piece_arrays(bounds, coef, offset)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "offset", offset)

    def value(self, t, side: str = "right"):
        """Evaluate the difference; ``side='left'`` takes circular left limits.

        The left limit at 0 wraps around the circle: both CDFs tend to 0
        there by convention, so the profile's left value at 0 is 0.
        """
        t_arr, scalar = _as_probe_array(t)
        if side == "right":
            _check_domain(t_arr, upper_open=True)
            idx = np.searchsorted(self.bounds, t_arr, side="right") - 1
            out = self._values_at(t_arr, idx)
        elif side == "left":
            _check_domain(t_arr, upper_open=False)
            idx = np.clip(np.searchsorted(self.bounds, t_arr, side="left") - 1, 0, None)
            out = np.where(t_arr == 0.0, 0.0, self._values_at(t_arr, idx))
        else:
            raise ValueError(f"side must be 'right' or 'left', got {side!r}")
        return float(out[0]) if scalar else out


def _as_probe_array(t):
    arr = np.asarray(t, dtype=np.float64)
    return np.atleast_1d(arr), arr.ndim == 0


def _check_domain(t: np.ndarray, upper_open: bool) -> None:
    hi_bad = (t >= 1.0) if upper_open else (t > 1.0)
    if np.any(t < 0.0) or np.any(hi_bad):
        raise ValueError("evaluation point outside the unit circle domain")


def build_empirical(positions, base: int) -> CircleEmpirical:
    """Build the equal-weight empirical measure from atom positions in [0, 1).

    Atoms are sorted; duplicates are preserved as multiplicity.
    """
    if base < 2 or int(base) != base:
        raise ValueError(f"base must be an integer >= 2, got {base}")
    pos = np.asarray(positions, dtype=np.float64)
    if pos.size == 0:
        raise ValueError("empirical measure needs at least one atom")
    if np.any(pos < 0.0) or np.any(pos >= 1.0):
        raise ValueError("atom positions must lie in [0, 1)")
    return CircleEmpirical(base=int(base), positions=_frozen(np.sort(pos)))


def _coalesce_equal_constants(bounds, coef, offset):
    """Merge adjacent pieces with identical (coef, offset)."""
    if coef.size <= 1:
        return bounds, coef, offset
    same = (coef[1:] == coef[:-1]) & (offset[1:] == offset[:-1])
    if not np.any(same):
        return bounds, coef, offset
    keep = np.concatenate(([True], ~same))
    return np.concatenate((bounds[:-1][keep], bounds[-1:])), coef[keep], offset[keep]


def _merge_close_atoms(positions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Representatives and group ids after merging atoms within the tolerance."""
    starts = np.concatenate(([True], np.diff(positions) > ATOM_MERGE_TOL))
    return positions[starts], np.cumsum(starts) - 1


def _step_cdf_from_levels(rep: np.ndarray, levels: np.ndarray, base: int) -> PiecewiseCdf:
    if rep[0] > 0.0:
        bounds = np.concatenate(([0.0], rep, [1.0]))
        levels = np.concatenate(([0.0], levels))
    else:
        bounds = np.concatenate((rep, [1.0]))
    return PiecewiseCdf(base=base, bounds=bounds,
                        coef=np.zeros_like(levels), offset=levels)


def _step_cdf_from_atoms(positions: np.ndarray, masses: np.ndarray, base: int) -> PiecewiseCdf:
    """Step CDF for a sorted weighted atom list; near-equal atoms are merged."""
    rep, group = _merge_close_atoms(positions)
    mass = np.zeros(rep.size)
    np.add.at(mass, group, masses)
    levels = np.cumsum(mass)
    levels[-1] = 1.0  # total mass is 1 by construction
    return _step_cdf_from_levels(rep, levels, base)


def cdf_of_empirical(m: CircleEmpirical) -> PiecewiseCdf:
    """Pure step CDF of an empirical measure; jump at each distinct atom.

    Levels are exact integer multiplicity counts divided by N once, so they
    match integer-sum constructions bit for bit.
    """
    n = m.count
    rep, group = _merge_close_atoms(m.positions)
    counts = np.bincount(group)
    levels = np.cumsum(counts) / n
    return _step_cdf_from_levels(rep, levels, m.base)


def cdf_wrapped_exponential(base: int, y: float) -> PiecewiseCdf:
    """CDF of the base-``b`` exponential law rotated by ``y`` around the circle.

    For ``y == 0`` this is ``(b**t - 1) / (b - 1)`` on one piece; for
    ``y > 0`` two exponential pieces joined continuously at ``1 - y``.
    """
    if base < 2 or int(base) != base:
        raise ValueError(f"base must be an integer >= 2, got {base}")
    if not 0.0 <= y < 1.0:
        raise ValueError(f"rotation must lie in [0, 1), got {y}")
    b = float(base)
    if y == 0.0:
        a = 1.0 / (b - 1.0)
        return PiecewiseCdf(base=int(base), bounds=np.array([0.0, 1.0]),
                            coef=np.array([a]), offset=np.array([-a]))
    by = b ** y
    a1 = by / (b - 1.0)
    return PiecewiseCdf(
        base=int(base),
        bounds=np.array([0.0, 1.0 - y, 1.0]),
        coef=np.array([a1, a1 / b]),
        offset=np.array([-a1, 1.0 - a1]),
    )


def eval_cdf(F: PiecewiseCdf, t, side: str = "right"):
    """Evaluate ``F(t)`` (right) or the left limit ``F(t-)``.

    Right evaluation requires ``t`` in [0, 1).  Left evaluation accepts
    [0, 1]: ``F(0-) = 0`` by convention and ``t = 1`` gives the total mass.
    Accepts scalars or arrays.
    """
    t_arr, scalar = _as_probe_array(t)
    if side == "right":
        _check_domain(t_arr, upper_open=True)
        idx = np.searchsorted(F.bounds, t_arr, side="right") - 1
        out = F._values_at(t_arr, idx)
    elif side == "left":
        _check_domain(t_arr, upper_open=False)
        idx = np.clip(np.searchsorted(F.bounds, t_arr, side="left") - 1, 0, None)
        out = np.where(t_arr == 0.0, 0.0, F._values_at(t_arr, idx))
    else:
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    return float(out[0]) if scalar else out


def _atoms_of_step_cdf(F: PiecewiseCdf):
    """Jump locations and sizes of a pure step CDF."""
    levels = F.offset
    jumps = np.diff(levels, prepend=0.0)
    locs = F.bounds[:-1]
    keep = jumps > 0.0
    return locs[keep], jumps[keep]


def rotate_cdf(F: PiecewiseCdf, y: float) -> PiecewiseCdf:
    """CDF of the rotated measure: atoms move ``x -> <x - y>``.

    Matches the wrapped-exponential construction:
    ``rotate_cdf(cdf_wrapped_exponential(b, 0), y)`` equals
    ``cdf_wrapped_exponential(b, y)`` piece for piece.  Rotating by 0 is the
    identity; rotating by ``y`` then ``<1 - y>`` recovers the original up to
    rounding.
    """
    if not 0.0 <= y < 1.0:
        raise ValueError(f"rotation must lie in [0, 1), got {y}")
    if y == 0.0:
        return F
    if not np.any(F.coef != 0.0):
        # Step CDF: re-sort the wrapped atoms instead of composing formulas.
        locs, masses = _atoms_of_step_cdf(F)
        moved = locs - y
        moved[moved < 0.0] += 1.0
        order = np.argsort(moved, kind="stable")
        return _step_cdf_from_atoms(moved[order], masses[order], F.base)

    # General case: G(t) = F(<t + y>) - F(y-) (+1 past the wrap at 1 - y).
    # Source pieces over [y, 1) land on [0, 1 - y); pieces over [0, y) land
    # on [1 - y, 1).  Exponential coefficients pick up b**y resp. b**(y-1).
    f_left_y = eval_cdf(F, y, side="left")
    b = float(F.base)
    by = b ** y
    k = int(np.searchsorted(F.bounds, y, side="right") - 1)

    part_a_bounds = np.concatenate(([0.0], F.bounds[k + 1:-1] - y))
    part_a_coef = F.coef[k:] * by
    part_a_offset = F.offset[k:] - f_left_y

    part_b_bounds = F.bounds[:k + 1] + (1.0 - y)
    part_b_coef = F.coef[:k + 1] * (by / b)
    part_b_offset = F.offset[:k + 1] + (1.0 - f_left_y)

    bounds = np.concatenate((part_a_bounds, part_b_bounds, [1.0]))
    coef = np.concatenate((part_a_coef, part_b_coef))
    offset = np.concatenate((part_a_offset, part_b_offset))

    # The piece containing y may touch the wrap exactly; drop empty pieces.
    widths = np.diff(bounds)
    keep = widths > 0.0
    bounds = np.concatenate((bounds[:-1][keep], [1.0]))
    coef, offset = coef[keep], offset[keep]
    bounds, coef, offset = _coalesce_equal_constants(bounds, coef, offset)
    return PiecewiseCdf(base=F.base, bounds=bounds, coef=coef, offset=offset)


def delta_profile(F: PiecewiseCdf, G: PiecewiseCdf) -> DeltaProfile:
    """Difference profile ``t -> F(t) - G(t)`` on the joint piece refinement.

    Constant pieces are base-agnostic; two exponential pieces may only be
    combined when the bases agree.
    """
    f_exp = bool(np.any(F.coef != 0.0))
    g_exp = bool(np.any(G.coef != 0.0))
    if f_exp and g_exp and F.base != G.base:
        raise ValueError(
            f"cannot difference exponential pieces with bases {F.base} and {G.base}")
    base = F.base if f_exp or not g_exp else G.base

    bounds = np.union1d(F.bounds, G.bounds)
    los = bounds[:-1]
    fi = np.searchsorted(F.bounds, los, side="right") - 1
    gi = np.searchsorted(G.bounds, los, side="right") - 1
    coef = F.coef[fi] - G.coef[gi]
    offset = F.offset[fi] - G.offset[gi]
    bounds, coef, offset = _coalesce_equal_constants(bounds, coef, offset)
    return DeltaProfile(base=base, bounds=bounds, coef=coef, offset=offset)
