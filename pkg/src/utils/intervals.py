"""
Helpers for turning boolean grid masks into sorted disjoint intervals.
"""

from typing import Sequence


def maximal_runs(mask: Sequence[bool]) -> list[tuple[int, int]]:
    """Inclusive (start, end) index pairs of the maximal runs of True."""
    runs: list[tuple[int, int]] = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def mask_to_intervals(grid: Sequence[float], mask: Sequence[bool]) -> list[tuple[float, float]]:
    """Closed intervals [grid[start], grid[end]] spanned by each run of flagged points."""
    if len(grid) != len(mask):
        raise ValueError(f"grid and mask lengths differ: {len(grid)} != {len(mask)}")
    return [(float(grid[s]), float(grid[e])) for s, e in maximal_runs(mask)]


def cells_to_intervals(
    grid: Sequence[float], mask: Sequence[bool], width: float
) -> list[tuple[float, float]]:
    """Unions of the cells [x_i, x_i + width) over each run of flagged points."""
    if width <= 0:
        raise ValueError(f"cell width must be positive, got {width}")
    return [(float(grid[s]), float(grid[e]) + width) for s, e in maximal_runs(mask)]
