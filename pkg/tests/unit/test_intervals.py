import pytest

from src.utils.intervals import cells_to_intervals, mask_to_intervals, maximal_runs


@pytest.mark.parametrize(
    "mask, runs",
    [
        ([], []),
        ([False, False], []),
        ([True], [(0, 0)]),
        ([True, True, False, True], [(0, 1), (3, 3)]),
        ([False, True, True, True], [(1, 3)]),
    ],
)
def test_maximal_runs(mask, runs):
    assert maximal_runs(mask) == runs


def test_mask_to_intervals():
    grid = [0.0, 0.5, 1.0, 1.5, 2.0]
    assert mask_to_intervals(grid, [False, True, True, False, True]) == [(0.5, 1.0), (2.0, 2.0)]


def test_mask_to_intervals_length_mismatch():
    with pytest.raises(ValueError):
        mask_to_intervals([0.0, 1.0], [True])


def test_cells_to_intervals():
    grid = [0.0, 0.25, 0.5, 0.75]
    assert cells_to_intervals(grid, [True, True, False, True], 0.25) == [(0.0, 0.5), (0.75, 1.0)]
    with pytest.raises(ValueError):
        cells_to_intervals(grid, [True] * 4, 0.0)
