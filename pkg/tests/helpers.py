"""Hand-checked fixture instances shared across the test modules."""

import numpy as np

from snvrips import DistanceSpace, RandomInstanceSpec, TimeLabels, random_instance


def square_space() -> DistanceSpace:
    # 4-cycle with unit sides and diagonals 2: one H_1 class, born 1, dead 2
    dist = np.array(
        [
            [0, 1, 2, 1],
            [1, 0, 1, 2],
            [2, 1, 0, 1],
            [1, 2, 1, 0],
        ]
    )
    return DistanceSpace(("a", "b", "c", "d"), dist)


def square_labels(m: int = 0) -> TimeLabels:
    return TimeLabels(m, {"a": 0, "b": 0, "c": 0, "d": 0})


def unit_triangle() -> DistanceSpace:
    dist = np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64)
    return DistanceSpace(("x", "y", "z"), dist)


def apex_square() -> tuple[DistanceSpace, TimeLabels]:
    """Square present at step 0; an apex arriving at step 1 fills its cycle."""
    dist = np.array(
        [
            [0, 1, 2, 1, 1],
            [1, 0, 1, 2, 1],
            [2, 1, 0, 1, 1],
            [1, 2, 1, 0, 1],
            [1, 1, 1, 1, 0],
        ]
    )
    space = DistanceSpace(("a", "b", "c", "d", "e"), dist)
    labels = TimeLabels(1, {"a": 0, "b": 0, "c": 0, "d": 0, "e": 1})
    return space, labels


def suite_instance(seed: int) -> tuple[DistanceSpace, TimeLabels, int]:
    """Deterministic spread: n in 5..10, m in 0..4, d_max in 2..4, p in {2,3}.

    d_max starts at 2 so the scale-1 graph is a genuine random graph; with
    d_max = 1 every pair is an edge and H_1 is trivially zero.
    """
    spec = RandomInstanceSpec(
        seed=seed, n=5 + seed % 6, m=seed % 5, d_max=2 + (seed // 2) % 3
    )
    space, labels = random_instance(spec)
    return space, labels, 2 if seed % 2 == 0 else 3
