"""Vietoris-Rips filtered complexes of dimension <= 2 over integer matrices.

Simplices are ordered by (value, dimension, vertex tuple); the order is total
and face-respecting, so downstream matrix reduction is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .distance import DistanceSpace, TimeLabels
from .errors import InputError


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    value: int

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass
class FilteredComplex:
    """Simplices in filtration order with a face-position lookup.

    ``cap`` is inclusive: no simplex has value > cap.  ``diameter`` is the
    largest pairwise distance of the underlying matrix, so ``cap >= diameter``
    means the filtration is fully resolved and open bars are genuinely
    infinite rather than merely open at the cap.
    """

    simplices: list[Simplex]
    cap: int
    n_points: int
    diameter: int
    index: dict[tuple[int, ...], int]

    def __len__(self) -> int:
        return len(self.simplices)

    def position(self, vertices: tuple[int, ...]) -> int:
        return self.index[vertices]


def build_rips(dist, cap: int, max_dim: int = 2) -> FilteredComplex:
    """All simplices of dimension <= max_dim whose pairwise distances are <= cap.

    Vertices enter at value 0, an edge at its distance, a triangle at the max
    of its three edge values.
    """
    d = np.asarray(dist, dtype=np.int64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if d.size and (np.diagonal(d).any() or not np.array_equal(d, d.T)):
        raise ValueError("distance matrix must be symmetric with zero diagonal")
    if max_dim not in (0, 1, 2):
        raise ValueError(f"max_dim must be 0, 1, or 2, got {max_dim}")
    if cap < 0:
        raise ValueError(f"cap must be non-negative, got {cap}")

    n = d.shape[0]
    rows = d.tolist()
    simplices = [Simplex((i,), 0) for i in range(n)]
    if max_dim >= 1:
        for i, j in combinations(range(n), 2):
            if rows[i][j] <= cap:
                simplices.append(Simplex((i, j), rows[i][j]))
    if max_dim >= 2:
        for i, j, k in combinations(range(n), 3):
            value = max(rows[i][j], rows[i][k], rows[j][k])
            if value <= cap:
                simplices.append(Simplex((i, j, k), value))

    simplices.sort(key=lambda s: (s.value, len(s.vertices), s.vertices))
    index = {s.vertices: pos for pos, s in enumerate(simplices)}
    diameter = int(d.max()) if n >= 2 else 0
    return FilteredComplex(simplices, cap, n, diameter, index)


def restrict_to_step(space: DistanceSpace, labels: TimeLabels, i: int) -> DistanceSpace:
    """Induced sub-distance-space on the points with label <= i."""
    if not 0 <= i <= labels.m:
        raise InputError(f"step {i} outside {{0, ..., {labels.m}}}")
    lab = labels.vector(space.point_ids)
    keep = [k for k in range(space.n) if lab[k] <= i]
    ids = tuple(space.point_ids[k] for k in keep)
    sub = space.dist[np.ix_(keep, keep)] if keep else np.zeros((0, 0), dtype=np.int64)
    return DistanceSpace(ids, sub)


def boundary_column(cplx: FilteredComplex, position: int, p: int) -> dict[int, int]:
    """Sparse boundary of one simplex: face position -> coefficient mod p."""
    verts = cplx.simplices[position].vertices
    col: dict[int, int] = {}
    if len(verts) == 1:
        return col
    for drop in range(len(verts)):
        face = verts[:drop] + verts[drop + 1 :]
        col[cplx.position(face)] = 1 if drop % 2 == 0 else p - 1
    return col


def boundary_matrix(cplx: FilteredComplex, p: int) -> list[dict[int, int]]:
    """One sparse column per simplex in filtration order, mod p."""
    return [boundary_column(cplx, pos, p) for pos in range(len(cplx))]
