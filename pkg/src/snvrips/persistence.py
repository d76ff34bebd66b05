"""Persistent homology in dimension 1 over F_p with representative cycles.

Left-to-right column reduction of the simplicial boundary matrix, processed
by decreasing dimension so the clearing shortcut applies: once a triangle
column pairs with an edge row, that edge's own column is known to reduce to
zero and is skipped.  Basis columns (V in R = D*V) are tracked for edge
columns so that every bar comes with an explicit 1-cycle:

* a (edge, triangle) pair contributes the triangle's reduced column, a cycle
  whose youngest edge is the birth edge;
* an unpaired cycle-creating edge contributes its tracked V column.

Homology (not cohomology) reduction is used precisely because the
representatives are needed downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .rips import FilteredComplex, boundary_column, boundary_matrix

Chain = dict[int, int]


@dataclass(frozen=True)
class Bar:
    """One H_1 bar: [birth_value, death_value), death None when the class is
    still alive at the filtration cap."""

    birth_value: int
    death_value: int | None
    representative: Chain
    dim: int = 1

    @property
    def finite(self) -> bool:
        return self.death_value is not None


@dataclass
class Barcode:
    bars: list[Bar]
    cap: int
    p: int
    exhaustive: bool = False  # cap covered the full diameter

    def count_alive(self, v: int) -> int:
        """Bars with birth <= v < death; the open end counts as alive."""
        return sum(
            b.birth_value <= v and (b.death_value is None or v < b.death_value)
            for b in self.bars
        )


@dataclass
class ReductionResult:
    """Output of the column reduction.

    ``pairing`` maps each dimension-2 column with nonzero reduction to the row
    index of its lowest entry (the paired edge).  ``cycle_basis`` maps each
    dimension-1 column whose reduction is zero to a 1-cycle created when that
    edge enters.  ``reduced`` holds every column's reduced form.
    """

    pairing: dict[int, int] = field(default_factory=dict)
    cycle_basis: dict[int, Chain] = field(default_factory=dict)
    reduced: list[Chain] = field(default_factory=list)


def _axpy(dst: Chain, src: Chain, c: int, p: int) -> None:
    # dst -= c * src (mod p)
    for row, val in src.items():
        nv = (dst.get(row, 0) - c * val) % p
        if nv:
            dst[row] = nv
        else:
            dst.pop(row, None)


def reduce_with_basis(
    columns: list[Chain],
    dims: list[int],
    p: int,
    clearing: bool = True,
) -> ReductionResult:
    """Reduce boundary columns (given in a face-respecting order) over F_p.

    Columns are processed by decreasing dimension; within a dimension in
    filtration order.  Column j is repeatedly reduced against the earlier
    column owning its lowest row until the row is free or the column is zero.
    With ``clearing`` enabled, edge columns already paired as lows of reduced
    triangle columns are skipped and their cycle_basis entry is taken from the
    paired triangle's reduced column (an equivalent cycle with the same
    youngest edge).
    """
    n = len(columns)
    if len(dims) != n:
        raise ValueError("columns and dims must have equal length")
    two = p == 2

    work: list = [set(c) if two else dict(c) for c in columns]
    vtrack: dict[int, object] = {}  # dim-1 column -> accumulated V column
    pivot_owner: dict[int, int] = {}
    cleared: set[int] = set()
    pairing: dict[int, int] = {}
    cycle_basis: dict[int, Chain] = {}

    order = [j for d in (2, 1, 0) for j in range(n) if dims[j] == d]
    for j in order:
        if j in cleared:
            continue
        col = work[j]
        track = dims[j] == 1
        if track:
            vtrack[j] = {j} if two else {j: 1}
        while col:
            low = max(col)
            owner = pivot_owner.get(low)
            if owner is None:
                pivot_owner[low] = j
                break
            other = work[owner]
            if two:
                col ^= other
                if track:
                    vtrack[j] ^= vtrack[owner]
            else:
                c = col[low] * pow(other[low], p - 2, p) % p
                _axpy(col, other, c, p)
                if track:
                    _axpy(vtrack[j], vtrack[owner], c, p)
        if col:
            if dims[j] == 2:
                low = max(col)
                pairing[j] = low
                if clearing:
                    cleared.add(low)
        elif track:
            v = vtrack[j]
            cycle_basis[j] = {r: 1 for r in sorted(v)} if two else dict(v)

    # a cleared column's reduced form is zero by the clearing argument
    reduced = [
        {} if j in cleared else ({r: 1 for r in sorted(c)} if two else dict(c))
        for j, c in enumerate(work)
    ]
    for tri, edge in pairing.items():
        if edge in cleared:
            cycle_basis[edge] = dict(reduced[tri])
    return ReductionResult(pairing, cycle_basis, reduced)


def barcode_h1(cplx: FilteredComplex, p: int) -> Barcode:
    """H_1 barcode of a filtered complex, with a representative per bar.

    Zero-length pairs (birth == death) are discarded.
    """
    dims = [s.dim for s in cplx.simplices]
    result = reduce_with_basis(boundary_matrix(cplx, p), dims, p)
    value = [s.value for s in cplx.simplices]

    bars = []
    paired_edges = set()
    for tri, edge in result.pairing.items():
        paired_edges.add(edge)
        if value[edge] < value[tri]:
            bars.append(Bar(value[edge], value[tri], dict(result.reduced[tri])))
    for edge, chain in result.cycle_basis.items():
        if edge not in paired_edges:
            bars.append(Bar(value[edge], None, dict(chain)))

    big = cplx.cap + 1
    bars.sort(
        key=lambda b: (
            b.birth_value,
            big if b.death_value is None else b.death_value,
            max(b.representative),
        )
    )
    return Barcode(bars, cplx.cap, p, exhaustive=cplx.cap >= cplx.diameter)


def class_is_nonzero_at(chain: Chain, cplx: FilteredComplex, v: int, p: int) -> bool:
    """Whether a 1-cycle is homologically nonzero in the complex at scale v.

    True iff the chain is outside the span of the boundaries of the triangles
    with value <= v.  Every edge of the chain must be present at v.
    """
    residue = {}
    for pos, coeff in chain.items():
        s = cplx.simplices[pos]
        if s.dim != 1:
            raise InputError(f"chain entry at position {pos} is not an edge")
        if s.value > v:
            raise InputError(
                f"edge {s.vertices} enters at value {s.value}, after scale {v}"
            )
        if coeff % p:
            residue[pos] = coeff % p
    if not residue:
        return False

    echelon: dict[int, Chain] = {}  # pivot row -> normalized column
    for pos, s in enumerate(cplx.simplices):
        if s.dim != 2 or s.value > v:
            continue
        col = boundary_column(cplx, pos, p)
        while col:
            low = max(col)
            owner = echelon.get(low)
            if owner is None:
                inv = pow(col[low], p - 2, p)
                echelon[low] = {r: val * inv % p for r, val in col.items()}
                break
            _axpy(col, owner, col[low], p)

    while residue:
        low = max(residue)
        owner = echelon.get(low)
        if owner is None:
            return True
        _axpy(residue, owner, residue[low], p)
    return False
