"""End-to-end SNV cycle extraction: classical per-step runs vs one deformed run.

The classical pipeline computes one Rips barcode per time step and keeps the
bars born at scale 1.  The deformed pipeline folds time labels into the
distances, computes a single barcode capped at 2N-1 (which resolves the whole
first scale block [N, N+m]), and reads each bar's birth/death step off its
scaled values.  A death at or beyond 2N can only happen at scale >= 2, so the
class survives every step up to the horizon; the first block is all that SNV
membership needs.
"""

from __future__ import annotations

import statistics
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .distance import (
    DistanceSpace,
    ScaledDistanceMatrix,
    ScaleSchedule,
    TimeLabels,
    deform,
)
from .errors import InputError
from .persistence import Barcode, Chain, barcode_h1, class_is_nonzero_at
from .rips import FilteredComplex, build_rips, restrict_to_step

Representative = tuple[tuple[str, str, int], ...]

CLASSICAL_NOTE = (
    "classical mode: representatives are extracted independently per step; "
    "a cycle surviving from one step to the next is not matched across steps"
)


@dataclass(frozen=True)
class SnvBar:
    """An SNV cycle with its step interval and underlying scale values.

    ``death_step`` is None when the class is alive through the horizon; in
    classical mode bars are per-step only and never carry a death step.
    Membership is half-open: the cycle belongs to step i iff
    birth_step <= i < death_step.
    """

    birth_step: int
    death_step: int | None
    birth_value: int
    death_value: int | None
    representative: Representative

    def __post_init__(self) -> None:
        if self.death_step is not None and not self.birth_step < self.death_step:
            raise ValueError(
                f"death step {self.death_step} not after birth step {self.birth_step}"
            )

    def alive_at(self, i: int) -> bool:
        return self.birth_step <= i and (self.death_step is None or i < self.death_step)


@dataclass
class SnvReport:
    mode: str
    m: int
    p: int
    per_step_counts: list[int]
    bars: list[SnvBar]
    point_ids: tuple[str, ...]
    cap: int | None = None
    caps_by_step: list[int] | None = None
    merges: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    timing: float = 0.0
    # in-memory context, not serialized
    space: DistanceSpace | None = None
    labels: TimeLabels | None = None
    scaled: ScaledDistanceMatrix | None = None
    schedule: ScaleSchedule | None = None
    filtered_complex: FilteredComplex | None = None
    barcode: Barcode | None = None


@dataclass
class CorrespondenceReport:
    """Outcome of checking the deformed run against classical ground truth."""

    m: int
    p: int
    per_step_counts_match: list[bool]
    matched_deaths: list[tuple[int, int]]
    discrepancies: list[str]

    @property
    def ok(self) -> bool:
        return not self.discrepancies


@dataclass
class StabilityRow:
    birth_step: int
    last_alive_step: int
    member_by_step: tuple[bool, ...]
    nonzero_by_step: tuple[bool, ...]


@dataclass
class StabilityReport:
    m: int
    rows: list[StabilityRow]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class BenchmarkResult:
    n_points: int
    m: int
    p: int
    repetitions: int
    classical_seconds: list[float]
    deformed_seconds: list[float]
    classical_median: float
    deformed_median: float
    ratio: float
    correspondence_clean: bool


def _representative_ids(
    cplx: FilteredComplex, point_ids: tuple[str, ...], chain: Chain
) -> Representative:
    out = []
    for pos in sorted(chain):
        a, b = cplx.simplices[pos].vertices
        out.append((point_ids[a], point_ids[b], chain[pos]))
    return tuple(out)


def chain_from_representative(
    cplx: FilteredComplex, space: DistanceSpace, representative: Representative
) -> Chain:
    """Translate an id-labelled 1-chain back to complex positions."""
    idx = space.id_index
    chain = {}
    for a, b, coeff in representative:
        key = tuple(sorted((idx[a], idx[b])))
        chain[cplx.position(key)] = coeff
    return chain


def _classical_step(
    space: DistanceSpace, labels: TimeLabels, i: int, p: int, cap: int | None
) -> tuple[int, list[SnvBar]]:
    sub = restrict_to_step(space, labels, i)
    step_cap = sub.diameter() if cap is None else cap
    cplx = build_rips(sub.dist, step_cap)
    barcode = barcode_h1(cplx, p)
    bars = [
        SnvBar(
            birth_step=i,
            death_step=None,
            birth_value=bar.birth_value,
            death_value=bar.death_value,
            representative=_representative_ids(cplx, sub.point_ids, bar.representative),
        )
        for bar in barcode.bars
        if bar.birth_value == 1
    ]
    return step_cap, bars


def classical_snv(
    space: DistanceSpace,
    labels: TimeLabels,
    p: int = 2,
    cap: int | None = None,
    threads: int = 1,
) -> SnvReport:
    """One barcode per time step; bars born at scale 1 are the SNV cycles.

    ``cap`` defaults to each step's full diameter; an explicit cap must be
    >= 1 or the scale-1 births are unobservable.
    """
    if cap is not None and cap < 1:
        raise InputError(f"classical cap must be >= 1, got {cap}")
    labels.vector(space.point_ids)  # fail early on a missing label
    start = time.perf_counter()
    steps = range(labels.m + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(lambda i: _classical_step(space, labels, i, p, cap), steps)
            )
    else:
        results = [_classical_step(space, labels, i, p, cap) for i in steps]

    caps_by_step = [r[0] for r in results]
    bars = [bar for _, step_bars in results for bar in step_bars]
    counts = [len(step_bars) for _, step_bars in results]
    return SnvReport(
        mode="classical",
        m=labels.m,
        p=p,
        per_step_counts=counts,
        bars=bars,
        point_ids=space.point_ids,
        cap=cap,
        caps_by_step=caps_by_step,
        notes=[CLASSICAL_NOTE],
        timing=time.perf_counter() - start,
        space=space,
        labels=labels,
    )


def deformed_snv(
    space: DistanceSpace,
    labels: TimeLabels,
    p: int = 2,
    cap: int | str | None = None,
) -> SnvReport:
    """Single-barcode SNV extraction from the time-deformed distance matrix.

    Default cap 2N-1 resolves exactly the first scale block; pass ``"full"``
    (or an explicit value) to resolve the complete barcode instead.  Bars born
    in [N, N+m] become SNV bars with birth_step = birth - N; a death value
    beyond N+m means the class is alive through the horizon.
    """
    start = time.perf_counter()
    scaled = deform(space, labels)
    schedule = ScaleSchedule(labels.m, scaled.base)
    if cap is None:
        cap_value = 2 * scaled.base - 1
    elif cap == "full":
        cap_value = scaled.diameter()
    else:
        cap_value = int(cap)

    cplx = build_rips(scaled.scaled, cap_value)
    barcode = barcode_h1(cplx, p)

    bars = []
    for bar in barcode.bars:
        birth_step = schedule.step_of_birth(bar.birth_value)
        if birth_step is None:
            continue
        if bar.death_value is not None and bar.death_value <= scaled.base + labels.m:
            death_step = bar.death_value - scaled.base
        else:
            death_step = None
        bars.append(
            SnvBar(
                birth_step=birth_step,
                death_step=death_step,
                birth_value=bar.birth_value,
                death_value=bar.death_value,
                representative=_representative_ids(
                    cplx, space.point_ids, bar.representative
                ),
            )
        )

    counts = [sum(b.alive_at(i) for b in bars) for i in range(labels.m + 1)]
    return SnvReport(
        mode="deformed",
        m=labels.m,
        p=p,
        per_step_counts=counts,
        bars=bars,
        point_ids=space.point_ids,
        cap=cap_value,
        timing=time.perf_counter() - start,
        space=space,
        labels=labels,
        scaled=scaled,
        schedule=schedule,
        filtered_complex=cplx,
        barcode=barcode,
    )


def time_filtration_barcode(space: DistanceSpace, labels: TimeLabels, p: int) -> Barcode:
    """Barcode of the scale-1 subcomplex filtered directly by time step.

    Each simplex of the scale-1 Rips complex enters at the largest label among
    its vertices; pairs at distance > 1 never enter.  This computes the
    per-step birth/death structure without any distance deformation and serves
    as the classical-side ground truth for death steps, which per-step runs
    cannot see.
    """
    lab = labels.vector(space.point_ids)
    step_matrix = np.maximum.outer(lab, lab)
    step_matrix[space.dist > 1] = labels.m + 1  # excluded by the cap below
    if step_matrix.size:
        np.fill_diagonal(step_matrix, 0)
    return barcode_h1(build_rips(step_matrix, cap=labels.m), p)


def _interval_pairs(bars: list[SnvBar]) -> Counter:
    return Counter((b.birth_step, b.death_step) for b in bars)


def verify_correspondence(
    classical: SnvReport, deformed: SnvReport
) -> CorrespondenceReport:
    """Check the deformed run against classical computations of the same data.

    Two checks: per-step count equality |SNV_i| = |SNV*_i|, and agreement of
    the (birth_step, death_step) multisets, where the classical-side death
    steps come from the directly built time filtration.  Any mismatch is a
    discrepancy; the correspondence predicts there are none.
    """
    if classical.mode != "classical" or deformed.mode != "deformed":
        raise InputError("verify_correspondence needs a classical and a deformed report")
    if (
        classical.point_ids != deformed.point_ids
        or classical.m != deformed.m
        or classical.p != deformed.p
    ):
        raise InputError("reports were computed over different inputs")
    if classical.space is None or deformed.space is None:
        raise InputError("reports are missing their input context")
    if not np.array_equal(classical.space.dist, deformed.space.dist):
        raise InputError("reports were computed over different distance matrices")
    if classical.labels.by_id != deformed.labels.by_id:
        raise InputError("reports were computed over different time labels")

    m, p = classical.m, classical.p
    discrepancies: list[str] = []

    counts_match = []
    for i in range(m + 1):
        same = classical.per_step_counts[i] == deformed.per_step_counts[i]
        counts_match.append(same)
        if not same:
            discrepancies.append(
                f"step {i}: classical count {classical.per_step_counts[i]} "
                f"!= deformed count {deformed.per_step_counts[i]}"
            )

    direct = time_filtration_barcode(classical.space, classical.labels, p)
    direct_pairs = Counter(
        (b.birth_value, b.death_value if b.death_value is not None else None)
        for b in direct.bars
    )
    deformed_pairs = _interval_pairs(deformed.bars)
    for pair in sorted(
        set(direct_pairs) | set(deformed_pairs),
        key=lambda t: (t[0], -1 if t[1] is None else t[1]),
    ):
        a, b = direct_pairs[pair], deformed_pairs[pair]
        if a != b:
            birth, death = pair
            interval = f"[{birth}, {'horizon' if death is None else death})"
            discrepancies.append(
                f"bar {interval}: classical multiplicity {a} != deformed {b}"
            )

    for i in range(m + 1):
        direct_alive = direct.count_alive(i)
        if direct_alive != classical.per_step_counts[i]:
            discrepancies.append(
                f"step {i}: time-filtration count {direct_alive} "
                f"!= per-step classical count {classical.per_step_counts[i]}"
            )

    matched = sorted(
        (
            pair
            for pair in (direct_pairs & deformed_pairs).elements()
            if pair[1] is not None
        )
    )
    return CorrespondenceReport(m, p, counts_match, matched, discrepancies)


def stability_report(report: SnvReport) -> StabilityReport:
    """Per-bar lifespans and the step-by-step homology-membership table.

    For each bar and each step i from its birth onward, checks whether its
    representative is homologically nonzero in the deformed complex at
    threshold kappa(i); the result must coincide with half-open interval
    membership, and in particular a class with nonzero image at step i+1 must
    still be a member at i+1.
    """
    if report.mode != "deformed":
        raise InputError("stability_report needs a deformed-mode report")
    cplx, schedule = report.filtered_complex, report.schedule
    rows = []
    violations: list[str] = []
    for k, bar in enumerate(report.bars):
        chain = chain_from_representative(cplx, report.space, bar.representative)
        member = tuple(bar.alive_at(i) for i in range(report.m + 1))
        nonzero = tuple(
            i >= bar.birth_step
            and class_is_nonzero_at(chain, cplx, schedule.kappa(i), report.p)
            for i in range(report.m + 1)
        )
        last_alive = (bar.death_step - 1) if bar.death_step is not None else report.m
        rows.append(StabilityRow(bar.birth_step, last_alive, member, nonzero))
        for i in range(bar.birth_step, report.m + 1):
            if member[i] != nonzero[i]:
                violations.append(
                    f"bar {k}: membership at step {i} is {member[i]} but its class "
                    f"is {'nonzero' if nonzero[i] else 'zero'} there"
                )
        for i in range(report.m):
            if member[i] and nonzero[i + 1] and not member[i + 1]:
                violations.append(
                    f"bar {k}: alive at step {i} with nonzero image at {i + 1} "
                    f"but not a member at {i + 1}"
                )
    return StabilityReport(report.m, rows, violations)


def benchmark(
    space: DistanceSpace,
    labels: TimeLabels,
    p: int = 2,
    repetitions: int = 1,
    threads: int = 1,
) -> BenchmarkResult:
    """Median wall-clock of m+1 classical runs vs the single deformed run.

    Reports the ratio and runs the correspondence check once; no performance
    threshold is asserted.
    """
    if repetitions < 1:
        raise InputError(f"repetitions must be >= 1, got {repetitions}")
    classical_times = []
    deformed_times = []
    classical = deformed = None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        classical = classical_snv(space, labels, p, threads=threads)
        t1 = time.perf_counter()
        deformed = deformed_snv(space, labels, p)
        t2 = time.perf_counter()
        classical_times.append(t1 - t0)
        deformed_times.append(t2 - t1)

    verdict = verify_correspondence(classical, deformed)
    classical_median = statistics.median(classical_times)
    deformed_median = statistics.median(deformed_times)
    return BenchmarkResult(
        n_points=space.n,
        m=labels.m,
        p=p,
        repetitions=repetitions,
        classical_seconds=classical_times,
        deformed_seconds=deformed_times,
        classical_median=classical_median,
        deformed_median=deformed_median,
        ratio=classical_median / max(deformed_median, 1e-12),
        correspondence_clean=verdict.ok,
    )


def corrupted_copy(report: SnvReport, bar_index: int = 0) -> SnvReport:
    """Copy of a deformed report with one bar's death shifted by a step.

    Detector fuel for tests: verify_correspondence must flag the result.
    """
    bars = list(report.bars)
    bar = bars[bar_index]
    if bar.death_step is not None:
        death = bar.death_step + 1 if bar.death_step < report.m else None
        shifted = replace(bar, death_step=death)
    elif bar.birth_step < report.m:
        shifted = replace(bar, death_step=bar.birth_step + 1)
    else:
        raise ValueError("bar spans a single step at the horizon; nothing to shift")
    bars[bar_index] = shifted
    counts = [sum(b.alive_at(i) for b in bars) for i in range(report.m + 1)]
    out = replace(report, bars=bars, per_step_counts=counts)
    return out
