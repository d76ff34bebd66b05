"""File parsing and report serialization.

Input formats
-------------
Sequences: FASTA-like text (``>id`` header lines, sequence lines below, all
sequences equal length) plus a delimited metadata table (tab or comma, header
row required, columns ``id`` and ``time`` with non-negative integer times).

Matrix: the strict lower triangle of a symmetric integer matrix, one row per
line (line k holds k entries), plus a newline-separated time vector with one
entry per point; points are named p0, p1, ... in file order.

Zero off-diagonal distances (identical sequences) are merged: the
lexicographically least id and the smallest time label are kept, and every
merge is recorded in the bundle.

Output: JSON with a stable key order, or a ``step<TAB>count`` summary.
Representatives are serialized as (vertex-id, vertex-id, coefficient) triples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .distance import (
    DistanceSpace,
    TimeLabels,
    build_space_from_sequences,
    dedupe_zero_distance,
)
from .errors import InputError
from .pipeline import (
    BenchmarkResult,
    CorrespondenceReport,
    SnvReport,
    StabilityReport,
)


@dataclass
class InputBundle:
    kind: str
    space: DistanceSpace
    labels: TimeLabels
    merges: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    sources: tuple[str, ...] = ()


def _resolve_horizon(times: dict[str, int], horizon: int | None) -> int:
    m = max(times.values())
    if horizon is None:
        return m
    if horizon < m:
        raise InputError(
            f"horizon {horizon} is below the largest time label {m}; "
            "it may only extend the series"
        )
    return horizon


def _parse_fasta(text: str) -> list[tuple[str, str]]:
    records: list[tuple[str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            rid = line[1:].split()[0] if line[1:].split() else ""
            if not rid:
                raise InputError(f"line {lineno}: header without an id")
            records.append((rid, []))
        else:
            if not records:
                raise InputError(f"line {lineno}: sequence data before any '>' header")
            records[-1][1].append(line)
    if not records:
        raise InputError("no sequence records found")
    out = []
    for rid, chunks in records:
        seq = "".join(chunks)
        if not seq:
            raise InputError(f"record {rid!r} has an empty sequence")
        out.append((rid, seq))
    return out


def _parse_metadata(text: str) -> dict[str, int]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("metadata table is empty")
    delim = "\t" if "\t" in lines[0] else ","
    header = [h.strip() for h in lines[0].split(delim)]
    try:
        id_col, time_col = header.index("id"), header.index("time")
    except ValueError:
        raise InputError(
            f"metadata header must contain 'id' and 'time' columns, got {header}"
        ) from None
    times: dict[str, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(delim)]
        if len(cells) != len(header):
            raise InputError(
                f"metadata line {lineno}: expected {len(header)} columns, got {len(cells)}"
            )
        rid, raw_time = cells[id_col], cells[time_col]
        if rid in times:
            raise InputError(f"duplicate metadata row for id {rid!r}")
        try:
            t = int(raw_time)
        except ValueError:
            raise InputError(
                f"metadata line {lineno}: time {raw_time!r} for id {rid!r} "
                "is not an integer"
            ) from None
        if t < 0:
            raise InputError(f"negative time {t} for id {rid!r}")
        times[rid] = t
    return times


def parse_sequences(
    fasta_text: str,
    metadata_text: str,
    horizon: int | None = None,
    sources: tuple[str, ...] = ("<sequences>", "<metadata>"),
) -> InputBundle:
    """Resolve sequence records plus time metadata into a labelled space."""
    records = _parse_fasta(fasta_text)
    times = _parse_metadata(metadata_text)
    for rid, _ in records:
        if rid not in times:
            raise InputError(f"no metadata row for sequence id {rid!r}")
    known = {rid for rid, _ in records}
    for rid in times:
        if rid not in known:
            raise InputError(f"metadata row for unknown sequence id {rid!r}")

    space, merges = build_space_from_sequences(records)
    m = _resolve_horizon(times, horizon)
    groups: dict[str, list[str]] = {pid: [pid] for pid in space.point_ids}
    for dropped, kept in merges.items():
        groups[kept].append(dropped)
    labels = TimeLabels(
        m, {pid: min(times[member] for member in grp) for pid, grp in groups.items()}
    )
    notes = [
        f"merged {dropped} into {kept} (identical sequences)"
        for dropped, kept in sorted(merges.items())
    ]
    return InputBundle("sequences", space, labels, merges, notes, sources)


def parse_matrix(
    matrix_text: str,
    times_text: str,
    horizon: int | None = None,
    sources: tuple[str, ...] = ("<matrix>", "<times>"),
) -> InputBundle:
    """Resolve a lower-triangular distance file plus a time vector."""
    time_lines = [ln.strip() for ln in times_text.splitlines() if ln.strip()]
    if not time_lines:
        raise InputError("time vector is empty")
    times_list = []
    for lineno, cell in enumerate(time_lines, start=1):
        try:
            t = int(cell)
        except ValueError:
            raise InputError(f"times line {lineno}: {cell!r} is not an integer") from None
        if t < 0:
            raise InputError(f"times line {lineno}: negative time {t}")
        times_list.append(t)
    n = len(times_list)

    rows = [ln.split() for ln in matrix_text.splitlines() if ln.strip()]
    if len(rows) != n - 1:
        raise InputError(
            f"matrix has {len(rows)} rows but {n} time entries need {n - 1}"
        )
    dist = np.zeros((n, n), dtype=np.int64)
    for k, cells in enumerate(rows, start=1):
        if len(cells) != k:
            raise InputError(f"matrix line {k}: expected {k} entries, got {len(cells)}")
        for j, cell in enumerate(cells):
            try:
                value = int(cell)
            except ValueError:
                raise InputError(f"matrix line {k}: {cell!r} is not an integer") from None
            if value < 0:
                raise InputError(f"matrix line {k}: negative distance {value}")
            dist[k, j] = dist[j, k] = value

    ids = tuple(f"p{i}" for i in range(n))
    raw_labels = dict(zip(ids, times_list))
    ids2, dist2, merges, labels2 = dedupe_zero_distance(ids, dist, raw_labels)
    m = _resolve_horizon(raw_labels, horizon)
    notes = [
        f"merged {dropped} into {kept} (distance 0)"
        for dropped, kept in sorted(merges.items())
    ]
    return InputBundle(
        "matrix",
        DistanceSpace(ids2, dist2),
        TimeLabels(m, labels2),
        merges,
        notes,
        sources,
    )


def _bar_dict(bar) -> dict:
    return {
        "birth_step": bar.birth_step,
        "death_step": bar.death_step,
        "alive_through_horizon": bar.death_step is None,
        "birth_value": bar.birth_value,
        "death_value": bar.death_value,
        "representative": [list(edge) for edge in bar.representative],
    }


def _snv_dict(report: SnvReport) -> dict:
    return {
        "mode": report.mode,
        "m": report.m,
        "p": report.p,
        "n_points": len(report.point_ids),
        "point_ids": list(report.point_ids),
        "cap": report.cap,
        "caps_by_step": report.caps_by_step,
        "per_step_counts": report.per_step_counts,
        "bars": [_bar_dict(b) for b in report.bars],
        "dedup_merges": dict(sorted(report.merges.items())),
        "notes": report.notes,
    }


def _correspondence_dict(report: CorrespondenceReport) -> dict:
    return {
        "mode": "correspondence",
        "m": report.m,
        "p": report.p,
        "per_step_counts_match": report.per_step_counts_match,
        "matched_deaths": [list(pair) for pair in report.matched_deaths],
        "discrepancies": report.discrepancies,
    }


def _stability_dict(report: StabilityReport) -> dict:
    return {
        "mode": "stability",
        "m": report.m,
        "ok": report.ok,
        "rows": [
            {
                "birth_step": row.birth_step,
                "last_alive_step": row.last_alive_step,
                "member_by_step": list(row.member_by_step),
                "nonzero_by_step": list(row.nonzero_by_step),
            }
            for row in report.rows
        ],
        "violations": report.violations,
    }


def _benchmark_dict(result: BenchmarkResult) -> dict:
    return {
        "mode": "benchmark",
        "n_points": result.n_points,
        "m": result.m,
        "p": result.p,
        "repetitions": result.repetitions,
        "classical_seconds": result.classical_seconds,
        "deformed_seconds": result.deformed_seconds,
        "classical_median_seconds": result.classical_median,
        "deformed_median_seconds": result.deformed_median,
        "ratio_classical_over_deformed": result.ratio,
        "correspondence_clean": result.correspondence_clean,
    }


def _summary_lines(report) -> list[str]:
    if isinstance(report, SnvReport):
        return [f"{i}\t{c}" for i, c in enumerate(report.per_step_counts)]
    if isinstance(report, CorrespondenceReport):
        lines = [f"{i}\t{int(ok)}" for i, ok in enumerate(report.per_step_counts_match)]
        lines.append(f"discrepancies\t{len(report.discrepancies)}")
        return lines
    if isinstance(report, StabilityReport):
        lines = [
            f"{k}\t{row.birth_step}\t{row.last_alive_step}"
            for k, row in enumerate(report.rows)
        ]
        lines.append(f"violations\t{len(report.violations)}")
        return lines
    if isinstance(report, BenchmarkResult):
        return [
            f"classical_median_seconds\t{report.classical_median:.6f}",
            f"deformed_median_seconds\t{report.deformed_median:.6f}",
            f"ratio\t{report.ratio:.6f}",
        ]
    raise InputError(f"cannot summarize report of type {type(report).__name__}")


def emit_report(report, format: str = "json", stability: StabilityReport | None = None) -> str:
    """Serialize a report; JSON key order is fixed so output is byte-stable.

    Wall-clock timings are included only for benchmark results, keeping the
    other reports deterministic for identical inputs.
    """
    if format == "json":
        if isinstance(report, SnvReport):
            doc = _snv_dict(report)
            if stability is not None:
                doc["stability"] = _stability_dict(stability)
        elif isinstance(report, CorrespondenceReport):
            doc = _correspondence_dict(report)
        elif isinstance(report, StabilityReport):
            doc = _stability_dict(report)
        elif isinstance(report, BenchmarkResult):
            doc = _benchmark_dict(report)
        else:
            raise InputError(f"cannot serialize report of type {type(report).__name__}")
        return json.dumps(doc, indent=2) + "\n"
    if format == "tsv":
        return "\n".join(_summary_lines(report)) + "\n"
    raise InputError(f"unknown output format {format!r}; use 'json' or 'tsv'")
