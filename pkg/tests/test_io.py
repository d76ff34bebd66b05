import json

import numpy as np
import pytest

from snvrips import (
    InputError,
    classical_snv,
    deformed_snv,
    emit_report,
    parse_matrix,
    parse_sequences,
    stability_report,
    verify_correspondence,
)

from helpers import apex_square, square_labels, square_space

FASTA = """\
>s1
ACGT
>s2
ACGA
>s3
AGGA
"""

META = "id\ttime\ns1\t0\ns2\t0\ns3\t1\n"


def test_parse_sequences_happy_path():
    bundle = parse_sequences(FASTA, META)
    assert bundle.kind == "sequences"
    assert bundle.space.point_ids == ("s1", "s2", "s3")
    assert bundle.labels.m == 1
    assert bundle.labels.by_id == {"s1": 0, "s2": 0, "s3": 1}
    assert bundle.space.dist[0, 1] == 1
    assert bundle.space.dist[0, 2] == 2
    assert bundle.merges == {}


def test_parse_sequences_comma_metadata_and_multiline_records():
    fasta = ">a\nAC\nGT\n>b\nACGA\n"
    meta = "id,time\na,0\nb,2\n"
    bundle = parse_sequences(fasta, meta)
    assert bundle.space.dist[0, 1] == 1  # chunks joined before comparison
    assert bundle.labels.m == 2


def test_parse_sequences_merges_identical_records():
    fasta = ">s1\nACGT\n>s2\nACGT\n>s3\nAAAA\n"
    meta = "id\ttime\ns1\t2\ns2\t0\ns3\t1\n"
    bundle = parse_sequences(fasta, meta)
    assert bundle.space.point_ids == ("s1", "s3")
    assert bundle.merges == {"s2": "s1"}
    assert bundle.labels.of("s1") == 0  # smallest time in the merged group
    assert any("merged s2 into s1" in note for note in bundle.notes)


def test_parse_sequences_horizon():
    bundle = parse_sequences(FASTA, META, horizon=5)
    assert bundle.labels.m == 5
    with pytest.raises(InputError, match="only extend"):
        parse_sequences(FASTA, META, horizon=0)


def test_parse_sequences_errors():
    with pytest.raises(InputError, match="no metadata row for sequence id 's3'"):
        parse_sequences(FASTA, "id\ttime\ns1\t0\ns2\t0\n")
    with pytest.raises(InputError, match="unknown sequence id 'ghost'"):
        parse_sequences(FASTA, META + "ghost\t1\n")
    with pytest.raises(InputError, match="duplicate metadata row"):
        parse_sequences(FASTA, META + "s1\t1\n")
    with pytest.raises(InputError, match="not an integer"):
        parse_sequences(FASTA, "id\ttime\ns1\tzero\ns2\t0\ns3\t1\n")
    with pytest.raises(InputError, match="negative time"):
        parse_sequences(FASTA, "id\ttime\ns1\t-1\ns2\t0\ns3\t1\n")
    with pytest.raises(InputError, match="'id' and 'time'"):
        parse_sequences(FASTA, "name\tdate\ns1\t0\n")
    with pytest.raises(InputError, match="equal length"):
        parse_sequences(">a\nACG\n>b\nAC\n", "id\ttime\na\t0\nb\t0\n")
    with pytest.raises(InputError, match="before any '>'"):
        parse_sequences("ACGT\n", META)
    with pytest.raises(InputError, match="empty sequence"):
        parse_sequences(">a\n>b\nACGT\n", "id\ttime\na\t0\nb\t0\n")
    with pytest.raises(InputError, match="header without an id"):
        parse_sequences(">\nACGT\n", META)
    with pytest.raises(InputError, match="no sequence records"):
        parse_sequences("", META)


def test_parse_matrix_unit_triangle():
    bundle = parse_matrix("1\n1 1\n", "0\n0\n0\n")
    assert bundle.kind == "matrix"
    assert bundle.space.point_ids == ("p0", "p1", "p2")
    assert np.array_equal(
        bundle.space.dist, np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    )
    assert bundle.labels.m == 0


def test_parse_matrix_zero_entry_merges():
    bundle = parse_matrix("0\n2 2\n", "3\n1\n0\n")
    assert bundle.space.point_ids == ("p0", "p2")
    assert bundle.merges == {"p1": "p0"}
    assert bundle.labels.of("p0") == 1  # smaller of the merged labels
    assert bundle.labels.m == 3  # horizon keeps the original maximum
    assert any("merged p1 into p0" in note for note in bundle.notes)


def test_parse_matrix_errors():
    with pytest.raises(InputError, match="2 rows but 4 time entries"):
        parse_matrix("1\n1 1\n", "0\n0\n0\n0\n")
    with pytest.raises(InputError, match="expected 2 entries, got 1"):
        parse_matrix("1\n1\n", "0\n0\n0\n")
    with pytest.raises(InputError, match="negative distance"):
        parse_matrix("-1\n", "0\n0\n")
    with pytest.raises(InputError, match="not an integer"):
        parse_matrix("x\n", "0\n0\n")
    with pytest.raises(InputError, match="times line 2.*not an integer"):
        parse_matrix("1\n", "0\nlater\n")
    with pytest.raises(InputError, match="negative time"):
        parse_matrix("1\n", "0\n-2\n")
    with pytest.raises(InputError, match="time vector is empty"):
        parse_matrix("1\n", "")


def test_emit_classical_square_json():
    report = classical_snv(square_space(), square_labels())
    text = emit_report(report, "json")
    doc = json.loads(text)
    assert doc["mode"] == "classical"
    assert doc["per_step_counts"] == [1]
    assert doc["point_ids"] == ["a", "b", "c", "d"]
    assert len(doc["bars"]) == 1
    rep = doc["bars"][0]["representative"]
    assert sorted(edge[:2] for edge in rep) == [
        ["a", "b"], ["a", "d"], ["b", "c"], ["c", "d"]
    ]
    assert doc["bars"][0]["birth_value"] == 1
    assert doc["bars"][0]["death_value"] == 2


def test_emitted_bars_carry_both_views():
    space, labels = apex_square()
    doc = json.loads(emit_report(deformed_snv(space, labels)))
    bar = doc["bars"][0]
    # step-indexed and scaled-value fields both present on every bar
    assert bar["birth_step"] == 0 and bar["death_step"] == 1
    assert bar["birth_value"] == 10 and bar["death_value"] == 11
    assert bar["alive_through_horizon"] is False


def test_emit_is_byte_stable():
    space, labels = apex_square()
    first = emit_report(deformed_snv(space, labels), "json")
    second = emit_report(deformed_snv(space, labels), "json")
    assert first == second
    cl = emit_report(classical_snv(space, labels), "json")
    assert cl == emit_report(classical_snv(space, labels), "json")


def test_emit_correspondence():
    space, labels = apex_square()
    verdict = verify_correspondence(
        classical_snv(space, labels), deformed_snv(space, labels)
    )
    doc = json.loads(emit_report(verdict))
    assert doc["mode"] == "correspondence"
    assert doc["discrepancies"] == []
    assert doc["matched_deaths"] == [[0, 1]]
    tsv = emit_report(verdict, "tsv")
    assert tsv == "0\t1\n1\t1\ndiscrepancies\t0\n"


def test_emit_tsv_summary():
    space, labels = apex_square()
    assert emit_report(classical_snv(space, labels), "tsv") == "0\t1\n1\t0\n"


def test_emit_stability_nested_and_standalone():
    space, labels = apex_square()
    report = deformed_snv(space, labels)
    stab = stability_report(report)
    doc = json.loads(emit_report(report, "json", stability=stab))
    assert doc["stability"]["ok"] is True
    assert doc["stability"]["rows"][0]["member_by_step"] == [True, False]
    alone = json.loads(emit_report(stab))
    assert alone["mode"] == "stability"
    tsv = emit_report(stab, "tsv")
    assert tsv == "0\t0\t0\nviolations\t0\n"


def test_emit_rejects_unknown_formats_and_types():
    space, labels = apex_square()
    report = classical_snv(space, labels)
    with pytest.raises(InputError, match="unknown output format"):
        emit_report(report, "xml")
    with pytest.raises(InputError, match="cannot serialize"):
        emit_report({"not": "a report"})


def test_parse_then_emit_round_trip_is_stable():
    bundle = parse_matrix("1\n2 1\n1 2 1\n", "0\n0\n1\n1\n")
    first = emit_report(deformed_snv(bundle.space, bundle.labels))
    second = emit_report(
        deformed_snv(
            parse_matrix("1\n2 1\n1 2 1\n", "0\n0\n1\n1\n").space,
            parse_matrix("1\n2 1\n1 2 1\n", "0\n0\n1\n1\n").labels,
        )
    )
    assert first == second
