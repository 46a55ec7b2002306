import json

import pytest

from gcval.corpus import (
    CorpusParseError,
    entry_to_json,
    load_corpus,
    verify_corpus,
    verify_entry,
)
from gcval.curve_core import on_curve


def test_bundled_corpus_loads(corpus_entries):
    assert len(corpus_entries) >= 14
    labels = [e.label for e in corpus_entries]
    assert len(labels) == len(set(labels))
    for e in corpus_entries:
        assert on_curve(e.model(), e.curve_point())
        assert e.expect and {"kodaira", "cv", "mP", "row"} <= set(e.expect)


def test_corpus_round_trip(corpus_entries):
    for e in corpus_entries:
        blob = entry_to_json(e)
        parsed = json.loads(blob)
        assert parsed["a"] == list(e.a)
        assert parsed["point"] == list(e.point)


def test_parse_errors_carry_line_numbers(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text("# comment\n\n{not json}\n")
    with pytest.raises(CorpusParseError) as info:
        load_corpus(path)
    assert info.value.line == 3

    path.write_text('{"label": "x", "a": ["0","0","0","0","1"], '
                    '"point": ["0"], "prime": 5}\n')
    with pytest.raises(CorpusParseError):
        load_corpus(path)

    path.write_text('{"label": "x", "a": ["0","0","0","0","1"], '
                    '"point": ["2","3"], "prime": 4}\n')
    with pytest.raises(CorpusParseError):
        load_corpus(path)


def test_verify_entry_reports_mismatch_on_corrupted_profile(corpus_entries):
    # corrupting the pinned expectation must flip the entry to failing
    base = corpus_entries[0]
    bad = type(base)(
        label=base.label, a=base.a, point=base.point, prime=base.prime,
        expect=dict(base.expect, cv=base.expect["cv"] + 1), flags=base.flags)
    report = verify_entry(bad, n_max=4)
    assert not report.ok and not report.expect_ok


def test_verify_corpus_parallel_matches_serial(corpus_entries):
    serial = verify_corpus(corpus_entries[:4], n_max=4, jobs=1)
    parallel = verify_corpus(corpus_entries[:4], n_max=4, jobs=4)
    assert json.dumps(serial.to_json()) == json.dumps(parallel.to_json())


def test_split_im_pairs_required_by_coverage(corpus_entries):
    pairs = set()
    for e in corpus_entries:
        if e.expect["row"] == "Im-split":
            report = verify_entry(e, n_max=2)
            assert report.ok
            pairs.add((report.a_p, report.v_delta))
    assert len(pairs) >= 3
    assert any(m % a != 0 for a, m in pairs)      # a_P not dividing m
    assert any(a > 1 and m % a == 0 for a, m in pairs)


def test_torsion_entry_is_reported_not_raised(tmp_path):
    entry_line = json.dumps({
        "label": "torsion", "a": ["0", "0", "0", "0", "1"],
        "point": ["2", "3"], "prime": 5})
    path = tmp_path / "torsion.jsonl"
    path.write_text(entry_line + "\n")
    entries = load_corpus(path)
    report = verify_entry(entries[0], n_max=3)
    assert report.error and "Torsion" in report.error
    assert not report.ok
