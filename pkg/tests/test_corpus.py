import io
from datetime import date

import pytest

from litgraph.corpus import (
    append_ledger,
    emit_jsonl,
    parse_article_file,
    parse_pub_date,
    pending_update_files,
    read_ledger,
)
from litgraph.errors import CorpusFormatError

TODAY = date(2024, 6, 1)


def parse(text, name="u.jsonl"):
    return parse_article_file(io.StringIO(text), name, TODAY)


def test_pub_date_full_and_partial():
    assert parse_pub_date("2021-03-04") == date(2021, 3, 4)
    assert parse_pub_date("2021-03") == date(2021, 3, 1)
    assert parse_pub_date("2021") == date(2021, 1, 1)


@pytest.mark.parametrize("bad", ["", "21-3", "2021-13-01", "2021-02-30", "x"])
def test_pub_date_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse_pub_date(bad)


def test_jsonl_happy_path():
    text = (
        '{"id": "100001", "title": "T one", "abstract": "A one.", '
        '"pub_date": "2020-05-06", "citation": "Doe 2020"}\n'
        '{"id": "100002", "title": "T two", "abstract": "", "pub_date": "2021"}\n'
    )
    batch = parse(text)
    assert batch.record_count == 2
    assert batch.skipped_count == 0
    first, second = batch.records
    assert first.article_id == "100001"
    assert first.title == "T one"
    assert first.pub_date == date(2020, 5, 6)
    assert first.citation == "Doe 2020"
    assert first.source_file == "u.jsonl"
    assert first.fetch_date == TODAY
    assert second.abstract == ""
    assert second.pub_date == date(2021, 1, 1)


def test_malformed_lines_are_counted_not_fatal():
    text = (
        '{"id": "1", "title": "ok", "pub_date": "2020"}\n'
        "not json at all\n"
        '{"title": "missing id", "pub_date": "2020"}\n'
        '{"id": "2", "title": "", "pub_date": "2020"}\n'
        '{"id": "3", "title": "no date"}\n'
        '{"id": "4", "title": "bad date", "pub_date": "20x0"}\n'
    )
    batch = parse(text)
    assert batch.record_count == 1
    assert batch.skipped_count == 5


def test_file_with_zero_good_records_is_fatal():
    with pytest.raises(CorpusFormatError):
        parse('{"title": "no id", "pub_date": "2020"}\n')


def test_empty_file_yields_empty_batch():
    batch = parse("")
    assert batch.record_count == 0
    assert batch.skipped_count == 0


def test_xml_subset_is_autodetected():
    text = (
        "<articles>"
        "<article><id>7</id><title>Xml title</title>"
        "<abstract>Body.</abstract><pub_date>2019-02</pub_date>"
        "<citation>Roe 2019</citation></article>"
        "<article><id>8</id><title>Second</title><pub_date>2020</pub_date></article>"
        "</articles>"
    )
    batch = parse(text, "u.xml")
    assert [r.article_id for r in batch.records] == ["7", "8"]
    assert batch.records[0].abstract == "Body."
    assert batch.records[0].citation == "Roe 2019"
    assert batch.records[1].pub_date == date(2020, 1, 1)


def test_broken_xml_is_fatal():
    with pytest.raises(CorpusFormatError):
        parse("<articles><article></articles>", "u.xml")


def test_bytes_stream_is_decoded():
    raw = io.BytesIO(
        '{"id": "9", "title": "Café au lait", "pub_date": "2020"}\n'.encode("utf-8"))
    batch = parse_article_file(raw, "b.jsonl", TODAY)
    assert batch.records[0].title == "Café au lait"


def test_emit_jsonl_round_trips():
    text = (
        '{"id": "1", "title": "One", "abstract": "A.", "pub_date": "2020-01-02", '
        '"citation": "C"}\n'
    )
    batch = parse(text)
    again = parse(emit_jsonl(batch.records))
    assert [(r.article_id, r.title, r.abstract, r.pub_date, r.citation)
            for r in again.records] == \
           [(r.article_id, r.title, r.abstract, r.pub_date, r.citation)
            for r in batch.records]


def test_ledger_round_trip(tmp_path):
    path = tmp_path / "ledger"
    assert read_ledger(path) == set()
    append_ledger(path, "a.jsonl")
    append_ledger(path, "b.jsonl")
    assert read_ledger(path) == {"a.jsonl", "b.jsonl"}


def test_pending_files_sorted_and_filtered(tmp_path):
    for name in ("c.jsonl", "a.jsonl", "b.jsonl"):
        (tmp_path / name).write_text("{}")
    (tmp_path / "subdir").mkdir()
    assert pending_update_files(tmp_path, set()) == ["a.jsonl", "b.jsonl", "c.jsonl"]
    assert pending_update_files(tmp_path, {"b.jsonl"}) == ["a.jsonl", "c.jsonl"]
