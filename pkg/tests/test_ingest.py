import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_record, sha_of
from oracle_calendar import local_civil
from paydev.errors import DuplicateShaError, ParseError, SchemaError
from paydev.ingest import (
    CommitRecord,
    parse_git_log,
    read_canonical,
    to_local,
    write_canonical,
)

SHA_A = "a" * 40
SHA_B = "b" * 40


def record_bytes(sha, name="Alice", email="A@X.COM", at=1483348800,
                 ad="2017-01-02 14:00:00 +0500", numstat=""):
    header = f"\x1e{sha}\x1f{name}\x1f{email}\x1f{at}\x1f{ad}"
    return (header + "\n" + numstat).encode("utf-8")


class TestParseGitLog:
    def test_documented_example(self):
        data = record_bytes(SHA_A, numstat="3\t1\tsrc/a.c\n")
        (rec,) = parse_git_log(data)
        assert rec.sha == SHA_A
        assert rec.author_name == "Alice"
        assert rec.author_email == "a@x.com"
        assert rec.timestamp_utc == 1483348800
        assert rec.tz_offset_minutes == 300
        assert rec.lines_added == 3
        assert rec.lines_deleted == 1
        assert rec.message == ""

    def test_empty_stream(self):
        assert parse_git_log(b"") == []

    def test_binary_only_numstat(self):
        data = record_bytes(SHA_A, numstat="-\t-\timage.png\n")
        (rec,) = parse_git_log(data)
        assert rec.lines_added == -1
        assert rec.lines_deleted == -1

    def test_mixed_numstat_ignores_binary(self):
        data = record_bytes(SHA_A, numstat="5\t2\ta.c\n-\t-\timg.png\n2\t0\tb.c\n")
        (rec,) = parse_git_log(data)
        assert (rec.lines_added, rec.lines_deleted) == (7, 2)

    def test_no_numstat_is_zero(self):
        (rec,) = parse_git_log(record_bytes(SHA_A))
        assert (rec.lines_added, rec.lines_deleted) == (0, 0)

    def test_multiple_records_in_order(self):
        data = record_bytes(SHA_A) + b"\n" + record_bytes(SHA_B, at=99)
        recs = parse_git_log(data)
        assert [r.sha for r in recs] == [SHA_A, SHA_B]

    def test_negative_offset(self):
        (rec,) = parse_git_log(record_bytes(SHA_A, ad="2017-01-03 09:10:11 -0130"))
        assert rec.tz_offset_minutes == -90

    def test_spaces_accepted_in_numstat(self):
        (rec,) = parse_git_log(record_bytes(SHA_A, numstat="3 1 src/a.c\n"))
        assert (rec.lines_added, rec.lines_deleted) == (3, 1)

    def test_duplicate_sha_rejected(self):
        data = record_bytes(SHA_A) + b"\n" + record_bytes(SHA_A)
        with pytest.raises(DuplicateShaError):
            parse_git_log(data)

    def test_malformed_header_names_location(self):
        data = record_bytes(SHA_A) + b"\n\x1enot-a-header"
        with pytest.raises(ParseError) as exc:
            parse_git_log(data)
        assert "record 1" in str(exc.value)
        assert "byte" in str(exc.value)

    def test_invalid_offset_string(self):
        with pytest.raises(ParseError):
            parse_git_log(record_bytes(SHA_A, ad="2017-01-02 14:00:00 +05x0"))

    def test_offset_out_of_range(self):
        with pytest.raises(ParseError):
            parse_git_log(record_bytes(SHA_A, ad="2017-01-02 14:00:00 +2500"))

    def test_garbage_before_first_sentinel(self):
        with pytest.raises(ParseError):
            parse_git_log(b"junk" + record_bytes(SHA_A))

    def test_real_git_layout(self):
        # byte-for-byte layout of git --pretty=format:...%ad --numstat output
        data = (
            b"\x1e" + SHA_A.encode() + b"\x1fT\x1ft@t\x1f1483440011\x1f"
            b"2017-01-03 09:10:11 -0130\n1\t0\ta.c\n\n"
            b"\x1e" + SHA_B.encode() + b"\x1fT\x1ft@t\x1f1483347600\x1f"
            b"2017-01-02 14:00:00 +0500\n1\t0\ta.c\n-\t-\timg.bin\n"
        )
        recs = parse_git_log(data)
        assert len(recs) == 2
        assert recs[0].tz_offset_minutes == -90
        assert recs[1].lines_added == 1

    @given(st.binary(max_size=400))
    @settings(max_examples=300, deadline=None)
    def test_never_raises_unstructured(self, blob):
        try:
            result = parse_git_log(blob)
        except (ParseError, DuplicateShaError):
            return
        assert isinstance(result, list)


class TestToLocal:
    def test_positive_offset(self):
        lt = to_local(1483255800, 120)  # 2017-01-01T07:30:00Z
        assert (lt.date.isoformat(), lt.hour, lt.weekday) == ("2017-01-01", 9, 6)

    def test_zero_offset_is_utc(self):
        lt = to_local(1483255800, 0)
        assert (lt.hour, lt.minute) == (7, 30)

    def test_negative_offset_crosses_midnight(self):
        lt = to_local(1483315200, -60)  # 2017-01-02T00:00:00Z
        assert lt.date.isoformat() == "2017-01-01"
        assert lt.hour == 23
        assert lt.weekday == 6  # Sunday
        assert (lt.iso_year, lt.iso_week) == (2016, 52)

    def test_offset_range_enforced(self):
        with pytest.raises(ValueError):
            to_local(0, 1441)

    @given(
        st.integers(min_value=-2_000_000_000, max_value=4_000_000_000),
        st.integers(min_value=-1440, max_value=1440),
    )
    @settings(max_examples=1500, deadline=None)
    def test_matches_calendar_oracle(self, ts, off):
        lt = to_local(ts, off)
        y, m, d, hour, minute, weekday, iso_year, iso_week = local_civil(ts, off)
        assert (lt.date.year, lt.date.month, lt.date.day) == (y, m, d)
        assert (lt.hour, lt.minute, lt.weekday) == (hour, minute, weekday)
        assert (lt.iso_year, lt.iso_week) == (iso_year, iso_week)

    @given(
        st.integers(min_value=-2_000_000_000, max_value=4_000_000_000),
        st.integers(min_value=-1440, max_value=1440),
    )
    @settings(max_examples=500, deadline=None)
    def test_hour_equals_shifted_utc(self, ts, off):
        assert to_local(ts, off).hour == to_local(ts + 60 * off, 0).hour


_record_strategy = st.builds(
    CommitRecord,
    sha=st.integers(min_value=0, max_value=2**80).map(lambda i: f"{i:040x}"[-40:]),
    author_name=st.text(max_size=30),
    author_email=st.text(max_size=30).map(str.lower),
    timestamp_utc=st.integers(min_value=-10**10, max_value=10**10),
    tz_offset_minutes=st.integers(min_value=-1440, max_value=1440),
    lines_added=st.integers(min_value=-1, max_value=10**6),
    lines_deleted=st.integers(min_value=-1, max_value=10**6),
    message=st.text(max_size=100),
)


class TestCanonical:
    def test_one_record_one_line_exact_keys(self):
        buf = io.StringIO()
        write_canonical([make_record()], buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 1
        assert set(json.loads(lines[0])) == {
            "sha",
            "author_name",
            "author_email",
            "timestamp_utc",
            "tz_offset_minutes",
            "lines_added",
            "lines_deleted",
            "message",
        }

    @given(st.lists(_record_strategy, max_size=25, unique_by=lambda r: r.sha))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_identity(self, records):
        buf = io.StringIO()
        write_canonical(records, buf)
        buf.seek(0)
        assert read_canonical(buf) == records

    def test_unknown_field_names_field_and_line(self):
        buf = io.StringIO()
        write_canonical([make_record()], buf)
        obj = json.loads(buf.getvalue())
        obj["foo"] = 1
        with pytest.raises(SchemaError) as exc:
            read_canonical(io.StringIO(json.dumps(obj) + "\n"))
        assert "foo" in str(exc.value)
        assert "line 1" in str(exc.value)

    def test_type_mismatch_reports_line(self):
        good = io.StringIO()
        write_canonical([make_record(), make_record(sha=sha_of(1))], good)
        lines = good.getvalue().splitlines()
        obj = json.loads(lines[1])
        obj["timestamp_utc"] = "soon"
        bad = lines[0] + "\n" + json.dumps(obj) + "\n"
        with pytest.raises(SchemaError) as exc:
            read_canonical(io.StringIO(bad))
        assert "line 2" in str(exc.value)

    def test_uppercase_email_rejected(self):
        buf = io.StringIO()
        write_canonical([make_record()], buf)
        obj = json.loads(buf.getvalue())
        obj["author_email"] = "A@X.COM"
        with pytest.raises(SchemaError):
            read_canonical(io.StringIO(json.dumps(obj) + "\n"))

    def test_duplicate_sha_rejected(self):
        buf = io.StringIO()
        write_canonical([make_record(), make_record()], buf)
        buf.seek(0)
        with pytest.raises(DuplicateShaError):
            read_canonical(buf)
