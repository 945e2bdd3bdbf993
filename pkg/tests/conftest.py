import numpy as np
import pytest

from paydev.ingest import CommitRecord


def make_record(
    sha="0" * 40,
    author_name="Alice",
    author_email="alice@example.org",
    timestamp_utc=1483347600,
    tz_offset_minutes=0,
    lines_added=1,
    lines_deleted=0,
    message="",
):
    return CommitRecord(
        sha=sha,
        author_name=author_name,
        author_email=author_email,
        timestamp_utc=timestamp_utc,
        tz_offset_minutes=tz_offset_minutes,
        lines_added=lines_added,
        lines_deleted=lines_deleted,
        message=message,
    )


def sha_of(i: int) -> str:
    return f"{i:040x}"


@pytest.fixture
def fixture_commits():
    """The four-commit fixture: Mon 09:00 (loc 10), Mon 14:30 (loc 4),
    Sat 22:00 (loc 6), Sun 02:00 (loc 2), offset 0."""
    spec = [
        (1483347600, 7, 3),  # Mon 2017-01-02 09:00
        (1483367400, 3, 1),  # Mon 2017-01-02 14:30
        (1483826400, 4, 2),  # Sat 2017-01-07 22:00
        (1483840800, 1, 1),  # Sun 2017-01-08 02:00
    ]
    return [
        make_record(sha=sha_of(i), timestamp_utc=ts, lines_added=a, lines_deleted=d)
        for i, (ts, a, d) in enumerate(spec)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
