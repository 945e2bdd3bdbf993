"""Per-developer activity metrics and per-commit feature vectors.

Everything is computed in the commit's local time (timestamp shifted by its
embedded offset). Medians of even-length sequences are the mean of the two
middle values; "regular activity" start/end are nearest-rank 10th/90th
percentiles of weekday commit hours.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from statistics import median

import numpy as np

from paydev.ingest import to_local

FEATURE_COLUMNS = [
    "period",
    "days",
    "weeks",
    "timediff",
    "commits",
    "loc_per_commit",
    "weekend",
    "night",
    "morning",
    "afternoon",
    "evening",
    "office",
    "most_active_hour",
    "beginning_regular",
    "length_regular",
    "end_regular",
]

VOLUME_COLUMNS = {"commits", "days", "weeks", "period"}

COMMIT_FEATURE_COLUMNS = [
    "weekend_flag",
    "hour",
    "night_flag",
    "morning_flag",
    "afternoon_flag",
    "evening_flag",
    "office_flag",
    "loc",
    "time_since_prev",
    "dev_weekend",
    "dev_night",
    "dev_morning",
    "dev_afternoon",
    "dev_evening",
    "dev_office",
]


@dataclass(frozen=True)
class DeveloperFeatures:
    period: int
    days: int
    weeks: int
    timediff: float
    commits: int
    loc_per_commit: float
    weekend: float
    night: float
    morning: float
    afternoon: float
    evening: float
    office: float
    most_active_hour: int
    beginning_regular: int
    length_regular: int
    end_regular: int

    def as_row(self) -> list[float]:
        return [float(getattr(self, name)) for name in FEATURE_COLUMNS]


def _sorted_commits(commits):
    return sorted(commits, key=lambda c: (c.timestamp_utc, c.sha))


def _nearest_rank(sorted_values, pct):
    k = max(1, -(-len(sorted_values) * pct // 100))  # ceil
    return sorted_values[k - 1]


def developer_features(commits) -> DeveloperFeatures:
    """The 16 activity metrics for one identity's commits."""
    commits = _sorted_commits(commits)
    if not commits:
        raise ValueError("developer_features requires at least one commit")
    locals_ = [to_local(c.timestamp_utc, c.tz_offset_minutes) for c in commits]
    n = len(commits)

    dates = [lt.date for lt in locals_]
    hours = [lt.hour for lt in locals_]

    deltas = [
        (b.timestamp_utc - a.timestamp_utc) / 86400.0 for a, b in zip(commits, commits[1:])
    ]
    locs = [
        c.lines_added + c.lines_deleted
        for c in commits
        if c.lines_added >= 0 and c.lines_deleted >= 0
    ]

    weekday_hours = sorted(
        lt.hour for lt in locals_ if not lt.is_weekend
    )
    if weekday_hours:
        beginning = _nearest_rank(weekday_hours, 10)
        end = _nearest_rank(weekday_hours, 90)
    else:
        beginning = end = 0

    hour_counts = Counter(hours)
    most_active = max(range(24), key=lambda h: (hour_counts.get(h, 0), -h))

    return DeveloperFeatures(
        period=(max(dates) - min(dates)).days,
        days=len(set(dates)),
        weeks=len({(lt.iso_year, lt.iso_week) for lt in locals_}),
        timediff=float(median(deltas)) if deltas else 0.0,
        commits=n,
        loc_per_commit=float(median(locs)) if locs else 0.0,
        weekend=sum(lt.is_weekend for lt in locals_) / n,
        night=sum(0 <= h < 6 for h in hours) / n,
        morning=sum(6 <= h < 12 for h in hours) / n,
        afternoon=sum(12 <= h < 18 for h in hours) / n,
        evening=sum(18 <= h < 24 for h in hours) / n,
        office=sum(8 <= h < 17 for h in hours) / n,
        most_active_hour=most_active,
        beginning_regular=beginning,
        length_regular=end - beginning,
        end_regular=end,
    )


def compute_features(identities, records_by_sha) -> dict[str, DeveloperFeatures]:
    """DeveloperFeatures per identity id."""
    return {
        ident.id: developer_features([records_by_sha[sha] for sha in ident.commit_shas])
        for ident in identities
    }


def matrix_columns(mode: str) -> list[str]:
    if mode == "all":
        return list(FEATURE_COLUMNS)
    if mode == "no_volume":
        return [c for c in FEATURE_COLUMNS if c not in VOLUME_COLUMNS]
    raise ValueError(f"unknown feature mode {mode!r}")


def feature_matrix(features_by_id, mode="all"):
    """(X, row ids, column names); rows sorted by identity id."""
    columns = matrix_columns(mode)
    ids = sorted(features_by_id)
    rows = []
    for ident_id in ids:
        feats = features_by_id[ident_id]
        rows.append([float(getattr(feats, c)) for c in columns])
    X = np.array(rows, dtype=np.float64).reshape(len(ids), len(columns))
    return X, ids, columns


def commit_features(commits, aggregates: DeveloperFeatures):
    """Per-commit vectors for one identity, aligned with the commits sorted
    by (timestamp, sha). Returns (X, shas, column names)."""
    commits = _sorted_commits(commits)
    rows = []
    prev_ts = None
    for c in commits:
        lt = to_local(c.timestamp_utc, c.tz_offset_minutes)
        h = lt.hour
        if c.lines_added >= 0 and c.lines_deleted >= 0:
            loc = float(c.lines_added + c.lines_deleted)
        else:
            loc = aggregates.loc_per_commit
        if prev_ts is None:
            since = aggregates.timediff
        else:
            since = (c.timestamp_utc - prev_ts) / 86400.0
        prev_ts = c.timestamp_utc
        rows.append(
            [
                float(lt.is_weekend),
                float(h),
                float(0 <= h < 6),
                float(6 <= h < 12),
                float(12 <= h < 18),
                float(18 <= h < 24),
                float(8 <= h < 17),
                loc,
                since,
                aggregates.weekend,
                aggregates.night,
                aggregates.morning,
                aggregates.afternoon,
                aggregates.evening,
                aggregates.office,
            ]
        )
    X = np.array(rows, dtype=np.float64).reshape(len(commits), len(COMMIT_FEATURE_COLUMNS))
    return X, [c.sha for c in commits], list(COMMIT_FEATURE_COLUMNS)


def write_features_csv(features_by_id, fileobj, mode="all") -> None:
    """The features CSV: identity column plus the metrics, floats with
    6 decimal digits."""
    columns = matrix_columns(mode)
    fileobj.write("identity," + ",".join(columns) + "\n")
    for ident_id in sorted(features_by_id):
        feats = features_by_id[ident_id]
        cells = []
        for name in columns:
            value = getattr(feats, name)
            cells.append(str(value) if isinstance(value, int) else f"{value:.6f}")
        fileobj.write(ident_id + "," + ",".join(cells) + "\n")


def read_features_csv(fileobj):
    """Read a features CSV back into (X, ids, columns)."""
    import csv

    from paydev.errors import SchemaError

    reader = csv.reader(fileobj)
    header = next(reader, None)
    if not header or header[0] != "identity":
        raise SchemaError("features CSV must start with an 'identity' column", line=1)
    columns = header[1:]
    ids, rows = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(columns) + 1:
            raise SchemaError("wrong number of columns", line=lineno)
        ids.append(row[0])
        try:
            rows.append([float(v) for v in row[1:]])
        except ValueError:
            raise SchemaError("non-numeric feature value", line=lineno) from None
    X = np.array(rows, dtype=np.float64).reshape(len(ids), len(columns))
    return X, ids, columns
