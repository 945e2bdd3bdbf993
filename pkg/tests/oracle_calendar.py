"""Civil-calendar oracle, independent of datetime.

Implements days<->civil conversion, weekday and ISO-8601 week from first
principles (Gregorian-cycle arithmetic) so the package's timestamp handling
can be checked against a second, unrelated code path.
"""


def days_from_civil(y, m, d):
    """Days since 1970-01-01 for a proleptic Gregorian date."""
    y -= m <= 2
    era = (y if y >= 0 else y - 399) // 400
    yoe = y - era * 400
    doy = (153 * (m + (-3 if m > 2 else 9)) + 2) // 5 + d - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe - 719468


def civil_from_days(z):
    """Inverse of days_from_civil: (year, month, day)."""
    z += 719468
    era = (z if z >= 0 else z - 146096) // 146097
    doe = z - era * 146097
    yoe = (doe - doe // 1460 + doe // 36524 - doe // 146096) // 365
    y = yoe + era * 400
    doy = doe - (365 * yoe + yoe // 4 - yoe // 100)
    mp = (5 * doy + 2) // 153
    d = doy - (153 * mp + 2) // 5 + 1
    m = mp + (3 if mp < 10 else -9)
    return y + (m <= 2), m, d


def weekday_mon0(z):
    """Day of week for days-since-epoch z, Monday=0 .. Sunday=6."""
    return (z + 3) % 7


def iso_week(y, m, d):
    """ISO-8601 (iso_year, week_number) of a civil date."""
    z = days_from_civil(y, m, d)
    thursday = z + (3 - weekday_mon0(z))
    ty, _, _ = civil_from_days(thursday)
    jan1 = days_from_civil(ty, 1, 1)
    return ty, (thursday - jan1) // 7 + 1


def local_civil(ts_utc, offset_minutes):
    """Decompose a UTC instant shifted by a fixed offset into civil fields.

    Returns (year, month, day, hour, minute, weekday_mon0, iso_year, iso_week).
    """
    shifted = ts_utc + 60 * offset_minutes
    z = shifted // 86400
    secs = shifted - z * 86400
    y, m, d = civil_from_days(z)
    iy, iw = iso_week(y, m, d)
    return y, m, d, secs // 3600, (secs % 3600) // 60, weekday_mon0(z), iy, iw
