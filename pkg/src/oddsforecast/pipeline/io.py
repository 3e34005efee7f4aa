"""CSV ingestion and export.

Station files carry ``timestamp,temperature``; ensemble files carry
``launch,lead_hours,member_id,temperature`` with member id ``control`` for the
control run. Timestamps are ISO-8601 UTC with a trailing ``Z`` and floats are
written with ``repr`` so a write/read round trip is bit-exact.
"""
import csv
import io as _io
from collections import defaultdict

import numpy as np

from ..errors import IngestionError
from .series import EnsembleForecast, StationSeries, to_datetime64

STATION_HEADER = ("timestamp", "temperature")
ENSEMBLE_HEADER = ("launch", "lead_hours", "member_id", "temperature")
CONTROL_ID = "control"


def format_timestamp(t):
    return str(np.datetime64(t, "s")) + "Z"


def _float(text, where):
    try:
        return float(text)
    except ValueError as exc:
        raise IngestionError(f"{where}: not a number: {text!r}") from exc


def _open_text(src):
    if hasattr(src, "read"):
        return src, False
    return open(src, newline="", encoding="utf-8"), True


def _rows(src, header):
    fh, close = _open_text(src)
    try:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None or tuple(c.strip() for c in first) != header:
            raise IngestionError(f"expected header {','.join(header)}, got {first!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestionError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
            yield lineno, row
    finally:
        if close:
            fh.close()


def read_station_csv(src):
    times, temps = [], []
    for lineno, (ts, temp) in _rows(src, STATION_HEADER):
        times.append(to_datetime64(ts))
        temps.append(_float(temp, f"line {lineno}"))
    return StationSeries(np.array(times, dtype="datetime64[s]"), np.array(temps))


def write_station_csv(series, dst=None):
    buf = _io.StringIO() if dst is None else None
    fh, close = (buf, False) if dst is None else _open_write(dst)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATION_HEADER)
        for t, y in zip(series.times, series.temperatures):
            w.writerow((format_timestamp(t), repr(float(y))))
    finally:
        if close:
            fh.close()
    return buf.getvalue() if buf is not None else None


def _open_write(dst):
    if hasattr(dst, "write"):
        return dst, False
    return open(dst, "w", newline="", encoding="utf-8"), True


def read_ensemble_csv(src):
    """Read every launch in an ensemble file, ordered by launch time."""
    table = defaultdict(lambda: defaultdict(dict))
    for lineno, (launch, lead, mid, temp) in _rows(src, ENSEMBLE_HEADER):
        lt = to_datetime64(launch)
        table[lt][mid.strip()][_float(lead, f"line {lineno}")] = _float(temp, f"line {lineno}")
    out = []
    for launch in sorted(table):
        by_member = table[launch]
        if CONTROL_ID not in by_member:
            raise IngestionError(f"launch {format_timestamp(launch)}: no control member")
        ctrl = by_member.pop(CONTROL_ID)
        lead = sorted(ctrl)
        ids = sorted(by_member, key=lambda s: (len(s), s))
        for mid in ids:
            if sorted(by_member[mid]) != lead:
                raise IngestionError(
                    f"launch {format_timestamp(launch)}: member {mid} lead times differ from control"
                )
        members = np.array([[by_member[mid][h] for h in lead] for mid in ids])
        out.append(
            EnsembleForecast(launch, np.array(lead), members, np.array([ctrl[h] for h in lead]), tuple(ids))
        )
    return out


def write_ensemble_csv(forecasts, dst=None):
    buf = _io.StringIO() if dst is None else None
    fh, close = (buf, False) if dst is None else _open_write(dst)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ENSEMBLE_HEADER)
        for ens in forecasts:
            stamp = format_timestamp(ens.launch_time)
            for i, lead in enumerate(ens.lead_hours):
                w.writerow((stamp, repr(float(lead)), CONTROL_ID, repr(float(ens.control[i]))))
                for mid, row in zip(ens.member_ids, ens.members):
                    w.writerow((stamp, repr(float(lead)), mid, repr(float(row[i]))))
    finally:
        if close:
            fh.close()
    return buf.getvalue() if buf is not None else None
