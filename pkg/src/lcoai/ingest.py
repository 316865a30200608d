"""Telemetry log parsing and valid-inference counting.

The denominator of the levelized cost only counts productive, traceable
outputs: health checks, background processes, and administrative queries are
excluded, and (by the strict default) so are errored inference calls.

Wire format: newline-delimited UTF-8 JSON objects with required string fields
"ts" (RFC 3339), "kind", and "status"; unknown extra fields are ignored.
Parsing is streaming and single-pass. Counting may be partitioned across
workers and merged, since tallies add up record by record.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable, Optional, Union

from .cost_core import Horizon
from .errors import LogParseError


class RecordKind(Enum):
    """Closed taxonomy of telemetry call kinds; anything else is a parse error."""

    INFERENCE = "inference"
    HEALTH_CHECK = "health_check"
    ADMIN = "admin"
    BACKGROUND = "background"


class RecordStatus(Enum):
    OK = "ok"
    ERROR = "error"


@dataclass(frozen=True, slots=True)
class InferenceRecord:
    """One telemetry entry: when it happened, what made it, how it ended."""

    timestamp: datetime
    kind: RecordKind
    status: RecordStatus

    def __post_init__(self):
        if self.timestamp.tzinfo is None:
            raise ValueError("record timestamps must be timezone-aware")


@dataclass(frozen=True, slots=True)
class ParseResult:
    """Parsed records plus, in lenient mode, the lines that were skipped."""

    records: tuple
    skipped: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "skipped", tuple(self.skipped))


@dataclass(frozen=True, slots=True)
class VolumeCount:
    """Classification tallies for a batch of records.

    ``valid``, ``excluded_nonproductive``, ``excluded_failed``, and
    ``out_of_range`` are disjoint and partition the input exactly.
    ``period_buckets`` maps 0-based period indices (aligned with
    VolumeProjection entries) to valid counts; bucket totals equal ``valid``.
    """

    valid: int
    excluded_nonproductive: int
    excluded_failed: int
    out_of_range: int
    period_buckets: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return (self.valid + self.excluded_nonproductive
                + self.excluded_failed + self.out_of_range)


def parse_rfc3339(text: str) -> datetime:
    """Parse an RFC 3339 timestamp (offset required) to a UTC datetime."""
    # 3.10's fromisoformat rejects a literal Z suffix
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None:
        raise ValueError("missing UTC offset")
    return parsed.astimezone(timezone.utc)


def _parse_line(raw: Union[bytes, str], line_number: int) -> Optional[InferenceRecord]:
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise LogParseError(line_number, f"not valid UTF-8: {exc}") from exc
    text = raw.strip()
    if not text:
        return None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LogParseError(line_number, f"not valid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise LogParseError(line_number, "each line must be a JSON object")
    fields = {}
    for key in ("ts", "kind", "status"):
        value = obj.get(key)
        if not isinstance(value, str):
            raise LogParseError(line_number, f"missing or non-string field {key!r}")
        fields[key] = value
    try:
        timestamp = parse_rfc3339(fields["ts"])
    except ValueError as exc:
        raise LogParseError(line_number, f"bad timestamp {fields['ts']!r}: {exc}") from exc
    try:
        kind = RecordKind(fields["kind"])
    except ValueError:
        raise LogParseError(line_number, f"unknown kind {fields['kind']!r}") from None
    try:
        status = RecordStatus(fields["status"])
    except ValueError:
        raise LogParseError(line_number, f"unknown status {fields['status']!r}") from None
    return InferenceRecord(timestamp, kind, status)


def parse_log(lines: Iterable, *, strict: bool = True) -> ParseResult:
    """Parse a stream of newline-delimited telemetry lines (bytes or text).

    Every well-formed line yields one record; blank lines are ignored. A
    malformed line raises :class:`~lcoai.errors.LogParseError` naming its
    1-based line number; with ``strict=False`` it is skipped and tallied in
    the result instead.
    """
    records = []
    skipped = []
    for line_number, raw in enumerate(lines, start=1):
        try:
            record = _parse_line(raw, line_number)
        except LogParseError as err:
            if strict:
                raise
            skipped.append(err)
            continue
        if record is not None:
            records.append(record)
    return ParseResult(tuple(records), tuple(skipped))


def _months_elapsed(start: datetime, ts: datetime) -> int:
    """Whole calendar months from start to ts (negative when ts precedes start)."""
    a = start.astimezone(timezone.utc)
    b = ts.astimezone(timezone.utc)
    months = (b.year - a.year) * 12 + (b.month - a.month)
    if (b.day, b.time()) < (a.day, a.time()):
        months -= 1
    return months


def count_valid(records: Iterable, horizon: Horizon, start: datetime,
                *, include_failed: bool = False) -> VolumeCount:
    """Classify records and bucket the productive ones into horizon periods.

    A record counts as valid when its kind is ``inference``, its status is
    ``ok``, and it falls inside [start, start + horizon). Non-inference kinds
    are non-productive; errored inferences are failed; productive records
    outside the horizon land in ``out_of_range`` and in no bucket. Period
    membership is by whole calendar months elapsed from ``start``.

    The strict exclusion of errored inferences is reversible:
    ``include_failed=True`` admits them to the valid tally and the buckets.
    """
    if start.tzinfo is None:
        raise ValueError("start must be timezone-aware")
    valid = nonproductive = failed = out_of_range = 0
    buckets: dict = {}
    for record in records:
        if record.kind is not RecordKind.INFERENCE:
            nonproductive += 1
        elif record.status is not RecordStatus.OK and not include_failed:
            failed += 1
        else:
            months = _months_elapsed(start, record.timestamp)
            if months < 0 or months >= horizon.months:
                out_of_range += 1
            else:
                period = months // horizon.period_length_months
                buckets[period] = buckets.get(period, 0) + 1
                valid += 1
    return VolumeCount(valid, nonproductive, failed, out_of_range, buckets)
