"""CSV ingestion/serialization and deterministic JSON report emission.

Counts files carry one row per measured setting pair (four rows per
coincidence group); tomography files carry one row per basis pair.  Reports
are JSON documents with stable key order and no timestamps, so identical
inputs and seeds produce byte-identical output.
"""

from __future__ import annotations

import csv
import hashlib
import io as _stdio
import json
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Iterable, Sequence

from .counting import GroupCounts
from .errors import IncompleteDataError, InvalidInputError, ParseError
from .settings import ChainedPlan, build_plan
from .tomography import TomoDataset, TomoRow, TomoSetting

__all__ = [
    "COUNTS_HEADER",
    "TOMO_HEADER",
    "RunManifest",
    "parse_counts_csv",
    "counts_csv_text",
    "write_counts_csv",
    "parse_tomo_csv",
    "write_tomo_csv",
    "sha256_file",
    "tool_version",
    "render_json",
    "render_csv",
    "write_text",
]

SCHEMA_VERSION = "1"
COUNTS_HEADER = (
    "group_a", "group_b", "m", "n",
    "singles_a_cps", "coinc_cps", "duration_coinc_s", "duration_singles_s",
)
TOMO_HEADER = ("basis_a", "basis_b", "rate_cps", "sigma_cps", "duration_s")


def tool_version() -> str:
    try:
        return metadata.version("chainedbell")
    except metadata.PackageNotFoundError:  # running from a source tree
        return "0+unknown"


def sha256_file(path: str | Path) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Provenance block attached to every report."""

    schema_version: str = SCHEMA_VERSION
    n_bases: int | None = None
    plane: str | None = None
    seed: int | None = None
    inputs: dict[str, str] = field(default_factory=dict)  # path -> sha256

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise InvalidInputError(
                f"unrecognized schema version {self.schema_version!r}"
            )
        if self.n_bases is not None and self.n_bases < 2:
            raise InvalidInputError(f"N must be at least 2, got {self.n_bases}")

    def as_dict(self) -> dict:
        out: dict = {
            "schema_version": self.schema_version,
            "tool_version": tool_version(),
            "inputs": dict(sorted(self.inputs.items())),
        }
        if self.n_bases is not None:
            out["n_bases"] = self.n_bases
        if self.plane is not None:
            out["plane"] = self.plane
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _check_header(row: Sequence[str] | None, expected: tuple[str, ...],
                  what: str) -> None:
    if row is None:
        raise ParseError(f"empty {what} file: missing header", line=1)
    if tuple(h.strip() for h in row) != expected:
        raise ParseError(
            f"{what} header must be {','.join(expected)!r}, got {','.join(row)!r}",
            line=1,
        )


def _parse_int(value: str, column: str, line: int) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"column {column!r} must be an integer, got {value!r}",
                         line=line) from None


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(f"column {column!r} must be a number, got {value!r}",
                         line=line) from None


def parse_counts_csv(path: str | Path) -> tuple[ChainedPlan, list[GroupCounts]]:
    """Read a counts file and assemble coincidence groups in plan order.

    The number of bases is inferred from the set of groups present; every
    group must carry all four of its setting pairs, with consistent
    durations.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        _check_header(next(reader, None), COUNTS_HEADER, "counts")
        rows: list[tuple[int, tuple[int, int], tuple[int, int], float, float, float, float]] = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            line = reader.line_num
            if len(row) != len(COUNTS_HEADER):
                raise ParseError(
                    f"expected {len(COUNTS_HEADER)} columns, got {len(row)}",
                    line=line,
                )
            group = (_parse_int(row[0], "group_a", line),
                     _parse_int(row[1], "group_b", line))
            pair = (_parse_int(row[2], "m", line), _parse_int(row[3], "n", line))
            singles = _parse_float(row[4], "singles_a_cps", line)
            coinc = _parse_float(row[5], "coinc_cps", line)
            dur_c = _parse_float(row[6], "duration_coinc_s", line)
            dur_s = _parse_float(row[7], "duration_singles_s", line)
            rows.append((line, group, pair, singles, coinc, dur_c, dur_s))

    if not rows:
        raise ParseError("counts file contains no data rows", line=1)

    group_keys = {group for _line, group, *_rest in rows}
    if len(group_keys) % 2 != 0 or len(group_keys) < 4:
        raise ParseError(
            f"found {len(group_keys)} groups; a valid plan has 2N >= 4 groups"
        )
    n_bases = len(group_keys) // 2
    plan = build_plan(n_bases)
    expected_keys = {g.key for g in plan.groups}
    unexpected = sorted(group_keys - expected_keys)
    if unexpected:
        raise ParseError(
            f"group {unexpected[0]} does not belong to the N={n_bases} plan"
        )
    missing_groups = sorted(expected_keys - group_keys)
    if missing_groups:
        raise IncompleteDataError(
            f"plan for N={n_bases} is missing group {missing_groups[0]}"
        )

    by_group: dict[tuple[int, int], dict[tuple[int, int], tuple[int, float, float, float, float]]] = {
        key: {} for key in expected_keys
    }
    for line, group, pair, singles, coinc, dur_c, dur_s in rows:
        slots = by_group[group]
        if pair in slots:
            raise ParseError(f"duplicate setting pair {pair} in group {group}",
                             line=line)
        member_pairs = plan.group(*group).member_pairs
        if pair not in member_pairs:
            raise ParseError(
                f"setting pair {pair} is not one of group {group}'s pairs "
                f"{member_pairs}", line=line,
            )
        slots[pair] = (line, singles, coinc, dur_c, dur_s)

    groups: list[GroupCounts] = []
    for plan_group in plan.groups:
        slots = by_group[plan_group.key]
        for pair in plan_group.member_pairs:
            if pair not in slots:
                raise IncompleteDataError(
                    f"group {plan_group.key} is missing setting pair {pair}"
                )
        durations = {(v[3], v[4]) for v in slots.values()}
        if len(durations) != 1:
            raise ParseError(
                f"group {plan_group.key} mixes durations {sorted(durations)}"
            )
        (dur_c, dur_s), = durations
        groups.append(GroupCounts(
            group=plan_group,
            coincidences={pair: slots[pair][2] for pair in plan_group.member_pairs},
            singles_a={pair: slots[pair][1] for pair in plan_group.member_pairs},
            duration_coinc_s=dur_c,
            duration_singles_s=dur_s,
        ))
    return plan, groups


def counts_csv_text(plan: ChainedPlan, groups: Iterable[GroupCounts]) -> str:
    """Render groups in the same schema :func:`parse_counts_csv` reads."""
    rows = []
    for counts in groups:
        for pair in counts.group.member_pairs:
            rows.append([
                counts.group.a, counts.group.b, pair[0], pair[1],
                repr(counts.singles_a[pair]), repr(counts.coincidences[pair]),
                repr(counts.duration_coinc_s), repr(counts.duration_singles_s),
            ])
    return render_csv(COUNTS_HEADER, rows)


def write_counts_csv(path: str | Path, plan: ChainedPlan,
                     groups: Iterable[GroupCounts]) -> None:
    Path(path).write_text(counts_csv_text(plan, groups), encoding="utf-8")


def parse_tomo_csv(path: str | Path) -> TomoDataset:
    """Read a tomography file; rows keyed by basis-label pair."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        _check_header(next(reader, None), TOMO_HEADER, "tomography")
        rows: list[TomoRow] = []
        seen: dict[tuple[str, str], int] = {}
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            line = reader.line_num
            if len(row) != len(TOMO_HEADER):
                raise ParseError(
                    f"expected {len(TOMO_HEADER)} columns, got {len(row)}",
                    line=line,
                )
            try:
                setting = TomoSetting(row[0].strip(), row[1].strip())
            except InvalidInputError as exc:
                raise ParseError(str(exc), line=line) from None
            key = (setting.basis_a, setting.basis_b)
            if key in seen:
                raise ParseError(
                    f"duplicate setting {key} (first seen on line {seen[key]})",
                    line=line,
                )
            seen[key] = line
            rows.append(TomoRow(
                setting=setting,
                rate_cps=_parse_float(row[2], "rate_cps", line),
                sigma_cps=_parse_float(row[3], "sigma_cps", line),
                duration_s=_parse_float(row[4], "duration_s", line),
            ))
    if not rows:
        raise ParseError("tomography file contains no data rows", line=1)
    return TomoDataset(rows=tuple(rows))


def write_tomo_csv(path: str | Path, dataset: TomoDataset) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TOMO_HEADER)
        for row in dataset.rows:
            writer.writerow([
                row.setting.basis_a, row.setting.basis_b,
                repr(row.rate_cps), repr(row.sigma_cps), repr(row.duration_s),
            ])


def render_json(report: dict) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Deterministic delimited rendering of one tabular report section."""
    buffer = _stdio.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def write_text(path: str | Path | None, text: str) -> None:
    """Write to a file, or stdout when no path is given."""
    if path is None:
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
