"""Curated datasets: classification tables, glue codes, ADE lattices.

Two TSV files ship with the package.  ``tables.tsv`` holds one row per
classified degeneration: the group data (index ``n``, name, order), the
coinvariant rank and discriminant symbol, the degeneration label, and
the rank and discriminant symbol of the degeneration lattice ``S``.
``markings.tsv`` records, for each degeneration, in which rank-24
lattices it is realized (index ``j``) together with the root system of
the orthogonal complement of ``S`` there and, where recorded, the count
of norm -4 vectors orthogonal to that root system.

Labels are opaque strings in a fixed grammar: lowercase ade types with
multiplicities for orbits ("3a_1"), "+" for orthogonal sums, "<" for
saturation, "(...)_{I/II}" sub-case markers kept verbatim, and matrix
degenerations flattened to "[row;row;...]".  Discriminant symbols use
the grammar of :mod:`latk.discform`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..discform import DiscformError, format_symbol, parse_symbol, signature_mod8
from ..lattice import Lattice
from ..roots import ade_lattice

__all__ = [
    "DataError",
    "TableRow",
    "MarkingRow",
    "load_tables",
    "load_markings",
    "load_glue",
    "load_ade",
    "label_rank",
    "orbit_count",
    "check_tables",
]


class DataError(ValueError):
    """Raised for malformed embedded data or failed consistency checks."""


@dataclass(frozen=True)
class MarkingRow:
    """One realization of a degeneration inside a rank-24 lattice."""

    table: int
    n: int
    deg: str
    j: int
    unique: bool
    complement: str
    norm4: int | None


@dataclass(frozen=True)
class TableRow:
    """One classified degeneration."""

    table: int
    n: int
    order: int
    i: str
    group: str
    rk_sg: int
    q_sg: str
    deg: str
    rk_s: int
    q_s: str
    unique: bool
    markings: tuple[MarkingRow, ...]


# markings table id -> the table its rows annotate
_MARKING_OWNERS = {3: 2, 5: 4, 7: 6}


def _read(name: str) -> list[list[str]]:
    try:
        text = (resources.files("latk.data") / name).read_text()
    except FileNotFoundError:
        raise DataError(f"missing data file {name}") from None
    lines = text.splitlines()
    if not lines:
        raise DataError(f"empty data file {name}")
    return [line.split("\t") for line in lines]


@lru_cache(maxsize=1)
def load_markings() -> tuple[MarkingRow, ...]:
    """All marking rows, in file order."""
    rows = _read("markings.tsv")
    header = ["table", "n", "deg", "j", "star", "complement", "norm4"]
    if rows[0] != header:
        raise DataError(f"unexpected markings.tsv header: {rows[0]}")
    out = []
    for cells in rows[1:]:
        if len(cells) != len(header):
            raise DataError(f"malformed markings row: {cells}")
        out.append(
            MarkingRow(
                table=int(cells[0]),
                n=int(cells[1]),
                deg=cells[2],
                j=int(cells[3]),
                unique=cells[4] == "1",
                complement=cells[5],
                norm4=int(cells[6]) if cells[6] else None,
            )
        )
    return tuple(out)


@lru_cache(maxsize=1)
def load_tables() -> tuple[TableRow, ...]:
    """All table rows, in file order, with their markings attached."""
    rows = _read("tables.tsv")
    header = [
        "table", "n", "order", "i", "group",
        "rk_sg", "q_sg", "deg", "rk_s", "q_s", "star",
    ]
    if rows[0] != header:
        raise DataError(f"unexpected tables.tsv header: {rows[0]}")
    marks: dict[tuple[int, int, str], list[MarkingRow]] = {}
    for mk in load_markings():
        owner = _MARKING_OWNERS.get(mk.table)
        if owner is None:
            raise DataError(f"marking table {mk.table} has no owning table")
        marks.setdefault((owner, mk.n, mk.deg), []).append(mk)
    out = []
    for cells in rows[1:]:
        if len(cells) != len(header):
            raise DataError(f"malformed tables row: {cells}")
        table, n, deg = int(cells[0]), int(cells[1]), cells[7]
        out.append(
            TableRow(
                table=table,
                n=n,
                order=int(cells[2]),
                i=cells[3],
                group=cells[4],
                rk_sg=int(cells[5]),
                q_sg=cells[6],
                deg=deg,
                rk_s=int(cells[8]),
                q_s=cells[9],
                unique=cells[10] == "1",
                markings=tuple(marks.pop((table, n, deg), ())),
            )
        )
    if marks:
        orphan = next(iter(marks))
        raise DataError(f"marking without an owning table row: {orphan}")
    return tuple(out)


def load_glue(j: int):
    """Root components and glue generators of the j-th rank-24 lattice."""
    from ..niemeier import niemeier_spec

    return niemeier_spec(j)


_ADE_LABEL = re.compile(r"([ADE])_?(\d+)")


def load_ade(label: str) -> Lattice:
    """Root lattice from a label such as "E8", "E_8", or "A_1"."""
    m = _ADE_LABEL.fullmatch(label.strip())
    if not m:
        raise DataError(f"not an ADE label: {label!r}")
    return ade_lattice(m.group(1), int(m.group(2)))


_SUM_PART = re.compile(r"(\d*)([ADEade])_(\d+)")


def label_rank(label: str) -> int:
    """Rank of an orthogonal-sum label like "2A_1+A_2"; "{0}" has rank 0."""
    if label == "{0}":
        return 0
    total = 0
    for part in label.split("+"):
        m = _SUM_PART.fullmatch(part)
        if not m:
            raise DataError(f"bad root-sum label: {label!r}")
        total += int(m.group(1) or 1) * int(m.group(3))
    return total


def orbit_count(deg: str) -> int:
    """Number of orbits in a degeneration label.

    Plain labels ("3a_1") are one orbit; "(o_1,...,o_t)<u" has t; matrix
    labels "([row;...;row])<u" have one orbit per diagonal row.  Outer
    "(...)_{I/II}" wrappers are peeled, and a parenthesised part such as
    "(4a_1,4a_1)_I" inside the list contributes one orbit per entry (the
    subscript records how the pair sits together, not a merged orbit).
    """
    s = deg.strip()
    if not s.startswith("("):
        return 1
    inner = s[1 : _group_end(s)]
    if inner.startswith("["):
        return len(_split_top(inner[1 : _group_end(inner, "[]")], ";"))
    if "<" in _mask_groups(inner):
        return orbit_count(inner)
    total = 0
    for part in _split_top(inner, ","):
        part = part.strip()
        if part.startswith("("):
            total += len(_split_top(part[1 : _group_end(part)], ","))
        else:
            total += 1
    return total


def _group_end(s: str, pair: str = "()") -> int:
    """Index of the bracket closing the group opened at ``s[0]``."""
    opener, closer = pair
    depth = 0
    for pos, ch in enumerate(s):
        if ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
            if depth == 0:
                return pos
    raise DataError(f"unbalanced degeneration label: {s!r}")


def _mask_groups(s: str) -> str:
    """Blank out everything inside brackets, keeping top-level text."""
    out = []
    depth = 0
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        out.append(ch if depth == 0 and ch not in "([" else " ")
    return "".join(out)


def _split_top(s: str, sep: str) -> list[str]:
    """Split on top-level separators only (brackets shield their insides)."""
    masked = _mask_groups(s)
    parts = []
    start = 0
    for pos, ch in enumerate(masked):
        if ch == sep:
            parts.append(s[start:pos])
            start = pos + 1
    parts.append(s[start:])
    return parts


def check_tables() -> dict[int, int]:
    """Consistency suite over every embedded row; per-table pass counts.

    Checks, for each row: both symbols parse and round-trip through the
    formatter; the signature residue of each symbol matches its rank;
    the orbit count of the label accounts for rk_S - rk_SG; and every
    marking's complement fits in the rank-(24 - rk_S) complement.
    """
    counts: dict[int, int] = {}
    for row in load_tables():
        where = f"table {row.table}, n={row.n}, {row.deg}"
        for sym, rk in ((row.q_s, row.rk_s), (row.q_sg, row.rk_sg)):
            try:
                parsed = parse_symbol(sym)
            except DiscformError as exc:
                raise DataError(f"{where}: symbol {sym!r} does not parse: {exc}")
            if format_symbol(parsed) != sym:
                raise DataError(f"{where}: symbol {sym!r} does not round-trip")
            if signature_mod8(parsed) != (-rk) % 8:
                raise DataError(
                    f"{where}: symbol {sym!r} fails the signature residue for rank {rk}"
                )
        if row.rk_sg + orbit_count(row.deg) != row.rk_s:
            raise DataError(f"{where}: orbit count does not bridge the ranks")
        for mk in row.markings:
            if label_rank(mk.complement) > 24 - row.rk_s:
                raise DataError(
                    f"{where}: marking j={mk.j} complement {mk.complement} too large"
                )
        counts[row.table] = counts.get(row.table, 0) + 1
    return counts
