"""The 23 negative definite even unimodular rank-24 lattices with roots.

Each lattice is built from its root system (an orthogonal sum of A/D/E
root lattices) by adjoining glue vectors: coset representatives in the
dual whose classes form an isotropic subgroup of the discriminant group
of the right order.  The glue codes ship as plain-text data files; they
are not trusted, every build is checked by :func:`verify_niemeier` (an
incorrect glue tuple cannot yield an even unimodular lattice with the
expected root system).

Glue class labels per component type:

* ``A_n``: ``0`` .. ``n``, the class of ``k * f``, f the dual basis vector
  of the first simple root (a generator of the cyclic discriminant group).
* ``D_n``: ``0``, ``v``, ``s``, ``c``; ``v`` is the class of the dual
  vector of the first simple root (the end of the long tail), ``s`` the
  class of the dual vector of the last fork node, ``c`` of the other fork
  node.  Swapping ``s`` and ``c`` yields an isomorphic lattice; this
  orientation is the shipped convention.
* ``E_6``: ``0``, ``1``, ``2`` (multiples of the first dual vector).
* ``E_7``: ``0``, ``1`` (the dual vector of the last node).
* ``E_8``: ``0`` only (unimodular, nothing to glue).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import intlinalg as la
from .lattice import Lattice, LatticeError, direct_sum, overlattice
from .roots import ade_decompose, ade_lattice

__all__ = [
    "NIEMEIER_COUNT",
    "NiemeierError",
    "NiemeierSpec",
    "VerifyReport",
    "niemeier_spec",
    "build_niemeier",
    "build_niemeier_with_basis",
    "verify_niemeier",
]

NIEMEIER_COUNT = 23


class NiemeierError(ValueError):
    """Raised for invalid Niemeier indices or corrupted glue data."""


@dataclass(frozen=True)
class NiemeierSpec:
    """Root components and glue generators of one Niemeier lattice."""

    index: int
    components: tuple[tuple[str, int], ...]
    glue: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of the per-lattice checks; no check raises."""

    index: int
    rank: int
    determinant: int
    even: bool
    negative_definite: bool
    root_label: str
    expected_label: str
    root_count: int
    expected_count: int

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "rank": self.rank == 24,
            "det": abs(self.determinant) == 1,
            "even": self.even,
            "negative_definite": self.negative_definite,
            "root_type": self.root_label == self.expected_label,
            "root_count": self.root_count == self.expected_count,
        }

    def all_ok(self) -> bool:
        return all(self.checks.values())


def _parse_component(token: str) -> tuple[str, int]:
    kind, _, rank = token.partition("_")
    if kind not in ("A", "D", "E") or not rank.isdigit():
        raise NiemeierError(f"bad component label {token!r} in glue data")
    return kind, int(rank)


@lru_cache(maxsize=None)
def niemeier_spec(j: int) -> NiemeierSpec:
    """Load the root components and glue generators for index j."""
    if j == 24:
        raise NiemeierError(
            "index 24 is the root-free Leech lattice and is not constructed"
        )
    if not 1 <= j <= NIEMEIER_COUNT:
        raise NiemeierError(f"Niemeier index must be 1..23, got {j}")
    name = f"niemeier_{j:02d}.txt"
    try:
        text = (resources.files("latk.data") / name).read_text()
    except FileNotFoundError:
        raise NiemeierError(f"missing glue data file {name}") from None
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise NiemeierError(f"empty glue data file {name}")
    components = tuple(_parse_component(tok) for tok in lines[0].split())
    glue = []
    for line in lines[1:]:
        word = tuple(line.split())
        if len(word) != len(components):
            raise NiemeierError(f"glue tuple {word} does not match component count")
        glue.append(word)
    return NiemeierSpec(j, components, tuple(glue))


@lru_cache(maxsize=None)
def _dual_rows(kind: str, rank: int) -> tuple[tuple[Fraction, ...], ...]:
    gram = ade_lattice(kind, rank).gram_rows()
    inv = la.solve_left(gram, la.identity(rank))
    if inv is None:
        raise NiemeierError("root lattice Gram is singular")
    return tuple(tuple(row) for row in inv)


def _class_vector(kind: str, rank: int, label: str) -> list[Fraction]:
    """Dual-coset representative of a glue class, in root-basis coordinates."""
    dual = _dual_rows(kind, rank)
    zero = [Fraction(0)] * rank
    if label == "0":
        return zero
    if kind == "A":
        if label.isdigit() and 0 <= int(label) <= rank:
            return [int(label) * x for x in dual[0]]
    elif kind == "D":
        if label == "v":
            return list(dual[0])
        if label == "s":
            return list(dual[rank - 1])
        if label == "c":
            return list(dual[rank - 2])
    elif kind == "E" and rank == 6:
        if label in ("1", "2"):
            return [int(label) * x for x in dual[0]]
    elif kind == "E" and rank == 7:
        if label == "1":
            return list(dual[6])
    raise NiemeierError(f"bad glue class {label!r} for {kind}_{rank}")


def _glue_row(spec: NiemeierSpec, word: tuple[str, ...]) -> list[Fraction]:
    row: list[Fraction] = []
    for (kind, rank), label in zip(spec.components, word):
        row.extend(_class_vector(kind, rank, label))
    return row


@lru_cache(maxsize=None)
def build_niemeier_with_basis(
    j: int,
) -> tuple[Lattice, tuple[tuple[Fraction, ...], ...]]:
    """Niemeier lattice j plus its basis rows in root-sum coordinates."""
    spec = niemeier_spec(j)
    root = direct_sum(*[ade_lattice(k, r) for k, r in spec.components])
    rows = [_glue_row(spec, word) for word in spec.glue]
    if not rows:
        eye = tuple(
            tuple(Fraction(int(i == k)) for k in range(root.rank))
            for i in range(root.rank)
        )
        return root, eye
    try:
        lat, scaled = overlattice(root, rows)
    except LatticeError as exc:
        raise NiemeierError(f"glue data for index {j} is corrupted: {exc}") from exc
    den = 1
    for row in rows:
        for x in row:
            den = la.lcm(den, Fraction(x).denominator)
    basis = tuple(tuple(Fraction(x, den) for x in row) for row in scaled)
    return lat, basis


def build_niemeier(j: int) -> Lattice:
    """Construct the Niemeier lattice with index j (1..23)."""
    return build_niemeier_with_basis(j)[0]


def _classical_count(kind: str, rank: int) -> int:
    if kind == "A":
        return rank * (rank + 1)
    if kind == "D":
        return 2 * rank * (rank - 1)
    return {6: 72, 7: 126, 8: 240}[rank]


def verify_niemeier(lat: Lattice, j: int) -> VerifyReport:
    """Check an alleged Niemeier lattice against the index-j description."""
    spec = niemeier_spec(j)
    from .roots import _format_label

    expected_label = _format_label(list(spec.components))
    expected_count = sum(_classical_count(k, r) for k, r in spec.components)
    neg = lat.rank == 0 or lat.is_negative_definite()
    if neg and lat.rank:
        record = ade_decompose(lat)
        label = record.label
        count = 2 * len(record.roots)
    else:
        label, count = "{0}", 0
    return VerifyReport(
        index=j,
        rank=lat.rank,
        determinant=lat.det() if lat.rank else 1,
        even=lat.is_even(),
        negative_definite=neg,
        root_label=label,
        expected_label=expected_label,
        root_count=count,
        expected_count=expected_count,
    )
