"""Root systems of negative definite even lattices.

A root is a vector of norm -2.  This module enumerates roots exactly,
splits them into irreducible components, identifies each component as a
member of the A/D/E family, and extracts a canonically ordered simple-root
basis whose Gram matrix is the negated standard Cartan matrix.

Enumeration dispatches between a compiled fixed-width kernel and a pure
Python kernel; the two implement the identical search and the dispatcher
proves (via an exact magnitude bound) that the compiled kernel cannot
overflow before selecting it.  The environment variable
``LATK_PRECISION_BITS`` lowers or raises the fixed-width ceiling; values
above 124 are clamped because the compiled kernel computes in 128-bit
signed integers with two guard bits.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _enum_pure
from . import intlinalg as la
from .lattice import Lattice

try:
    from . import _enumcore
except ImportError:  # compiled kernel is optional
    _enumcore = None

__all__ = [
    "RootsError",
    "RootComponent",
    "RootSystemRecord",
    "ade_lattice",
    "enumerate_roots",
    "ade_decompose",
    "root_type",
    "count_norm4_orthogonal",
    "short_vectors",
]

_MAX_BITS = 124


class RootsError(ValueError):
    """Raised for invalid root-system input or inconsistent root data."""


def _precision_bits() -> int:
    raw = os.environ.get("LATK_PRECISION_BITS")
    if raw is None:
        return _MAX_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise RootsError("LATK_PRECISION_BITS must be an integer") from None
    return max(1, min(bits, _MAX_BITS))


def short_vectors(
    q_rows: list[list[int]], target: int, backend: str | None = None
) -> list[tuple[int, ...]]:
    """All x with ``x Q x^T = target`` for positive definite Q.

    Returns one representative per antipodal pair {x, -x}, the one whose
    first nonzero coordinate is positive, sorted lexicographically.
    ``backend`` forces "pure" or "compiled"; by default the compiled kernel
    is used whenever it is installed and the exact magnitude bound of the
    plan fits the precision ceiling.
    """
    plan = _enum_pure.prepare(q_rows, target)
    if plan.size == 0:
        return []
    if backend == "compiled":
        if _enumcore is None:
            raise RootsError("compiled enumeration kernel is not installed")
        if plan.limit.bit_length() > _precision_bits():
            raise RootsError("enumeration bound exceeds the fixed-width ceiling")
        use_compiled = True
    elif backend == "pure":
        use_compiled = False
    elif backend is None:
        use_compiled = (
            _enumcore is not None
            and plan.size <= 64
            and plan.limit.bit_length() <= _precision_bits()
        )
    else:
        raise RootsError(f"unknown enumeration backend {backend!r}")
    if use_compiled:
        raw = _enumcore.run(
            plan.size,
            list(plan.scale),
            list(plan.weight),
            [list(row) for row in plan.rows],
            plan.budget,
        )
    else:
        raw = _enum_pure.run(plan)
    return _enum_pure.finalize(raw)


def _require_negative_definite(lat: Lattice) -> None:
    if lat.rank and not lat.is_negative_definite():
        raise RootsError("lattice must be negative definite")


def enumerate_roots(lat: Lattice, backend: str | None = None) -> list[tuple[int, ...]]:
    """All norm -2 vectors, one per pair ±v, in lexicographic order."""
    _require_negative_definite(lat)
    if lat.rank == 0:
        return []
    negated = [[-e for e in row] for row in lat.gram_rows()]
    return short_vectors(negated, 2, backend=backend)


# ---------------------------------------------------------------------------
# Standard A/D/E Gram matrices and diagram data


def _cartan_edges(kind: str, rank: int) -> list[tuple[int, int]]:
    if kind == "A":
        if rank < 1:
            raise RootsError("A_n needs n >= 1")
        return [(i, i + 1) for i in range(rank - 1)]
    if kind == "D":
        if rank < 4:
            raise RootsError("D_n needs n >= 4")
        return [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    if kind == "E":
        if rank not in (6, 7, 8):
            raise RootsError("E_n needs n in {6, 7, 8}")
        edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5)]
        if rank >= 7:
            edges.append((5, 6))
        if rank == 8:
            edges.append((6, 7))
        return edges
    raise RootsError(f"unknown root system kind {kind!r}")


def ade_lattice(kind: str, rank: int) -> Lattice:
    """The negative definite root lattice of type A_n, D_n, or E_n.

    The Gram matrix is the negated standard Cartan matrix: -2 on the
    diagonal and +1 at the edges of the diagram.
    """
    edges = _cartan_edges(kind, rank)
    gram = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = -2
    for a, b in edges:
        gram[a][b] = gram[b][a] = 1
    return Lattice(gram)


_PAIR_COUNTS = {
    "A": lambda r: r * (r + 1) // 2,
    "D": lambda r: r * (r - 1),
    "E": lambda r: {6: 36, 7: 63, 8: 120}[r],
}


def _identify(rank: int, pairs: int) -> tuple[str, int]:
    if pairs == rank * (rank + 1) // 2:
        return ("A", rank)
    if rank >= 4 and pairs == rank * (rank - 1):
        return ("D", rank)
    if (rank, pairs) in ((6, 36), (7, 63), (8, 120)):
        return ("E", rank)
    raise RootsError(f"no ADE type has rank {rank} with {pairs} root pairs")


# ---------------------------------------------------------------------------
# Decomposition


@dataclass(frozen=True)
class RootComponent:
    """One irreducible component with its canonical simple-root basis."""

    kind: str
    rank: int
    basis: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RootSystemRecord:
    """Roots of a lattice together with their A/D/E decomposition."""

    roots: tuple[tuple[int, ...], ...]
    components: tuple[RootComponent, ...]
    label: str


def _pair_matrix(gram: list[list[int]], rows: list, cols: list) -> np.ndarray:
    """Exact integer matrix of pairings rows[i] G cols[j]."""
    n = len(gram)
    bound = 1
    for mat in (gram, rows, cols):
        m = max((abs(int(e)) for row in mat for e in row), default=0)
        bound *= max(m, 1)
    dtype = np.int64 if n * n * bound < (1 << 62) else object
    g = np.array(gram, dtype=dtype)
    a = np.array(rows, dtype=dtype)
    b = np.array(cols, dtype=dtype)
    return a @ g @ b.T


def _canonical_reps(vectors: list) -> list[tuple[int, ...]]:
    reps = set()
    for v in vectors:
        w = tuple(int(c) for c in v)
        for c in w:
            if c:
                reps.add(w if c > 0 else tuple(-t for t in w))
                break
    return sorted(reps)


def _simple_roots(
    reps: list[tuple[int, ...]], pair: np.ndarray
) -> list[tuple[int, ...]]:
    """Representatives not expressible as a sum of two positive roots.

    The positive roots are exactly the canonical representatives (the
    positivity functional is "first nonzero coordinate positive").  A
    positive root a decomposes iff some positive b pairs with it to -1 and
    a - b is again positive.
    """
    count = len(reps)
    simple = []
    for i in range(count):
        decomposable = False
        for j in range(count):
            if pair[i][j] == -1:
                diff = next(
                    x - y for x, y in zip(reps[i], reps[j]) if x != y
                )
                if diff > 0:
                    decomposable = True
                    break
        if not decomposable:
            simple.append(reps[i])
    return simple


def _order_simples(
    simples: list[tuple[int, ...]], adj: list[list[bool]], kind: str, rank: int
) -> list[tuple[int, ...]]:
    """Permute simple roots so their Gram equals the standard diagram's."""
    edges = _cartan_edges(kind, rank)
    target = [[False] * rank for _ in range(rank)]
    for a, b in edges:
        target[a][b] = target[b][a] = True
    target_deg = [sum(row) for row in target]
    deg = [sum(row) for row in adj]
    order: list[int] = []
    used = [False] * rank

    def place(pos: int) -> bool:
        if pos == rank:
            return True
        for i in range(rank):
            if used[i] or deg[i] != target_deg[pos]:
                continue
            if any(adj[i][order[q]] != target[pos][q] for q in range(pos)):
                continue
            used[i] = True
            order.append(i)
            if place(pos + 1):
                return True
            used[i] = False
            order.pop()
        return False

    if not place(0):
        raise RootsError(f"component does not match the {kind}_{rank} diagram")
    return [simples[i] for i in order]


def _component_record(lat: Lattice, comp: list[tuple[int, ...]]) -> RootComponent:
    gram = lat.gram_rows()
    span_rank = la.rank([list(v) for v in comp])
    reps = comp
    try:
        kind, rank = _identify(span_rank, len(reps))
    except RootsError:
        # The set is not root-closed (e.g. it is a simple system or some
        # other subset); close it: enumerate the roots of its integer span
        # and map them back to ambient coordinates.
        basis = la.hnf_rows([list(v) for v in comp])
        induced = [
            [lat.pair(u, v) for v in basis] for u in basis
        ]
        closed = short_vectors([[-e for e in row] for row in induced], 2)
        ambient = [
            [sum(x[k] * basis[k][t] for k in range(len(basis))) for t in range(lat.rank)]
            for x in closed
        ]
        reps = _canonical_reps(ambient)
        kind, rank = _identify(span_rank, len(reps))
    pair = _pair_matrix(gram, reps, reps)
    simples = _simple_roots(reps, pair)
    if len(simples) != rank:
        raise RootsError(
            f"component of rank {rank} produced {len(simples)} simple roots"
        )
    spair = _pair_matrix(gram, simples, simples)
    adj = [[bool(spair[i][j]) and i != j for j in range(rank)] for i in range(rank)]
    ordered = _order_simples(simples, adj, kind, rank)
    expected = ade_lattice(kind, rank).gram
    got = _pair_matrix(gram, ordered, ordered)
    if any(
        int(got[i][j]) != expected[i][j] for i in range(rank) for j in range(rank)
    ):
        raise RootsError(
            f"simple roots of a {kind}_{rank} component do not reproduce "
            "the standard Cartan matrix"
        )
    return RootComponent(kind, rank, tuple(tuple(v) for v in ordered))


def _format_label(kinds: list[tuple[str, int]]) -> str:
    if not kinds:
        return "{0}"
    counts = Counter(kinds)
    parts = []
    for (kind, rank), mult in sorted(counts.items()):
        head = f"{mult}" if mult > 1 else ""
        parts.append(f"{head}{kind}_{rank}")
    return "+".join(parts)


def ade_decompose(lat: Lattice, roots: list | None = None) -> RootSystemRecord:
    """Split a set of roots into irreducible A/D/E components.

    With ``roots`` omitted, all roots of the lattice are enumerated.  An
    explicit root set is normalized to one representative per ±pair; sets
    that are not root-closed (orbits, simple systems) are closed inside
    their span before identification.
    """
    if roots is None:
        reps = enumerate_roots(lat)
    else:
        reps = _canonical_reps(roots)
        for v in reps:
            if lat.norm(list(v)) != -2:
                raise RootsError(f"vector {v} is not a root (norm != -2)")
    if not reps:
        return RootSystemRecord((), (), "{0}")
    gram = lat.gram_rows()
    pair = _pair_matrix(gram, reps, reps)
    count = len(reps)
    comp_id = list(range(count))

    def find(a: int) -> int:
        while comp_id[a] != a:
            comp_id[a] = comp_id[comp_id[a]]
            a = comp_id[a]
        return a

    for i in range(count):
        for j in range(i + 1, count):
            if pair[i][j] != 0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    comp_id[ri] = rj
    groups: dict[int, list[tuple[int, ...]]] = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(reps[i])
    components = [_component_record(lat, comp) for comp in groups.values()]
    components.sort(key=lambda c: (c.kind, c.rank, c.basis))
    label = _format_label([(c.kind, c.rank) for c in components])
    return RootSystemRecord(tuple(reps), tuple(components), label)


def root_type(lat: Lattice) -> str:
    """Canonical label of the lattice's root system, "{0}" if root-free."""
    return ade_decompose(lat).label


def count_norm4_orthogonal(lat: Lattice) -> int:
    """Number of vectors v (counting ±v) with norm -4 orthogonal to all roots."""
    _require_negative_definite(lat)
    if lat.rank == 0:
        return 0
    gram = lat.gram_rows()
    negated = [[-e for e in row] for row in gram]
    candidates = short_vectors(negated, 4)
    if not candidates:
        return 0
    roots = enumerate_roots(lat)
    if not roots:
        return 2 * len(candidates)
    pair = _pair_matrix(gram, candidates, roots)
    kept = sum(1 for row in pair if not any(int(e) for e in row))
    return 2 * kept
