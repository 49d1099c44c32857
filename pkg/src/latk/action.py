"""Finite groups of lattice isometries given by matrix generators.

A group acts on row vectors by ``v -> v @ g`` in ambient coordinates.
The module computes invariant and coinvariant sublattices, orbits of
vectors, the induced action on discriminant groups, and the saturation
test that compares the restricted group with the full stabilizer of the
discriminant form inside the isometry group of the coinvariant lattice.
"""

from __future__ import annotations

from fractions import Fraction

from . import intlinalg as la
from .lattice import Lattice, Sublattice, full_sublattice, orthogonal_complement
from .niemeier import build_niemeier_with_basis, niemeier_spec
from .roots import enumerate_roots, short_vectors

__all__ = [
    "ActionError",
    "GroupAction",
    "invariant_lattice",
    "coinvariant_lattice",
    "orbit",
    "group_order",
    "restrict_action",
    "acts_trivially_on_discriminant",
    "is_leech_type",
    "isometry_group",
    "discriminant_kernel",
    "is_closure_saturated",
    "from_component_permutation",
]

CLOSURE_BOUND = 10**6
SATURATION_RANK_BOUND = 8


class ActionError(ValueError):
    """Raised for invalid group actions or failed closure computations."""


class GroupAction:
    """A group of isometries of a lattice, given by generator matrices."""

    def __init__(self, ambient: Lattice, generators) -> None:
        n = ambient.rank
        checked = []
        for g in generators:
            rows = [list(row) for row in g]
            if len(rows) != n or any(len(row) != n for row in rows):
                raise ActionError(f"generator must be a {n}x{n} matrix")
            for row in rows:
                for x in row:
                    if not isinstance(x, int) and not (
                        isinstance(x, Fraction) and x.denominator == 1
                    ):
                        raise ActionError("generator entries must be integers")
            rows = [[int(x) for x in row] for row in rows]
            if not la.is_unimodular(rows):
                raise ActionError("generator is not unimodular")
            gram = ambient.gram_rows()
            moved = la.matmul(la.matmul(rows, gram), la.transpose(rows))
            if moved != gram:
                raise ActionError("generator does not preserve the Gram matrix")
            checked.append(tuple(tuple(row) for row in rows))
        self.ambient = ambient
        self.generators = tuple(checked)

    def __repr__(self) -> str:
        return (
            f"GroupAction(rank={self.ambient.rank}, "
            f"generators={len(self.generators)})"
        )


def _apply(v, g) -> tuple[int, ...]:
    return tuple(la.matmul([list(v)], [list(row) for row in g])[0])


def invariant_lattice(act: GroupAction) -> Sublattice:
    """The sublattice of vectors fixed by every generator (primitive)."""
    n = act.ambient.rank
    if not act.generators or n == 0:
        return full_sublattice(act.ambient)
    stacked = [[0] * (n * len(act.generators)) for _ in range(n)]
    for idx, g in enumerate(act.generators):
        for i in range(n):
            for j in range(n):
                stacked[i][idx * n + j] = g[i][j] - int(i == j)
    basis = la.kernel_basis(stacked)
    return Sublattice(act.ambient, basis)


def coinvariant_lattice(act: GroupAction) -> Sublattice:
    """The orthogonal complement of the invariant sublattice (primitive)."""
    return orthogonal_complement(invariant_lattice(act))


def orbit(act: GroupAction, v, bound: int = CLOSURE_BOUND) -> list[tuple[int, ...]]:
    """Sorted orbit of a vector under the generated group."""
    n = act.ambient.rank
    start = tuple(int(x) for x in v)
    if len(start) != n:
        raise ActionError(f"vector length {len(start)} does not match rank {n}")
    seen = {start}
    frontier = [start]
    while frontier:
        cur = frontier.pop()
        for g in act.generators:
            nxt = _apply(cur, g)
            if nxt not in seen:
                if len(seen) >= bound:
                    raise ActionError(f"orbit closure exceeded {bound} elements")
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def group_order(act: GroupAction, bound: int = CLOSURE_BOUND) -> int:
    """Order of the generated group, by closure under multiplication."""
    return len(_closure(act.generators, act.ambient.rank, bound))


def _closure(generators, n: int, bound: int = CLOSURE_BOUND) -> set:
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {eye}
    frontier = [eye]
    gens = [[list(row) for row in g] for g in generators]
    while frontier:
        cur = frontier.pop()
        cur_rows = [list(row) for row in cur]
        for g in gens:
            nxt = tuple(tuple(row) for row in la.matmul(cur_rows, g))
            if nxt not in seen:
                if len(seen) >= bound:
                    raise ActionError(f"group closure exceeded {bound} elements")
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def restrict_action(act: GroupAction, sub: Sublattice) -> list[tuple[tuple[int, ...], ...]]:
    """Generator matrices in the basis of an invariant sublattice.

    Raises if some generator moves the sublattice off itself.
    """
    basis = sub.basis_rows()
    if not basis:
        return [() for _ in act.generators]
    out = []
    for g in act.generators:
        moved = la.matmul(basis, [list(row) for row in g])
        coeffs = la.solve_left_integral(basis, moved)
        if coeffs is None:
            raise ActionError("sublattice is not invariant under the action")
        out.append(tuple(tuple(row) for row in coeffs))
    return out


def _trivial_on_dual_quotient(gram_rows, mats) -> bool:
    """Whether each matrix induces the identity on (dual of L)/L."""
    r = len(gram_rows)
    if r == 0:
        return True
    ginv = la.solve_left(gram_rows, la.identity(r))
    if ginv is None:
        raise ActionError("degenerate form has no discriminant group")
    for mat in mats:
        for i in range(r):
            for j in range(r):
                delta = sum(
                    ginv[i][k] * (mat[k][j] - int(k == j)) for k in range(r)
                )
                if Fraction(delta).denominator != 1:
                    return False
    return True


def acts_trivially_on_discriminant(act: GroupAction, sub: Sublattice) -> bool:
    """Whether the induced action on (dual of sub)/sub is the identity."""
    mats = restrict_action(act, sub)
    return _trivial_on_dual_quotient(sub.induced().gram_rows(), mats)


def is_leech_type(act: GroupAction) -> bool:
    """Test the four coinvariant-lattice conditions for a Leech-type action.

    The coinvariant lattice must be negative definite, root-free, carry a
    trivial induced action on its discriminant group, and contain no
    nonzero invariant vectors.
    """
    co = coinvariant_lattice(act)
    if co.rank == 0:
        return True
    induced = co.induced()
    if not induced.is_negative_definite():
        return False
    if enumerate_roots(induced):
        return False
    mats = restrict_action(act, co)
    if not _trivial_on_dual_quotient(induced.gram_rows(), mats):
        return False
    r = co.rank
    stacked = [[0] * (r * len(mats)) for _ in range(r)]
    for idx, m in enumerate(mats):
        for i in range(r):
            for j in range(r):
                stacked[i][idx * r + j] = m[i][j] - int(i == j)
    return not mats or not la.kernel_basis(stacked)


def isometry_group(lat: Lattice) -> list[tuple[tuple[int, ...], ...]]:
    """All isometries of a negative definite lattice, by basis-image search."""
    n = lat.rank
    if n == 0:
        return [()]
    if not lat.is_negative_definite():
        raise ActionError("isometry enumeration needs a negative definite lattice")
    gram = lat.gram_rows()
    negated = [[-x for x in row] for row in gram]
    pools: dict[int, list[tuple[int, ...]]] = {}
    for norm in {gram[i][i] for i in range(n)}:
        half = short_vectors(negated, -norm)
        pools[norm] = [v for rep in half for v in (rep, tuple(-x for x in rep))]
    found = []
    images: list[tuple[int, ...]] = []

    def pairing(u, w):
        return sum(u[a] * gram[a][b] * w[b] for a in range(n) for b in range(n))

    def descend(i: int) -> None:
        if i == n:
            found.append(tuple(images))
            return
        for cand in pools[gram[i][i]]:
            if all(pairing(cand, images[j]) == gram[i][j] for j in range(i)):
                images.append(cand)
                descend(i + 1)
                images.pop()

    descend(0)
    return found


def discriminant_kernel(lat: Lattice) -> list[tuple[tuple[int, ...], ...]]:
    """Isometries of a negative definite lattice inducing the identity on
    (dual of L)/L."""
    return [
        m
        for m in isometry_group(lat)
        if _trivial_on_dual_quotient(lat.gram_rows(), [m])
    ]


def is_closure_saturated(
    act: GroupAction, rank_bound: int = SATURATION_RANK_BOUND
) -> bool:
    """Whether the restriction to the coinvariant lattice is the full group
    of its isometries acting trivially on the discriminant group.

    Decided by exhaustive isometry enumeration, so the coinvariant rank is
    capped; larger ranks raise instead of guessing.
    """
    co = coinvariant_lattice(act)
    if co.rank == 0:
        return True
    if co.rank > rank_bound:
        raise ActionError(
            f"undecided at this scale: coinvariant rank {co.rank} "
            f"exceeds the bound {rank_bound}"
        )
    induced = co.induced()
    if not induced.is_negative_definite():
        raise ActionError("coinvariant lattice is not negative definite")
    wanted = set(discriminant_kernel(induced))
    restricted = _closure(restrict_action(act, co), co.rank)
    return restricted == wanted


def from_component_permutation(
    index: int, perm, blocks=None
) -> GroupAction:
    """Action on a Niemeier lattice from a permutation of root components.

    ``perm[i]`` is the position component ``i`` is sent to; components
    related by the permutation must have the same type.  ``blocks`` may
    give one integer matrix per component (in root-basis coordinates,
    identity by default) applied before the permutation.  The combined
    map must preserve the glue code, else it is not an isometry of the
    overlattice and an error is raised.
    """
    lat, basis = build_niemeier_with_basis(index)
    spec = niemeier_spec(index)
    comps = spec.components
    m = len(comps)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(m)):
        raise ActionError(f"perm must be a permutation of 0..{m - 1}")
    for i, p in enumerate(perm):
        if comps[i] != comps[p]:
            raise ActionError(
                f"component {i} ({comps[i]}) cannot map onto {p} ({comps[p]})"
            )
    ranks = [r for _, r in comps]
    offsets = [sum(ranks[:i]) for i in range(m)]
    n = sum(ranks)
    if blocks is None:
        blocks = [la.identity(r) for r in ranks]
    blocks = [[list(map(int, row)) for row in b] for b in blocks]
    if len(blocks) != m or any(
        len(b) != ranks[i] or any(len(row) != ranks[i] for row in b)
        for i, b in enumerate(blocks)
    ):
        raise ActionError("blocks must be one square matrix per component")
    big = [[0] * n for _ in range(n)]
    for i, p in enumerate(perm):
        for k in range(ranks[i]):
            for l in range(ranks[i]):
                big[offsets[i] + k][offsets[p] + l] = blocks[i][k][l]
    rows = [list(row) for row in basis]
    conj = la.solve_left(rows, la.matmul(rows, big))
    if conj is None:
        raise ActionError("basis change failed")
    gen = []
    for row in conj:
        out_row = []
        for x in row:
            if Fraction(x).denominator != 1:
                raise ActionError(
                    "the permutation does not preserve the glue code"
                )
            out_row.append(int(x))
        gen.append(out_row)
    return GroupAction(lat, [gen])
