"""Integral lattices presented by Gram matrices.

A lattice here is a free Z-module Z^n together with a symmetric integer
Gram matrix; there is no ambient Euclidean space.  Vectors are integer
row vectors in basis coordinates and pair via ``v G w^T``.

Sublattices are presented by basis rows inside an ambient lattice; the
induced Gram matrix is ``B G B^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import intlinalg as la
from .intlinalg import Matrix


class LatticeError(ValueError):
    """Raised for structurally invalid lattice input."""


@dataclass(frozen=True)
class Lattice:
    """An integral lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __init__(self, gram: Matrix | tuple[tuple[int, ...], ...]):
        g = [list(row) for row in gram]
        if g and not la.is_symmetric(g):
            raise LatticeError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", tuple(tuple(row) for row in g))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def gram_rows(self) -> Matrix:
        return [list(row) for row in self.gram]

    def det(self) -> int:
        return la.det(self.gram_rows())

    def is_nondegenerate(self) -> bool:
        return self.rank == 0 or self.det() != 0

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def pair(self, v: list[int], w: list[int]) -> int:
        if len(v) != self.rank or len(w) != self.rank:
            raise LatticeError("vector length does not match rank")
        return sum(
            v[i] * self.gram[i][j] * w[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def norm(self, v: list[int]) -> int:
        return self.pair(v, v)

    def is_negative_definite(self) -> bool:
        pos, neg, zero = signature(self)
        return pos == 0 and zero == 0

    def is_positive_definite(self) -> bool:
        pos, neg, zero = signature(self)
        return neg == 0 and zero == 0


def signature(lat: Lattice) -> tuple[int, int, int]:
    """Exact inertia (n_plus, n_minus, n_zero) via symmetric reduction.

    Works over the rationals: repeatedly split off a diagonal pivot; if
    only off-diagonal entries remain nonzero, a row addition creates a
    usable diagonal one (characteristic zero, so 2 is invertible).
    """
    n = lat.rank
    a = [[Fraction(x) for x in row] for row in lat.gram]
    pos = neg = zero = 0
    live = list(range(n))
    while live:
        piv = None
        for i in live:
            if a[i][i]:
                piv = i
                break
        if piv is None:
            # look for an off-diagonal entry among live indices
            od = None
            for i in live:
                for j in live:
                    if i != j and a[i][j]:
                        od = (i, j)
                        break
                if od:
                    break
            if od is None:
                zero += len(live)
                break
            i, j = od
            # row/col addition: new a[i][i] = 2*a[i][j] != 0
            for k in live:
                a[i][k] += a[j][k]
            for k in live:
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        live.remove(piv)
        # snapshot the pivot row before any elimination touches it
        prow = {j: a[piv][j] for j in live}
        for i in live:
            if a[i][piv]:
                f = a[i][piv] / p
                for j in live:
                    a[i][j] -= f * prow[j]
        for i in live:
            a[i][piv] = Fraction(0)
            a[piv][i] = Fraction(0)
    return pos, neg, zero


def direct_sum(*lats: Lattice) -> Lattice:
    n = sum(l.rank for l in lats)
    g = la.zeros(n, n)
    off = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                g[off + i][off + j] = l.gram[i][j]
        off += l.rank
    return Lattice(g)


def rescale(lat: Lattice, c: int) -> Lattice:
    if c == 0:
        raise LatticeError("rescale by zero")
    return Lattice([[c * x for x in row] for row in lat.gram])


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of an ambient lattice, given by basis rows."""

    ambient: Lattice
    basis: tuple[tuple[int, ...], ...]

    def __init__(self, ambient: Lattice, basis: Matrix):
        rows = [list(r) for r in basis]
        for r in rows:
            if len(r) != ambient.rank:
                raise LatticeError("basis row length does not match ambient rank")
        if rows and la.rank(rows) != len(rows):
            raise LatticeError("basis rows are dependent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_rows(self) -> Matrix:
        return [list(r) for r in self.basis]

    def induced(self) -> Lattice:
        """Gram matrix of the basis under the ambient pairing."""
        if self.rank == 0:
            return Lattice([])
        b = self.basis_rows()
        g = la.matmul(la.matmul(b, self.ambient.gram_rows()), la.transpose(b))
        return Lattice(g)

    def is_primitive(self) -> bool:
        if self.rank == 0:
            return True
        d, _, _ = la.snf(self.basis_rows())
        return all(d[i][i] == 1 for i in range(self.rank))


def full_sublattice(lat: Lattice) -> Sublattice:
    return Sublattice(lat, la.identity(lat.rank))


def orthogonal_complement(sub: Sublattice) -> Sublattice:
    """The sublattice of ambient vectors pairing to zero with all of sub.

    Always primitive: it is the kernel of pairing against the given
    basis, and kernels are saturated.
    """
    amb = sub.ambient
    if sub.rank == 0:
        return full_sublattice(amb)
    m = la.matmul(amb.gram_rows(), la.transpose(sub.basis_rows()))
    ker = la.kernel_basis(m)
    return Sublattice(amb, ker)


def primitive_closure(sub: Sublattice) -> Sublattice:
    """Smallest primitive sublattice containing sub (saturation)."""
    if sub.rank == 0:
        return sub
    return Sublattice(sub.ambient, la.saturate(sub.basis_rows()))


def span_sublattice(ambient: Lattice, rows: Matrix) -> Sublattice:
    """Sublattice spanned by possibly dependent rows."""
    basis = la.hnf_rows(rows) if rows else []
    return Sublattice(ambient, basis)


def overlattice(lat: Lattice, glue: list[list[Fraction]]) -> tuple[Lattice, Matrix]:
    """Adjoin rational glue vectors (in basis coordinates) to a lattice.

    Returns the new lattice and the basis of the new lattice expressed
    in D-scaled coordinates of the old one: rows ``B`` with entries in
    (1/D)Z give new basis vectors ``B/D``.  The result must again be an
    even integral lattice; anything else is rejected.
    """
    n = lat.rank
    den = 1
    for v in glue:
        if len(v) != n:
            raise LatticeError("glue vector length does not match rank")
        for x in v:
            den = la.lcm(den, Fraction(x).denominator)
    scaled: Matrix = [[den if i == j else 0 for j in range(n)] for i in range(n)]
    for v in glue:
        scaled.append([int(Fraction(x) * den) for x in v])
    h = la.hnf_rows(scaled)
    if len(h) != n:
        raise LatticeError("glue vectors leave the rational span of the lattice")
    # new basis = h / den; new Gram = (h/den) G (h/den)^T
    raw = la.matmul(la.matmul(h, lat.gram_rows()), la.transpose(h))
    d2 = den * den
    g = []
    for i, row in enumerate(raw):
        grow = []
        for j, x in enumerate(row):
            if x % d2:
                raise LatticeError("glue produces a non-integral pairing")
            grow.append(x // d2)
        g.append(grow)
    out = Lattice(g)
    if not out.is_even():
        raise LatticeError("glue produces an odd lattice")
    return out, h


def glue_index(lat: Lattice, over: Lattice) -> int:
    """Index of lat in an overlattice, from the determinant drop."""
    d0, d1 = lat.det(), over.det()
    if d1 == 0 or d0 % d1:
        raise LatticeError("not an overlattice determinant pair")
    q = abs(d0 // d1)
    r = isqrt(q)
    if r * r != q:
        raise LatticeError("determinant ratio is not a perfect square")
    return r
