"""Exact enumeration of short vectors of a positive definite integer form.

The form is split as ``q(x) = sum_i d_i (x_i + sum_{j>i} r_ij x_j)^2`` by a
rational Cholesky decomposition, then searched depth first from the last
coordinate with exact bounds at every level.  All quantities are rescaled to
integers on a common denominator up front, so the search itself runs on
plain integer arithmetic; no floating point appears anywhere.

:func:`prepare` builds the scaled integer data together with an exact bound
on every integer the search can produce, which lets callers dispatch the
same plan either to :func:`run` here or to the fixed-width compiled core.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

__all__ = ["EnumPlan", "NotPositiveDefinite", "prepare", "run", "finalize", "short_vectors"]


class NotPositiveDefinite(ValueError):
    """The matrix handed to the enumerator is not positive definite."""


@dataclass(frozen=True)
class EnumPlan:
    """Scaled integer data driving the level-by-level search.

    At level ``i`` the offset ``sum_{j>i} r_ij x_j`` equals
    ``(sum_k rows[i][k] * x_{i+1+k}) / scale[i]``, and the level term of the
    form, multiplied by the global common denominator, is
    ``weight[i] * (scale[i]*x_i + offset_numerator)^2``.  The search starts
    from ``budget = target * common_denominator`` and accepts a vector when
    the budget is spent exactly.

    ``limit`` bounds the absolute value of every integer the search can
    touch; a fixed-width backend may be used iff ``limit`` fits its word.
    """

    size: int
    target: int
    scale: tuple[int, ...]
    weight: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]
    budget: int
    limit: int


def _cholesky(q_rows: list[list[int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Split Q as R^T D R with R unit upper triangular, D positive diagonal."""
    n = len(q_rows)
    a = [[Fraction(q_rows[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise NotPositiveDefinite("matrix is not positive definite")
        for j in range(i + 1, n):
            r[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= d[i] * r[i][j] * r[i][k]
    return d, r


def prepare(q_rows: list[list[int]], target: int) -> EnumPlan:
    """Build an :class:`EnumPlan` for ``x Q x^T = target`` over integer x.

    Raises :class:`NotPositiveDefinite` if Q is not positive definite and
    ``ValueError`` if the target is not a positive integer.
    """
    if target <= 0:
        raise ValueError("enumeration target must be positive")
    n = len(q_rows)
    if n == 0:
        return EnumPlan(0, target, (), (), (), 0, 0)
    d, r = _cholesky(q_rows)

    scale = []
    rows = []
    for i in range(n):
        s = 1
        for j in range(i + 1, n):
            s = lcm(s, r[i][j].denominator)
        scale.append(s)
        rows.append(tuple(int(r[i][j] * s) for j in range(i + 1, n)))
    common = 1
    for i in range(n):
        common = lcm(common, d[i].denominator * scale[i] * scale[i])
    weight = [
        d[i].numerator * (common // (d[i].denominator * scale[i] * scale[i]))
        for i in range(n)
    ]
    budget = target * common

    # Bounding box of the ellipsoid q(x) <= target: |x_i|^2 <= target * (Q^-1)_ii.
    # Every x visited by the search satisfies the level inequalities, hence
    # lies inside the ellipsoid, so these bounds cover all loop variables.
    rinv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        rinv[j][j] = Fraction(1)
        for i in range(j - 1, -1, -1):
            rinv[i][j] = -sum(r[i][k] * rinv[k][j] for k in range(i + 1, j + 1))
    xbound = []
    for i in range(n):
        qinv_ii = sum(rinv[i][k] * rinv[i][k] / d[k] for k in range(i, n))
        xbound.append(isqrt(int(target * qinv_ii)))
    limit = budget
    for i in range(n):
        snmax = sum(abs(c) * xbound[i + 1 + k] for k, c in enumerate(rows[i]))
        ybound = isqrt(budget // weight[i])
        limit = max(limit, ybound + snmax + scale[i], scale[i] * (xbound[i] + 1) + snmax)
    return EnumPlan(n, target, tuple(scale), tuple(weight), tuple(rows), budget, limit)


def run(plan: EnumPlan) -> list[tuple[int, ...]]:
    """Execute the search; returns raw solutions, one per antipodal pair.

    The representative returned is the one whose last nonzero coordinate is
    positive (the search fixes the sign at the outermost branching level);
    :func:`finalize` converts to the documented canonical form.
    """
    n = plan.size
    if n == 0:
        return []
    scale, weight, rows = plan.scale, plan.weight, plan.rows
    x = [0] * n
    out: list[tuple[int, ...]] = []

    def descend(i: int, rem: int, zeros_above: bool) -> None:
        sn = 0
        row = rows[i]
        for k in range(len(row)):
            c = row[k]
            if c:
                sn += c * x[i + 1 + k]
        w = weight[i]
        s = scale[i]
        ymax = isqrt(rem // w)
        lo = -((ymax + sn) // s)
        hi = (ymax - sn) // s
        if zeros_above and lo < 0:
            lo = 0
        if i == 0:
            for xi in range(lo, hi + 1):
                y = xi * s + sn
                if rem == w * y * y:
                    x[0] = xi
                    if any(x):
                        out.append(tuple(x))
            x[0] = 0
        else:
            for xi in range(lo, hi + 1):
                y = xi * s + sn
                x[i] = xi
                descend(i - 1, rem - w * y * y, zeros_above and xi == 0)
            x[i] = 0

    descend(n - 1, plan.budget, True)
    return out


def finalize(raw: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Canonicalize pair representatives (first nonzero positive) and sort."""
    fixed = []
    for v in raw:
        for c in v:
            if c:
                fixed.append(v if c > 0 else tuple(-t for t in v))
                break
    fixed.sort()
    return fixed


def short_vectors(q_rows: list[list[int]], target: int) -> list[tuple[int, ...]]:
    """All x with ``x Q x^T = target``, one canonical vector per pair ±x."""
    return finalize(run(prepare(q_rows, target)))
