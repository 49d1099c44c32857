"""Tests for root enumeration and A/D/E decomposition."""

import itertools
import random

import pytest
import sympy

from latk import roots as roots_module
from latk.lattice import Lattice, direct_sum
from latk.roots import (
    RootsError,
    ade_decompose,
    ade_lattice,
    count_norm4_orthogonal,
    enumerate_roots,
    root_type,
    short_vectors,
)

# Half the classical root counts: one entry per antipodal pair.
ROOT_PAIR_COUNTS = {
    ("A", 1): 1,
    ("A", 2): 3,
    ("A", 3): 6,
    ("A", 4): 10,
    ("A", 5): 15,
    ("A", 6): 21,
    ("A", 7): 28,
    ("A", 8): 36,
    ("D", 4): 12,
    ("D", 5): 20,
    ("D", 6): 30,
    ("D", 7): 42,
    ("D", 8): 56,
    ("E", 6): 36,
    ("E", 7): 63,
    ("E", 8): 120,
}

needs_compiled = pytest.mark.skipif(
    roots_module._enumcore is None, reason="compiled kernel not installed"
)


def brute_force_root_reps(gram):
    """Independent exhaustive search over the bounding box of the ellipsoid."""
    n = len(gram)
    q = sympy.Matrix([[-e for e in row] for row in gram])
    qinv = q.inv()
    bounds = [int(sympy.floor(sympy.sqrt(2 * qinv[i, i]))) for i in range(n)]
    found = set()
    for x in itertools.product(*[range(-b, b + 1) for b in bounds]):
        if not any(x):
            continue
        vec = sympy.Matrix([x])
        if (vec * q * vec.T)[0, 0] == 2:
            lead = next(c for c in x if c)
            found.add(x if lead > 0 else tuple(-c for c in x))
    return sorted(found)


def random_negative_definite(rng, n):
    while True:
        a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(a).det() != 0:
            break
    return [
        [-sum(a[i][k] * a[j][k] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def random_unimodular(rng, n, steps=12):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-2, -1, 1, 2))
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


def conjugate(gram, u):
    n = len(gram)
    return [
        [
            sum(u[i][a] * gram[a][b] * u[j][b] for a in range(n) for b in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]


@pytest.mark.parametrize(("kind", "rank"), sorted(ROOT_PAIR_COUNTS))
def test_standard_lattice_root_count(kind, rank):
    assert len(enumerate_roots(ade_lattice(kind, rank))) == ROOT_PAIR_COUNTS[
        (kind, rank)
    ]


@pytest.mark.parametrize(("kind", "rank"), sorted(ROOT_PAIR_COUNTS))
def test_standard_lattice_round_trip(kind, rank):
    record = ade_decompose(ade_lattice(kind, rank))
    assert record.label == f"{kind}_{rank}"
    (comp,) = record.components
    assert (comp.kind, comp.rank) == (kind, rank)


@pytest.mark.parametrize(("kind", "rank"), sorted(ROOT_PAIR_COUNTS))
def test_simple_basis_gram_matches_standard_form(kind, rank):
    lattice = ade_lattice(kind, rank)
    (comp,) = ade_decompose(lattice).components
    got = [
        [lattice.pair(list(v), list(w)) for w in comp.basis] for v in comp.basis
    ]
    assert got == ade_lattice(kind, rank).gram_rows()


def test_short_vectors_explicit_binary_form():
    assert short_vectors([[2, 1], [1, 2]], 2) == [(0, 1), (1, -1), (1, 0)]
    assert short_vectors([[2, 0], [0, 2]], 3) == []


def test_single_root_lattice():
    assert enumerate_roots(Lattice([[-2]])) == [(1,)]
    assert root_type(Lattice([[-2]])) == "A_1"


def test_root_free_lattices():
    assert enumerate_roots(Lattice([[-4]])) == []
    assert root_type(Lattice([[-4]])) == "{0}"
    assert root_type(Lattice([])) == "{0}"


def test_many_orthogonal_components():
    gram = [[-2 * int(i == j) for j in range(24)] for i in range(24)]
    record = ade_decompose(Lattice(gram))
    assert record.label == "24A_1"
    assert len(record.components) == 24
    assert len(record.roots) == 24


def test_disjoint_sum_labels_sorted_by_type():
    lattice = direct_sum(ade_lattice("E", 8), ade_lattice("A", 1))
    record = ade_decompose(lattice)
    assert record.label == "A_1+E_8"
    assert len(record.roots) == 121


def test_mixed_multiplicity_label():
    lattice = direct_sum(
        ade_lattice("A", 1), ade_lattice("A", 2), ade_lattice("A", 1)
    )
    assert root_type(lattice) == "2A_1+A_2"


def test_decompose_rejects_non_root_vectors():
    with pytest.raises(RootsError):
        ade_decompose(Lattice([[-4]]), roots=[(1,)])


def test_explicit_root_set_is_normalized_to_pairs():
    lattice = ade_lattice("A", 1)
    record = ade_decompose(lattice, roots=[(1,), (-1,)])
    assert record.roots == ((1,),)
    assert record.label == "A_1"


def test_partial_root_set_closed_within_span():
    # Two adjacent simple roots generate the full rank-2 system.
    record = ade_decompose(ade_lattice("A", 2), roots=[(1, 0), (0, 1)])
    assert record.label == "A_2"
    # An orthogonal pair stays two components.
    square = Lattice([[-2, 0], [0, -2]])
    assert ade_decompose(square, roots=[(1, 0), (0, 1)]).label == "2A_1"


def test_simple_system_closure_recovers_full_type():
    lattice = ade_lattice("D", 4)
    simples = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    record = ade_decompose(lattice, roots=simples)
    assert record.label == "D_4"
    assert len(record.roots) == 4


def test_labels_invariant_under_basis_change():
    rng = random.Random(7)
    for kind, rank in (("A", 3), ("D", 4), ("E", 6)):
        base = ade_lattice(kind, rank)
        for _ in range(5):
            u = random_unimodular(rng, rank)
            moved = Lattice(conjugate(base.gram_rows(), u))
            assert root_type(moved) == f"{kind}_{rank}"
            assert len(enumerate_roots(moved)) == ROOT_PAIR_COUNTS[(kind, rank)]


def test_agrees_with_brute_force_on_random_lattices():
    rng = random.Random(20260814)
    for _ in range(25):
        n = rng.randint(1, 4)
        gram = random_negative_definite(rng, n)
        assert enumerate_roots(Lattice(gram)) == brute_force_root_reps(gram)


def test_enumeration_output_is_deterministic():
    lattice = ade_lattice("E", 8)
    first = enumerate_roots(lattice)
    assert first == enumerate_roots(lattice)
    assert first == sorted(first)


def test_norm4_counts():
    assert count_norm4_orthogonal(Lattice([[-4]])) == 2
    assert count_norm4_orthogonal(Lattice([[-2, 0], [0, -2]])) == 0
    with_isolated = direct_sum(ade_lattice("A", 1), Lattice([[-4]]))
    assert count_norm4_orthogonal(with_isolated) == 2
    assert count_norm4_orthogonal(Lattice([])) == 0


def test_requires_negative_definite():
    with pytest.raises(RootsError):
        enumerate_roots(Lattice([[2]]))
    with pytest.raises(RootsError):
        count_norm4_orthogonal(Lattice([[0, 1], [1, 0]]))


def test_standard_lattice_constructor_validates_rank():
    for kind, rank in (("A", 0), ("D", 3), ("E", 5), ("E", 9)):
        with pytest.raises(RootsError):
            ade_lattice(kind, rank)
    with pytest.raises(RootsError):
        ade_lattice("X", 4)


def test_unknown_backend_rejected():
    with pytest.raises(RootsError):
        short_vectors([[2]], 2, backend="fancy")


def test_precision_env_must_be_integer(monkeypatch):
    monkeypatch.setenv("LATK_PRECISION_BITS", "abc")
    with pytest.raises(RootsError):
        short_vectors([[2]], 2)


def test_low_precision_ceiling_falls_back_to_pure(monkeypatch):
    monkeypatch.setenv("LATK_PRECISION_BITS", "1")
    assert len(enumerate_roots(ade_lattice("E", 8))) == 120


@needs_compiled
def test_forcing_compiled_over_the_ceiling_raises(monkeypatch):
    monkeypatch.setenv("LATK_PRECISION_BITS", "1")
    with pytest.raises(RootsError):
        short_vectors([[2]], 2, backend="compiled")


@needs_compiled
def test_backends_agree_on_random_forms():
    rng = random.Random(99)
    checked = 0
    while checked < 40:
        n = rng.randint(1, 5)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(a).det() == 0:
            continue
        q = [
            [sum(a[i][k] * a[j][k] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        target = rng.randint(1, 8)
        plan = roots_module._enum_pure.prepare(q, target)
        if plan.limit.bit_length() > roots_module._MAX_BITS:
            continue
        assert short_vectors(q, target, backend="pure") == short_vectors(
            q, target, backend="compiled"
        )
        checked += 1


@needs_compiled
def test_backends_agree_on_standard_lattices():
    for kind, rank in (("A", 8), ("D", 8), ("E", 8), ("A", 24), ("D", 24)):
        gram = [[-e for e in row] for row in ade_lattice(kind, rank).gram_rows()]
        assert short_vectors(gram, 2, backend="pure") == short_vectors(
            gram, 2, backend="compiled"
        )


def test_large_rank_root_counts():
    assert len(enumerate_roots(ade_lattice("A", 24))) == 300
    assert len(enumerate_roots(ade_lattice("D", 24))) == 552
