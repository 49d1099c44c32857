import random
from fractions import Fraction

import pytest

from latk.discform import (
    BruteForceBound,
    DiscformError,
    FiniteQuadraticForm,
    canonicalize,
    discriminant_form,
    form_sum,
    format_symbol,
    fqf_isomorphic,
    genus_symbol,
    invariant_factors,
    negate,
    parse_symbol,
    signature_mod8,
    symbol_of_form,
    symbol_to_form,
    trivial_form,
)
from latk.intlinalg import det as int_det
from latk.lattice import Lattice, direct_sum, rescale, signature


def e8_gram():
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]:
        g[i - 1][j - 1] = g[j - 1][i - 1] = 1
    return g


def a2_gram():
    return [[2, -1], [-1, 2]]


def hyperbolic_gram():
    return [[0, 1], [1, 0]]


def random_even_gram(rng, n, spread):
    while True:
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2 * rng.randint(-spread, spread)
            for j in range(i + 1, n):
                a[i][j] = a[j][i] = rng.randint(-spread, spread)
        if int_det(a) != 0:
            return a


def random_unimodular(rng, n, steps=14):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


def conjugate(u, g):
    n = len(g)
    ug = [
        [sum(u[i][k] * g[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    return [
        [sum(ug[i][k] * u[j][k] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


# -- discriminant groups and q ----------------------------------------------


def test_minus_two_discriminant():
    f = discriminant_form(Lattice([[-2]]))
    assert f.orders == (2,)
    gen = [1]
    assert f.q(gen) == Fraction(3, 2)


def test_a2_negative_discriminant():
    f = discriminant_form(rescale(Lattice(a2_gram()), -1))
    assert f.orders == (3,)
    assert sorted(f.q(c) for c in f.elements()) == [
        Fraction(0),
        Fraction(4, 3),
        Fraction(4, 3),
    ]


def test_unimodular_lattice_has_trivial_form():
    f = discriminant_form(Lattice(e8_gram()))
    assert f.ngens == 0
    assert f.group_order() == 1


def test_group_order_matches_determinant():
    rng = random.Random(3)
    for _ in range(40):
        g = random_even_gram(rng, rng.randint(1, 5), 4)
        f = discriminant_form(Lattice(g))
        assert f.group_order() == abs(int_det(g))


def test_form_validation_rejects_bad_denominator():
    # q on Z/4 must have 4 q integral
    with pytest.raises(DiscformError):
        FiniteQuadraticForm([4], [Fraction(1, 8)], None)


def test_form_validation_rejects_odd_scaling():
    # 2 q(x) must be an even multiple of 1/d^2... i.e. d^2 q in 2Z
    with pytest.raises(DiscformError):
        FiniteQuadraticForm([2], [Fraction(1, 4)], None)


def test_form_sum_and_negate():
    f = discriminant_form(Lattice([[-2]]))
    g = negate(f)
    assert g.q([1]) == Fraction(1, 2)
    s = form_sum(f, g)
    assert s.group_order() == 4
    assert signature_mod8(s) == 0


def test_invariant_factors_of_direct_sum():
    f = FiniteQuadraticForm([2, 2, 3], [Fraction(1, 2), Fraction(1, 2), Fraction(2, 3)], None)
    assert invariant_factors(f.gen_orders) == (2, 6)
    assert f.orders == (2, 6)


# -- genus symbols: formatting and parsing -----------------------------------


def test_format_parse_roundtrip():
    for text in [
        "2_7^+1",
        "2_II^+8",
        "2_5^-1,3^+1",
        "4_3^-1,9^-1,25^+2",
        "2_II^-2,8_1^+1,3^-2",
        "1",
    ]:
        assert format_symbol(parse_symbol(text)) == text


def test_parse_rejects_garbage():
    for text in ["6^+1", "2^+0", "2_3^-1,2_5^+1", "3_1^+1", "x"]:
        with pytest.raises(DiscformError):
            parse_symbol(text)


def test_trivial_symbol_formats_as_one():
    assert format_symbol(genus_symbol(Lattice(e8_gram()))) == "1"


# -- genus symbols: frozen values ---------------------------------------------


def test_symbol_of_minus_two():
    assert format_symbol(genus_symbol(Lattice([[-2]]))) == "2_7^+1"


def test_symbol_of_a2_negative():
    lat = rescale(Lattice(a2_gram()), -1)
    assert format_symbol(genus_symbol(lat)) == "3^+1"


def test_symbol_of_minus_six():
    assert format_symbol(genus_symbol(Lattice([[-6]]))) == "2_5^-1,3^+1"


def test_symbol_of_e8_twice_negative():
    lat = rescale(Lattice(e8_gram()), -2)
    assert format_symbol(genus_symbol(lat)) == "2_II^+8"


def test_hyperbolic_summand_does_not_change_symbol():
    lat = Lattice([[2]])
    both = direct_sum(Lattice(hyperbolic_gram()), lat)
    assert genus_symbol(both) == genus_symbol(lat)


# -- canonicalization ---------------------------------------------------------


def test_canonicalize_known_equivalent_pairs():
    # each pair was checked equivalent by exhaustive GL_2(Z/512) orbit
    # computation on the corresponding Jordan forms
    pairs = [
        ("2_5^-1,4_5^-1", "2_7^+1,4_7^+1"),
        ("2_1^+1,4_1^+1", "2_3^-1,4_3^-1"),
        ("2_1^+1,4_7^+1", "2_7^+1,4_1^+1"),
        ("2_1^+1,8_1^+1", "2_5^-1,8_5^-1"),
        ("4_1^+1,16_3^-1", "4_5^-1,16_7^+1"),
    ]
    for a, b in pairs:
        assert canonicalize(a) == canonicalize(b), (a, b)


def test_canonicalize_separates_known_inequivalent_pairs():
    pairs = [
        ("2_1^+1,4_1^+1", "2_5^-1,4_5^-1"),
        ("2_1^+1,4_1^+1", "2_7^+1,4_7^+1"),
        ("2_1^+1,16_1^+1", "2_5^-1,16_5^-1"),
        ("2_II^+2", "2_II^-2"),
    ]
    for a, b in pairs:
        assert canonicalize(a) != canonicalize(b), (a, b)


def test_canonicalize_is_idempotent():
    rng = random.Random(5)
    for _ in range(60):
        g = random_even_gram(rng, rng.randint(1, 5), 4)
        sym = genus_symbol(Lattice(g))
        once = canonicalize(sym)
        assert canonicalize(once) == once


def test_canonicalize_with_rank_checks_parity():
    with pytest.raises(DiscformError):
        canonicalize("2_7^+1", rank=2)


# -- the two routes agree ------------------------------------------------------


def test_symbol_routes_agree_on_random_lattices():
    rng = random.Random(9)
    for _ in range(120):
        g = random_even_gram(rng, rng.randint(1, 5), 4)
        lat = Lattice(g)
        pos, neg, _ = signature(lat)
        via_lattice = canonicalize(genus_symbol(lat))
        via_form = canonicalize(symbol_of_form(discriminant_form(lat), (pos, neg)))
        assert via_lattice == via_form, g


def test_symbol_is_basis_invariant():
    rng = random.Random(13)
    for _ in range(80):
        n = rng.randint(1, 5)
        g = random_even_gram(rng, n, 4)
        h = conjugate(random_unimodular(rng, n), g)
        assert genus_symbol(Lattice(g)) == genus_symbol(Lattice(h)), (g, h)


# -- Milgram ------------------------------------------------------------------


def test_signature_mod8_on_frozen_forms():
    assert signature_mod8(discriminant_form(Lattice([[-2]]))) == 7
    assert signature_mod8(discriminant_form(Lattice([[2]]))) == 1
    assert signature_mod8(discriminant_form(rescale(Lattice(a2_gram()), -1))) == 6
    assert signature_mod8(trivial_form()) == 0


def test_signature_mod8_matches_lattice_signature():
    rng = random.Random(17)
    for _ in range(80):
        g = random_even_gram(rng, rng.randint(1, 5), 4)
        lat = Lattice(g)
        pos, neg, _ = signature(lat)
        assert signature_mod8(discriminant_form(lat)) == (pos - neg) % 8, g


def test_signature_mod8_accepts_symbols():
    assert signature_mod8("2_7^+1") == 7
    assert signature_mod8("2_II^+8") == 0


# -- symbol -> form -------------------------------------------------------------


def test_symbol_to_form_roundtrip():
    rng = random.Random(23)
    for _ in range(80):
        g = random_even_gram(rng, rng.randint(1, 5), 4)
        lat = Lattice(g)
        sym = canonicalize(genus_symbol(lat))
        f = symbol_to_form(sym)
        assert f.group_order() == abs(int_det(g))
        pos, neg, _ = signature(lat)
        extra = (signature_mod8(f) - (pos - neg)) % 8
        assert extra % 2 == 0
        back = symbol_of_form(f, (pos + extra // 2 + 4, neg + 4 - extra // 2))
        assert canonicalize(back) == sym, (g, format_symbol(sym))


def test_symbol_to_form_realizes_the_same_form():
    rng = random.Random(29)
    done = 0
    while done < 40:
        g = random_even_gram(rng, rng.randint(1, 4), 3)
        if abs(int_det(g)) > 40:
            continue
        f = discriminant_form(Lattice(g))
        f2 = symbol_to_form(canonicalize(genus_symbol(Lattice(g))))
        assert fqf_isomorphic(f, f2), g
        done += 1


def test_symbol_to_form_rejects_odd_rank_type_two():
    with pytest.raises(DiscformError):
        symbol_to_form("2_II^+1")


# -- canonical symbols match brute force isomorphism ---------------------------


def test_equal_symbols_iff_isomorphic_forms():
    rng = random.Random(31)
    buckets = {}
    while sum(len(v) for v in buckets.values()) < 60:
        g = random_even_gram(rng, rng.randint(1, 4), 3)
        if abs(int_det(g)) > 48:
            continue
        f = discriminant_form(Lattice(g))
        key = format_symbol(canonicalize(genus_symbol(Lattice(g))))
        buckets.setdefault(key, []).append(f)
    for key, forms in buckets.items():
        for other in forms[1:3]:
            assert fqf_isomorphic(forms[0], other), key
    keys = sorted(buckets)
    checked = 0
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            fa, fb = buckets[ka][0], buckets[kb][0]
            if fa.group_order() != fb.group_order():
                continue
            assert not fqf_isomorphic(fa, fb), (ka, kb)
            checked += 1
    assert checked > 0


def test_fqf_isomorphic_raises_beyond_bound():
    f = discriminant_form(rescale(Lattice(e8_gram()), -4))
    with pytest.raises(BruteForceBound):
        fqf_isomorphic(f, f, order_bound=64)
