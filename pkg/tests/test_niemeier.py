"""Tests for the construction of the 23 Niemeier lattices with roots."""

import pytest

from latk.lattice import direct_sum, glue_index
from latk.niemeier import (
    NIEMEIER_COUNT,
    NiemeierError,
    build_niemeier,
    niemeier_spec,
    verify_niemeier,
)
from latk.roots import ade_lattice

# Root counts for a few entries, as (label, number of roots).
SPOT_CHECKS = {
    1: ("D_24", 1104),
    3: ("3E_8", 720),
    12: ("4E_6", 288),
    16: ("2A_7+2D_5", 192),
    23: ("24A_1", 48),
}


@pytest.fixture(scope="module")
def built():
    return {j: build_niemeier(j) for j in range(1, NIEMEIER_COUNT + 1)}


def test_count_is_twenty_three():
    assert NIEMEIER_COUNT == 23


def test_all_entries_verify(built):
    for j, lattice in built.items():
        report = verify_niemeier(lattice, j)
        assert report.all_ok(), (j, report.checks)
        assert report.determinant == 1
        assert report.rank == 24


@pytest.mark.parametrize("j", sorted(SPOT_CHECKS))
def test_spot_root_systems(j, built):
    label, count = SPOT_CHECKS[j]
    report = verify_niemeier(built[j], j)
    assert report.root_label == label
    assert report.root_count == count


def test_component_ranks_sum_to_24():
    for j in range(1, NIEMEIER_COUNT + 1):
        spec = niemeier_spec(j)
        assert sum(rank for _, rank in spec.components) == 24


def test_glue_words_match_component_count():
    for j in range(1, NIEMEIER_COUNT + 1):
        spec = niemeier_spec(j)
        for word in spec.glue:
            assert len(word) == len(spec.components)


def test_glue_group_order_squares_to_root_determinant(built):
    for j, lattice in built.items():
        spec = niemeier_spec(j)
        rootsum = direct_sum(*(ade_lattice(k, r) for k, r in spec.components))
        index = glue_index(rootsum, lattice)
        assert index * index == abs(rootsum.det())


def test_verification_detects_wrong_index(built):
    report = verify_niemeier(built[23], 1)
    assert not report.all_ok()
    assert report.checks["det"]
    assert report.checks["even"]
    assert not report.checks["root_type"]


def test_out_of_range_indices_rejected():
    for j in (0, -1, 25, 100):
        with pytest.raises(NiemeierError):
            niemeier_spec(j)
    with pytest.raises(NiemeierError):
        build_niemeier(0)


def test_index_24_names_the_leech_lattice():
    with pytest.raises(NiemeierError, match="Leech"):
        niemeier_spec(24)


def test_spec_loader_is_cached():
    assert niemeier_spec(5) is niemeier_spec(5)
