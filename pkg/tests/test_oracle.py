"""Modular character tables and the independent minimal-dimension search."""

import numpy as np
import pytest

from chainrep.exactrep import Cyclotomic, cyc_sum
from chainrep.group_models import CapExceededError
from chainrep.oracle import (
    CharacterTable,
    catalog_from_table,
    character_table,
    cross_validate,
    min_faithful_exhaustive,
    minimal_normal_witnesses,
)

FROZEN_DIMS = {
    "d4": [1, 1, 1, 1, 2],
    "q8": [1, 1, 1, 1, 2],
    "hei3_f3": [1, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3],
    "gl2_f3": [1, 1, 2, 2, 2, 3, 3, 4],
    "aff_z9": [1, 1, 1, 1, 1, 1, 2, 2, 2, 6],
}

FROZEN_PRIMES = {
    "d4": 13,       # 1 mod 4, square > 32
    "hei3_f3": 13,  # 1 mod 3, square > 108
    "gl2_f3": 73,   # 1 mod 24, square > 192
    "hei3_z9": 73,  # 1 mod 9, square > 2916
    "u4_f3": 73,    # 1 mod 9, square > 2916
}

EXHAUSTIVE_MIN = {
    "d4": 2,
    "q8": 2,
    "m16": 2,
    "m27": 3,
    "d8_16": 2,
    "z9_units": 6,
    "z8_z4_hom": 3,
    "hei3_f2": 2,
    "hei3_f3": 3,
    "hei3_z4": 4,
    "hei3_f2t2": 6,
    "hei3_ram222": 6,
    "hei5_f2": 4,
    "u3_f3": 3,
    "aff_f3": 2,
    "aff_z4": 2,
    "aff_z9": 6,
    "aff_f4": 3,
    "gl2_f3": 2,
}


def test_dims_frozen(table):
    for name, dims in FROZEN_DIMS.items():
        assert sorted(table(name).dims) == dims


def test_prime_selection_frozen(table):
    for name, l in FROZEN_PRIMES.items():
        assert table(name).prime == l


def test_sum_of_squares(table):
    for name in FROZEN_DIMS:
        T = table(name)
        assert sum(d * d for d in T.dims) == T.group.order
        assert T.r == len(T.group.conjugacy[0])


def test_identity_column(table):
    for name in ["d4", "gl2_f3", "aff_z9"]:
        T = table(name)
        for c in range(T.r):
            assert T.value(c, T.identity_class) == Cyclotomic.integer(int(T.dims[c]))
        # the trivial character is row of all ones
        triv = [c for c in range(T.r) if all(T.value(c, j) == 1 for j in range(T.r))]
        assert len(triv) == 1


def test_row_orthogonality_exact(table):
    for name in ["d4", "hei3_f3", "gl2_f3"]:
        T = table(name)
        sizes = T.sizes
        for a in range(T.r):
            for b in range(a, T.r):
                inner = cyc_sum(
                    [
                        int(sizes[j]) * T.value(a, j) * T.value(b, j).conjugate()
                        for j in range(T.r)
                    ]
                )
                if a == b:
                    assert inner == Cyclotomic.integer(T.group.order)
                else:
                    assert inner.is_zero()


def test_degrees_divide_order(table):
    for name in FROZEN_DIMS:
        T = table(name)
        for d in T.dims:
            assert T.group.order % d == 0


def test_table_deterministic(group):
    G = group("d4")
    T1 = CharacterTable(G)
    T2 = character_table(G)
    assert (T1.mu == T2.mu).all()
    assert T1.dims == T2.dims


def test_kernels_are_normal_subgroups(table):
    for name in ["d4", "q8", "aff_z9", "gl2_f3"]:
        T = table(name)
        G = T.group
        lat = T.kernel_lattice()
        assert len(lat.kernels) == T.r
        for K in lat.kernels:
            assert G.closure(sorted(K)) == sorted(K)
            for g in G.elements:
                assert {G.conj(g, k) for k in K} == set(K)
        # trivial character: kernel is everything
        sizes = [len(K) for K in lat.kernels]
        assert max(sizes) == G.order
    # a faithful irrep exists iff some kernel is trivial: true for the
    # order-8 groups with cyclic center, false over the non-cyclic center
    assert any(len(K) == 1 for K in table("q8").kernel_lattice().kernels)
    assert any(len(K) == 1 for K in table("d4").kernel_lattice().kernels)
    assert all(len(K) > 1 for K in table("hei3_f2t2").kernel_lattice().kernels)


def test_minimal_normal_witnesses(table):
    # the unique minimal normal subgroup of the order-8 two-step groups
    # is the center; the rank-2 socle over F_2[t]/t^2 has 3 lines
    assert len(minimal_normal_witnesses(table("d4"))) == 1
    assert len(minimal_normal_witnesses(table("q8"))) == 1
    assert len(minimal_normal_witnesses(table("hei3_f2t2"))) == 3
    assert len(minimal_normal_witnesses(table("gl2_f3"))) == 1


def test_min_faithful_exhaustive(table):
    for name, m in EXHAUSTIVE_MIN.items():
        got, sel = min_faithful_exhaustive(table(name))
        assert got == m, name
        T = table(name)
        joint = set(T.kernel_elements(sel[0]))
        for c in sel[1:]:
            joint &= T.kernel_elements(c)
        assert joint == {T.group.identity}
        assert sum(int(T.dims[c]) for c in sel) == m


def test_min_faithful_abelian(make_abelian):
    # abelian groups need one summand per invariant factor
    for orders, m in [((8,), 1), ((2, 4), 2), ((3, 3, 3), 3), ((2, 2), 2), ((6,), 1)]:
        T = CharacterTable(make_abelian(orders))
        got, sel = min_faithful_exhaustive(T)
        assert got == m
        assert all(int(T.dims[c]) == 1 for c in sel)


def test_catalog_from_table_pgroup(table):
    T = table("hei3_z4")
    entries = catalog_from_table(T)
    assert len(entries) == T.r
    for dim, vec, row in entries:
        assert int(T.dims[row]) == dim
        assert vec.p == 2


def test_catalog_from_table_rejects_non_p_group(table):
    with pytest.raises(AssertionError):
        catalog_from_table(table("aff_z9"))


def test_cap_enforcement(group):
    with pytest.raises(CapExceededError):
        CharacterTable(group("d4"), cap=4)


def test_cross_validate_ok(suite_report):
    assert suite_report["ok"] is True
    assert suite_report["mismatches"] == []
    assert len(suite_report["results"]) == 23
    for res in suite_report["results"]:
        assert res["match"] is True, res["name"]


def test_cross_validate_core_agreement(suite_report):
    # every instance that ran the oracle agrees with the closed form
    for res in suite_report["results"]:
        vals = res["values"]
        core = {
            k: v
            for k, v in vals.items()
            if k
            in {
                "formula",
                "solver",
                "construct",
                "formula_two_step",
                "construct_two_step",
                "oracle",
                "solver_catalog",
            }
        }
        assert len(set(core.values())) == 1, res["name"]


def test_cross_validate_detects_mismatch():
    suite = {
        "name": "tiny-bad",
        "instances": [
            {
                "name": "hei3-f2-wrong",
                "family": "heisenberg",
                "p": 2,
                "f": 1,
                "e": 1,
                "n": 1,
                "k": 1,
                "expected": 3,
                "oracle": True,
            }
        ],
    }
    report = cross_validate(suite)
    assert report["ok"] is False
    assert report["mismatches"] == ["hei3-f2-wrong"]


def test_cross_validate_tiny_suite():
    suite = {
        "name": "tiny",
        "instances": [
            {
                "name": "aff-f3",
                "family": "affine",
                "p": 3,
                "f": 1,
                "e": 1,
                "n": 1,
                "expected": 2,
                "oracle": True,
            },
            {
                "name": "m27",
                "family": "semidirect",
                "modulus": 9,
                "multipliers": [4],
                "expected": 3,
                "oracle": True,
                "two_step": True,
            },
        ],
    }
    report = cross_validate(suite)
    assert report["ok"] is True
    assert {r["name"] for r in report["results"]} == {"aff-f3", "m27"}
