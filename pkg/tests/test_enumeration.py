import cmath
import random

import pytest

from dwpf import BracketParams, ExtendedASM, LatticeConfig, asm_of_config, \
    brute_force_pf, c_plus_weight, config_of_asm, count_configs, \
    enumerate_asms, enumerate_configs
from dwpf.errors import BudgetExceeded

from conftest import draw_box, rel_err


def test_counts_match_independent_asm_enumeration():
    # six-vertex counts are the alternating-sign-matrix numbers
    for L, want in ((1, 1), (2, 2), (3, 7), (4, 42)):
        assert count_configs(1, L) == want
        assert sum(1 for _ in enumerate_asms(1, L)) == want
    for k, L in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        assert count_configs(k, L) == sum(1 for _ in enumerate_asms(k, L))


def test_forced_small_lattices():
    assert count_configs(2, 1) == 1
    assert count_configs(3, 1) == 1
    only = list(enumerate_configs(2, 1))
    assert len(only) == 1
    assert asm_of_config(only[0]).entries == ((2,),)


def test_enumerated_configs_are_valid_and_distinct():
    for k, L in ((1, 3), (2, 2), (2, 3), (3, 2)):
        seen = set()
        for config in enumerate_configs(k, L):
            config.check()
            assert config not in seen
            seen.add(config)
        assert len(seen) == count_configs(k, L)


def test_asm_bijection_roundtrip():
    for k, L in ((1, 3), (2, 2), (2, 3)):
        images = set()
        for config in enumerate_configs(k, L):
            matrix = asm_of_config(config)
            matrix.check()
            assert config_of_asm(matrix) == config
            images.add(matrix)
        assert len(images) == count_configs(k, L)
        assert images == set(enumerate_asms(k, L))


def test_asm_of_single_c_plus():
    config = next(enumerate_configs(1, 1))
    assert asm_of_config(config).entries == ((1,),)


def test_extended_asm_check_rejects_bad_matrices():
    with pytest.raises(ValueError):
        ExtendedASM(1, ((1, 1), (1, -1))).check()     # row sums
    with pytest.raises(ValueError):
        ExtendedASM(1, ((-1, 2), (2, -1))).check()    # partial sums dip below 0
    ExtendedASM(2, ((1, 1), (1, 1))).check()


def test_brute_force_with_unit_weights_counts(params):
    for k, L in ((1, 3), (2, 2)):
        value = brute_force_pf(params, k, L, [0.0] * L, [0.5] * L, weights="ones")
        assert value == count_configs(k, L)


def test_brute_force_one_by_one_is_c_plus(params_complex):
    for k in (1, 2, 3):
        got = brute_force_pf(params_complex, k, 1, [0.2], [0.9])
        assert rel_err(got, c_plus_weight(params_complex, k)) < 1e-12


def test_brute_force_two_by_two_hand_enumeration(params):
    # the two DW configurations of the six-vertex 2x2 lattice, written out:
    # one has b-vertices on the main diagonal, the other a-vertices on the
    # anti-diagonal, each completed by two all-inward/outward corners
    xs, ys = (0.3, 0.7), (1.1, 1.9)
    u = {(i, j): -xs[i] + ys[j] for i in range(2) for j in range(2)}
    c = cmath.sinh(1.0)
    want = (c * c * cmath.sinh(u[(0, 0)]) * cmath.sinh(u[(1, 1)])
            + c * c * cmath.sinh(u[(0, 1)] + 1) * cmath.sinh(u[(1, 0)] + 1))
    got = brute_force_pf(params, 1, 2, xs, ys)
    assert rel_err(got, want) < 1e-13


def test_brute_force_transpose_reflection_symmetry(params, rng):
    # k=1: transposing the lattice and reversing all arrows maps DW to DW
    # and preserves weight classes, with rapidities (x, y) -> (-y, -x)
    for L in (2, 3):
        xs, ys = draw_box(rng, L), draw_box(rng, L)
        a = brute_force_pf(params, 1, L, xs, ys)
        b = brute_force_pf(params, 1, L, [-y for y in ys], [-x for x in xs])
        assert rel_err(a, b) < 1e-12


def test_brute_force_rejects_bad_input(params):
    with pytest.raises(ValueError):
        brute_force_pf(params, 1, 2, [0.1], [0.2, 0.3])
    with pytest.raises(ValueError):
        brute_force_pf(params, 2, 1, [0.1], [0.2], weights="six_vertex")
    with pytest.raises(ValueError):
        brute_force_pf(params, 2, 1, [0.1], [0.2], weights="nonsense")


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        count_configs(2, 3, budget=10)
    with pytest.raises(BudgetExceeded):
        list(enumerate_configs(1, 4, budget=5))


def test_lattice_config_check_catches_corruption():
    config = next(enumerate_configs(1, 2))
    bad = LatticeConfig(config.k, config.L,
                        ((1, 1, 1), (1, -1, -1)), config.v_bonds)
    with pytest.raises(ValueError):
        bad.check()


def test_config_json_shape():
    config = next(enumerate_configs(2, 2))
    d = config.to_dict()
    assert d["k"] == 2 and d["L"] == 2
    assert len(d["h_bonds"]) == 2 and len(d["h_bonds"][0]) == 3
    assert len(d["v_bonds"]) == 3 and len(d["v_bonds"][0]) == 2
