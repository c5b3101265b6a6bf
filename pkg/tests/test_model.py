import cmath
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwpf import BracketParams, bracket, bracket_falling, c_plus_weight, \
    conserving_vertices, fuse_block, fuse_block_with_outflow, \
    sigma_representative, sigma_set, six_vertex_weight, spin1_table_weight, \
    spin_values, stack_rapidities, weight_table
from dwpf.errors import NotInTable, UnreachableSigma
from dwpf.model import CPLUS_HALF, V1_ALIGNED, V1_CPLUS, V1_MERGE, V1_OPPOSED, \
    V1_SPLIT, V1_THROUGH, VertexSpins, q_multiplicity, spin1_closed_form

from conftest import rel_err


def test_spin_values():
    assert spin_values(1) == (1, -1)
    assert spin_values(2) == (2, 0, -2)
    assert spin_values(3) == (3, 1, -1, -3)


def test_vertex_spins_conservation():
    assert VertexSpins(1, -1, -1, 1).conserves
    assert not VertexSpins(1, 1, -1, 1).conserves


def test_six_vertex_weights(params):
    u = 0.37
    # all four spins along flow
    assert rel_err(six_vertex_weight(params, (1, 1, 1, 1), u),
                   cmath.sinh(u + 1)) < 1e-15
    # the all-inward vertex
    assert rel_err(six_vertex_weight(params, CPLUS_HALF, u),
                   cmath.sinh(1.0)) < 1e-15
    assert six_vertex_weight(params, (1, 1, -1, 1), u) == 0


def test_six_vertex_all_tuples(params):
    nonzero = 0
    for v in itertools.product((1, -1), repeat=4):
        w = six_vertex_weight(params, v, 0.21)
        if v[0] + v[1] != v[2] + v[3]:
            assert w == 0
        else:
            nonzero += 1
    assert nonzero == 6


def test_sigma_representative_examples():
    rep = sigma_representative(2, 0, "horizontal")
    assert rep.spins2 == (1, -1)
    assert sigma_representative(2, 2, "horizontal").spins2 == (1, 1)
    assert sigma_representative(2, 0, "vertical").spins2 == (1, -1)
    assert sigma_representative(3, 1, "vertical").spins2 == (1, 1, -1)
    with pytest.raises(UnreachableSigma):
        sigma_representative(2, 4, "horizontal")
    with pytest.raises(UnreachableSigma):
        sigma_representative(2, 1, "horizontal")  # parity
    with pytest.raises(ValueError):
        sigma_representative(2, 0, "diagonal")


def test_sigma_representative_spin1_bonds():
    rep = sigma_representative(2, 0, "vertical", k=2)
    assert rep.spins2 == (2, -2)
    assert sum(rep.spins2) == 0


def test_sigma_set():
    assert sorted(sigma_set(2, 0)) == [(-1, 1), (1, -1)]
    assert list(sigma_set(3, 3)) == [(1, 1, 1)]
    assert list(sigma_set(2, 3)) == []


def test_stack_rapidities():
    assert stack_rapidities((0.5,), 1) == (0.5,)
    assert stack_rapidities((0.1, 0.9), 2) == (0.1, 1.1, 0.9, 1.9)
    assert stack_rapidities((0.0,), 3) == (0.0, 1.0, 2.0)


@given(u=st.complex_numbers(min_magnitude=0.05, max_magnitude=1.0,
                            allow_nan=False, allow_infinity=False))
@settings(max_examples=30, deadline=None)
def test_fusion_reduces_to_six_vertex(u):
    p = BracketParams(lam=0.8 + 0.1j)
    for v in itertools.product((1, -1), repeat=4):
        a = fuse_block(p, 1, v, 0.0, u)
        b = six_vertex_weight(p, v, u)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fused_c_plus_normalization(k, params_complex):
    got = fuse_block(params_complex, k, (k, -k, -k, k), 0.11 + 0.07j, 0.83 - 0.2j)
    want = c_plus_weight(params_complex, k)
    assert rel_err(got, want) < 1e-12


def test_fused_aligned_closed_form(params):
    x, y = 0.3, 1.2
    u = -x + y
    got = fuse_block(params, 2, V1_ALIGNED, x, y)
    assert rel_err(got, cmath.sinh(u + 1) * cmath.sinh(u + 2)) < 1e-12


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fused_weight_vanishes_without_conservation(k, params):
    for v in itertools.product(spin_values(k), repeat=4):
        if v[0] + v[1] != v[2] + v[3]:
            assert fuse_block(params, k, v, 0.1, 0.9) == 0


def test_fused_weight_invalid_spin_raises(params):
    with pytest.raises(ValueError):
        fuse_block(params, 2, (1, 1, 1, 1), 0.0, 0.5)  # odd doubled spins at k=2


def test_golden_table_matches_fusion(rng):
    for _ in range(6):
        lam = complex(rng.uniform(0.3, 1.2), rng.uniform(-0.4, 0.4))
        p = BracketParams(lam=lam)
        x, y = complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)), \
            complex(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5))
        for v in conserving_vertices(2):
            try:
                want = spin1_table_weight(p, v, -x + y)
            except NotInTable:
                continue
            got = fuse_block(p, 2, v, x, y)
            assert rel_err(got, want) < 1e-9


def test_spin1_table_examples(params):
    u = 0.42
    assert rel_err(spin1_table_weight(params, V1_THROUGH, u),
                   cmath.sinh(u) * cmath.sinh(u + 1)) < 1e-15
    assert rel_err(spin1_table_weight(params, V1_CPLUS, u),
                   cmath.sinh(1) * cmath.sinh(2)) < 1e-15
    # arrow reversal leaves weights unchanged
    reverse = tuple(-s for s in V1_ALIGNED)
    assert spin1_table_weight(params, reverse, u) == \
        spin1_table_weight(params, V1_ALIGNED, u)
    with pytest.raises(NotInTable):
        spin1_table_weight(params, (0, 0, 0, 0), u)
    assert spin1_table_weight(params, (2, 0, 2, 2), u) == 0  # not conserving


def test_outflow_independence_spin1(params_complex):
    x, y = 0.21, 1.03
    for v in conserving_vertices(2):
        base = fuse_block(params_complex, 2, v, x, y)
        for east in sigma_set(2, v[2]):
            for north in sigma_set(2, v[3]):
                w = fuse_block_with_outflow(params_complex, 2, v, x, y,
                                            east_spins2=east, north_spins2=north)
                assert abs(w - base) <= 1e-12 * max(1.0, abs(base))


def test_outflow_wrong_total_rejected(params):
    with pytest.raises(ValueError):
        fuse_block_with_outflow(params, 2, (2, 0, 0, 2), 0.0, 0.7,
                                east_spins2=(1, 1))


def test_arrow_reversal_symmetry_k3(params_complex):
    for v in conserving_vertices(3):
        a = fuse_block(params_complex, 3, v, 0.11, 0.83)
        b = fuse_block(params_complex, 3, tuple(-s for s in v), 0.11, 0.83)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a), abs(b))


def test_q_multiplicity(params):
    # (2 choose 1) at q = e^lam is [2]/[1] = 2 cosh(lam)
    got = q_multiplicity(params, 2, 0)
    assert rel_err(got, 2 * cmath.cosh(1.0)) < 1e-14
    assert q_multiplicity(params, 2, 2) == 1
    assert q_multiplicity(params, 3, 3) == 1


def test_weight_table_structure(params):
    table = weight_table(params, 2, 0.37)
    assert set(table.entries) == set(conserving_vertices(2))
    assert rel_err(table.entries[(2, -2, -2, 2)], c_plus_weight(params, 2)) < 1e-12
    recs = table.records()
    assert len(recs) == 19
    assert set(recs[0]) == {"alpha2", "beta2", "gamma2", "delta2",
                            "weight_re", "weight_im"}


def test_weight_table_spin1_source_matches_fused(params_complex):
    u = 0.29 - 0.13j
    fused = weight_table(params_complex, 2, u, source="fused").entries
    mixed = weight_table(params_complex, 2, u, source="spin1_table").entries
    for v, w in fused.items():
        assert abs(w - mixed[v]) <= 1e-9 * max(1.0, abs(w))
    with pytest.raises(ValueError):
        weight_table(params_complex, 3, u, source="spin1_table")


def test_fusion_at_removable_singularity(params):
    # u = 0 makes the fusion divisor vanish; the jet limit must still give
    # the table values, including the exact zeros of the opposed weights
    table = weight_table(params, 2, 0.0)
    assert abs(table.entries[V1_OPPOSED]) < 1e-12           # [u-1][u] -> 0
    assert abs(table.entries[V1_MERGE]) < 1e-12             # [u][2]   -> 0
    assert rel_err(table.entries[V1_CPLUS], c_plus_weight(params, 2)) < 1e-10
    assert rel_err(table.entries[V1_SPLIT],
                   cmath.sinh(1.0) * cmath.sinh(2.0)) < 1e-10  # [u+1][2] at u=0


def test_fusion_structure_cache_is_pure(params, params_complex):
    # same vertex, two parameter sets: results differ only through (lam, u)
    v = (2, 0, 0, 2)
    a1 = fuse_block(params, 2, v, 0.0, 0.61)
    a2 = fuse_block(params_complex, 2, v, 0.0, 0.61)
    b1 = fuse_block(params, 2, v, 0.25, 0.86)
    assert rel_err(a1, b1) < 1e-12     # depends on u = -x+y only
    assert abs(a1 - a2) > 1e-6         # but does depend on lam


def test_spin1_closed_form_matches_bracket_products(params):
    u = 0.53
    assert rel_err(spin1_closed_form(params, V1_OPPOSED, u),
                   cmath.sinh(u - 1) * cmath.sinh(u)) < 1e-15
    assert rel_err(spin1_closed_form(params, V1_SPLIT, u),
                   cmath.sinh(u + 1) * cmath.sinh(2)) < 1e-15
