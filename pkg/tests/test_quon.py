import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from mubkit import su2ops
from mubkit.errors import NonInvariantSubspace, RangeError
from mubkit.quon import (
    EpsilonEmbedding,
    FockOperator,
    QuonParams,
    build_h_v_pair_space,
    build_quon_operators,
    displayed_v_action,
    pair_casimir,
    q_number,
    restrict_to_epsilon,
    verify_quon_relations,
)


@pytest.mark.parametrize("k", range(2, 6))
def test_truncated_relation_is_exact_in_cyclotomic_arithmetic(k):
    # [n]_q = 1 + q + ... + q^(n-1); reduce modulo the k-th cyclotomic polynomial
    x = sp.symbols("x")
    phi = sp.cyclotomic_poly(k, x)

    def bracket(n):
        return sum(x ** i for i in range(n))

    for n in range(k - 1):
        assert sp.rem(sp.expand(bracket(n + 1) - x * bracket(n) - 1), phi, x) == 0
    # top of the ladder: a_+|k-1) = 0, so the relation needs -q [k-1]_q = 1
    assert sp.rem(sp.expand(1 + x * bracket(k - 1)), phi, x) == 0


def test_q_number_values():
    assert abs(q_number(0, 3)) < 1e-15
    assert abs(q_number(1, 3) - 1) < 1e-15
    assert abs(q_number(2, 3) - (0.5 + math.sqrt(3) / 2 * 1j)) < 1e-12


@given(st.integers(2, 12), st.integers(0, 11))
def test_q_number_is_geometric_sum(k, n):
    q = cmath.exp(2j * math.pi / k)
    assert abs(q_number(n, k) - sum(q ** i for i in range(n))) < 1e-10


def test_params_validation():
    with pytest.raises(RangeError):
        QuonParams(1)
    with pytest.raises(RangeError):
        QuonParams(3, s=0.3)
    p = QuonParams(4, 0.25, 0.75)
    assert p.a_exp + p.c_exp == 1 and p.b_exp + p.d_exp == 1


def test_k2_zeroth_power_creation():
    ops = build_quon_operators(QuonParams(2, 0.0, 1.0))
    assert np.array_equal(ops.a1_plus.entries, np.array([[0, 0], [1, 0]]))


def test_k3_creation_coefficient():
    ops = build_quon_operators(QuonParams(3, 1.0, 1.0))
    q = cmath.exp(2j * math.pi / 3)
    assert abs(ops.a1_plus.entries[2, 1] - (1 + q)) < 1e-12


@pytest.mark.parametrize("k", range(2, 9))
@pytest.mark.parametrize("a_exp", [0.0, 0.5, 1.0])
def test_defining_relations_and_nilpotency(k, a_exp):
    rep = verify_quon_relations(QuonParams(k, a_exp, 1 - a_exp))
    assert rep.max() < 1e-12
    ops = build_quon_operators(QuonParams(k, a_exp, 1 - a_exp))
    for op in (ops.a1_plus, ops.a1_minus, ops.a2_plus, ops.a2_minus):
        assert not np.linalg.matrix_power(op.entries, k).any()


def test_generic_exponent_still_satisfies_relations():
    assert verify_quon_relations(QuonParams(5, 0.3, 0.8)).max() < 1e-12


def test_fermion_case_all_zero():
    rep = verify_quon_relations(QuonParams(2))
    assert rep.max() == 0.0


def test_pair_space_v_examples():
    _, v = build_h_v_pair_space(2, 0.0, 0)
    # |1,0) -> |0,1): index 1*2+0 = 2 -> 0*2+1 = 1
    assert v.entries[1, 2] == 1
    q = cmath.exp(2j * math.pi / 3)
    _, v3 = build_h_v_pair_space(3, 0.0, 1)
    # |0,2) -> q^2 |1,1)
    assert abs(v3.entries[1 * 3 + 1, 0 * 3 + 2] - q ** 2) < 1e-12


@pytest.mark.parametrize("k", range(2, 9))
def test_pair_space_matches_action_table_and_direct_matrices(k):
    emb = EpsilonEmbedding.for_k(k)
    space = su2ops.AngularSpace(k - 1)
    for a in range(k):
        for r in (0.0, 1.0, 0.37):
            h, v = build_h_v_pair_space(k, r, a)
            assert np.max(np.abs(v.entries - displayed_v_action(k, r, a))) < 1e-12
            assert np.max(np.abs(restrict_to_epsilon(h, emb) - su2ops.h_matrix(space))) < 1e-12
            assert np.max(np.abs(restrict_to_epsilon(v, emb) - su2ops.v_ra_matrix(space, r, a))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.data())
def test_pair_space_cyclicity(k, data):
    a = data.draw(st.integers(0, k - 1))
    r = data.draw(st.floats(0, 2))
    _, v = build_h_v_pair_space(k, r, a)
    phase = cmath.exp(1j * math.pi * (k - 1) * (a + r))
    vk = np.linalg.matrix_power(v.entries, k)
    block = restrict_to_epsilon(FockOperator(k * k, vk, "pair"), EpsilonEmbedding.for_k(k))
    assert np.max(np.abs(block - phase * np.eye(k))) < 1e-10


def test_h_restriction_k3():
    h, _ = build_h_v_pair_space(3, 0.0, 0)
    block = restrict_to_epsilon(h, EpsilonEmbedding.for_k(3))
    assert np.allclose(np.diag(block), [math.sqrt(2), math.sqrt(2), 0])


def test_v_restriction_k2_is_swap():
    _, v = build_h_v_pair_space(2, 0.0, 0)
    assert np.array_equal(restrict_to_epsilon(v, EpsilonEmbedding.for_k(2)), np.array([[0, 1], [1, 0]]))


@pytest.mark.parametrize("k", range(2, 9))
def test_pair_casimir_restricts_to_j_j_plus_1(k):
    j = (k - 1) / 2
    block = restrict_to_epsilon(pair_casimir(k), EpsilonEmbedding.for_k(k))
    assert np.max(np.abs(block - j * (j + 1) * np.eye(k))) < 1e-12


def test_embedding_order_and_leak_detection():
    emb = EpsilonEmbedding.for_k(3)
    assert emb.index_map == (6, 4, 2)  # |2,0), |1,1), |0,2)
    with pytest.raises(RangeError):
        EpsilonEmbedding(3, (0, 4, 2))
    shift = np.zeros((9, 9), dtype=complex)
    shift[0, 6] = 1  # maps |2,0) to |0,0)
    with pytest.raises(NonInvariantSubspace):
        restrict_to_epsilon(FockOperator(9, shift, "pair"), emb)


def test_a_out_of_range_rejected():
    with pytest.raises(RangeError):
        build_h_v_pair_space(3, 0.0, 3)
