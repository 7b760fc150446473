import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm
from sympy import Rational as R
from sympy.physics.wigner import wigner_3j

from mubkit import wigner
from mubkit.errors import InvalidHalfInteger, RangeError, TriangleViolation, UnsupportedJ
from mubkit.su2ops import AngularSpace, ladder_operators, v_ra_matrix

H = Fraction(1, 2)


def test_three_jm_values():
    assert wigner.three_jm(1, 1, 0, 0, 0, 0) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    assert wigner.three_jm(1, 1, 1, 1, 0, 0) == 0.0
    # direct Racah evaluation gives a negative value here
    assert wigner.three_jm(H, H, 1, H, H, -1) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    assert wigner.three_jm(wigner.ThreeJmArgs(1, 1, 0, 0, 0, 0)) == pytest.approx(-1 / math.sqrt(3))
    with pytest.raises(InvalidHalfInteger):
        wigner.three_jm(Fraction(1, 3), 1, 1, 0, 0, 0)


def _halves(limit):
    return [Fraction(t, 2) for t in range(0, 2 * limit + 1)]


def test_three_jm_against_sympy():
    for j1, j2, j3 in itertools.product(_halves(2), repeat=3):
        ms = [[j - i for i in range(int(2 * j) + 1)] for j in (j1, j2, j3)]
        for m1, m2, m3 in itertools.product(*ms):
            ref = float(wigner_3j(*(R(x.numerator, x.denominator) for x in (j1, j2, j3, m1, m2, m3))))
            assert wigner.three_jm(j1, j2, j3, m1, m2, m3) == pytest.approx(ref, abs=1e-14)


def test_three_jm_symmetries():
    for j1, j2, j3 in itertools.product(_halves(2), repeat=3):
        if (j1 + j2 + j3).denominator != 1:
            continue
        ph = (-1) ** int(j1 + j2 + j3)
        for m1 in [j1 - i for i in range(int(2 * j1) + 1)]:
            for m2 in [j2 - i for i in range(int(2 * j2) + 1)]:
                m3 = -m1 - m2
                x = wigner.three_jm(j1, j2, j3, m1, m2, m3)
                assert x == pytest.approx(wigner.three_jm(j3, j1, j2, m3, m1, m2), abs=1e-14)
                assert x == pytest.approx(ph * wigner.three_jm(j1, j3, j2, m1, m3, m2), abs=1e-14)
                assert x == pytest.approx(ph * wigner.three_jm(j1, j2, j3, -m1, -m2, -m3), abs=1e-14)


def test_clebsch_gordan():
    assert wigner.clebsch_gordan(0, 0, 0, 0, 0, 0) == 1
    assert wigner.clebsch_gordan(H, H, H, -H, 1, 0) == pytest.approx(1 / math.sqrt(2))
    for j1, j2 in itertools.product(_halves(2), repeat=2):
        for j3 in [abs(j1 - j2) + i for i in range(int(j1 + j2 - abs(j1 - j2)) + 1)]:
            for m3 in [j3 - i for i in range(int(2 * j3) + 1)]:
                total = sum(
                    wigner.clebsch_gordan(j1, j2, m1, m3 - m1, j3, m3) ** 2
                    for m1 in [j1 - i for i in range(int(2 * j1) + 1)]
                    if abs(m3 - m1) <= j2
                )
                assert total == pytest.approx(1, abs=1e-13)


def test_unit_tensor_examples_and_errors():
    u = wigner.unit_tensor(H, 0, 0).matrix
    assert np.allclose(u, np.eye(2) / math.sqrt(2))
    for two_j in (2, 3, 4):
        j = Fraction(two_j, 2)
        u1 = wigner.unit_tensor(j, 1, 1).matrix
        assert wigner.hilbert_schmidt(u1, u1) == pytest.approx(1 / 3)
        assert abs(wigner.hilbert_schmidt(u1, wigner.unit_tensor(j, 2, 1).matrix)) < 1e-14
    with pytest.raises(RangeError):
        wigner.unit_tensor(H, 2, 0)
    with pytest.raises(RangeError):
        wigner.unit_tensor(1, 1, 2)


@pytest.mark.parametrize("two_j", range(0, 6))
def test_unit_tensor_orthogonality_and_conjugation(two_j):
    j = Fraction(two_j, 2)
    labels = [(k, p) for k in range(two_j + 1) for p in range(-k, k + 1)]
    mats = {kp: wigner.unit_tensor(j, *kp).matrix for kp in labels}
    for x, y in itertools.product(labels, repeat=2):
        expected = 1 / (2 * x[0] + 1) if x == y else 0
        assert abs(wigner.hilbert_schmidt(mats[x], mats[y]) - expected) < 1e-13
    for k, p in labels:
        assert np.allclose(mats[(k, -p)], (-1) ** p * mats[(k, p)].conj().T, atol=1e-14)


def test_b_coefficients_printed_cases():
    b = wigner.b_coefficients(H).nonzero()
    assert set(b) == {(1, -1), (1, 1)}
    assert b[(1, -1)] == pytest.approx(math.sqrt(3)) and b[(1, 1)] == pytest.approx(-math.sqrt(3))
    b = wigner.b_coefficients(1).nonzero()
    assert set(b) == {(1, 1), (2, -2)}
    assert b[(2, -2)] == pytest.approx(math.sqrt(5)) and b[(1, 1)] == pytest.approx(-math.sqrt(6))


@pytest.mark.parametrize("two_j", range(1, 7))
def test_b_structure_and_reconstruction(two_j):
    j = Fraction(two_j, 2)
    for a in range(two_j + 1):
        for r in (0.0, 1.0, 0.37):
            b = wigner.b_coefficients(j, r, a)
            assert b.agreement < 1e-12
            for (k, p) in b.nonzero():
                assert p == 1 or (k, p) == (two_j, -two_j)
            v = v_ra_matrix(AngularSpace(two_j), r, a)
            assert np.max(np.abs(wigner.reconstruct_v(b) - v)) < 1e-12


@pytest.mark.parametrize("two_j", range(0, 7))
def test_enveloping_equals_three_jm_unit_tensors(two_j):
    j = Fraction(two_j, 2)
    for k in range(two_j + 1):
        for p in range(-k, k + 1):
            diff = wigner.unit_tensor_enveloping(j, k, p) - wigner.unit_tensor(j, k, p).matrix
            assert np.max(np.abs(diff)) < 1e-10


def test_v00_closed_forms():
    assert np.allclose(wigner.v00_closed_forms(H), [[0, 1], [1, 0]])
    for t in (1, 2, 3):
        assert np.max(np.abs(wigner.v00_closed_forms(Fraction(t, 2)) - v_ra_matrix(AngularSpace(t), 0.0, 0))) < 1e-12
    with pytest.raises(UnsupportedJ):
        wigner.v00_closed_forms(2)


@pytest.mark.parametrize("two_j", range(0, 7))
def test_small_d_is_exponential_of_jy(two_j):
    jp, jm, _ = ladder_operators(AngularSpace(two_j), 0.0, 0)
    jy = (jp - jm) / 2j
    for beta in (0.0, 0.3, 1.7, math.pi):
        assert np.max(np.abs(wigner.small_d(Fraction(two_j, 2), beta) - expm(-1j * beta * jy))) < 1e-12


def test_standard_rotation_examples():
    assert np.allclose(wigner.wigner_rotation_standard(1, 0, 0, 0), np.eye(3))
    d = wigner.wigner_rotation_standard(H, 0, math.pi, 0)
    assert np.allclose(d, [[0, -1], [1, 0]])
    a, b = 0.4, 1.1
    assert np.allclose(
        wigner.wigner_rotation_standard(Fraction(3, 2), a, 0, 0) @ wigner.wigner_rotation_standard(Fraction(3, 2), b, 0, 0),
        wigner.wigner_rotation_standard(Fraction(3, 2), a + b, 0, 0),
    )


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 6), st.data())
def test_new_scheme_rotation_random(two_j, data):
    a = data.draw(st.integers(0, two_j))
    r = data.draw(st.floats(0, 2))
    euler = tuple(data.draw(st.floats(0, 2 * math.pi)) for _ in range(3))
    j = Fraction(two_j, 2)
    x = wigner.rotation_new_scheme(j, r, a, euler)
    assert np.max(np.abs(x - wigner.rotation_by_conjugation(j, r, a, euler))) < 1e-10
    assert np.max(np.abs(x.conj().T @ x - np.eye(two_j + 1))) < 1e-10


def test_new_scheme_identity():
    assert np.allclose(wigner.rotation_new_scheme(1, 0.37, 2, (0, 0, 0)), np.eye(3))


@pytest.mark.parametrize("d", range(1, 10))
def test_z_rotation_permutation_law(d):
    j = Fraction(d - 1, 2)
    for a in range(d):
        for p in range(d):
            got = wigner.rotation_new_scheme(j, 0, a, (2 * math.pi * p / d, 0, 0))
            assert np.max(np.abs(got - wigner.z_rotation_law(j, 0, a, p))) < 1e-10


def test_coupling_examples():
    assert wigner.coupling_new_scheme(0, 0, 0, 0, 0, 0) == pytest.approx(1)
    t = wigner.coupling_by_transform(H, H, 1, 0, 0)
    assert wigner.coupling_new_scheme(H, H, 1, 0, 0, 0) == pytest.approx(t[0, 0, 0], abs=1e-12)
    with pytest.raises(TriangleViolation):
        wigner.coupling_new_scheme(H, H, 2, 0, 0, 0)


@pytest.mark.parametrize("js", [(H, H, 1), (1, 1, 1), (1, H, Fraction(3, 2)), (Fraction(3, 2), 1, H), (2, 1, 2)])
def test_coupling_unitarity_and_transform(js):
    for r in (0, 0.37):
        for a in range(int(2 * min(js)) + 1):
            t = wigner.coupling_by_transform(*js, r, a)
            assert np.max(np.abs((np.abs(t) ** 2).sum(axis=(0, 1)) - 1)) < 1e-12
            for idx in itertools.product(*(range(n) for n in t.shape)):
                assert abs(t[idx] - wigner.coupling_new_scheme(*js, *idx, r, a)) < 1e-12
