"""Angular-momentum coupling machinery and the v_ra expansion in unit tensors.

Half-integer arguments may be given as ints, Fractions or floats; they are
converted to doubled integers internally.  Matrices use the descending-m
spherical ordering of su2ops.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import RangeError, TriangleViolation, UnsupportedJ
from .phases import as_half, q_power, twice
from .su2ops import AngularSpace, VraParams, ladder_operators, v_ra_matrix
from .mub import rho

_fact = math.factorial


@dataclass(frozen=True)
class ThreeJmArgs:
    j1: Fraction
    j2: Fraction
    j3: Fraction
    m1: Fraction
    m2: Fraction
    m3: Fraction


def _triangle(t1: int, t2: int, t3: int) -> bool:
    return abs(t1 - t2) <= t3 <= t1 + t2 and (t1 + t2 + t3) % 2 == 0


@lru_cache(maxsize=None)
def _three_jm_squared(t1, t2, t3, n1, n2, n3) -> tuple[int, Fraction]:
    """(sign, value^2) of the 3jm symbol from doubled arguments (Racah's sum)."""
    if n1 + n2 + n3 != 0 or not _triangle(t1, t2, t3):
        return 0, Fraction(0)
    if abs(n1) > t1 or abs(n2) > t2 or abs(n3) > t3:
        return 0, Fraction(0)
    if (t1 + n1) % 2 or (t2 + n2) % 2 or (t3 + n3) % 2:
        return 0, Fraction(0)
    h = lambda x: x // 2  # noqa: E731  (all combinations below are even)
    delta = Fraction(
        _fact(h(t1 + t2 - t3)) * _fact(h(t1 - t2 + t3)) * _fact(h(-t1 + t2 + t3)),
        _fact(h(t1 + t2 + t3) + 1),
    )
    norm = 1
    for t, n in ((t1, n1), (t2, n2), (t3, n3)):
        norm *= _fact(h(t + n)) * _fact(h(t - n))
    a1 = h(t3 - t2 + n1)
    a2 = h(t3 - t1 - n2)
    b1 = h(t1 + t2 - t3)
    b2 = h(t1 - n1)
    b3 = h(t2 + n2)
    kmin = max(0, -a1, -a2)
    kmax = min(b1, b2, b3)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _fact(k) * _fact(a1 + k) * _fact(a2 + k) * _fact(b1 - k) * _fact(b2 - k) * _fact(b3 - k)
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0, Fraction(0)
    sign = 1 if total > 0 else -1
    if h(t1 - t2 - n3) % 2:
        sign = -sign
    return sign, total * total * delta * norm


def three_jm(j1, j2=None, j3=None, m1=None, m2=None, m3=None) -> float:
    """Wigner 3jm symbol (j1 j2 j3; m1 m2 m3).

    The square is accumulated exactly in rationals; one square root is taken
    at the end.  Returns 0 outside the triangle and m-selection rules.
    """
    if isinstance(j1, ThreeJmArgs):
        j1, j2, j3, m1, m2, m3 = (j1.j1, j1.j2, j1.j3, j1.m1, j1.m2, j1.m3)
    t = [twice(x) for x in (j1, j2, j3, m1, m2, m3)]
    if any(x < 0 for x in t[:3]):
        raise RangeError("j values must be nonnegative")
    sign, sq = _three_jm_squared(*t)
    return 0.0 if sign == 0 else sign * math.sqrt(sq)


def clebsch_gordan(j1, j2, m1, m2, j3, m3) -> float:
    """<j1 m1 j2 m2 | j3 m3> = (-1)^(j1-j2+m3) sqrt(2j3+1) (j1 j2 j3; m1 m2 -m3)."""
    e = twice(j1) - twice(j2) + twice(m3)
    if e % 2:
        return 0.0
    sign = -1 if (e // 2) % 2 else 1
    return sign * math.sqrt(twice(j3) + 1) * three_jm(j1, j2, j3, m1, m2, -Fraction(twice(m3), 2))


@dataclass
class UnitTensor:
    j: Fraction
    k: int
    p: int
    matrix: np.ndarray


def _check_kp(two_j: int, k: int, p: int) -> None:
    if not 0 <= k <= two_j or abs(p) > k:
        raise RangeError(f"need 0 <= k <= 2j and |p| <= k (2j={two_j}, k={k}, p={p})")


def unit_tensor(j, k: int, p: int) -> UnitTensor:
    """Racah unit tensor <j m|u^(k)_p|j m'> = (-1)^(j-m) (j k j; -m p m')."""
    two_j = twice(j)
    _check_kp(two_j, k, p)
    space = AngularSpace(two_j)
    d = space.d
    mat = np.zeros((d, d))
    for i, m in enumerate(space.m_labels):
        sign = -1 if i % 2 else 1  # j - m = i
        for ip, mp in enumerate(space.m_labels):
            mat[i, ip] = sign * three_jm(space.j, k, space.j, -m, p, mp)
    return UnitTensor(space.j, k, p, mat.astype(complex))


def hilbert_schmidt(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(np.trace(x.conj().T @ y))


@dataclass
class BCoefficients:
    j: Fraction
    r: float
    a: int
    table: dict[tuple[int, int], complex]
    closed_form: dict[tuple[int, int], complex]

    @property
    def agreement(self) -> float:
        return max(abs(self.table[key] - self.closed_form[key]) for key in self.table)

    def nonzero(self, tol: float = 1e-12) -> dict[tuple[int, int], complex]:
        return {key: val for key, val in self.table.items() if abs(val) > tol}


def b_coefficients(j, r: float = 0.0, a: int = 0) -> BCoefficients:
    """Coefficients of v_ra = sum_kp b_kp u^(k)_p.

    `table` uses b_kp = (2k+1) Tr(u^(k)_p^dag v_ra); `closed_form` sums 3jm
    symbols directly over the superdiagonal plus the corner term at
    (k, p) = (2j, -2j).
    """
    space = AngularSpace(twice(j))
    two_j = space.two_j
    v = v_ra_matrix(space, VraParams(r, a))
    table = {}
    closed = {}
    for k in range(two_j + 1):
        for p in range(-k, k + 1):
            table[(k, p)] = (2 * k + 1) * hilbert_schmidt(unit_tensor(space.j, k, p).matrix, v)
            val = 0j
            if p == 1:
                for i in range(1, two_j + 1):
                    # m = j - i runs over -j..j-1; j - m - 1 = i - 1
                    m = space.j - i
                    sign = -1 if (i - 1) % 2 else 1
                    val += q_power(i * a, space.d) * sign * three_jm(space.j, k, space.j, -m - 1, 1, m)
                val *= 2 * k + 1
            if k == two_j and p == -two_j:
                val += math.sqrt(2 * two_j + 1) * np.exp(1j * math.pi * two_j * r)
            closed[(k, p)] = val
    return BCoefficients(space.j, r, a, table, closed)


def reconstruct_v(b: BCoefficients) -> np.ndarray:
    return sum(val * unit_tensor(b.j, k, p).matrix for (k, p), val in b.table.items())


def _jpoly_positive(two_j: int, k: int, p: int, raise_op, jz, sign_z: int):
    """Shared body of the enveloping formula with (raise_op, sign_z*jz)."""
    d = two_j + 1
    ident = np.eye(d, dtype=complex)
    j = two_j / 2
    lead = (-1) ** p * Fraction(_fact(two_j - p) * _fact(k + p), _fact(p) * _fact(k - p))
    bracket = float(lead) * ident
    for z in range(p + 1, k + 1):
        coeff = (-1) ** z * Fraction(_fact(two_j - z) * _fact(k + z), _fact(z) * _fact(k - z) * _fact(z - p))
        prod = ident.copy()
        for t in range(1, z - p + 1):
            prod = prod @ (j * ident + sign_z * jz + (p - z + t) * ident)
        bracket = bracket + float(coeff) * prod
    pref = math.sqrt(Fraction(_fact(k - p), _fact(k + p) * _fact(two_j - k) * _fact(two_j + k + 1)))
    return pref * (-1) ** (k + p) * np.linalg.matrix_power(raise_op, p) @ bracket


def unit_tensor_enveloping(j, k: int, p: int) -> np.ndarray:
    """u^(k)_p as a polynomial in j+, j- and jz (Condon-Shortley ladders, a = 0).

    For p >= 0 the polynomial is j+^p times a polynomial in jz.  For p < 0 it
    is obtained by p -> -p, j+ -> -j-, jz -> -jz and an overall (-1)^(k+p).
    """
    two_j = twice(j)
    _check_kp(two_j, k, p)
    jp, jm, jz = ladder_operators(AngularSpace(two_j), VraParams(0.0, 0))
    if p >= 0:
        return _jpoly_positive(two_j, k, p, jp, jz, +1)
    return (-1) ** (k + p) * _jpoly_positive(two_j, k, -p, -jm, jz, -1)


def v00_closed_forms(j) -> np.ndarray:
    """Closed enveloping-algebra polynomials for v_00 at j = 1/2, 1, 3/2."""
    two_j = twice(j)
    if two_j not in (1, 2, 3):
        raise UnsupportedJ(f"closed forms exist for j = 1/2, 1, 3/2 only (got {as_half(two_j)})")
    jp, jm, jz = ladder_operators(AngularSpace(two_j), VraParams(0.0, 0))
    ident = np.eye(two_j + 1)
    if two_j == 1:
        return jp + jm
    if two_j == 2:
        return jp / math.sqrt(2) + jm @ jm / 2
    s3 = math.sqrt(3)
    return (
        jp / s3
        + (1 / s3 - 0.5) * jp @ (jz + 1.5 * ident) @ (jz - 0.5 * ident)
        + np.linalg.matrix_power(jm, 3) / 6
    )


def small_d(j, beta: float) -> np.ndarray:
    """Wigner small-d matrix d^(j)_(m m')(beta) = <j m|exp(-i beta jy)|j m'>."""
    space = AngularSpace(twice(j))
    two_j = space.two_j
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    out = np.zeros((space.d, space.d))
    for i, tm in enumerate(space.two_m):
        for ip, tmp in enumerate(space.two_m):
            jpm, jmm = (two_j + tm) // 2, (two_j - tm) // 2
            jpn, jmn = (two_j + tmp) // 2, (two_j - tmp) // 2
            diff = (tm - tmp) // 2
            total = 0.0
            for k in range(max(0, -diff), min(jpn, jmm) + 1):
                den = _fact(jpn - k) * _fact(k) * _fact(diff + k) * _fact(jmm - k)
                total += (-1) ** (diff + k) * c ** (two_j - diff - 2 * k) * s ** (diff + 2 * k) / den
            out[i, ip] = math.sqrt(_fact(jpm) * _fact(jmm) * _fact(jpn) * _fact(jmn)) * total
    return out


def wigner_rotation_standard(j, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """D^(j)(alpha, beta, gamma)_(m m') = exp(-i m alpha) d_(m m')(beta) exp(-i m' gamma).

    Active z-y-z Euler angles; a pure z-rotation by phi is (phi, 0, 0).
    """
    space = AngularSpace(twice(j))
    m = np.array([float(x) for x in space.m_labels])
    return np.exp(-1j * m * alpha)[:, None] * small_d(space.j, beta) * np.exp(-1j * m * gamma)[None, :]


def _new_basis(two_j: int, r, a: int) -> np.ndarray:
    """Columns |j alpha; r a> for any integer a (no 0..2j restriction)."""
    space = AngularSpace(two_j)
    d = space.d
    out = np.empty((d, d), dtype=complex)
    for i, m in enumerate(space.m_labels):
        for alpha in range(d):
            out[i, alpha] = q_power(rho(space.j, m, a, r, alpha), d)
    return out / math.sqrt(d)


def rotation_new_scheme(j, r, a: int, euler: tuple[float, float, float]) -> np.ndarray:
    """Rotation matrix in the B_ra basis.

    D_(alpha alpha') = (2j+1)^-1 sum_(m m') q^(-rho(j,m,a,r,alpha) + rho(j,m',a,r,alpha')) D_(m m').
    """
    space = AngularSpace(twice(j))
    d = space.d
    std = wigner_rotation_standard(space.j, *euler)
    phase = np.empty((d, d), dtype=complex)
    for i, m in enumerate(space.m_labels):
        for alpha in range(d):
            phase[i, alpha] = q_power(rho(space.j, m, a, r, alpha), d)
    return phase.conj().T @ std @ phase / d


def rotation_by_conjugation(j, r, a: int, euler: tuple[float, float, float]) -> np.ndarray:
    """B^dag D B with B the matrix of B_ra column vectors."""
    two_j = twice(j)
    b = _new_basis(two_j, r, a)
    return b.conj().T @ wigner_rotation_standard(as_half(two_j), *euler) @ b


def z_rotation_law(j, r, a: int, p: int) -> np.ndarray:
    """Expected new-scheme matrix of the z-rotation by 2 pi p / (2j+1): q^(jp) times a cyclic shift."""
    space = AngularSpace(twice(j))
    d = space.d
    out = np.zeros((d, d), dtype=complex)
    phase = q_power(space.j * p, d)
    for alpha in range(d):
        out[(alpha - p) % d, alpha] = phase
    return out


def coupling_new_scheme(j1, j2, j3, alpha1: int, alpha2: int, alpha3: int, r=0, a: int = 0) -> complex:
    """Coupling coefficient (j1 j2 alpha1 alpha2 | j3 alpha3)_ra."""
    t1, t2, t3 = twice(j1), twice(j2), twice(j3)
    if not _triangle(t1, t2, t3):
        raise TriangleViolation(f"({as_half(t1)}, {as_half(t2)}, {as_half(t3)}) violates the triangle rule")
    s1, s2, s3 = AngularSpace(t1), AngularSpace(t2), AngularSpace(t3)
    total = 0j
    for m1 in s1.m_labels:
        for m2 in s2.m_labels:
            m3 = m1 + m2
            if abs(m3) > s3.j:
                continue
            cg = clebsch_gordan(s1.j, s2.j, m1, m2, s3.j, m3)
            if cg == 0:
                continue
            total += (
                cg
                * q_power(-rho(s1.j, m1, a, r, alpha1), s1.d)
                * q_power(-rho(s2.j, m2, a, r, alpha2), s2.d)
                * q_power(rho(s3.j, m3, a, r, alpha3), s3.d)
            )
    return total / math.sqrt(s1.d * s2.d * s3.d)


def cg_tensor(j1, j2, j3) -> np.ndarray:
    """C[m1, m2, m3] = <j1 m1 j2 m2 | j3 m3> over descending-m indices."""
    s1, s2, s3 = (AngularSpace(twice(x)) for x in (j1, j2, j3))
    out = np.zeros((s1.d, s2.d, s3.d))
    for i1, m1 in enumerate(s1.m_labels):
        for i2, m2 in enumerate(s2.m_labels):
            for i3, m3 in enumerate(s3.m_labels):
                if m1 + m2 == m3:
                    out[i1, i2, i3] = clebsch_gordan(s1.j, s2.j, m1, m2, s3.j, m3)
    return out


def coupling_by_transform(j1, j2, j3, r=0, a: int = 0) -> np.ndarray:
    """All new-scheme coupling coefficients by transforming the CG tensor with B_ra matrices."""
    b1, b2, b3 = (_new_basis(twice(x), r, a) for x in (j1, j2, j3))
    return np.einsum("xyz,xa,yb,zc->abc", cg_tensor(j1, j2, j3), b1.conj(), b2.conj(), b3)
