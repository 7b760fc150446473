"""Operators on the spin-j space built from their closed-form actions.

All matrices are d x d complex arrays (d = 2j + 1) over the spherical basis
ordered by descending m: row/column i holds |j, m> with m = j - i.  With the
relabeling k = j + m this is the decreasing order k = d-1, ..., 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ClosureOverflow, CriterionMismatch, RangeError
from .phases import as_half, half_root


@dataclass(frozen=True)
class AngularSpace:
    two_j: int

    def __post_init__(self):
        if self.two_j < 0:
            raise RangeError("2j must be nonnegative")

    @classmethod
    def from_dimension(cls, d: int) -> "AngularSpace":
        if d < 1:
            raise RangeError("dimension must be >= 1")
        return cls(d - 1)

    @property
    def d(self) -> int:
        return self.two_j + 1

    @property
    def j(self) -> Fraction:
        return as_half(self.two_j)

    @property
    def q(self) -> complex:
        return half_root(2, self.d)

    @property
    def two_m(self) -> list[int]:
        return [self.two_j - 2 * i for i in range(self.d)]

    @property
    def m_labels(self) -> list[Fraction]:
        return [as_half(t) for t in self.two_m]

    def index(self, m) -> int:
        return int(self.j - Fraction(m))


@dataclass(frozen=True)
class VraParams:
    r: float = 0.0
    a: int = 0

    def check(self, space: AngularSpace) -> None:
        if not 0 <= self.a <= space.two_j:
            raise RangeError(f"a={self.a} outside 0..{space.two_j}")

    def phi(self, space: AngularSpace) -> float:
        return math.pi * space.two_j * self.r


@dataclass(frozen=True)
class WIndex:
    m1: int
    m2: int

    def __post_init__(self):
        if self.m1 < 1 or self.m2 < 1:
            raise RangeError("W-index components must be positive")

    def __add__(self, other: "WIndex") -> "WIndex":
        return WIndex(self.m1 + other.m1, self.m2 + other.m2)

    def wedge(self, other: "WIndex") -> int:
        return self.m1 * other.m2 - self.m2 * other.m1


def _space(s) -> AngularSpace:
    return s if isinstance(s, AngularSpace) else AngularSpace(int(s))


def _params(p, a=None) -> VraParams:
    if isinstance(p, VraParams):
        return p
    return VraParams(r=float(p), a=int(a or 0))


def h_matrix(s: AngularSpace) -> np.ndarray:
    s = _space(s)
    i = np.arange(s.d)
    # j + m = 2j - i, j - m + 1 = i + 1
    return np.diag(np.sqrt((s.two_j - i) * (i + 1.0))).astype(complex)


def boundary_phase(s: AngularSpace, r: float) -> complex:
    """exp(i 2 pi j r), the phase picked up by |j, j> -> |j, -j>."""
    if float(r).is_integer():
        return half_root(s.two_j * int(r), 1)
    return cmath.exp(1j * math.pi * s.two_j * r)


def v_ra_matrix(s: AngularSpace, p: VraParams | float = 0.0, a: int | None = None) -> np.ndarray:
    """Unitary cyclic operator v_ra; v|j,m> = q^((j-m)a)|j,m+1>, v|j,j> = e^(i2pi jr)|j,-j>."""
    s, p = _space(s), _params(p, a)
    p.check(s)
    d = s.d
    v = np.zeros((d, d), dtype=complex)
    for i in range(1, d):
        v[i - 1, i] = half_root(2 * i * p.a, d)
    v[d - 1, 0] += boundary_phase(s, p.r)
    return v


def z_matrix(s: AngularSpace) -> np.ndarray:
    s = _space(s)
    return np.diag([half_root(2 * i, s.d) for i in range(s.d)])


def ladder_operators(s: AngularSpace, p: VraParams | float = 0.0, a: int | None = None):
    """(j+, j-, jz) from the polar decomposition j+ = h v, j- = v^dag h, jz = (h^2 - v^dag h^2 v)/2."""
    h = h_matrix(s)
    v = v_ra_matrix(s, p, a)
    h2 = h @ h
    jp = h @ v
    jm = v.conj().T @ h
    jz = 0.5 * (h2 - v.conj().T @ h2 @ v)
    return jp, jm, jz


def casimir(s: AngularSpace, p: VraParams | float = 0.0, a: int | None = None) -> np.ndarray:
    """j^2 = h^2 + jz^2 - jz."""
    h = h_matrix(s)
    _, _, jz = ladder_operators(s, p, a)
    return h @ h + jz @ jz - jz


def t_operator(s: AngularSpace, p: VraParams | float, idx: WIndex, a: int | None = None) -> np.ndarray:
    """W-infinity generator t_m = q^(-m1 m2 / 2) v^m1 z^m2."""
    s = _space(s)
    v = v_ra_matrix(s, p, a)
    z = z_matrix(s)
    phase = half_root(-idx.m1 * idx.m2, s.d)
    return phase * np.linalg.matrix_power(v, idx.m1) @ np.linalg.matrix_power(z, idx.m2)


def w_commutator_residual(s: AngularSpace, p: VraParams | float, m: WIndex, n: WIndex, a: int | None = None) -> float:
    """max |[t_m, t_n] - 2i sin(pi (m^n) / d) t_(m+n)|."""
    s = _space(s)
    tm = t_operator(s, p, m, a)
    tn = t_operator(s, p, n, a)
    rhs = 2j * math.sin(math.pi * m.wedge(n) / s.d) * t_operator(s, p, m + n, a)
    return float(np.max(np.abs(tm @ tn - tn @ tm - rhs)))


def _monomial_key(g: np.ndarray, d: int, tol: float):
    """Exact key (row per column, phase exponent of exp(i pi/d)) or None."""
    rows = np.argmax(np.abs(g), axis=0)
    key = []
    for col, row in enumerate(rows):
        val = g[row, col]
        if abs(abs(val) - 1) > tol:
            return None
        e = cmath.phase(val) * d / math.pi
        n = round(e)
        if abs(e - n) > 1e-8:
            return None
        key.append((int(row), n % (2 * d)))
    if np.sum(np.abs(g) > tol) != d:
        return None
    return tuple(key)


def pauli_group(s: AngularSpace, tol: float = 1e-10):
    """Close the generalized Pauli group under multiplication.

    Generators: v_00 and z for odd d; v_10 and exp(i pi/d) z for even d.
    Returns (elements, table) where table[i][k] is the index of
    elements[i] @ generators[k]; the order is len(elements).
    """
    s = _space(s)
    d = s.d
    if d < 2:
        raise RangeError("Pauli group needs d >= 2")
    if d % 2:
        gens = [v_ra_matrix(s, VraParams(0.0, 0)), z_matrix(s)]
    else:
        gens = [v_ra_matrix(s, VraParams(1.0, 0)), half_root(1, d) * z_matrix(s)]
    limit = 2 * d ** 3
    elements = [np.eye(d, dtype=complex)]
    keys = {_monomial_key(elements[0], d, tol): 0}
    loose: list[int] = []

    def lookup(g):
        key = _monomial_key(g, d, tol)
        if key is not None:
            return keys.get(key), key
        for idx in loose:
            if np.linalg.norm(g - elements[idx]) / math.sqrt(d) < tol:
                return idx, None
        return None, None

    table: list[list[int]] = []
    i = 0
    while i < len(elements):
        row = []
        for gen in gens:
            g = elements[i] @ gen
            idx, key = lookup(g)
            if idx is None:
                idx = len(elements)
                elements.append(g)
                if key is None:
                    loose.append(idx)
                else:
                    keys[key] = idx
                if len(elements) > limit:
                    raise ClosureOverflow(f"closure exceeded {limit} elements for d={d}")
            row.append(idx)
        table.append(row)
        i += 1
    return elements, table


def pauli_group_order(s: AngularSpace) -> int:
    return len(pauli_group(s)[0])


def vr0_vs0_commute(s: AngularSpace, r: float, t: float, tol: float = 1e-12) -> bool:
    """Whether v_r0 and v_t0 commute: j t - j r must be an integer.

    The criterion is checked against the explicit matrix commutator.
    """
    s = _space(s)
    x = float(s.j) * (t - r)
    predicted = abs(x - round(x)) < tol
    vr = v_ra_matrix(s, VraParams(r, 0))
    vt = v_ra_matrix(s, VraParams(t, 0))
    observed = float(np.max(np.abs(vr @ vt - vt @ vr))) < 1e-10
    if predicted != observed:
        raise CriterionMismatch(f"j={s.j}, r={r}, s={t}: criterion {predicted}, matrices {observed}")
    return predicted
