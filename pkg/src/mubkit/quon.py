"""Truncated deformed oscillators and the two-oscillator realization of h and v_ra.

Each single space has the orthonormal basis |n), n = 0..k-1, and the
deformation parameter is q = exp(2 pi i / k).  The pair space is indexed by
n1 * k + n2.  The spin-j block (j = (k-1)/2) is spanned by |j+m, j-m) for
m = j down to -j, the same descending order used in `su2ops`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .errors import NonInvariantSubspace, RangeError
from .phases import as_half, half_root

BasisLabel = Literal["single", "pair"]


def _q(k: int) -> complex:
    return half_root(2, k)


def q_number(x: float, k: int) -> complex:
    """[x]_q = (1 - q^x) / (1 - q) with q = exp(2 pi i / k)."""
    if k < 2:
        raise RangeError("k must be >= 2")
    qx = half_root(2 * int(x), k) if float(x).is_integer() else cmath.exp(2j * math.pi * x / k)
    return (1 - qx) / (1 - _q(k))


def q_factorial(n: int, k: int) -> complex:
    out = 1 + 0j
    for i in range(1, n + 1):
        out *= q_number(i, k)
    return out


@dataclass(frozen=True)
class QuonParams:
    k: int
    a_exp: float = 0.0
    b_exp: float = 1.0
    s: float = 0.5

    def __post_init__(self):
        if self.k < 2:
            raise RangeError(f"k={self.k}: truncation order must be >= 2")
        if self.s != 0.5:
            raise RangeError("only s = 1/2 is supported")

    @property
    def c_exp(self) -> float:
        return 1 - self.a_exp

    @property
    def d_exp(self) -> float:
        return 1 - self.b_exp


@dataclass(frozen=True, eq=False)
class FockOperator:
    dim: int
    entries: np.ndarray
    basis_label: BasisLabel

    def __post_init__(self):
        if self.entries.shape != (self.dim, self.dim):
            raise RangeError(f"entries shape {self.entries.shape} does not match dim {self.dim}")
        k = math.isqrt(self.dim)
        if self.basis_label == "pair" and k * k != self.dim:
            raise RangeError("pair-space dimension must be a square")
        self.entries.setflags(write=False)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.dim, self.entries @ other.entries, self.basis_label)


def _power(x: complex, e: float) -> complex:
    """Principal-branch x**e, with x**0 == 1 even at x == 0."""
    if e == 0:
        return 1 + 0j
    if x == 0:
        return 0j
    return x ** e


def _raising(k: int, e: float) -> np.ndarray:
    m = np.zeros((k, k), dtype=complex)
    for n in range(k - 1):
        m[n + 1, n] = _power(q_number(n + 1, k), e)
    return m


def _lowering(k: int, e: float) -> np.ndarray:
    m = np.zeros((k, k), dtype=complex)
    for n in range(1, k):
        m[n - 1, n] = _power(q_number(n, k), e)
    return m


@dataclass(frozen=True)
class QuonOperators:
    a1_plus: FockOperator
    a1_minus: FockOperator
    a2_plus: FockOperator
    a2_minus: FockOperator
    n1: FockOperator
    n2: FockOperator

    def __iter__(self):
        return iter((self.a1_plus, self.a1_minus, self.a2_plus, self.a2_minus, self.n1, self.n2))


def build_quon_operators(p: QuonParams) -> QuonOperators:
    """Ladder and number operators of both algebras on their single spaces (s = 1/2)."""
    k = p.k

    def op(m):
        return FockOperator(k, m, "single")

    number = np.diag(np.arange(k, dtype=float)).astype(complex)
    return QuonOperators(
        op(_raising(k, p.a_exp)),
        op(_lowering(k, p.c_exp)),
        op(_raising(k, p.b_exp)),
        op(_lowering(k, p.d_exp)),
        op(number.copy()),
        op(number.copy()),
    )


@dataclass(frozen=True)
class QuonRelationReport:
    deformed_commutator: float
    number_raising: float
    number_lowering: float
    number_hermitian: float
    nilpotency: float
    cross_commutators: float

    def max(self) -> float:
        return max(
            self.deformed_commutator, self.number_raising, self.number_lowering,
            self.number_hermitian, self.nilpotency, self.cross_commutators,
        )


def _norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def verify_quon_relations(p: QuonParams) -> QuonRelationReport:
    k = p.k
    q = _q(k)
    ops = build_quon_operators(p)
    eye = np.eye(k)
    pairs = [
        (ops.a1_plus.entries, ops.a1_minus.entries, ops.n1.entries),
        (ops.a2_plus.entries, ops.a2_minus.entries, ops.n2.entries),
    ]
    deformed = raising = lowering = herm = nil = 0.0
    for ap, am, n in pairs:
        deformed = max(deformed, _norm(am @ ap - q * ap @ am - eye))
        raising = max(raising, _norm(n @ ap - ap @ n - ap))
        lowering = max(lowering, _norm(n @ am - am @ n + am))
        herm = max(herm, _norm(n - n.conj().T))
        nil = max(nil, _norm(np.linalg.matrix_power(ap, k)), _norm(np.linalg.matrix_power(am, k)))
    cross = 0.0
    for x1 in (ops.a1_plus, ops.a1_minus, ops.n1):
        for x2 in (ops.a2_plus, ops.a2_minus, ops.n2):
            a = np.kron(x1.entries, eye)
            b = np.kron(eye, x2.entries)
            cross = max(cross, _norm(a @ b - b @ a))
    return QuonRelationReport(deformed, raising, lowering, herm, nil, cross)


def _q_diag(k: int, exponents: np.ndarray) -> np.ndarray:
    return np.diag(np.exp(2j * math.pi * exponents / k))


def build_h_v_pair_space(k: int, r: float, a: int) -> tuple[FockOperator, FockOperator]:
    """h = sqrt(N1 (N2 + 1)) and v_ra = s1 s2 on the k^2-dimensional pair space.

    Built from the a_exp = 0, b_exp = 1 representation with phi_r = pi (k-1) r.
    """
    if k < 2:
        raise RangeError("k must be >= 2")
    if not 0 <= a <= k - 1:
        raise RangeError(f"a={a} outside 0..{k - 1}")
    ops = build_quon_operators(QuonParams(k, 0.0, 1.0))
    eye = np.eye(k)
    n1 = np.kron(ops.n1.entries, eye).real
    n2 = np.kron(eye, ops.n2.entries).real
    a1p = np.kron(ops.a1_plus.entries, eye)
    a1m = np.kron(ops.a1_minus.entries, eye)
    a2p = np.kron(eye, ops.a2_plus.entries)
    a2m = np.kron(eye, ops.a2_minus.entries)
    n1d, n2d = np.diag(n1), np.diag(n2)

    half_phi = cmath.exp(0.5j * math.pi * (k - 1) * r)
    fact = q_factorial(k - 1, k)
    s1 = _q_diag(k, a * (n1d + n2d) / 2) @ a1p + half_phi / fact * np.linalg.matrix_power(a1m, k - 1)
    s2 = a2m @ _q_diag(k, -a * (n1d - n2d) / 2) + half_phi / fact * np.linalg.matrix_power(a2p, k - 1)
    h = np.diag(np.sqrt(n1d * (n2d + 1))).astype(complex)
    return FockOperator(k * k, h, "pair"), FockOperator(k * k, s1 @ s2, "pair")


def pair_casimir(k: int) -> FockOperator:
    """j^2 = (N1 + N2)(N1 + N2 + 2) / 4 on the pair space."""
    n = np.add.outer(np.arange(k), np.arange(k)).ravel().astype(float)
    return FockOperator(k * k, np.diag(n * (n + 2) / 4).astype(complex), "pair")


@dataclass(frozen=True)
class EpsilonEmbedding:
    k: int
    index_map: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.index_map)) != len(self.index_map):
            raise RangeError("embedded indices must be distinct")
        for idx in self.index_map:
            if sum(divmod(idx, self.k)) != self.k - 1:
                raise RangeError(f"index {idx} is not in the n1 + n2 = k - 1 shell")

    @property
    def j(self) -> Fraction:
        return as_half(self.k - 1)

    @classmethod
    def for_k(cls, k: int) -> "EpsilonEmbedding":
        if k < 2:
            raise RangeError("k must be >= 2")
        # |j, m> = |j+m, j-m) with m descending: n1 runs k-1 .. 0
        return cls(k, tuple(n1 * k + (k - 1 - n1) for n1 in range(k - 1, -1, -1)))


def restrict_to_epsilon(op: FockOperator, emb: EpsilonEmbedding, tol: float = 1e-12) -> np.ndarray:
    """The d x d block of a pair-space operator on the spin-j subspace.

    Raises NonInvariantSubspace when the operator maps embedded vectors
    outside the subspace by more than tol.
    """
    if op.basis_label != "pair" or op.dim != emb.k ** 2:
        raise RangeError("operator does not live on the matching pair space")
    idx = list(emb.index_map)
    cols = op.entries[:, idx]
    outside = np.delete(cols, idx, axis=0)
    leak = _norm(outside)
    if leak > tol:
        raise NonInvariantSubspace(f"operator leaks out of the spin-{emb.j} subspace by {leak:.3e}")
    return np.array(cols[idx, :])


def displayed_v_action(k: int, r: float, a: int) -> np.ndarray:
    """v_ra on the pair space written entry by entry from its four-case action table."""
    q = _q(k)
    half_phi = cmath.exp(0.5j * math.pi * (k - 1) * r)
    v = np.zeros((k * k, k * k), dtype=complex)

    def put(src, dst, val):
        v[dst[0] * k + dst[1], src[0] * k + src[1]] = val

    for n1 in range(k):
        for n2 in range(k):
            if n1 != k - 1 and n2 != 0:
                put((n1, n2), (n1 + 1, n2 - 1), q ** (a * n2))
            elif n1 == k - 1 and n2 != 0:
                put((n1, n2), (0, n2 - 1), half_phi * q ** (-a * (k - 1 - n2) / 2))
            elif n1 != k - 1 and n2 == 0:
                put((n1, n2), (n1 + 1, k - 1), half_phi * q ** (a * (k + n1) / 2))
            else:
                put((n1, n2), (0, k - 1), half_phi ** 2)
    return v
