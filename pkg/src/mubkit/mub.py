"""Eigenbases B_ra of v_ra, their overlaps, Hadamard matrices and MUB sets.

A basis is stored as a d x d array whose column alpha is the vector
|j alpha; r a> over the spherical basis (descending m, see su2ops).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import NotPrime, RangeError, SpaceMismatch
from .gauss import is_prime
from .phases import half_root, half_roots, q_power
from .su2ops import AngularSpace, VraParams, v_ra_matrix

DEFAULT_TOL = 1e-10


def rho(J, M, x, y, z):
    """(J+M)(J-M+1)x/2 - J M y + (J+M) z; exact when every argument is rational."""
    args = (J, M, x, y, z)
    if all(isinstance(t, Rational) for t in args):
        J, M, x, y, z = (Fraction(t) for t in args)
    else:
        J, M, x, y, z = (float(t) for t in args)
    return (J + M) * (J - M + 1) * x / 2 - J * M * y + (J + M) * z


@dataclass
class Basis:
    label: str
    vectors: np.ndarray

    @property
    def d(self) -> int:
        return self.vectors.shape[0]


@dataclass
class EigenBasis(Basis):
    space: AngularSpace = None
    r: float = 0.0
    a: int = 0
    # entry (i, alpha) is exp(i pi e / d); None when r makes exponents irrational
    exponents: np.ndarray | None = None

    def eigenvalue(self, alpha: int) -> complex:
        return q_power(self.space.j * (self.a + _exact(self.r)) - alpha, self.space.d)


def _exact(r):
    if isinstance(r, Rational):
        return Fraction(r)
    if float(r).is_integer():
        return Fraction(int(r))
    return float(r)


def spherical_basis(space: AngularSpace) -> Basis:
    return Basis("S", np.eye(space.d, dtype=complex))


def eigenbasis(space: AngularSpace, r=0, a: int = 0) -> EigenBasis:
    """Common eigenvectors of j^2 and v_ra.

    |j alpha; r a> = d^(-1/2) sum_m q^rho(j, m, a, r, alpha) |j, m>.
    """
    if isinstance(space, int):
        space = AngularSpace(space)
    VraParams(float(r), a).check(space)
    d = space.d
    j = space.j
    r_ = _exact(r)
    two_rho = np.empty((d, d), dtype=object)
    for i, m in enumerate(space.m_labels):
        for alpha in range(d):
            two_rho[i, alpha] = 2 * rho(j, m, a, r_, alpha)
    exact = all(isinstance(e, Fraction) and e.denominator == 1 for e in two_rho.flat)
    if exact:
        exps = np.array([[int(e) % (2 * d) for e in row] for row in two_rho], dtype=np.int64)
        vecs = half_roots(exps, d) / math.sqrt(d)
    else:
        exps = None
        vecs = np.exp(1j * np.pi * two_rho.astype(float) / d) / math.sqrt(d)
    return EigenBasis(f"B[r={r},a={a}]", vecs, space=space, r=r, a=a, exponents=exps)


def eigen_residual(basis: EigenBasis) -> float:
    """max over alpha of ||v_ra x - lambda_alpha x||."""
    v = v_ra_matrix(basis.space, VraParams(float(basis.r), basis.a))
    res = 0.0
    for alpha in range(basis.d):
        x = basis.vectors[:, alpha]
        res = max(res, float(np.linalg.norm(v @ x - basis.eigenvalue(alpha) * x)))
    return res


@dataclass
class OverlapReport:
    labels: tuple[str, str]
    overlaps: np.ndarray
    max_modulus: float
    min_modulus: float
    unbiased: bool
    tol: float
    closed_form_residual: float | None = None
    shift_residual: float | None = None


def overlap_closed_form(b1: EigenBasis, b2: EigenBasis) -> np.ndarray:
    """(1/d) sum_m q^rho(j, m, b-a, s-r, beta-alpha) for every (alpha, beta)."""
    space = b1.space
    d = space.d
    j = space.j
    dr = _exact(b2.r) - _exact(b1.r)
    da = b2.a - b1.a
    out = np.empty((d, d), dtype=complex)
    for alpha in range(d):
        for beta in range(d):
            out[alpha, beta] = sum(q_power(rho(j, m, da, dr, beta - alpha), d) for m in space.m_labels) / d
    return out


def _report(b1: Basis, b2: Basis, ov: np.ndarray, tol: float) -> OverlapReport:
    mods = np.abs(ov)
    target = 1 / math.sqrt(b1.d)
    return OverlapReport(
        labels=(b1.label, b2.label),
        overlaps=ov,
        max_modulus=float(mods.max()),
        min_modulus=float(mods.min()),
        unbiased=bool(np.all(np.abs(mods - target) <= tol)),
        tol=tol,
    )


def overlap_matrix(b1: Basis, b2: Basis, tol: float = DEFAULT_TOL) -> OverlapReport:
    """Overlaps <b1_alpha | b2_beta> by inner products.

    For two eigenbases the closed rho-sum form is evaluated too, and the
    report carries the largest discrepancy plus the deviation from the
    alpha - beta shift structure.
    """
    if b1.d != b2.d:
        raise SpaceMismatch(f"dimensions {b1.d} and {b2.d} differ")
    ov = b1.vectors.conj().T @ b2.vectors
    rep = _report(b1, b2, ov, tol)
    if isinstance(b1, EigenBasis) and isinstance(b2, EigenBasis):
        if b1.space != b2.space:
            raise SpaceMismatch("bases live on different spin spaces")
        rep.closed_form_residual = float(np.max(np.abs(overlap_closed_form(b1, b2) - ov)))
        d = b1.d
        shifted = np.array([[ov[(alpha + k) % d, alpha] for alpha in range(d)] for k in range(d)])
        rep.shift_residual = float(np.max(np.abs(shifted - shifted[:, :1])))
    return rep


def unbiasedness_check(b1: Basis, b2: Basis, tol: float = DEFAULT_TOL) -> OverlapReport:
    if b1.d != b2.d:
        raise SpaceMismatch(f"dimensions {b1.d} and {b2.d} differ")
    return _report(b1, b2, b1.vectors.conj().T @ b2.vectors, tol)


def same_a_overlap(space: AngularSpace, r: float, s: float, alpha: int, beta: int) -> complex:
    """Closed form of <j alpha; r a | j beta; s a> (equal a), a sine ratio."""
    d = space.d
    j = float(space.j)
    x = j * r - alpha - j * s + beta
    phase = q_power(j * (beta - alpha), d)
    k = x / d
    if abs(k - round(k)) < 1e-12:
        return phase * (-1) ** (int(space.two_j * round(k)) % 2)
    return phase * math.sin(math.pi * x) / math.sin(math.pi * x / d) / d


def trace_relation_check(space: AngularSpace, r: float, a: int, s: float, b: int) -> tuple[float, float]:
    """Residuals of the trace identity and of the overlap sum rule.

    Tr(v_ra^dag v_sb) = delta_ab d + exp(i(phi_s - phi_r)) - 1, and
    sum_{alpha,beta} q^(alpha-beta) |<alpha; ra|beta; sb>|^2
        = delta_ab q^(j(r-s)) d + q^(j(a+r-b-s)) [exp(i(phi_s - phi_r)) - 1].
    """
    d = space.d
    j = float(space.j)
    vra = v_ra_matrix(space, VraParams(r, a))
    vsb = v_ra_matrix(space, VraParams(s, b))
    ephi = np.exp(1j * math.pi * space.two_j * (s - r))
    delta = 1.0 if a == b else 0.0
    trace_res = abs(np.trace(vra.conj().T @ vsb) - (delta * d + ephi - 1))

    ov = eigenbasis(space, r, a).vectors.conj().T @ eigenbasis(space, s, b).vectors
    q = space.q
    alpha = np.arange(d)
    weights = q ** (alpha[:, None] - alpha[None, :])
    lhs = np.sum(weights * np.abs(ov) ** 2)
    rhs = delta * q_power(j * (r - s), d) * d + q_power(j * (a + r - b - s), d) * (ephi - 1)
    return float(trace_res), float(abs(lhs - rhs))


def complete_mub_set(d: int) -> list[Basis]:
    """Spherical basis plus B_00, ..., B_0(d-1); a complete MUB set for prime d."""
    if not is_prime(d):
        raise NotPrime(f"d={d} is not prime")
    space = AngularSpace.from_dimension(d)
    return [spherical_basis(space)] + [eigenbasis(space, 0, a) for a in range(d)]


def pairwise_reports(bases: list[Basis], tol: float = DEFAULT_TOL) -> list[OverlapReport]:
    return [unbiasedness_check(x, y, tol) for x, y in itertools.combinations(bases, 2)]


@dataclass
class PhaseMatrix:
    """Matrix with entries exp(i pi e / d); `scale` multiplies every entry.

    Rows are the computational labels k = 0..d-1, columns alpha = 0..d-1.
    """
    d: int
    exponents: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        self.exponents = np.mod(np.asarray(self.exponents, dtype=np.int64), 2 * self.d)

    def to_complex(self) -> np.ndarray:
        return self.scale * half_roots(self.exponents, self.d)


def hadamard_matrix(d: int, a: int) -> PhaseMatrix:
    """H_a with (k, alpha) entry q^(k(d-k)a/2 + k alpha), stored as exponents of exp(i pi/d)."""
    if not 0 <= a <= d - 1:
        raise RangeError(f"a={a} outside 0..{d - 1}")
    k = np.arange(d)[:, None]
    alpha = np.arange(d)[None, :]
    return PhaseMatrix(d, k * (d - k) * a + 2 * k * alpha)


def computational_basis_column_convention(d: int) -> list[int]:
    """Labels k of rows/columns in operator matrices: d-1, ..., 0."""
    return list(range(d - 1, -1, -1))


def v_from_generators(d: int, a: int) -> np.ndarray:
    """V_a = E_(0,d-1) + sum_k q^((d-k)a) E_(k,k-1), indices in decreasing label order."""
    pos = {k: i for i, k in enumerate(computational_basis_column_convention(d))}
    v = np.zeros((d, d), dtype=complex)
    v[pos[0], pos[d - 1]] = 1
    for k in range(1, d):
        v[pos[k], pos[k - 1]] = half_root(2 * (d - k) * a, d)
    return v


def hadamard_residuals(h: PhaseMatrix, a: int) -> tuple[float, float]:
    """Residuals of H^dag H = d I and H^dag V_a H = q^((d-1)a/2) d diag(q^-alpha)."""
    d = h.d
    H = h.to_complex()
    gram = H.conj().T @ H
    # V_a in ascending label order to match H's rows
    va = v_from_generators(d, a)[::-1, ::-1]
    diag = np.diag([half_root((d - 1) * a - 2 * alpha, d) for alpha in range(d)]) * d
    return (
        float(np.max(np.abs(gram - d * np.eye(d)))),
        float(np.max(np.abs(H.conj().T @ va @ H - diag))),
    )


@dataclass(frozen=True)
class CompositeBasisSpec:
    p: int
    e: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"p={self.p} is not prime")
        if len(self.digits) != self.e:
            raise RangeError("need exactly e digits")
        if any(not 0 <= x < self.p for x in self.digits):
            raise RangeError("digits must lie in 0..p-1")


def tensor_bases(spec: CompositeBasisSpec) -> Basis:
    """B_(a1...ae) = B_0a1 x ... x B_0ae (Kronecker products)."""
    space = AngularSpace.from_dimension(spec.p)
    vecs = np.ones((1, 1), dtype=complex)
    for a in spec.digits:
        vecs = np.kron(vecs, eigenbasis(space, 0, a).vectors)
    return Basis("B" + "".join(map(str, spec.digits)), vecs)


def totient(n: int) -> int:
    result = n
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result


def prime_power(n: int) -> tuple[int, int] | None:
    for p in range(2, n + 1):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            return (p, e) if n == 1 else None
    return None


@dataclass
class CensusReport:
    d: int
    r: float
    unbiased: np.ndarray
    counts: list[int]
    totient: int
    bound_holds: bool
    digit_criterion: bool | None = None
    tol: float = DEFAULT_TOL
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.digit_criterion is not False


def unbiased_census(d: int, r=0, tol: float = DEFAULT_TOL) -> CensusReport:
    """Exhaustive pairwise unbiasedness among B_r0, ..., B_r(d-1).

    Checks the totient lower bound on each basis' partner count and, for
    d = p^e with p odd, that B_ra and B_rb are unbiased exactly when
    a and b differ mod p.
    """
    if d < 2:
        raise RangeError("census needs d >= 2")
    space = AngularSpace.from_dimension(d)
    bases = [eigenbasis(space, r, a) for a in range(d)]
    ub = np.zeros((d, d), dtype=bool)
    for a, b in itertools.combinations(range(d), 2):
        ub[a, b] = ub[b, a] = unbiasedness_check(bases[a], bases[b], tol).unbiased
    counts = [int(c) for c in ub.sum(axis=1)]
    phi = totient(d)
    rep = CensusReport(d, r, ub, counts, phi, all(c >= phi for c in counts), tol=tol)
    for a, c in enumerate(counts):
        if c < phi:
            rep.failures.append(f"basis a={a} has {c} unbiased partners < phi({d})={phi}")
    pe = prime_power(d)
    if pe is not None and pe[0] != 2:
        p = pe[0]
        ok = True
        for a, b in itertools.combinations(range(d), 2):
            if ub[a, b] != ((a - b) % p != 0):
                ok = False
                rep.failures.append(f"pair ({a},{b}): unbiased={ub[a, b]} but a0-b0={(a - b) % p}")
        rep.digit_criterion = ok
    return rep
